//! Quadratic stochastic operators (QSOs) on finite simplices.
//!
//! A QSO on `m` types is given by heredity coefficients `P[i][j][k]`
//! (nonnegative, symmetric in `i, j`, summing to one over `k`) and acts on
//! probability vectors by `x'_k = sum_{i,j} P[i][j][k] x_i x_j`.
//!
//! The crate covers validation, Volterra operators and their canonical
//! skew-symmetric form, the six orthogonality-preserving families on the
//! 2-simplex with their permutation-conjugacy classes, the associated
//! genetic algebras, QSOs on finite measurable spaces, and trajectories.

pub mod algebra;
pub mod cli;
pub mod conjugacy;
pub mod dynamics;
pub mod error;
pub mod json;
pub mod kernel;
pub mod orthopreserve;
pub mod simplex;
pub mod tensor;
pub mod volterra;

pub use algebra::{
    assoc_solutions_v2, associator_residual, is_associative, product, refute_associativity, v2_condition_system,
    AlgebraVector, RefutationReport, EPS_ASSOC,
};
pub use conjugacy::{conjugacy_classes, conjugate, permute_point, Permutation};
pub use dynamics::{fixed_points_on_vertices, iterate, Trajectory, TrajectoryStatus};
pub use error::{QsoError, Result};
pub use kernel::{kernel_apply, kernel_is_volterra, kernel_volterra_oracle, DiscreteMeasure, FiniteKernel};
pub use orthopreserve::{classify_op, is_orthogonality_preserving, op_family, OpFamilySpec};
pub use simplex::{abs_continuous, orthogonal, support, SimplexPoint, SupportSet, EPS_SUPP, EPS_VAL};
pub use tensor::{apply, QsoTensor, ValidationMode};
pub use volterra::{
    check_abs_continuity_property, from_canonical, is_volterra, to_canonical, volterra_certificate, SkewMatrix,
};
