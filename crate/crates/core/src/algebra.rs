//! The genetic algebra `(R^m, ∘)` of a QSO, `(x ∘ y)_k = sum_{i,j} P[i][j][k] x_i y_j`,
//! and decisions about its associativity.

use serde::{Deserialize, Serialize};

use crate::error::{QsoError, Result};
use crate::orthopreserve::{op_family, OpFamilySpec};
use crate::simplex::check_dims;
use crate::tensor::QsoTensor;

/// Associator tolerance.
pub const EPS_ASSOC: f64 = 1e-9;

/// An element of the ambient space `R^m`; coordinates are only required to
/// be finite.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraVector(Vec<f64>);

impl AlgebraVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some((idx, &v)) = coords.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(QsoError::NonFinite {
                location: format!("v[{}]", idx + 1),
                value: v,
            });
        }
        Ok(AlgebraVector(coords))
    }

    pub fn basis(m: usize, i: usize) -> Self {
        let mut v = vec![0.0; m];
        v[i] = 1.0;
        AlgebraVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &AlgebraVector, b: f64) -> AlgebraVector {
        AlgebraVector(self.0.iter().zip(&other.0).map(|(x, y)| a * x + b * y).collect())
    }

    pub fn max_abs_diff(&self, other: &AlgebraVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

impl From<&crate::simplex::SimplexPoint> for AlgebraVector {
    fn from(x: &crate::simplex::SimplexPoint) -> Self {
        AlgebraVector(x.coords().to_vec())
    }
}

pub fn product(v: &QsoTensor, x: &AlgebraVector, y: &AlgebraVector) -> Result<AlgebraVector> {
    check_dims(v.dim(), x.dim())?;
    check_dims(v.dim(), y.dim())?;
    Ok(AlgebraVector(v.bilinear(&x.0, &y.0)))
}

/// `(x ∘ y) ∘ z - x ∘ (y ∘ z)`.
pub fn associator(v: &QsoTensor, x: &AlgebraVector, y: &AlgebraVector, z: &AlgebraVector) -> Result<AlgebraVector> {
    let left = product(v, &product(v, x, y)?, z)?;
    let right = product(v, x, &product(v, y, z)?)?;
    Ok(left.combine(1.0, &right, -1.0))
}

/// Largest associator coordinate over all basis triples `(e_i, e_j, e_k)`.
///
/// The associator is trilinear, so it vanishes identically iff it vanishes
/// on the basis.
pub fn associator_residual(v: &QsoTensor) -> f64 {
    let m = v.dim();
    let mut worst = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for u in 0..m {
                    // ((e_i ∘ e_j) ∘ e_k)_u and (e_i ∘ (e_j ∘ e_k))_u
                    let left: f64 = (0..m).map(|a| v.get(i, j, a) * v.get(a, k, u)).sum();
                    let right: f64 = (0..m).map(|b| v.get(j, k, b) * v.get(i, b, u)).sum();
                    worst = worst.max((left - right).abs());
                }
            }
        }
    }
    worst
}

pub fn is_associative(v: &QsoTensor) -> bool {
    is_associative_with(v, EPS_ASSOC)
}

pub fn is_associative_with(v: &QsoTensor, eps: f64) -> bool {
    associator_residual(v) <= eps
}

/// The seven reduced conditions for `V2_{α,β,γ}` as left-minus-right:
///
/// ```text
/// β(1-β) = 0                 α(1-γ) = (α-γ)(1-β)      α(1-α) = 0
/// α(γ-β) = 0                 γ(1-γ) = 0               γ(1-β) = 0
/// (β-γ)(1-α) = β(1-γ)
/// ```
///
/// These are transcribed as published. They are not equivalent to
/// associativity: at `(1, 0, 1)` the algebra is associative but `γ(1-β) = 1`,
/// so use [`associator_residual`] for the actual decision.
pub fn v2_condition_system(alpha: f64, beta: f64, gamma: f64) -> [f64; 7] {
    let (a, b, g) = (alpha, beta, gamma);
    [
        b * (1.0 - b),
        a * (1.0 - g) - (a - g) * (1.0 - b),
        a * (1.0 - a),
        a * (g - b),
        g * (1.0 - g),
        g * (1.0 - b),
        (b - g) * (1.0 - a) - b * (1.0 - g),
    ]
}

pub fn v2_system_holds(alpha: f64, beta: f64, gamma: f64) -> bool {
    v2_condition_system(alpha, beta, gamma)
        .iter()
        .all(|r| r.abs() <= EPS_ASSOC)
}

const CORNERS: [(f64, f64, f64); 8] = [
    (0.0, 0.0, 0.0),
    (0.0, 0.0, 1.0),
    (0.0, 1.0, 0.0),
    (0.0, 1.0, 1.0),
    (1.0, 0.0, 0.0),
    (1.0, 0.0, 1.0),
    (1.0, 1.0, 0.0),
    (1.0, 1.0, 1.0),
];

/// Corners of `[0,1]³` satisfying the seven reduced conditions, in
/// lexicographic order.
pub fn assoc_solutions_v2() -> Vec<(f64, f64, f64)> {
    CORNERS
        .iter()
        .copied()
        .filter(|&(a, b, g)| v2_system_holds(a, b, g))
        .collect()
}

/// Corners of `[0,1]³` at which `V2` is associative by the basis-triple
/// decision, in lexicographic order.
pub fn associative_v2_corners() -> Vec<(f64, f64, f64)> {
    CORNERS
        .iter()
        .copied()
        .filter(|&(a, b, g)| is_associative(&family_tensor(2, a, b, g)))
        .collect()
}

fn family_tensor(family: u8, a: f64, b: f64, g: f64) -> QsoTensor {
    op_family(&OpFamilySpec {
        family,
        alpha: a,
        beta: b,
        gamma: g,
    })
    .expect("grid parameters lie in [0, 1]")
}

/// `0, step, 2 step, ...` up to and including 1. When `1 / step` is an
/// integer `n` the values are `i / n` exactly.
pub fn grid_values(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(QsoError::InvalidArgument(format!(
            "grid step {step} must lie in (0, 1]"
        )));
    }
    let n = (1.0 / step).round();
    if (n * step - 1.0).abs() < 1e-9 {
        let n = n as usize;
        return Ok((0..=n).map(|i| i as f64 / n as f64).collect());
    }
    let mut values: Vec<f64> = (0..)
        .map(|i| i as f64 * step)
        .take_while(|&t| t < 1.0 - 1e-12)
        .collect();
    values.push(1.0);
    Ok(values)
}

/// Parameter triples of a grid at which the reduced conditions hold.
pub fn v2_system_grid_solutions(step: f64) -> Result<Vec<(f64, f64, f64)>> {
    let grid = grid_values(step)?;
    let mut out = Vec::new();
    for &a in &grid {
        for &b in &grid {
            for &g in &grid {
                if v2_system_holds(a, b, g) {
                    out.push((a, b, g));
                }
            }
        }
    }
    Ok(out)
}

/// Result of scanning a family for associative members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefutationReport {
    pub family: u8,
    pub grid_step: f64,
    pub min_residual: f64,
    pub argmin: [f64; 3],
    pub corner_min_residual: f64,
    pub grid_points: usize,
}

/// Scans `(α, β, γ)` over a grid (corners included) for family 1 or 4 and
/// reports the smallest associator residual. Ties keep the lexicographically
/// first parameter triple.
pub fn refute_associativity(family: u8, grid_step: f64) -> Result<RefutationReport> {
    if family != 1 && family != 4 {
        return Err(QsoError::InvalidFamily(family));
    }
    if !(grid_step > 0.0 && grid_step <= 0.1) {
        return Err(QsoError::InvalidArgument(format!(
            "grid step {grid_step} must lie in (0, 0.1]"
        )));
    }
    let (min_residual, argmin, grid_points) = scan_family(family, grid_step)?;
    let corner_min_residual = CORNERS
        .iter()
        .map(|&(a, b, g)| associator_residual(&family_tensor(family, a, b, g)))
        .fold(f64::INFINITY, f64::min);
    Ok(RefutationReport {
        family,
        grid_step,
        min_residual,
        argmin,
        corner_min_residual,
        grid_points,
    })
}

/// Minimum residual of any family over a grid, with its argmin and the
/// number of points visited.
pub fn scan_family(family: u8, grid_step: f64) -> Result<(f64, [f64; 3], usize)> {
    OpFamilySpec::new(family, 0.0, 0.0, 0.0)?;
    let grid = grid_values(grid_step)?;
    let mut best = (f64::INFINITY, [0.0; 3]);
    for &a in &grid {
        for &b in &grid {
            for &g in &grid {
                let r = associator_residual(&family_tensor(family, a, b, g));
                if r < best.0 {
                    best = (r, [a, b, g]);
                }
            }
        }
    }
    Ok((best.0, best.1, grid.len().pow(3)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugacy::{conjugate, Permutation};
    use crate::simplex::SimplexPoint;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Associator over the 27 basis triples by explicit products, the slow way.
    fn brute_force_residual(v: &QsoTensor) -> f64 {
        let m = v.dim();
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let (ei, ej, ek) = (
                        AlgebraVector::basis(m, i),
                        AlgebraVector::basis(m, j),
                        AlgebraVector::basis(m, k),
                    );
                    let d = associator(v, &ei, &ej, &ek).unwrap();
                    worst = worst.max(d.coords().iter().fold(0.0, |w, c| w.max(c.abs())));
                }
            }
        }
        worst
    }

    #[test]
    fn product_on_basis_reads_a_slice() {
        let mut rng = StdRng::seed_from_u64(21);
        let v = QsoTensor::random(3, &mut rng);
        for i in 0..3 {
            for j in 0..3 {
                let p = product(&v, &AlgebraVector::basis(3, i), &AlgebraVector::basis(3, j)).unwrap();
                assert_eq!(p.coords(), v.slice(i, j));
            }
        }
    }

    #[test]
    fn square_is_the_operator() {
        let mut rng = StdRng::seed_from_u64(22);
        let v = QsoTensor::random(4, &mut rng);
        let x = SimplexPoint::random(4, &mut rng);
        let sq = product(&v, &(&x).into(), &(&x).into()).unwrap();
        let image = v.apply(&x).unwrap();
        assert!(sq
            .coords()
            .iter()
            .zip(image.coords())
            .all(|(a, b)| (a - b).abs() < 1e-14));
    }

    #[test]
    fn product_is_commutative() {
        let mut rng = StdRng::seed_from_u64(23);
        let v = QsoTensor::random(3, &mut rng);
        let x = AlgebraVector::new((0..3).map(|_| rng.gen_range(-2.0..2.0)).collect()).unwrap();
        let y = AlgebraVector::new((0..3).map(|_| rng.gen_range(-2.0..2.0)).collect()).unwrap();
        assert!(product(&v, &x, &y).unwrap().max_abs_diff(&product(&v, &y, &x).unwrap()) < 1e-15);
    }

    #[test]
    fn rejects_non_finite_vectors() {
        assert!(AlgebraVector::new(vec![1.0, f64::INFINITY]).is_err());
        let v = QsoTensor::uniform(3);
        assert!(matches!(
            product(&v, &AlgebraVector::basis(2, 0), &AlgebraVector::basis(3, 0)),
            Err(QsoError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn fast_residual_matches_explicit_products() {
        let mut rng = StdRng::seed_from_u64(24);
        for m in 2..5 {
            for _ in 0..10 {
                let v = QsoTensor::random(m, &mut rng);
                assert!((associator_residual(&v) - brute_force_residual(&v)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn family_two_associativity_examples() {
        assert!(is_associative(&family_tensor(2, 0.0, 0.0, 0.0)));
        let identity = family_tensor(2, 0.5, 0.5, 0.5);
        assert!(!is_associative(&identity));
        // Frozen from the brute-force residual: the largest associator
        // coordinate of the identity QSO's algebra is 1/4.
        assert!((brute_force_residual(&identity) - 0.25).abs() < 1e-15);
        assert!((associator_residual(&identity) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn family_one_is_never_associative_on_a_coarse_grid() {
        for a in [0.0, 0.3, 1.0] {
            for b in [0.0, 0.6, 1.0] {
                for g in [0.0, 0.9, 1.0] {
                    assert!(!is_associative(&family_tensor(1, a, b, g)));
                }
            }
        }
    }

    #[test]
    fn residual_is_conjugation_invariant() {
        let mut rng = StdRng::seed_from_u64(25);
        let v = QsoTensor::random(3, &mut rng);
        let r = associator_residual(&v);
        for pi in Permutation::all(3) {
            assert!((associator_residual(&conjugate(&v, &pi).unwrap()) - r).abs() < 1e-12);
        }
    }

    #[test]
    fn reduced_system_examples() {
        assert_eq!(v2_condition_system(0.0, 0.0, 0.0), [0.0; 7]);
        assert_eq!(v2_condition_system(0.5, 0.5, 0.5)[0], 0.25);
        let r = v2_condition_system(1.0, 0.0, 1.0);
        assert_eq!(r[5], 1.0);
        // (1, 1, 0) is listed as associative but violates two of the
        // reduced conditions and the basis-triple decision.
        let r = v2_condition_system(1.0, 1.0, 0.0);
        assert_eq!(r[1], 1.0);
        assert_eq!(r[3], -1.0);
        assert!(!is_associative(&family_tensor(2, 1.0, 1.0, 0.0)));
    }

    #[test]
    fn corner_solution_sets() {
        assert_eq!(
            assoc_solutions_v2(),
            vec![
                (0.0, 0.0, 0.0),
                (0.0, 1.0, 0.0),
                (0.0, 1.0, 1.0),
                (1.0, 0.0, 0.0),
                (1.0, 1.0, 1.0)
            ]
        );
        assert_eq!(
            associative_v2_corners(),
            vec![
                (0.0, 0.0, 0.0),
                (0.0, 1.0, 0.0),
                (0.0, 1.0, 1.0),
                (1.0, 0.0, 0.0),
                (1.0, 0.0, 1.0),
                (1.0, 1.0, 1.0)
            ]
        );
    }

    #[test]
    fn grid_values_include_both_ends() {
        let g = grid_values(0.05).unwrap();
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[20], 1.0);
        let g = grid_values(0.03).unwrap();
        assert_eq!(*g.last().unwrap(), 1.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!(grid_values(0.0).is_err());
        assert!(grid_values(-0.1).is_err());
    }

    #[test]
    fn refutation_arguments() {
        assert_eq!(refute_associativity(2, 0.1), Err(QsoError::InvalidFamily(2)));
        assert!(matches!(
            refute_associativity(1, 0.2),
            Err(QsoError::InvalidArgument(_))
        ));
        let report = refute_associativity(4, 0.1).unwrap();
        assert_eq!(report.grid_points, 11 * 11 * 11);
        assert!(report.min_residual > 1e-6);
    }
}
