//! Orthogonality-preserving QSOs on the 2-simplex.
//!
//! Every such operator sends the vertices to a permutation of the vertices
//! and belongs to one of six three-parameter families `V1..V6`. With
//! coordinates `(x, y, z)`:
//!
//! | family | `e1, e2, e3` map to | `x'` | `y'` | `z'` |
//! |---|---|---|---|---|
//! | 1 | `e3, e2, e1` | `z² + 2γxz + 2βyz` | `y² + 2αxy + 2(1-β)yz` | `x² + 2(1-α)xy + 2(1-γ)xz` |
//! | 2 | `e1, e2, e3` | `x² + 2αxy + 2γxz` | `y² + 2(1-α)xy + 2βyz` | `z² + 2(1-γ)xz + 2(1-β)yz` |
//! | 3 | `e1, e3, e2` | `x² + 2αxy + 2γxz` | `z² + 2(1-γ)xz + 2βyz` | `y² + 2(1-α)xy + 2(1-β)yz` |
//! | 4 | `e3, e1, e2` | `y² + 2αxy + 2βyz` | `z² + 2γxz + 2(1-β)yz` | `x² + 2(1-α)xy + 2(1-γ)xz` |
//! | 5 | `e2, e1, e3` | `y² + 2αxy + 2βyz` | `x² + 2(1-α)xy + 2γxz` | `z² + 2(1-γ)xz + 2(1-β)yz` |
//! | 6 | `e2, e3, e1` | `z² + 2γxz + 2βyz` | `x² + 2αxy + 2(1-γ)xz` | `y² + 2(1-α)xy + 2(1-β)yz` |
//!
//! In every family α sits on the `(1,2)` slice, γ on `(1,3)` and β on `(2,3)`.
//! Since the vertex map alone identifies the family, no two families share a
//! tensor, boundary parameters included.

use serde::{Deserialize, Serialize};

use crate::error::{QsoError, Result};
use crate::simplex::{orthogonal_with, SimplexPoint, EPS_SUPP};
use crate::tensor::QsoTensor;

/// Grid points per edge used by the orthogonality certificate.
pub const DEFAULT_EDGE_GRID: usize = 101;

/// Distance within which a vertex image is matched to a vertex.
pub const VERTEX_MATCH_TOL: f64 = 1e-6;

/// Largest entrywise gap tolerated between an input and the rebuilt family
/// tensor in [`classify_op`].
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

/// One operator of the six families: a family index in `1..=6` and
/// parameters in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpFamilySpec {
    pub family: u8,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl OpFamilySpec {
    pub fn new(family: u8, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let spec = OpFamilySpec {
            family,
            alpha,
            beta,
            gamma,
        };
        spec.check()?;
        Ok(spec)
    }

    pub fn check(&self) -> Result<()> {
        if !(1..=6).contains(&self.family) {
            return Err(QsoError::InvalidFamily(self.family));
        }
        for (name, value) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(QsoError::ParameterOutOfRange { name, value });
            }
        }
        Ok(())
    }

    pub fn params(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    /// Largest parameter difference; infinite across families.
    pub fn distance(&self, other: &OpFamilySpec) -> f64 {
        if self.family != other.family {
            return f64::INFINITY;
        }
        self.params()
            .iter()
            .zip(other.params())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Off-diagonal slices in the order they carry α, γ, β.
const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

struct FamilyLayout {
    /// `vertex_image[k]` is the index of `V(e_k)`.
    vertex_image: [usize; 3],
    /// Coordinate receiving the parameter on each slice of [`PAIRS`]; the
    /// other vertex image of the pair receives one minus the parameter.
    param_slot: [usize; 3],
}

const LAYOUTS: [FamilyLayout; 6] = [
    FamilyLayout {
        vertex_image: [2, 1, 0],
        param_slot: [1, 0, 0],
    },
    FamilyLayout {
        vertex_image: [0, 1, 2],
        param_slot: [0, 0, 1],
    },
    FamilyLayout {
        vertex_image: [0, 2, 1],
        param_slot: [0, 0, 1],
    },
    FamilyLayout {
        vertex_image: [2, 0, 1],
        param_slot: [0, 1, 0],
    },
    FamilyLayout {
        vertex_image: [1, 0, 2],
        param_slot: [0, 1, 0],
    },
    FamilyLayout {
        vertex_image: [1, 2, 0],
        param_slot: [1, 0, 0],
    },
];

fn layout(family: u8) -> Result<&'static FamilyLayout> {
    LAYOUTS
        .get((family as usize).wrapping_sub(1))
        .ok_or(QsoError::InvalidFamily(family))
}

/// The tensor of `V^(family)_{α,β,γ}`.
pub fn op_family(spec: &OpFamilySpec) -> Result<QsoTensor> {
    spec.check()?;
    let layout = layout(spec.family)?;
    let params = [spec.alpha, spec.gamma, spec.beta];
    let mut p = vec![0.0; 27];
    let at = |i: usize, j: usize, k: usize| (i * 3 + j) * 3 + k;
    for k in 0..3 {
        p[at(k, k, layout.vertex_image[k])] = 1.0;
    }
    for (n, &(i, j)) in PAIRS.iter().enumerate() {
        let slot = layout.param_slot[n];
        let (a, b) = (layout.vertex_image[i], layout.vertex_image[j]);
        debug_assert!(slot == a || slot == b);
        let other = if slot == a { b } else { a };
        for (r, c) in [(i, j), (j, i)] {
            p[at(r, c, slot)] = params[n];
            p[at(r, c, other)] = 1.0 - params[n];
        }
    }
    Ok(QsoTensor::from_raw_unchecked(3, p))
}

/// Every orthogonal pair of the certificate: the vertex pairs, then each
/// vertex against `grid` evenly spaced points of the opposite edge.
pub fn orthogonal_pairs(grid: usize) -> Vec<(SimplexPoint, SimplexPoint)> {
    let mut pairs = Vec::new();
    for a in 0..3 {
        for b in (a + 1)..3 {
            pairs.push((SimplexPoint::vertex(3, a), SimplexPoint::vertex(3, b)));
        }
    }
    let steps = grid.max(2) - 1;
    for k in 0..3 {
        let (i, j) = match k {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        for s in 0..=steps {
            let t = s as f64 / steps as f64;
            pairs.push((SimplexPoint::on_edge(3, i, j, t), SimplexPoint::vertex(3, k)));
        }
    }
    pairs
}

/// First certificate pair `(x, y)` with `V(x)` not orthogonal to `V(y)`.
pub fn orthogonality_witness(v: &QsoTensor, grid: usize) -> Result<Option<(SimplexPoint, SimplexPoint)>> {
    if v.dim() != 3 {
        return Err(QsoError::DimensionUnsupported(v.dim()));
    }
    for (x, y) in orthogonal_pairs(grid) {
        if !orthogonal_with(&v.apply(&x)?, &v.apply(&y)?, EPS_SUPP)? {
            return Ok(Some((x, y)));
        }
    }
    Ok(None)
}

/// Decides orthogonality preservation on the default edge grid.
///
/// Every orthogonal pair of the 2-simplex is an edge point against the
/// opposite vertex, and the image overlap along an edge is a nonnegative
/// quadratic in the edge parameter, so three grid points already decide it.
pub fn is_orthogonality_preserving(v: &QsoTensor) -> Result<bool> {
    is_orthogonality_preserving_with(v, DEFAULT_EDGE_GRID)
}

pub fn is_orthogonality_preserving_with(v: &QsoTensor, grid: usize) -> Result<bool> {
    Ok(orthogonality_witness(v, grid)?.is_none())
}

/// Recovers `(family, α, β, γ)` from an orthogonality-preserving tensor.
///
/// The family comes from the vertex permutation. Each parameter is the slot
/// coordinate of the midpoint polarization
/// `2 V((e_i + e_j)/2) - (V(e_i) + V(e_j))/2 = e_i ∘ e_j`, evaluated through
/// the bilinear form so that it is exact in floating point.
pub fn classify_op(v: &QsoTensor) -> Result<OpFamilySpec> {
    if let Some((x, y)) = orthogonality_witness(v, DEFAULT_EDGE_GRID)? {
        return Err(QsoError::NotOrthogonalityPreserving(format!(
            "images of {:?} and {:?} overlap",
            x.coords(),
            y.coords()
        )));
    }

    let images: Vec<SimplexPoint> = (0..3)
        .map(|k| v.apply(&SimplexPoint::vertex(3, k)))
        .collect::<Result<_>>()?;
    let mut sigma = [0usize; 3];
    for (k, image) in images.iter().enumerate() {
        let (nearest, distance) = (0..3)
            .map(|t| (t, image.distance_inf(&SimplexPoint::vertex(3, t))))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("three vertices");
        if distance > VERTEX_MATCH_TOL {
            return Err(QsoError::VertexImageNotVertex {
                vertex: k + 1,
                distance,
            });
        }
        sigma[k] = nearest;
    }
    let family = LAYOUTS
        .iter()
        .position(|l| l.vertex_image == sigma)
        .map(|n| n as u8 + 1)
        .ok_or_else(|| QsoError::NotOrthogonalityPreserving(format!("vertex map {sigma:?} is not a bijection")))?;
    let layout = layout(family)?;

    let mut read = [0.0; 3];
    for (n, &(i, j)) in PAIRS.iter().enumerate() {
        let slot = layout.param_slot[n];
        let (ei, ej) = (SimplexPoint::vertex(3, i), SimplexPoint::vertex(3, j));
        read[n] = v.bilinear(ei.coords(), ej.coords())[slot].clamp(0.0, 1.0);
    }
    let spec = OpFamilySpec {
        family,
        alpha: read[0],
        beta: read[2],
        gamma: read[1],
    };

    let residual = op_family(&spec)?.max_abs_diff(v);
    if residual > RECONSTRUCTION_TOL {
        return Err(QsoError::NotOrthogonalityPreserving(format!(
            "family {family} reconstruction differs by {residual:e}"
        )));
    }
    Ok(spec)
}
