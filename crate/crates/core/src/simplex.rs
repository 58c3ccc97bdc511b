//! Points of the probability simplex and the support relations between them.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;

use crate::error::{QsoError, Result};

/// Tolerance for stochasticity and bound checks.
pub const EPS_VAL: f64 = 1e-9;

/// Default threshold above which a coordinate counts as part of the support.
pub const EPS_SUPP: f64 = 1e-12;

/// A probability vector on `m` coordinates.
///
/// Construction clamps coordinates in `[-EPS_VAL, 0)` to zero and rescales so
/// that the coordinates sum to one; anything further outside the simplex is
/// rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    coords: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(coords, EPS_VAL)
    }

    pub fn with_tolerance(coords: Vec<f64>, eps: f64) -> Result<Self> {
        if coords.is_empty() {
            return Err(QsoError::InvalidDimension(
                0,
                "a simplex point needs at least one coordinate",
            ));
        }
        for (idx, &c) in coords.iter().enumerate() {
            if !c.is_finite() {
                return Err(QsoError::NonFinite {
                    location: format!("x[{}]", idx + 1),
                    value: c,
                });
            }
            if c < -eps {
                return Err(QsoError::NotInSimplex(format!(
                    "coordinate x[{}] = {c} is negative",
                    idx + 1
                )));
            }
        }
        let sum: f64 = coords.iter().map(|c| c.max(0.0)).sum();
        if (sum - 1.0).abs() > eps {
            return Err(QsoError::NotInSimplex(format!("coordinates sum to {sum}")));
        }
        Ok(Self::renormalized(coords))
    }

    /// Clamps negatives to zero and divides by the sum without any tolerance
    /// check. Callers guarantee the input is already a simplex point up to
    /// rounding.
    pub(crate) fn renormalized(mut coords: Vec<f64>) -> Self {
        for c in coords.iter_mut() {
            if *c < 0.0 {
                *c = 0.0;
            }
        }
        let sum: f64 = coords.iter().sum();
        if sum > 0.0 && sum != 1.0 {
            for c in coords.iter_mut() {
                *c /= sum;
            }
        }
        SimplexPoint { coords }
    }

    /// Wraps coordinates already known to lie on the simplex.
    pub(crate) fn from_coords_unchecked(coords: Vec<f64>) -> Self {
        SimplexPoint { coords }
    }

    /// The vertex `e_k` (0-based `k`).
    pub fn vertex(m: usize, k: usize) -> Self {
        assert!(k < m, "vertex index {k} out of range for m = {m}");
        let mut coords = vec![0.0; m];
        coords[k] = 1.0;
        SimplexPoint { coords }
    }

    /// The barycentre `(1/m, ..., 1/m)`.
    pub fn barycenter(m: usize) -> Self {
        SimplexPoint {
            coords: vec![1.0 / m as f64; m],
        }
    }

    /// The convex combination `lambda * e_i + (1 - lambda) * e_j`.
    pub fn on_edge(m: usize, i: usize, j: usize, lambda: f64) -> Self {
        let mut coords = vec![0.0; m];
        coords[i] += lambda;
        coords[j] += 1.0 - lambda;
        SimplexPoint { coords }
    }

    /// A uniformly distributed point of the simplex.
    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let raw: Vec<f64> = (0..m).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        Self::renormalized(raw)
    }

    /// A uniform point on a random face: each coordinate is zeroed with
    /// probability one half, keeping at least one coordinate alive.
    pub fn random_with_zeros<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let mut raw: Vec<f64> = (0..m)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    0.0
                } else {
                    -(1.0 - rng.gen::<f64>()).ln()
                }
            })
            .collect();
        if raw.iter().all(|&c| c == 0.0) {
            raw[rng.gen_range(0..m)] = 1.0;
        }
        Self::renormalized(raw)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn dot(&self, other: &SimplexPoint) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum())
    }

    /// Maximum coordinate difference.
    pub fn distance_inf(&self, other: &SimplexPoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for SimplexPoint {
    type Output = f64;

    fn index(&self, idx: usize) -> &f64 {
        &self.coords[idx]
    }
}

/// A set of coordinate indices (0-based; displayed 1-based).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SupportSet {
    indices: BTreeSet<usize>,
}

impl SupportSet {
    pub fn contains(&self, idx: usize) -> bool {
        self.indices.contains(&idx)
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.indices.is_subset(&other.indices)
    }

    pub fn is_disjoint(&self, other: &SupportSet) -> bool {
        self.indices.is_disjoint(&other.indices)
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    /// 1-based indices, as used in the JSON and CLI output.
    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }
}

impl FromIterator<usize> for SupportSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        SupportSet {
            indices: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, idx) in self.indices.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", idx + 1)?;
        }
        write!(f, "}}")
    }
}

/// Indices whose coordinate exceeds `eps_supp`.
pub fn support(x: &SimplexPoint, eps_supp: f64) -> SupportSet {
    support_of(x.coords(), eps_supp)
}

pub(crate) fn support_of(coords: &[f64], eps_supp: f64) -> SupportSet {
    coords
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > eps_supp)
        .map(|(i, _)| i)
        .collect()
}

/// `x ≺ y`: every zero coordinate of `y` is a zero coordinate of `x`.
pub fn abs_continuous(x: &SimplexPoint, y: &SimplexPoint) -> Result<bool> {
    abs_continuous_with(x, y, EPS_SUPP)
}

pub fn abs_continuous_with(x: &SimplexPoint, y: &SimplexPoint, eps_supp: f64) -> Result<bool> {
    check_dims(x.dim(), y.dim())?;
    Ok(support(x, eps_supp).is_subset(&support(y, eps_supp)))
}

/// Mutual absolute continuity.
pub fn equivalent(x: &SimplexPoint, y: &SimplexPoint) -> Result<bool> {
    Ok(abs_continuous(x, y)? && abs_continuous(y, x)?)
}

/// Disjoint supports.
pub fn orthogonal(x: &SimplexPoint, y: &SimplexPoint) -> Result<bool> {
    orthogonal_with(x, y, EPS_SUPP)
}

pub fn orthogonal_with(x: &SimplexPoint, y: &SimplexPoint, eps_supp: f64) -> Result<bool> {
    check_dims(x.dim(), y.dim())?;
    Ok(support(x, eps_supp).is_disjoint(&support(y, eps_supp)))
}

pub(crate) fn check_dims(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(QsoError::DimensionMismatch { expected, actual });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn pt(c: &[f64]) -> SimplexPoint {
        SimplexPoint::new(c.to_vec()).unwrap()
    }

    #[test]
    fn construction_clamps_and_renormalizes() {
        let x = pt(&[-5e-10, 0.5, 0.5]);
        assert_eq!(x[0], 0.0);
        assert!((x.coords().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn construction_rejects_points_off_the_simplex() {
        assert!(matches!(
            SimplexPoint::new(vec![-0.1, 0.6, 0.5]),
            Err(QsoError::NotInSimplex(_))
        ));
        assert!(matches!(
            SimplexPoint::new(vec![0.2, 0.2]),
            Err(QsoError::NotInSimplex(_))
        ));
        assert!(matches!(
            SimplexPoint::new(vec![f64::NAN, 1.0]),
            Err(QsoError::NonFinite { .. })
        ));
        assert!(SimplexPoint::new(vec![]).is_err());
    }

    #[test]
    fn support_examples() {
        assert_eq!(support(&pt(&[1.0, 0.0, 0.0]), EPS_SUPP).one_based(), vec![1]);
        assert_eq!(support(&pt(&[0.5, 0.5, 0.0]), EPS_SUPP).one_based(), vec![1, 2]);
        let third = 1.0 / 3.0;
        assert_eq!(
            support(&pt(&[third, third, third]), EPS_SUPP).one_based(),
            vec![1, 2, 3]
        );
        assert_eq!(support(&pt(&[0.5, 0.5, 0.0]), EPS_SUPP).to_string(), "{1,2}");
    }

    #[test]
    fn abs_continuity_examples() {
        assert!(abs_continuous(&pt(&[0.5, 0.5, 0.0]), &pt(&[0.3, 0.3, 0.4])).unwrap());
        assert!(!abs_continuous(&pt(&[0.0, 1.0, 0.0]), &pt(&[0.5, 0.0, 0.5])).unwrap());
        let x = pt(&[0.2, 0.0, 0.8]);
        assert!(abs_continuous(&x, &x).unwrap());
        assert!(equivalent(&x, &pt(&[0.7, 0.0, 0.3])).unwrap());
        assert!(matches!(
            abs_continuous(&x, &pt(&[0.5, 0.5])),
            Err(QsoError::DimensionMismatch { expected: 3, actual: 2 })
        ));
    }

    #[test]
    fn orthogonality_examples() {
        assert!(orthogonal(&pt(&[1.0, 0.0, 0.0]), &pt(&[0.0, 0.5, 0.5])).unwrap());
        assert!(!orthogonal(&pt(&[0.5, 0.5, 0.0]), &pt(&[0.0, 0.5, 0.5])).unwrap());
        let x = pt(&[0.1, 0.9, 0.0]);
        assert!(!orthogonal(&x, &x).unwrap());
    }

    #[test]
    fn random_points_are_on_the_simplex() {
        let mut rng = StdRng::seed_from_u64(7);
        for m in 1..6 {
            for _ in 0..50 {
                let x = SimplexPoint::random(m, &mut rng);
                assert!((x.coords().iter().sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(x.coords().iter().all(|&c| c >= 0.0));
                let y = SimplexPoint::random_with_zeros(m, &mut rng);
                assert!(!support(&y, EPS_SUPP).is_empty());
            }
        }
    }
}
