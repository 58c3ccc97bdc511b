//! Volterra operators: detection, the skew-symmetric canonical form
//! `V(x)_k = x_k (1 + sum_i a_ki x_i)`, and the absolute-continuity
//! characterization `V(x) ≺ x` together with its finite certificate.

use rand::Rng;

use crate::error::{QsoError, Result};
use crate::simplex::{abs_continuous_with, SimplexPoint, EPS_SUPP, EPS_VAL};
use crate::tensor::QsoTensor;

/// Skew-symmetric matrix `a` with entries in `[-1, 1]` (0-based, row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix {
    m: usize,
    a: Vec<f64>,
}

impl SkewMatrix {
    /// Checks `a_ki = -a_ik`, `a_kk = 0` and `|a_ki| <= 1`, each within
    /// [`EPS_VAL`], then stores the exactly skew part.
    pub fn new(m: usize, a: Vec<f64>) -> Result<Self> {
        if m == 0 {
            return Err(QsoError::InvalidSkew("empty matrix".into()));
        }
        if a.len() != m * m {
            return Err(QsoError::InvalidSkew(format!(
                "expected {} entries, got {}",
                m * m,
                a.len()
            )));
        }
        if let Some(bad) = a.iter().find(|v| !v.is_finite()) {
            return Err(QsoError::InvalidSkew(format!("non-finite entry {bad}")));
        }
        let mut skew = vec![0.0; m * m];
        for k in 0..m {
            if a[k * m + k].abs() > EPS_VAL {
                return Err(QsoError::InvalidSkew(format!(
                    "diagonal a[{0},{0}] = {1}",
                    k + 1,
                    a[k * m + k]
                )));
            }
            for i in 0..m {
                let (aki, aik) = (a[k * m + i], a[i * m + k]);
                if (aki + aik).abs() > EPS_VAL {
                    return Err(QsoError::InvalidSkew(format!(
                        "a[{},{}] = {aki} but a[{},{}] = {aik}",
                        k + 1,
                        i + 1,
                        i + 1,
                        k + 1
                    )));
                }
                if aki.abs() > 1.0 + EPS_VAL {
                    return Err(QsoError::InvalidSkew(format!(
                        "|a[{},{}]| = {} exceeds 1",
                        k + 1,
                        i + 1,
                        aki.abs()
                    )));
                }
                if i != k {
                    skew[k * m + i] = (0.5 * (aki - aik)).clamp(-1.0, 1.0);
                }
            }
        }
        Ok(SkewMatrix { m, a: skew })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(QsoError::InvalidSkew("matrix is not square".into()));
        }
        Self::new(m, rows.concat())
    }

    pub fn zeros(m: usize) -> Self {
        SkewMatrix { m, a: vec![0.0; m * m] }
    }

    /// Upper-triangle entries uniform in `[-1, 1]`.
    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let mut a = vec![0.0; m * m];
        for k in 0..m {
            for i in (k + 1)..m {
                let v = rng.gen_range(-1.0..=1.0);
                a[k * m + i] = v;
                a[i * m + k] = -v;
            }
        }
        SkewMatrix { m, a }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn get(&self, k: usize, i: usize) -> f64 {
        self.a[k * self.m + i]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.a.chunks(self.m).map(<[f64]>::to_vec).collect()
    }

    pub fn max_abs_diff(&self, other: &SkewMatrix) -> f64 {
        if self.m != other.m {
            return f64::INFINITY;
        }
        self.a
            .iter()
            .zip(&other.a)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    /// `x_k (1 + sum_i a_ki x_i)` evaluated directly.
    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        (0..self.m)
            .map(|k| x[k] * (1.0 + (0..self.m).map(|i| self.get(k, i) * x[i]).sum::<f64>()))
            .collect()
    }
}

/// Largest coefficient `P[i][j][k]` with `k` outside `{i, j}`, with its
/// 0-based position.
fn worst_forbidden(v: &QsoTensor) -> Option<(usize, usize, usize, f64)> {
    let m = v.dim();
    let mut worst: Option<(usize, usize, usize, f64)> = None;
    for i in 0..m {
        for j in i..m {
            for k in 0..m {
                if k == i || k == j {
                    continue;
                }
                let p = v.get(i, j, k);
                if worst.is_none_or(|w| p > w.3) {
                    worst = Some((i, j, k, p));
                }
            }
        }
    }
    worst
}

/// `P[i][j][k] <= EPS_VAL` whenever `k` is outside `{i, j}`.
pub fn is_volterra(v: &QsoTensor) -> bool {
    is_volterra_with(v, EPS_VAL)
}

pub fn is_volterra_with(v: &QsoTensor, eps: f64) -> bool {
    worst_forbidden(v).is_none_or(|(.., p)| p <= eps)
}

/// Reads the canonical matrix `a_ki = 2 P[k][i][k] - 1` off a Volterra tensor.
/// Forbidden entries below [`EPS_VAL`] are treated as zero.
pub fn to_canonical(v: &QsoTensor) -> Result<SkewMatrix> {
    if let Some((i, j, k, p)) = worst_forbidden(v) {
        if p > EPS_VAL {
            return Err(QsoError::NotVolterra {
                i: i + 1,
                j: j + 1,
                k: k + 1,
                value: p,
            });
        }
    }
    let m = v.dim();
    let mut a = vec![0.0; m * m];
    for k in 0..m {
        for i in 0..m {
            if i != k {
                a[k * m + i] = 2.0 * v.get(k, i, k) - 1.0;
            }
        }
    }
    // Skew symmetry follows from P[k][i][k] + P[k][i][i] = 1 once the
    // forbidden mass is zero; the slack is the dropped forbidden mass.
    for k in 0..m {
        for i in (k + 1)..m {
            let defect = (a[k * m + i] + a[i * m + k]).abs();
            assert!(
                defect <= 2.0 * (m as f64) * EPS_VAL + 1e-12,
                "canonical matrix of a Volterra tensor must be skew (defect {defect:e})"
            );
        }
    }
    let mut skew = vec![0.0; m * m];
    for k in 0..m {
        for i in 0..m {
            skew[k * m + i] = (0.5 * (a[k * m + i] - a[i * m + k])).clamp(-1.0, 1.0);
        }
    }
    Ok(SkewMatrix { m, a: skew })
}

/// The Volterra tensor with `P[k][k][k] = 1` and `P[k][i][k] = (1 + a_ki) / 2`.
pub fn from_canonical(a: &SkewMatrix) -> QsoTensor {
    let m = a.dim();
    let mut p = vec![0.0; m * m * m];
    for k in 0..m {
        p[(k * m + k) * m + k] = 1.0;
        for i in 0..m {
            if i != k {
                let v = 0.5 * (1.0 + a.get(k, i));
                p[(k * m + i) * m + k] = v;
                p[(i * m + k) * m + k] = v;
            }
        }
    }
    QsoTensor::from_raw_unchecked(m, p)
}

/// A random Volterra tensor.
pub fn random_volterra<R: Rng + ?Sized>(m: usize, rng: &mut R) -> QsoTensor {
    from_canonical(&SkewMatrix::random(m, rng))
}

/// `V(x) ≺ x` for every sample.
pub fn check_abs_continuity_property(v: &QsoTensor, samples: &[SimplexPoint]) -> Result<bool> {
    check_abs_continuity_property_with(v, samples, EPS_SUPP)
}

pub fn check_abs_continuity_property_with(v: &QsoTensor, samples: &[SimplexPoint], eps_supp: f64) -> Result<bool> {
    for x in samples {
        if !abs_continuous_with(&v.apply(x)?, x, eps_supp)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The vertices followed by the edge midpoints `(e_i + e_j) / 2`, `i < j`.
pub fn certificate_points(m: usize) -> Vec<SimplexPoint> {
    let mut points: Vec<SimplexPoint> = (0..m).map(|k| SimplexPoint::vertex(m, k)).collect();
    for i in 0..m {
        for j in (i + 1)..m {
            points.push(SimplexPoint::on_edge(m, i, j, 0.5));
        }
    }
    points
}

/// First certificate point at which `V(x) ≺ x` fails.
pub fn volterra_certificate_witness(v: &QsoTensor) -> Option<SimplexPoint> {
    certificate_points(v.dim()).into_iter().find(|x| {
        let image = v.apply(x).expect("certificate points match the tensor dimension");
        !abs_continuous_with(&image, x, EPS_SUPP).expect("dimensions match")
    })
}

/// Decides `V(x) ≺ x` on vertices and edge midpoints only. Agrees with
/// [`is_volterra`] except for tensors whose forbidden entries lie in the
/// band `(EPS_SUPP, EPS_VAL]`.
pub fn volterra_certificate(v: &QsoTensor) -> bool {
    volterra_certificate_witness(v).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::ValidationMode;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    /// V^(2) written out from its coordinate table.
    fn family_two(alpha: f64, beta: f64, gamma: f64) -> QsoTensor {
        QsoTensor::from_fn(
            3,
            |i, j, k| match (i, j) {
                (a, b) if a == b => (k == a) as u8 as f64,
                (0, 1) => [alpha, 1.0 - alpha, 0.0][k],
                (0, 2) => [gamma, 0.0, 1.0 - gamma][k],
                (1, 2) => [0.0, beta, 1.0 - beta][k],
                _ => unreachable!(),
            },
            ValidationMode::Strict,
        )
        .unwrap()
    }

    #[test]
    fn family_two_is_volterra() {
        for &(a, b, g) in &[(0.0, 0.0, 0.0), (0.3, 0.6, 0.9), (1.0, 0.5, 0.2)] {
            assert!(is_volterra(&family_two(a, b, g)));
        }
    }

    #[test]
    fn zero_skew_gives_identity() {
        let v = from_canonical(&SkewMatrix::zeros(3));
        assert!(is_volterra(&v));
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..10 {
            let x = SimplexPoint::random(3, &mut rng);
            assert!(v.apply(&x).unwrap().distance_inf(&x) < 1e-15);
        }
        assert_eq!(to_canonical(&v).unwrap(), SkewMatrix::zeros(3));
    }

    #[test]
    fn canonical_of_family_two() {
        let (a, b, g) = (0.3, 0.6, 0.9);
        let skew = to_canonical(&family_two(a, b, g)).unwrap();
        assert!((skew.get(0, 1) - (2.0 * a - 1.0)).abs() < 1e-15);
        assert!((skew.get(0, 2) - (2.0 * g - 1.0)).abs() < 1e-15);
        assert!((skew.get(1, 2) - (2.0 * b - 1.0)).abs() < 1e-15);
        assert!((skew.get(2, 1) + (2.0 * b - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn two_species_canonical_form() {
        // a_12 = 1: V(x, y) = (x + xy, y - xy).
        let v = from_canonical(&SkewMatrix::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap());
        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..20 {
            let p = SimplexPoint::random(2, &mut rng);
            let (x, y) = (p[0], p[1]);
            let image = v.apply(&p).unwrap();
            assert!((image[0] - (x + x * y)).abs() < 1e-15);
            assert!((image[1] - (y - x * y)).abs() < 1e-15);
        }
    }

    #[test]
    fn skew_validation() {
        assert!(SkewMatrix::from_rows(&[vec![0.0, 0.5], vec![0.5, 0.0]]).is_err());
        assert!(SkewMatrix::from_rows(&[vec![0.1, 0.5], vec![-0.5, 0.0]]).is_err());
        assert!(SkewMatrix::from_rows(&[vec![0.0, 1.5], vec![-1.5, 0.0]]).is_err());
        assert!(SkewMatrix::from_rows(&[vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn family_one_fails_at_a_vertex() {
        let mut p = vec![0.0; 27];
        let mut set = |i: usize, j: usize, k: usize, v: f64| {
            p[(i * 3 + j) * 3 + k] = v;
            p[(j * 3 + i) * 3 + k] = v;
        };
        set(0, 0, 2, 1.0);
        set(1, 1, 1, 1.0);
        set(2, 2, 0, 1.0);
        set(0, 1, 1, 0.3);
        set(0, 1, 2, 0.7);
        set(1, 2, 0, 0.6);
        set(1, 2, 1, 0.4);
        set(0, 2, 0, 0.9);
        set(0, 2, 2, 0.1);
        let v = QsoTensor::validate(3, p, ValidationMode::Strict).unwrap();
        assert!(!is_volterra(&v));
        assert!(matches!(to_canonical(&v), Err(QsoError::NotVolterra { .. })));
        assert!(!check_abs_continuity_property(&v, &[SimplexPoint::vertex(3, 0)]).unwrap());
        assert_eq!(volterra_certificate_witness(&v), Some(SimplexPoint::vertex(3, 0)));
    }

    #[test]
    fn certificate_catches_an_edge_leak_at_the_midpoint() {
        let mut v = family_two(0.5, 0.5, 0.5).as_flat().to_vec();
        // Move 0.1 of the (1,2) slice onto species 3.
        for (i, j) in [(0, 1), (1, 0)] {
            v[(i * 3 + j) * 3] -= 0.1;
            v[(i * 3 + j) * 3 + 2] += 0.1;
        }
        let v = QsoTensor::validate(3, v, ValidationMode::Strict).unwrap();
        assert!(!is_volterra(&v));
        let witness = volterra_certificate_witness(&v).unwrap();
        assert_eq!(witness, SimplexPoint::on_edge(3, 0, 1, 0.5));
        let image = v.apply(&witness).unwrap();
        assert!((image[2] - 0.05).abs() < 1e-15);
    }

    #[test]
    fn uniform_kernel_fails_the_certificate_at_a_vertex() {
        let v = QsoTensor::uniform(3);
        assert_eq!(volterra_certificate_witness(&v), Some(SimplexPoint::vertex(3, 0)));
    }

    #[test]
    fn interior_samples_never_witness() {
        let v = QsoTensor::uniform(3);
        assert!(check_abs_continuity_property(&v, &[SimplexPoint::barycenter(3)]).unwrap());
    }

    #[test]
    fn near_volterra_tensor_is_canonicalized_after_zeroing() {
        let mut p = family_two(0.3, 0.6, 0.9).as_flat().to_vec();
        for (i, j) in [(0, 1), (1, 0)] {
            p[(i * 3 + j) * 3] -= 5e-10;
            p[(i * 3 + j) * 3 + 2] += 5e-10;
        }
        let v = QsoTensor::validate(3, p, ValidationMode::Strict).unwrap();
        assert!(is_volterra(&v));
        let skew = to_canonical(&v).unwrap();
        assert!((skew.get(0, 1) - (-0.4)).abs() < 1e-8);
    }
}
