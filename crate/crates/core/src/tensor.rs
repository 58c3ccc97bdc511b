//! Heredity coefficient tensors and the quadratic map they define.

use rand::Rng;

use crate::error::{QsoError, Result};
use crate::simplex::{check_dims, SimplexPoint, EPS_VAL};

/// How [`QsoTensor::validate`] treats inputs that are not already a QSO.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValidationMode {
    /// Reject anything outside tolerance.
    #[default]
    Strict,
    /// Symmetrize in `(i, j)` and rescale every slice to sum to one.
    Normalize,
}

/// Dense `m x m x m` array of heredity coefficients `P[i][j][k]`.
///
/// Invariants: entries are nonnegative within [`EPS_VAL`], exactly symmetric
/// in `(i, j)`, and every `(i, j)` slice sums to one within [`EPS_VAL`].
/// Indices are 0-based here; the JSON format is 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct QsoTensor {
    m: usize,
    p: Vec<f64>,
}

impl QsoTensor {
    /// Validates a flat array laid out as `p[(i * m + j) * m + k]`.
    pub fn validate(m: usize, mut p: Vec<f64>, mode: ValidationMode) -> Result<Self> {
        if m < 2 {
            return Err(QsoError::InvalidDimension(m, "a QSO needs m >= 2"));
        }
        if p.len() != m * m * m {
            return Err(QsoError::NotCubic(format!(
                "expected {} coefficients for m = {m}, got {}",
                m * m * m,
                p.len()
            )));
        }
        let at = |i: usize, j: usize, k: usize| (i * m + j) * m + k;

        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let v = p[at(i, j, k)];
                    if !v.is_finite() {
                        return Err(QsoError::NonFinite {
                            location: format!("P[{},{},{}]", i + 1, j + 1, k + 1),
                            value: v,
                        });
                    }
                }
            }
        }

        let check_negative = |p: &[f64]| -> Result<()> {
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        let v = p[at(i, j, k)];
                        if v < -EPS_VAL {
                            return Err(QsoError::NegativeCoefficient {
                                i: i + 1,
                                j: j + 1,
                                k: k + 1,
                                value: v,
                            });
                        }
                    }
                }
            }
            Ok(())
        };
        check_negative(&p)?;

        if mode == ValidationMode::Strict {
            for i in 0..m {
                for j in (i + 1)..m {
                    for k in 0..m {
                        let (a, b) = (p[at(i, j, k)], p[at(j, i, k)]);
                        if (a - b).abs() > EPS_VAL {
                            return Err(QsoError::NotSymmetric {
                                i: i + 1,
                                j: j + 1,
                                k: k + 1,
                                pij: a,
                                pji: b,
                            });
                        }
                    }
                }
            }
        }

        // Exact symmetry. In strict mode this moves entries by at most EPS_VAL / 2
        // and leaves exactly symmetric input untouched.
        for i in 0..m {
            for j in (i + 1)..m {
                for k in 0..m {
                    let avg = 0.5 * (p[at(i, j, k)] + p[at(j, i, k)]);
                    p[at(i, j, k)] = avg;
                    p[at(j, i, k)] = avg;
                }
            }
        }

        for i in 0..m {
            for j in 0..m {
                let slice = &mut p[at(i, j, 0)..at(i, j, 0) + m];
                match mode {
                    ValidationMode::Strict => {
                        let sum: f64 = slice.iter().sum();
                        if (sum - 1.0).abs() > EPS_VAL {
                            return Err(QsoError::NotStochastic {
                                i: i + 1,
                                j: j + 1,
                                sum,
                            });
                        }
                    }
                    ValidationMode::Normalize => {
                        slice.iter_mut().for_each(|v| *v = v.max(0.0));
                        let sum: f64 = slice.iter().sum();
                        if sum <= 0.0 {
                            return Err(QsoError::NotStochastic {
                                i: i + 1,
                                j: j + 1,
                                sum,
                            });
                        }
                        slice.iter_mut().for_each(|v| *v /= sum);
                    }
                }
            }
        }

        Ok(QsoTensor { m, p })
    }

    /// Validates a nested `p[i][j][k]` array.
    pub fn from_nested(nested: &[Vec<Vec<f64>>], mode: ValidationMode) -> Result<Self> {
        let m = nested.len();
        let mut flat = Vec::with_capacity(m * m * m);
        for (i, plane) in nested.iter().enumerate() {
            if plane.len() != m {
                return Err(QsoError::NotCubic(format!(
                    "row {} has {} slices, expected {m}",
                    i + 1,
                    plane.len()
                )));
            }
            for (j, slice) in plane.iter().enumerate() {
                if slice.len() != m {
                    return Err(QsoError::NotCubic(format!(
                        "slice ({},{}) has {} entries, expected {m}",
                        i + 1,
                        j + 1,
                        slice.len()
                    )));
                }
                flat.extend_from_slice(slice);
            }
        }
        Self::validate(m, flat, mode)
    }

    /// Builds a tensor from a closure over 0-based `(i, j, k)`; the closure is
    /// consulted for `i <= j` only and mirrored.
    pub fn from_fn<F: FnMut(usize, usize, usize) -> f64>(m: usize, mut f: F, mode: ValidationMode) -> Result<Self> {
        let mut p = vec![0.0; m * m * m];
        for i in 0..m {
            for j in i..m {
                for k in 0..m {
                    let v = f(i, j, k);
                    p[(i * m + j) * m + k] = v;
                    p[(j * m + i) * m + k] = v;
                }
            }
        }
        Self::validate(m, p, mode)
    }

    /// `P[i][j][k] = 1/m`.
    pub fn uniform(m: usize) -> Self {
        QsoTensor {
            m,
            p: vec![1.0 / m as f64; m * m * m],
        }
    }

    /// A random QSO whose slices are uniform on the simplex.
    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let mut p = vec![0.0; m * m * m];
        for i in 0..m {
            for j in i..m {
                let slice = SimplexPoint::random(m, rng);
                for k in 0..m {
                    p[(i * m + j) * m + k] = slice[k];
                    p[(j * m + i) * m + k] = slice[k];
                }
            }
        }
        QsoTensor { m, p }
    }

    pub(crate) fn from_raw_unchecked(m: usize, p: Vec<f64>) -> Self {
        debug_assert_eq!(p.len(), m * m * m);
        QsoTensor { m, p }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    /// `P[i][j][k]`, 0-based.
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.p[(i * self.m + j) * self.m + k]
    }

    /// The distribution `(P[i][j][0], ..., P[i][j][m-1])`.
    pub fn slice(&self, i: usize, j: usize) -> &[f64] {
        let start = (i * self.m + j) * self.m;
        &self.p[start..start + self.m]
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.p
    }

    /// Largest entrywise difference; `f64::INFINITY` if dimensions differ.
    pub fn max_abs_diff(&self, other: &QsoTensor) -> f64 {
        if self.m != other.m {
            return f64::INFINITY;
        }
        self.p
            .iter()
            .zip(&other.p)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `x'_k = sum_{i,j} P[i][j][k] x_i x_j`.
    pub fn apply(&self, x: &SimplexPoint) -> Result<SimplexPoint> {
        check_dims(self.m, x.dim())?;
        Ok(SimplexPoint::renormalized(self.quadratic_form(x.coords())))
    }

    pub(crate) fn quadratic_form(&self, x: &[f64]) -> Vec<f64> {
        self.bilinear(x, x)
    }

    pub(crate) fn bilinear(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut out = vec![0.0; m];
        for (i, &xi) in x.iter().enumerate().take(m) {
            if xi == 0.0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate().take(m) {
                let w = xi * yj;
                if w == 0.0 {
                    continue;
                }
                for (o, &p) in out.iter_mut().zip(self.slice(i, j)) {
                    *o += p * w;
                }
            }
        }
        out
    }
}

/// Shorthand for [`QsoTensor::apply`].
pub fn apply(v: &QsoTensor, x: &SimplexPoint) -> Result<SimplexPoint> {
    v.apply(x)
}
