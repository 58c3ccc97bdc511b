//! Quadratic stochastic operators on a finite measurable space.
//!
//! With `E = {1, ..., n}` and the power set as σ-algebra, a kernel
//! `P(x, y, A)` is determined by its atomic values `q[x][y][k] = P(x, y, {k})`
//! and the operator reads `λ'(A) = sum_{x,y} P(x, y, A) λ(x) λ(y)`.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{QsoError, Result};
use crate::simplex::{check_dims, support_of, EPS_SUPP, EPS_VAL};
use crate::tensor::QsoTensor;

/// Largest space the subset oracle will enumerate.
pub const ORACLE_MAX_ATOMS: usize = 12;

/// Random measures sampled by the oracle's second stage.
pub const ORACLE_MEASURE_SAMPLES: usize = 100;

const ORACLE_SEED: u64 = 0x5eed_0fa7;

/// The power-set σ-algebra on `n` atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiniteMeasureSpace {
    n: usize,
}

impl FiniteMeasureSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(QsoError::InvalidDimension(
                0,
                "a measurable space needs at least one atom",
            ));
        }
        Ok(FiniteMeasureSpace { n })
    }

    pub fn atoms(&self) -> usize {
        self.n
    }

    /// Number of measurable sets.
    pub fn event_count(&self) -> u128 {
        1u128 << self.n
    }
}

/// A probability measure given by its atom weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(QsoError::InvalidMeasure("no atoms".into()));
        }
        if let Some((idx, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < -EPS_VAL)
        {
            return Err(QsoError::InvalidMeasure(format!("weight {w} at atom {}", idx + 1)));
        }
        let sum: f64 = weights.iter().map(|w| w.max(0.0)).sum();
        if (sum - 1.0).abs() > EPS_VAL {
            return Err(QsoError::InvalidMeasure(format!("total mass {sum}")));
        }
        Ok(Self::normalized(weights))
    }

    fn normalized(mut weights: Vec<f64>) -> Self {
        weights.iter_mut().for_each(|w| *w = w.max(0.0));
        let sum: f64 = weights.iter().sum();
        if sum > 0.0 && sum != 1.0 {
            weights.iter_mut().for_each(|w| *w /= sum);
        }
        DiscreteMeasure { weights }
    }

    /// The point mass `δ_x` (0-based).
    pub fn dirac(n: usize, x: usize) -> Self {
        let mut weights = vec![0.0; n];
        weights[x] = 1.0;
        DiscreteMeasure { weights }
    }

    /// A random measure whose support is a random nonempty subset.
    pub fn random_with_zeros<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let p = crate::simplex::SimplexPoint::random_with_zeros(n, rng);
        DiscreteMeasure {
            weights: p.into_coords(),
        }
    }

    pub fn atoms(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `μ(A)` for a subset encoded as a bitmask over atoms.
    pub fn mass(&self, subset: u64) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .filter(|(k, _)| subset >> k & 1 == 1)
            .map(|(_, w)| w)
            .sum()
    }

    /// `self ≺ other` at the support threshold.
    pub fn abs_continuous(&self, other: &DiscreteMeasure, eps_supp: f64) -> bool {
        support_of(&self.weights, eps_supp).is_subset(&support_of(&other.weights, eps_supp))
    }
}

/// Atomic values `q[x][y][k]` of a symmetric Markov kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteKernel {
    n: usize,
    q: Vec<f64>,
}

impl FiniteKernel {
    /// Every `q[x][y]` must be a probability vector and `q[x][y] = q[y][x]`,
    /// both within [`EPS_VAL`]. Layout `q[(x * n + y) * n + k]`.
    pub fn new(n: usize, mut q: Vec<f64>) -> Result<Self> {
        FiniteMeasureSpace::new(n)?;
        if q.len() != n * n * n {
            return Err(QsoError::InvalidKernel(format!(
                "expected {} values for n = {n}, got {}",
                n * n * n,
                q.len()
            )));
        }
        let at = |x: usize, y: usize, k: usize| (x * n + y) * n + k;
        for x in 0..n {
            for y in 0..n {
                for k in 0..n {
                    let v = q[at(x, y, k)];
                    if !v.is_finite() || v < -EPS_VAL {
                        return Err(QsoError::InvalidKernel(format!(
                            "P({},{},{{{}}}) = {v}",
                            x + 1,
                            y + 1,
                            k + 1
                        )));
                    }
                    if (v - q[at(y, x, k)]).abs() > EPS_VAL {
                        return Err(QsoError::InvalidKernel(format!(
                            "kernel is not symmetric at ({},{}) atom {}",
                            x + 1,
                            y + 1,
                            k + 1
                        )));
                    }
                }
                let sum: f64 = q[at(x, y, 0)..at(x, y, 0) + n].iter().sum();
                if (sum - 1.0).abs() > EPS_VAL {
                    return Err(QsoError::InvalidKernel(format!("P({},{},E) = {sum}", x + 1, y + 1)));
                }
            }
        }
        for x in 0..n {
            for y in (x + 1)..n {
                for k in 0..n {
                    let avg = 0.5 * (q[at(x, y, k)] + q[at(y, x, k)]);
                    q[at(x, y, k)] = avg;
                    q[at(y, x, k)] = avg;
                }
            }
        }
        Ok(FiniteKernel { n, q })
    }

    /// The kernel `q[i][j][k] = P[i][j][k]`.
    pub fn from_tensor(v: &QsoTensor) -> Self {
        FiniteKernel {
            n: v.dim(),
            q: v.as_flat().to_vec(),
        }
    }

    /// `q[x][y] = (δ_x + δ_y) / 2`.
    pub fn diagonal(n: usize) -> Self {
        let mut q = vec![0.0; n * n * n];
        for x in 0..n {
            for y in 0..n {
                q[(x * n + y) * n + x] += 0.5;
                q[(x * n + y) * n + y] += 0.5;
            }
        }
        FiniteKernel { n, q }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        FiniteKernel::from_tensor(&QsoTensor::random(n, rng))
    }

    /// A random kernel with `q[x][y]` supported on `{x, y}`.
    pub fn random_volterra<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut q = vec![0.0; n * n * n];
        for x in 0..n {
            q[(x * n + x) * n + x] = 1.0;
            for y in (x + 1)..n {
                let t: f64 = rng.gen();
                for (r, c) in [(x, y), (y, x)] {
                    q[(r * n + c) * n + x] = t;
                    q[(r * n + c) * n + y] = 1.0 - t;
                }
            }
        }
        FiniteKernel { n, q }
    }

    pub fn atoms(&self) -> usize {
        self.n
    }

    /// `P(x, y, {k})`, 0-based.
    pub fn get(&self, x: usize, y: usize, k: usize) -> f64 {
        self.q[(x * self.n + y) * self.n + k]
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.q
    }

    /// `P(x, y, A)` for a subset bitmask.
    pub fn set_probability(&self, x: usize, y: usize, subset: u64) -> f64 {
        (0..self.n)
            .filter(|k| subset >> k & 1 == 1)
            .map(|k| self.get(x, y, k))
            .sum()
    }
}

pub fn kernel_apply(kernel: &FiniteKernel, lambda: &DiscreteMeasure) -> Result<DiscreteMeasure> {
    let n = kernel.atoms();
    check_dims(n, lambda.atoms())?;
    let w = lambda.weights();
    let mut out = vec![0.0; n];
    for x in 0..n {
        for y in 0..n {
            let mass = w[x] * w[y];
            if mass == 0.0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o += kernel.get(x, y, k) * mass;
            }
        }
    }
    Ok(DiscreteMeasure::normalized(out))
}

/// `P(x, y, {k}) <= EPS_VAL` whenever `k` is outside `{x, y}`.
pub fn kernel_is_volterra(kernel: &FiniteKernel) -> bool {
    let n = kernel.atoms();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|k| k == x || k == y || kernel.get(x, y, k) <= EPS_VAL)))
}

/// A measurable set `A` (1-based atoms) and atoms `x, y` outside it with
/// `P(x, y, A) > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelWitness {
    pub subset: Vec<usize>,
    pub x: usize,
    pub y: usize,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub volterra: bool,
    /// Violation of the set condition, if any.
    pub witness: Option<KernelWitness>,
    /// Sampled measures checked for `Vλ ≺ λ` (only when the set condition holds).
    pub measures_checked: usize,
    /// First sampled measure with `Vλ` not absolutely continuous w.r.t. `λ`.
    pub measure_violation: Option<Vec<f64>>,
}

/// Exhaustive check of `P(x, y, A) = 0` for every subset `A` and every pair
/// `x, y` outside `A`, followed by a sampled check of `Vλ ≺ λ` when the set
/// condition holds. `O(4^n n)` work, so limited to [`ORACLE_MAX_ATOMS`] atoms.
///
/// A set `A` counts as null for the kernel when its mass is at most
/// `|A| * EPS_VAL`, which makes the verdict agree with
/// [`kernel_is_volterra`]'s per-atom threshold.
pub fn kernel_volterra_oracle(kernel: &FiniteKernel) -> Result<OracleReport> {
    let n = kernel.atoms();
    if n > ORACLE_MAX_ATOMS {
        return Err(QsoError::TooLarge(n, ORACLE_MAX_ATOMS));
    }
    let full: u64 = (1u64 << n) - 1;
    let mut witness = None;
    'search: for subset in 1..=full {
        let size = subset.count_ones() as f64;
        let outside: Vec<usize> = (0..n).filter(|k| subset >> k & 1 == 0).collect();
        for (a, &x) in outside.iter().enumerate() {
            for &y in &outside[a..] {
                let mass = kernel.set_probability(x, y, subset);
                if mass > size * EPS_VAL {
                    witness = Some(KernelWitness {
                        subset: (0..n).filter(|k| subset >> k & 1 == 1).map(|k| k + 1).collect(),
                        x: x + 1,
                        y: y + 1,
                        mass,
                    });
                    break 'search;
                }
            }
        }
    }

    let mut report = OracleReport {
        volterra: witness.is_none(),
        witness,
        measures_checked: 0,
        measure_violation: None,
    };
    if report.volterra {
        let mut rng = StdRng::seed_from_u64(ORACLE_SEED);
        for _ in 0..ORACLE_MEASURE_SAMPLES {
            let lambda = DiscreteMeasure::random_with_zeros(n, &mut rng);
            let image = kernel_apply(kernel, &lambda)?;
            report.measures_checked += 1;
            if !image.abs_continuous(&lambda, EPS_SUPP) {
                report.volterra = false;
                report.measure_violation = Some(lambda.weights().to_vec());
                break;
            }
        }
    }
    Ok(report)
}
