//! Coordinate permutations acting on simplex points and on QSOs.
//!
//! Convention: a permutation `σ` acts on points by `(T_σ x)_i = x_σ(i)`, so
//! `σ = [2, 3, 1]` (1-based) sends `(x, y, z)` to `(y, z, x)`. Conjugation is
//! `conjugate(V, σ) = T_σ⁻¹ ∘ V ∘ T_σ`, and
//! `conjugate(conjugate(V, σ), ρ) == conjugate(V, ρ.compose(&σ))`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{QsoError, Result};
use crate::orthopreserve::{classify_op, op_family, OpFamilySpec};
use crate::simplex::{check_dims, SimplexPoint};
use crate::tensor::QsoTensor;

/// Parameters used when computing conjugacy classes; chosen away from the
/// fixed points of every parameter map (0, 1/2, 1).
pub const GENERIC_PARAMS: (f64, f64, f64) = (0.3, 0.6, 0.9);

/// A bijection of `{0, ..., m-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    sigma: Vec<usize>,
}

/// JSON form: `{"sigma": [2, 3, 1]}`, the 1-based images of `1..m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationJson {
    pub sigma: Vec<usize>,
}

impl Permutation {
    pub fn new(sigma: Vec<usize>) -> Result<Self> {
        let m = sigma.len();
        if m == 0 {
            return Err(QsoError::InvalidPermutation("empty permutation".into()));
        }
        let mut seen = vec![false; m];
        for &s in &sigma {
            if s >= m || seen[s] {
                return Err(QsoError::InvalidPermutation(format!(
                    "{sigma:?} is not a bijection of 0..{m}"
                )));
            }
            seen[s] = true;
        }
        Ok(Permutation { sigma })
    }

    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(QsoError::InvalidPermutation("images are 1-based".into()));
        }
        Self::new(images.iter().map(|&s| s - 1).collect())
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.sigma.iter().map(|s| s + 1).collect()
    }

    pub fn identity(m: usize) -> Self {
        Permutation {
            sigma: (0..m).collect(),
        }
    }

    /// `(x, y, z) -> (y, z, x)`.
    pub fn cyclic_shift() -> Self {
        Permutation { sigma: vec![1, 2, 0] }
    }

    /// `(x, y, z) -> (x, z, y)`.
    pub fn swap_last_two() -> Self {
        Permutation { sigma: vec![0, 2, 1] }
    }

    /// All `m!` permutations in lexicographic order.
    pub fn all(m: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..m).collect();
        loop {
            out.push(Permutation { sigma: current.clone() });
            // next lexicographic permutation
            let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
                break;
            };
            let j = (i + 1..m)
                .rev()
                .find(|&j| current[j] > current[i])
                .expect("successor exists");
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.sigma[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.sigma.len()];
        for (i, &s) in self.sigma.iter().enumerate() {
            inv[s] = i;
        }
        Permutation { sigma: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.len(), other.len(), "composing permutations of different degree");
        Permutation {
            sigma: other.sigma.iter().map(|&j| self.sigma[j]).collect(),
        }
    }
}

impl TryFrom<PermutationJson> for Permutation {
    type Error = QsoError;

    fn try_from(value: PermutationJson) -> Result<Self> {
        Permutation::from_one_based(&value.sigma)
    }
}

impl From<&Permutation> for PermutationJson {
    fn from(p: &Permutation) -> Self {
        PermutationJson { sigma: p.one_based() }
    }
}

/// `(T_π x)_i = x_π(i)`.
pub fn permute_point(pi: &Permutation, x: &SimplexPoint) -> Result<SimplexPoint> {
    check_dims(pi.len(), x.dim())?;
    Ok(SimplexPoint::from_coords_unchecked(
        (0..pi.len()).map(|i| x[pi.image(i)]).collect(),
    ))
}

/// `T_π⁻¹ ∘ V ∘ T_π`, realized as `W[i][j][k] = P[π⁻¹(i)][π⁻¹(j)][π⁻¹(k)]`.
pub fn conjugate(v: &QsoTensor, pi: &Permutation) -> Result<QsoTensor> {
    let m = v.dim();
    check_dims(m, pi.len())?;
    let inv = pi.inverse();
    let mut w = vec![0.0; m * m * m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                w[(i * m + j) * m + k] = v.get(inv.image(i), inv.image(j), inv.image(k));
            }
        }
    }
    Ok(QsoTensor::from_raw_unchecked(m, w))
}

/// Families reached from `family` by conjugating with every permutation of
/// the three coordinates, at the given parameters.
pub fn family_orbit(family: u8, params: (f64, f64, f64)) -> Result<BTreeSet<u8>> {
    let v = op_family(&OpFamilySpec::new(family, params.0, params.1, params.2)?)?;
    Permutation::all(3)
        .iter()
        .map(|pi| Ok(classify_op(&conjugate(&v, pi)?)?.family))
        .collect()
}

/// Partition of the given families into conjugacy classes at [`GENERIC_PARAMS`].
/// Each returned class is a full orbit, sorted, and classes are ordered by
/// their smallest member.
pub fn conjugacy_classes(families: &[u8]) -> Result<Vec<Vec<u8>>> {
    conjugacy_classes_at(families, GENERIC_PARAMS)
}

pub fn conjugacy_classes_at(families: &[u8], params: (f64, f64, f64)) -> Result<Vec<Vec<u8>>> {
    let mut classes: Vec<BTreeSet<u8>> = Vec::new();
    for &f in families {
        if classes.iter().any(|c| c.contains(&f)) {
            continue;
        }
        let orbit = family_orbit(f, params)?;
        let (mut merged, rest): (Vec<_>, Vec<_>) = classes.into_iter().partition(|c| !c.is_disjoint(&orbit));
        let mut class = orbit;
        for c in merged.drain(..) {
            class.extend(c);
        }
        classes = rest;
        classes.push(class);
    }
    let mut out: Vec<Vec<u8>> = classes.into_iter().map(|c| c.into_iter().collect()).collect();
    out.sort();
    Ok(out)
}
