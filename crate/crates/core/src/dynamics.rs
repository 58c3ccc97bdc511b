//! Trajectories `x, V(x), V(V(x)), ...` with convergence and cycle detection.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;

use crate::error::{QsoError, Result};
use crate::simplex::SimplexPoint;
use crate::tensor::QsoTensor;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Number of most recent points searched for a revisit.
pub const CYCLE_WINDOW: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryStatus {
    Converged,
    Cycle(usize),
    BudgetExhausted,
}

impl fmt::Display for TrajectoryStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrajectoryStatus::Converged => write!(f, "converged"),
            TrajectoryStatus::Cycle(len) => write!(f, "cycle:{len}"),
            TrajectoryStatus::BudgetExhausted => write!(f, "budget_exhausted"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `points[0]` is the initial state; `points[t + 1] = V(points[t])`.
    pub points: Vec<SimplexPoint>,
    pub status: TrajectoryStatus,
    /// Number of applications of the operator.
    pub iterations: usize,
}

impl Trajectory {
    pub fn last(&self) -> &SimplexPoint {
        self.points.last().expect("a trajectory holds its initial point")
    }

    /// Writes `iter,x1,...,xm,status`, one row per point. The status column
    /// carries the final status on every row.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let m = self.points[0].dim();
        let header: Vec<String> = std::iter::once("iter".to_string())
            .chain((1..=m).map(|k| format!("x{k}")))
            .chain(std::iter::once("status".to_string()))
            .collect();
        writeln!(out, "{}", header.join(","))?;
        for (t, p) in self.points.iter().enumerate() {
            write!(out, "{t}")?;
            for c in p.coords() {
                write!(out, ",{}", crate::json::format_float(*c))?;
            }
            writeln!(out, ",{}", self.status)?;
        }
        Ok(())
    }
}

/// Iterates until successive points agree within `tol` (sup norm), a point
/// revisits one of the last [`CYCLE_WINDOW`] points within `tol`, or
/// `max_iter` applications have been made.
pub fn iterate(v: &QsoTensor, x0: &SimplexPoint, max_iter: usize, tol: f64) -> Result<Trajectory> {
    if max_iter == 0 {
        return Err(QsoError::InvalidArgument("max_iter must be at least 1".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(QsoError::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    let mut points = vec![x0.clone()];
    let mut current = v.apply(x0)?;
    for t in 1..=max_iter {
        let previous = points.last().expect("nonempty");
        if current.distance_inf(previous) <= tol {
            points.push(current);
            return Ok(Trajectory {
                points,
                status: TrajectoryStatus::Converged,
                iterations: t,
            });
        }
        let len = points.len();
        let start = len.saturating_sub(CYCLE_WINDOW);
        // Most recent first, so the reported length is the smallest revisit distance.
        let hit = (start..len - 1)
            .rev()
            .find(|&s| current.distance_inf(&points[s]) <= tol);
        points.push(current);
        if let Some(s) = hit {
            return Ok(Trajectory {
                points,
                status: TrajectoryStatus::Cycle(len - s),
                iterations: t,
            });
        }
        if t == max_iter {
            break;
        }
        current = v.apply(points.last().expect("just pushed"))?;
    }
    Ok(Trajectory {
        points,
        status: TrajectoryStatus::BudgetExhausted,
        iterations: max_iter,
    })
}

/// Vertices `e_k` with `V(e_k) = e_k` within `tol` (0-based).
pub fn fixed_points_on_vertices(v: &QsoTensor, tol: f64) -> BTreeSet<usize> {
    let m = v.dim();
    (0..m)
        .filter(|&k| {
            let e = SimplexPoint::vertex(m, k);
            v.apply(&e).map(|img| img.distance_inf(&e) <= tol).unwrap_or(false)
        })
        .collect()
}
