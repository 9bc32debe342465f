//! Convergence-order estimates, critical-point classification from the
//! Hessian's real part, and clustering of landing points.

use std::fmt;

use thiserror::Error;

use crate::frac::FracOrder;
use crate::methods::{IterationTrace, TraceStatus};
use crate::numerics::{det, norm2, sign_matrix, trace, CMatrix, CVector, NumericsError};
use crate::problem::Problem;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no convergence orders to average")]
    Empty,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// `P = log(s_n) / log(s_{n−1})` from the last two step norms.
///
/// Both norms must lie in `(0, 1)` so that the logarithms are negative.
pub fn order_estimate(step_norms: &[f64]) -> Result<f64, AnalysisError> {
    let [prev, last] = match step_norms {
        [.., a, b] => [*a, *b],
        _ => return Err(AnalysisError::Domain(format!("need two step norms, got {}", step_norms.len()))),
    };
    for s in [prev, last] {
        if !(s > 0.0 && s < 1.0) {
            return Err(AnalysisError::Domain(format!("step norm {s} outside (0, 1)")));
        }
    }
    Ok(last.ln() / prev.ln())
}

/// Mean of the available `p_n` over the records.
pub fn mean_order(records: &[CriticalPointRecord]) -> Result<f64, AnalysisError> {
    let ps: Vec<f64> = records.iter().filter_map(|r| r.p_n).collect();
    if ps.is_empty() {
        return Err(AnalysisError::Empty);
    }
    Ok(ps.iter().sum::<f64>() / ps.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointKind {
    Max,
    Min,
    Saddle,
    Unclassified,
}

impl fmt::Display for PointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointKind::Max => "max",
            PointKind::Min => "min",
            PointKind::Saddle => "saddle",
            PointKind::Unclassified => "unclassified",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    /// `sgn(det(Re H))`.
    pub delta_d: i32,
    /// `tr(sgn(Re H))`.
    pub delta_t: i32,
    pub kind: PointKind,
}

impl Classification {
    pub fn from_deltas(delta_d: i32, delta_t: i32, n: usize) -> Self {
        let n = n as i32;
        let kind = match (delta_d, delta_t) {
            (1, t) if t == n => PointKind::Min,
            (1, t) if t == -n => PointKind::Max,
            (-1, _) => PointKind::Saddle,
            _ => PointKind::Unclassified,
        };
        Self { delta_d, delta_t, kind }
    }
}

/// Classifies a critical point from the real part of its Hessian.
pub fn classify(hess: &CMatrix) -> Result<Classification, AnalysisError> {
    let re = hess.real_part();
    let d = det(&re)?.re;
    let delta_d = if d > 0.0 {
        1
    } else if d < 0.0 {
        -1
    } else {
        0
    };
    let delta_t = trace(&sign_matrix(&re)?)?.re as i32;
    Ok(Classification::from_deltas(delta_d, delta_t, hess.rows()))
}

/// A converged run, reduced to one table row.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPointRecord {
    pub point: CVector,
    pub alpha: FracOrder,
    pub delta_d: i32,
    pub delta_t: i32,
    pub kind: PointKind,
    pub iterations: usize,
    pub p_n: Option<f64>,
    pub step_norm: f64,
    pub grad_norm: f64,
}

impl CriticalPointRecord {
    /// `None` unless the trace converged.
    pub fn from_trace(problem: &dyn Problem, trace: &IterationTrace) -> Result<Option<Self>, AnalysisError> {
        if trace.status != TraceStatus::Converged {
            return Ok(None);
        }
        let point = trace.last_point().clone();
        let cls = classify(&problem.hessian(&point))?;
        Ok(Some(Self {
            alpha: trace.alpha,
            delta_d: cls.delta_d,
            delta_t: cls.delta_t,
            kind: cls.kind,
            iterations: trace.iterations(),
            p_n: trace.p_final,
            step_norm: trace.last_step_norm().unwrap_or(0.0),
            grad_norm: trace.last_grad_norm(),
            point,
        }))
    }
}

/// Splits records into cluster representatives and the rest. A record joins
/// the first kept record within Euclidean distance `tol`; order is stable.
pub fn partition_duplicates(
    records: Vec<CriticalPointRecord>,
    tol: f64,
) -> (Vec<CriticalPointRecord>, Vec<CriticalPointRecord>) {
    let mut kept: Vec<CriticalPointRecord> = Vec::new();
    let mut dropped = Vec::new();
    for r in records {
        if kept.iter().any(|k| norm2(&(&k.point - &r.point)) <= tol) {
            dropped.push(r);
        } else {
            kept.push(r);
        }
    }
    (kept, dropped)
}

pub fn dedup(records: &[CriticalPointRecord], tol: f64) -> Vec<CriticalPointRecord> {
    partition_duplicates(records.to_vec(), tol).0
}
