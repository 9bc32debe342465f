//! α sweeps from a fixed starting point: configuration, the parallel runner,
//! CSV and trajectory output, and the shipped reproduction configs.

mod config;
mod demo;
mod output;

pub use config::{parse_config, parse_config_str, AlphaSpec, ConfigError, PolyRole, ProblemSpec, SortOrder, SweepConfig};
pub use demo::Demo;
pub use output::{emit_csv, emit_trajectories, read_csv, write_csv, write_trajectories, CsvRow};

use std::fs;
use std::path::PathBuf;

use log::{debug, info};
use rayon::prelude::*;
use thiserror::Error;

use crate::analysis::{classify, mean_order, partition_duplicates, AnalysisError, Classification, CriticalPointRecord};
use crate::frac::FracOrder;
use crate::methods::{iterate, IterationTrace, MethodError, MethodKind, TraceStatus};
use crate::numerics::{norm2, CVector};
use crate::problem::{parse_polynomial_system, BuiltinProblem, PolyError, PolynomialProblem, Problem};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Problem { path: PathBuf, source: PolyError },
    #[error("reading {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("writing {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Method(#[from] MethodError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("csv line {line}: {reason}")]
    Csv { line: usize, reason: String },
}

impl SweepError {
    /// Errors caused by the configuration or the input files it names.
    pub fn is_config(&self) -> bool {
        matches!(self, SweepError::Config(_) | SweepError::Problem { .. } | SweepError::Io { .. })
    }
}

/// Builds the problem a config refers to, reading polynomial files.
pub fn load_problem(spec: &ProblemSpec) -> Result<Box<dyn Problem>, SweepError> {
    match spec {
        ProblemSpec::Builtin => Ok(Box::new(BuiltinProblem)),
        ProblemSpec::Polynomial { path, role } => {
            let text = fs::read_to_string(path).map_err(|source| SweepError::Io { path: path.clone(), source })?;
            let wrap = |source| SweepError::Problem { path: path.clone(), source };
            let sys = parse_polynomial_system(&text).map_err(wrap)?;
            let problem = match role {
                PolyRole::Objective => PolynomialProblem::from_objective(&sys),
                PolyRole::Gradient => PolynomialProblem::from_gradient_field(sys),
            }
            .map_err(wrap)?;
            Ok(Box::new(problem))
        }
    }
}

fn checked_problem(cfg: &SweepConfig) -> Result<Box<dyn Problem>, SweepError> {
    let problem = load_problem(&cfg.problem)?;
    if cfg.x0.dim() != problem.dim() {
        return Err(ConfigError::new("x0", format!("has dim {}, problem has dim {}", cfg.x0.dim(), problem.dim())).into());
    }
    if cfg.method.kind == MethodKind::FracNewtonRaphson && problem.poly_form().is_none() {
        return Err(ConfigError::new("method.kind", "FracNewtonRaphson needs a polynomial problem").into());
    }
    Ok(problem)
}

/// One trace per α, in the configured order.
pub fn run_traces(cfg: &SweepConfig) -> Result<Vec<IterationTrace>, SweepError> {
    let problem = checked_problem(cfg)?;
    traces_for(cfg, problem.as_ref())
}

fn traces_for(cfg: &SweepConfig, problem: &dyn Problem) -> Result<Vec<IterationTrace>, SweepError> {
    let orders = cfg
        .alphas()?
        .into_iter()
        .map(|a| FracOrder::new(a).map_err(|e| ConfigError::new("alpha", e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let traces = orders
        .par_iter()
        .map(|&alpha| {
            let t = iterate(problem, &cfg.method, alpha, &cfg.x0)?;
            debug!("alpha {alpha}: {} after {} steps, |grad| {:.3e}", t.status, t.iterations(), t.last_grad_norm());
            Ok(t)
        })
        .collect::<Result<Vec<_>, MethodError>>()?;
    Ok(traces)
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    /// Converged runs, one per α unless removed as duplicates.
    pub records: Vec<CriticalPointRecord>,
    pub failures: Vec<(FracOrder, TraceStatus)>,
    /// Converged runs dropped by deduplication.
    pub duplicates: Vec<CriticalPointRecord>,
    pub mean_p: Option<f64>,
    pub config_echo: SweepConfig,
}

impl SweepReport {
    pub fn alpha_count(&self) -> usize {
        self.records.len() + self.failures.len() + self.duplicates.len()
    }

    pub fn dim(&self) -> usize {
        self.config_echo.x0.dim()
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport, SweepError> {
    let problem = checked_problem(cfg)?;
    let traces = traces_for(cfg, problem.as_ref())?;
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for t in &traces {
        match CriticalPointRecord::from_trace(problem.as_ref(), t)? {
            Some(r) => records.push(r),
            None => failures.push((t.alpha, t.status)),
        }
    }
    let (records, duplicates) = if cfg.dedup {
        partition_duplicates(records, cfg.dedup_tol)
    } else {
        (records, Vec::new())
    };
    let mean_p = mean_order(&records).ok();
    info!(
        "{} of {} orders converged ({} duplicates), mean order {}",
        records.len() + duplicates.len(),
        traces.len(),
        duplicates.len(),
        mean_p.map_or("n/a".to_string(), |p| format!("{p:.4}"))
    );
    Ok(SweepReport { records, failures, duplicates, mean_p, config_echo: cfg.clone() })
}

/// Classification and gradient norm of an arbitrary point of the config's
/// problem.
pub fn classify_point(cfg: &SweepConfig, point: &CVector) -> Result<(Classification, f64), SweepError> {
    let problem = load_problem(&cfg.problem)?;
    if point.dim() != problem.dim() {
        return Err(ConfigError::new("point", format!("has dim {}, problem has dim {}", point.dim(), problem.dim())).into());
    }
    let cls = classify(&problem.hessian(point))?;
    Ok((cls, norm2(&problem.gradient(point))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::methods::MethodConfig;
    use std::path::Path;

    fn quick(alphas: Vec<f64>) -> SweepConfig {
        let mut cfg = SweepConfig::new(
            ProblemSpec::Builtin,
            MethodConfig::new(MethodKind::PseudoNewton).with_hybrid_delta(13.0),
            CVector::from_real(&[14.55, 14.55]).unwrap(),
            AlphaSpec::List(alphas),
        );
        cfg.integer_exclusion = 1e-5;
        cfg
    }

    #[test]
    fn records_failures_and_duplicates_partition_the_orders() {
        let mut cfg = quick(vec![2.028082, 1.005549, 0.25, 1.005025, 3.982916]);
        cfg.dedup = true;
        let report = run_sweep(&cfg).unwrap();
        assert_eq!(report.alpha_count(), 5);
        let mut seen: Vec<f64> = report
            .records
            .iter()
            .chain(&report.duplicates)
            .map(|r| r.alpha.value())
            .chain(report.failures.iter().map(|(a, _)| a.value()))
            .collect();
        seen.sort_by(f64::total_cmp);
        assert_eq!(seen, cfg.alphas().unwrap());
        for r in &report.records {
            assert!(r.grad_norm <= cfg.method.tol_grad);
        }
        assert_eq!(report.mean_p, mean_order(&report.records).ok());
    }

    #[test]
    fn dimension_and_method_mismatches_are_config_errors() {
        let mut cfg = quick(vec![0.5]);
        cfg.x0 = CVector::from_real(&[1.0]).unwrap();
        assert!(matches!(run_sweep(&cfg), Err(SweepError::Config(ConfigError { ref key, .. })) if key == "x0"));
        let mut cfg = quick(vec![0.5]);
        cfg.method.kind = MethodKind::FracNewtonRaphson;
        assert!(matches!(run_sweep(&cfg), Err(SweepError::Config(ConfigError { ref key, .. })) if key == "method.kind"));
    }

    #[test]
    fn missing_polynomial_file() {
        let cfg = parse_config_str(
            r#"{"problem": {"polynomial": "nope.poly"}, "method.kind": "QuasiNewton", "x0": [1], "alpha.list": [0.5]}"#,
            Path::new("/nonexistent"),
        )
        .unwrap();
        let err = run_sweep(&cfg).unwrap_err();
        assert!(matches!(err, SweepError::Io { .. }));
        assert!(err.is_config());
    }
}
