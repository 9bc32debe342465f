//! Iteration matrices, the hybrid Newton switch, `rnd_m`, and the fixed-point
//! loop `x_{i+1} = rnd_m(x_i − M(α, x_i)·∇f(x_i))`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::analysis::order_estimate;
use crate::frac::{beta_mask, rl_deriv_monomial, rl_deriv_poly, FracOrder};
use crate::numerics::{norm2, CMatrix, CVector, Complex, Lu, NumericsError};
use crate::problem::{PolynomialSystem, Problem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodKind {
    QuasiNewton,
    PseudoNewton,
    FracNewtonRaphson,
    ClassicalNewton,
}

impl MethodKind {
    pub fn name(self) -> &'static str {
        match self {
            MethodKind::QuasiNewton => "QuasiNewton",
            MethodKind::PseudoNewton => "PseudoNewton",
            MethodKind::FracNewtonRaphson => "FracNewtonRaphson",
            MethodKind::ClassicalNewton => "ClassicalNewton",
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodKind {
    type Err = MethodError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "QuasiNewton" => Ok(MethodKind::QuasiNewton),
            "PseudoNewton" => Ok(MethodKind::PseudoNewton),
            "FracNewtonRaphson" => Ok(MethodKind::FracNewtonRaphson),
            "ClassicalNewton" => Ok(MethodKind::ClassicalNewton),
            other => Err(MethodError::Config(format!(
                "unknown method kind {other:?} (expected QuasiNewton, PseudoNewton, FracNewtonRaphson or ClassicalNewton)"
            ))),
        }
    }
}

#[derive(Debug, Error)]
pub enum MethodError {
    #[error("invalid method config: {0}")]
    Config(String),
    #[error("starting point has dim {found}, problem has dim {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("FracNewtonRaphson needs a polynomial gradient field")]
    NotPolynomial,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodConfig {
    pub kind: MethodKind,
    /// Pseudo-Newton damping added to the diagonal.
    pub epsilon: f64,
    /// Switch to the Newton action once `‖∇f‖ ≤ δ`.
    pub hybrid_delta: Option<f64>,
    /// `None` disables rounding of the iterates.
    pub rnd_digits: Option<u32>,
    pub max_iter: usize,
    /// A step this short without convergence ends the run. The default 0
    /// only stops on an exact repeat, which the map would reproduce forever.
    pub tol_step: f64,
    pub tol_grad: f64,
}

impl MethodConfig {
    pub fn new(kind: MethodKind) -> Self {
        Self {
            kind,
            epsilon: 1e-4,
            hybrid_delta: None,
            rnd_digits: Some(5),
            max_iter: 200,
            tol_step: 0.0,
            tol_grad: 1e-4,
        }
    }

    pub fn with_hybrid_delta(mut self, delta: f64) -> Self {
        self.hybrid_delta = Some(delta);
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn validate(&self) -> Result<(), MethodError> {
        let bad = |what: String| Err(MethodError::Config(what));
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be a finite value >= 0, got {}", self.epsilon));
        }
        if let Some(d) = self.hybrid_delta {
            if !(d > 0.0 && d.is_finite()) {
                return bad(format!("hybrid_delta must be > 0, got {d}"));
            }
        }
        if self.max_iter == 0 {
            return bad("max_iter must be at least 1".into());
        }
        if !(self.tol_step >= 0.0) {
            return bad(format!("tol_step must be >= 0, got {}", self.tol_step));
        }
        if !(self.tol_grad > 0.0) {
            return bad(format!("tol_grad must be > 0, got {}", self.tol_grad));
        }
        Ok(())
    }
}

/// Fractional quasi-Newton matrix before inversion.
///
/// Row `j` is the order-`β` partial of the affine component
/// `[∇f(x)]_j + Σ_l [Hf(x)]_{jl} y_l` with respect to `y_k`, evaluated at
/// `y = x`. The part constant in `y_k` goes through the `μ = 0` rule and the
/// linear part through `μ = 1`; at `β = 1` this collapses to `[Hf(x)]_{jk}`.
pub fn quasi_newton_matrix(problem: &dyn Problem, alpha: FracOrder, x: &[Complex]) -> Result<CMatrix, NumericsError> {
    let g = problem.gradient(x);
    let h = problem.hessian(x);
    quasi_newton_from_parts(&g, &h, alpha, x)
}

fn quasi_newton_from_parts(g: &[Complex], h: &CMatrix, alpha: FracOrder, x: &[Complex]) -> Result<CMatrix, NumericsError> {
    let n = x.len();
    let mut m = CMatrix::zeros(n, n);
    for k in 0..n {
        let beta = beta_mask(alpha, x[k]);
        let d_const = rl_deriv_monomial(0, beta, x[k])?;
        let d_lin = rl_deriv_monomial(1, beta, x[k])?;
        for j in 0..n {
            let cross: Complex = (0..n).filter(|&l| l != k).map(|l| h[(j, l)] * x[l]).sum();
            m[(j, k)] = (g[j] + cross) * d_const + h[(j, k)] * d_lin;
        }
    }
    Ok(m)
}

/// Fractional pseudo-Newton matrix: `diag(D^β 1 + ε)`, used without
/// inversion. A zero coordinate gets `β = 1` and therefore just `ε`.
pub fn pseudo_newton_matrix(dim: usize, alpha: FracOrder, epsilon: f64, x: &[Complex]) -> Result<CMatrix, NumericsError> {
    if x.len() != dim {
        return Err(NumericsError::Shape(format!("point of dim {} for dim {dim}", x.len())));
    }
    let diag = x
        .iter()
        .map(|&xk| Ok(rl_deriv_monomial(0, beta_mask(alpha, xk), xk)? + epsilon))
        .collect::<Result<Vec<_>, NumericsError>>()?;
    Ok(CMatrix::from_diag(&diag))
}

/// Fractional Newton-Raphson matrix before inversion: entry `(j, k)` is the
/// order-`β` partial of component `j` with respect to variable `k`.
pub fn frac_newton_raphson_matrix(
    sys: &PolynomialSystem,
    alpha: FracOrder,
    x: &[Complex],
) -> Result<CMatrix, NumericsError> {
    if !sys.is_square() {
        return Err(NumericsError::Shape(format!(
            "{} components in {} variables",
            sys.components().len(),
            sys.n_vars()
        )));
    }
    let n = sys.n_vars();
    if x.len() != n {
        return Err(NumericsError::Shape(format!("point of dim {} for {n} variables", x.len())));
    }
    let mut m = CMatrix::zeros(n, n);
    for k in 0..n {
        let beta = beta_mask(alpha, x[k]);
        for (j, comp) in sys.components().iter().enumerate() {
            m[(j, k)] = rl_deriv_poly(comp, k, beta, x)?;
        }
    }
    Ok(m)
}

/// How a matrix acts on the gradient.
#[derive(Debug, Clone)]
pub enum MatrixAction {
    /// `y = A⁻¹ g` through a stored factorisation.
    Solve(Lu),
    /// `y = A g`.
    Direct(CMatrix),
}

impl MatrixAction {
    pub fn apply(&self, g: &[Complex]) -> Result<CVector, NumericsError> {
        match self {
            MatrixAction::Solve(lu) => lu.solve(g),
            MatrixAction::Direct(m) => m.mul_vec(g),
        }
    }
}

/// The action of `Hf(x)⁻¹`.
pub fn newton_action(problem: &dyn Problem, x: &[Complex]) -> Result<MatrixAction, NumericsError> {
    Ok(MatrixAction::Solve(Lu::decompose(&problem.hessian(x))?))
}

/// The configured method's own action, ignoring any hybrid threshold.
pub fn base_action(
    cfg: &MethodConfig,
    problem: &dyn Problem,
    alpha: FracOrder,
    x: &[Complex],
) -> Result<MatrixAction, NumericsError> {
    match cfg.kind {
        MethodKind::QuasiNewton => Ok(MatrixAction::Solve(Lu::decompose(&quasi_newton_matrix(problem, alpha, x)?)?)),
        MethodKind::PseudoNewton => {
            Ok(MatrixAction::Direct(pseudo_newton_matrix(problem.dim(), alpha, cfg.epsilon, x)?))
        }
        MethodKind::FracNewtonRaphson => {
            let sys = problem
                .poly_form()
                .ok_or_else(|| NumericsError::Domain("problem has no polynomial form".into()))?;
            Ok(MatrixAction::Solve(Lu::decompose(&frac_newton_raphson_matrix(sys, alpha, x)?)?))
        }
        MethodKind::ClassicalNewton => newton_action(problem, x),
    }
}

/// The action used at `x`: the Newton action when a hybrid threshold is set
/// and `‖∇f(x)‖ ≤ δ`, the base method's otherwise.
pub fn hybrid_select(
    cfg: &MethodConfig,
    problem: &dyn Problem,
    alpha: FracOrder,
    x: &[Complex],
) -> Result<MatrixAction, NumericsError> {
    let grad_norm = norm2(&problem.gradient(x));
    select_with_norm(cfg, problem, alpha, x, grad_norm)
}

fn select_with_norm(
    cfg: &MethodConfig,
    problem: &dyn Problem,
    alpha: FracOrder,
    x: &[Complex],
    grad_norm: f64,
) -> Result<MatrixAction, NumericsError> {
    match cfg.hybrid_delta {
        Some(delta) if grad_norm <= delta => newton_action(problem, x),
        _ => base_action(cfg, problem, alpha, x),
    }
}

/// Drops an imaginary part no larger than `10^−m`.
pub fn rnd_m(z: Complex, m: u32) -> Complex {
    if z.im.abs() <= 10f64.powi(-(m as i32)) {
        Complex::new(z.re, 0.0)
    } else {
        z
    }
}

pub fn rnd_m_vec(v: &CVector, m: u32) -> CVector {
    CVector::new(v.iter().map(|&z| rnd_m(z, m)).collect()).expect("non-empty")
}

/// One unrounded application of `Φ(α, x) = x − M(α, x)·∇f(x)`.
///
/// A gradient that is exactly zero returns `x` untouched, without building
/// the matrix.
pub fn phi(cfg: &MethodConfig, problem: &dyn Problem, alpha: FracOrder, x: &CVector) -> Result<CVector, NumericsError> {
    let g = problem.gradient(x);
    phi_with_gradient(cfg, problem, alpha, x, &g)
}

fn phi_with_gradient(
    cfg: &MethodConfig,
    problem: &dyn Problem,
    alpha: FracOrder,
    x: &CVector,
    g: &CVector,
) -> Result<CVector, NumericsError> {
    if g.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
        return Ok(x.clone());
    }
    let action = select_with_norm(cfg, problem, alpha, x, norm2(g))?;
    let d = action.apply(g)?;
    Ok(x - &d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceStatus {
    Converged,
    MaxIter,
    Singular,
    Domain,
    Diverged,
}

impl TraceStatus {
    pub fn name(self) -> &'static str {
        match self {
            TraceStatus::Converged => "converged",
            TraceStatus::MaxIter => "max_iter",
            TraceStatus::Singular => "singular",
            TraceStatus::Domain => "domain",
            TraceStatus::Diverged => "diverged",
        }
    }
}

impl fmt::Display for TraceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn failure_status(e: &NumericsError) -> TraceStatus {
    match e {
        NumericsError::SingularMatrix { .. } => TraceStatus::Singular,
        NumericsError::NonFinite(_) => TraceStatus::Diverged,
        _ => TraceStatus::Domain,
    }
}

/// A full run: `iterates[i]` and `grad_norms[i]` describe `x_i`,
/// `step_norms[i]` is `‖x_{i+1} − x_i‖`.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub alpha: FracOrder,
    pub iterates: Vec<CVector>,
    pub step_norms: Vec<f64>,
    pub grad_norms: Vec<f64>,
    pub status: TraceStatus,
    pub p_final: Option<f64>,
}

impl IterationTrace {
    pub fn last_point(&self) -> &CVector {
        self.iterates.last().expect("trace holds x0")
    }

    pub fn last_grad_norm(&self) -> f64 {
        *self.grad_norms.last().expect("trace holds x0")
    }

    pub fn last_step_norm(&self) -> Option<f64> {
        self.step_norms.last().copied()
    }

    pub fn iterations(&self) -> usize {
        self.step_norms.len()
    }
}

/// Runs the fixed-point loop from `x0`.
///
/// After each step the gradient is re-evaluated; `‖∇f‖ ≤ tol_grad` ends the
/// run as converged. A step no longer than `tol_step` without that ends it as
/// stalled (`MaxIter`), as does running out of iterations. Slow linear tails
/// take steps far below 1e-8 long before the gradient test passes, so the
/// stall test is off by default. At least one step
/// is always taken. Matrix failures and non-finite iterates end the run with
/// the matching status; only configuration errors are returned as `Err`.
pub fn iterate(
    problem: &dyn Problem,
    cfg: &MethodConfig,
    alpha: FracOrder,
    x0: &CVector,
) -> Result<IterationTrace, MethodError> {
    cfg.validate()?;
    if x0.dim() != problem.dim() {
        return Err(MethodError::Dimension { expected: problem.dim(), found: x0.dim() });
    }
    if cfg.kind == MethodKind::FracNewtonRaphson && problem.poly_form().is_none() {
        return Err(MethodError::NotPolynomial);
    }

    let mut x = x0.clone();
    let mut g = problem.gradient(&x);
    let mut trace = IterationTrace {
        alpha,
        iterates: vec![x.clone()],
        step_norms: Vec::new(),
        grad_norms: vec![norm2(&g)],
        status: TraceStatus::MaxIter,
        p_final: None,
    };
    if !x.is_finite() || !g.is_finite() {
        trace.status = TraceStatus::Diverged;
        return Ok(trace);
    }

    for _ in 0..cfg.max_iter {
        let next = match phi_with_gradient(cfg, problem, alpha, &x, &g) {
            Ok(v) => v,
            Err(e) => {
                trace.status = failure_status(&e);
                break;
            }
        };
        let next = match cfg.rnd_digits {
            Some(m) => rnd_m_vec(&next, m),
            None => next,
        };
        if !next.is_finite() {
            trace.status = TraceStatus::Diverged;
            break;
        }
        let step = norm2(&(&next - &x));
        x = next;
        g = problem.gradient(&x);
        let grad_norm = norm2(&g);
        trace.iterates.push(x.clone());
        trace.step_norms.push(step);
        trace.grad_norms.push(grad_norm);
        if !grad_norm.is_finite() {
            trace.status = TraceStatus::Diverged;
            break;
        }
        if grad_norm <= cfg.tol_grad {
            trace.status = TraceStatus::Converged;
            break;
        }
        if step <= cfg.tol_step {
            break;
        }
    }
    trace.p_final = order_estimate(&trace.step_norms).ok();
    Ok(trace)
}
