//! Fractional fixed-point iterative methods for locating and classifying the
//! critical points of scalar functions.
//!
//! The iteration is `x_{i+1} = x_i − M(α, x_i)·∇f(x_i)`, where the matrix
//! action `M` is built from Riemann-Liouville derivatives of order `α`:
//!
//! - [`methods::MethodKind::QuasiNewton`] applies fractional partials to the
//!   local linearisation `∇f(x_i) + Hf(x_i)·x` and solves with the result;
//! - [`methods::MethodKind::PseudoNewton`] uses a damped diagonal of
//!   fractional derivatives of constants and applies it directly;
//! - [`methods::MethodKind::FracNewtonRaphson`] differentiates a polynomial
//!   gradient field termwise;
//! - [`methods::MethodKind::ClassicalNewton`] is the `Hf⁻¹` baseline.
//!
//! Any of them can be run in hybrid mode, switching to the Newton action once
//! `‖∇f‖` drops below a threshold. [`analysis`] estimates the order of
//! convergence and classifies landing points, and [`sweep`] drives whole
//! α sweeps from a fixed starting point.
//!
//! ```
//! use fracfp::prelude::*;
//!
//! let problem = BuiltinProblem;
//! let cfg = MethodConfig::new(MethodKind::PseudoNewton).with_hybrid_delta(13.0);
//! let x0 = CVector::from_real(&[14.55, 14.55]).unwrap();
//! let trace = iterate(&problem, &cfg, FracOrder::new(1.005549).unwrap(), &x0).unwrap();
//! assert_eq!(trace.status, TraceStatus::Converged);
//! ```

pub mod analysis;
pub mod frac;
pub mod methods;
pub mod numerics;
pub mod problem;
pub mod sweep;

pub mod prelude {
    pub use crate::analysis::{classify, dedup, mean_order, order_estimate, Classification, CriticalPointRecord, PointKind};
    pub use crate::frac::{beta_mask, rl_deriv_monomial, rl_deriv_poly, FracOrder};
    pub use crate::methods::{iterate, rnd_m, IterationTrace, MethodConfig, MethodKind, TraceStatus};
    pub use crate::numerics::{gamma, CMatrix, CVector, Complex};
    pub use crate::problem::{parse_polynomial_system, BuiltinProblem, PolynomialProblem, PolynomialSystem, Problem};
    pub use crate::sweep::{run_sweep, AlphaSpec, SweepConfig, SweepReport};
}
