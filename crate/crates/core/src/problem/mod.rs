//! Optimisation targets: a scalar `f` together with its gradient and Hessian,
//! evaluated at complex points.
//!
//! The root-finding target of every method is the gradient.

mod poly;

pub use poly::{parse_polynomial_system, symbolic_partial, ParseError, PolynomialProblem, PolynomialSystem, PolyError};

use crate::numerics::{CMatrix, CVector, Complex};

pub trait Problem: Send + Sync {
    fn dim(&self) -> usize;

    /// `f(x)`, or `None` when only the gradient field is known.
    fn value(&self, x: &[Complex]) -> Option<Complex>;

    fn gradient(&self, x: &[Complex]) -> CVector;

    fn hessian(&self, x: &[Complex]) -> CMatrix;

    /// Gradient components as polynomials, when the problem has them.
    fn poly_form(&self) -> Option<&PolynomialSystem> {
        None
    }
}

/// The two-variable test function
///
/// `f(x, y) = (2 − x² + x³y) cos x − (2 − y²) cos y − x (5 − y³ cos y − 2 sin x) − y (7 + 2 sin y)`
///
/// with its gradient and Hessian written out in closed form. `sin`/`cos`
/// are the entire functions, so evaluation at complex points is exact.
#[derive(Debug, Clone, Copy, Default)]
pub struct BuiltinProblem;

impl Problem for BuiltinProblem {
    fn dim(&self) -> usize {
        2
    }

    fn value(&self, p: &[Complex]) -> Option<Complex> {
        let (x, y) = (p[0], p[1]);
        let (cx, sx, cy, sy) = (x.cos(), x.sin(), y.cos(), y.sin());
        let two = Complex::new(2.0, 0.0);
        Some(
            (two - x * x + x * x * x * y) * cx
                - (two - y * y) * cy
                - x * (Complex::new(5.0, 0.0) - y * y * y * cy - sx * 2.0)
                - y * (Complex::new(7.0, 0.0) + sy * 2.0),
        )
    }

    fn gradient(&self, p: &[Complex]) -> CVector {
        let (x, y) = (p[0], p[1]);
        let (cx, sx, cy, sy) = (x.cos(), x.sin(), y.cos(), y.sin());
        let one = Complex::new(1.0, 0.0);
        let gx = x * x * y * cx * 3.0 + y * y * y * cy + x * x * (one - x * y) * sx - 5.0;
        let gy = x * x * x * cx + x * y * y * cy * 3.0 - y * y * (one + x * y) * sy - 7.0;
        CVector::new(vec![gx, gy]).expect("dim 2")
    }

    fn hessian(&self, p: &[Complex]) -> CMatrix {
        let (x, y) = (p[0], p[1]);
        let (cx, sx, cy, sy) = (x.cos(), x.sin(), y.cos(), y.sin());
        let one = Complex::new(1.0, 0.0);
        let hxx = x * ((x + y * 6.0 - x * x * y) * cx + (one - x * y * 3.0) * sx * 2.0);
        let hxy = x * x * (cx * 3.0 - x * sx) + y * y * (cy * 3.0 - y * sy);
        let hyy = -y * ((y - x * (Complex::new(6.0, 0.0) - y * y)) * cy + (one + x * y * 3.0) * sy * 2.0);
        CMatrix::new(2, 2, vec![hxx, hxy, hxy, hyy]).expect("2x2")
    }
}
