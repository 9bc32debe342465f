//! Riemann-Liouville derivatives (lower limit 0) of monomials, evaluated in
//! closed form, and the order mask that guards zero coordinates.
//!
//! On `x^μ` the operator reduces to `Γ(μ+1)/Γ(μ−α+1)·x^(μ−α)`. The power is
//! computed for a real variable and continued to complex points through the
//! principal branch.

use std::fmt;

use crate::numerics::{cpow_principal, gamma, Complex, NumericsError};

/// Orders closer than this to an integer are treated as that integer.
pub const INTEGER_ORDER_TOL: f64 = 1e-12;

/// A non-integer real differentiation order.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(value: f64) -> Result<Self, NumericsError> {
        if !value.is_finite() {
            return Err(NumericsError::NonFinite(format!("fractional order {value}")));
        }
        if is_integer_order(value) {
            return Err(NumericsError::Domain(format!("fractional order {value} is an integer")));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for FracOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn is_integer_order(order: f64) -> bool {
    (order - order.round()).abs() < INTEGER_ORDER_TOL
}

/// A term `coeff · x_1^e_1 ··· x_n^e_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialTerm {
    pub coeff: Complex,
    pub exponents: Vec<u32>,
}

impl MonomialTerm {
    pub fn new(coeff: Complex, exponents: Vec<u32>) -> Self {
        Self { coeff, exponents }
    }

    pub fn constant(coeff: Complex, n_vars: usize) -> Self {
        Self { coeff, exponents: vec![0; n_vars] }
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn eval(&self, point: &[Complex]) -> Complex {
        self.coeff * product_of_powers(&self.exponents, point, None)
    }
}

fn product_of_powers(exponents: &[u32], point: &[Complex], skip: Option<usize>) -> Complex {
    let mut acc = Complex::new(1.0, 0.0);
    for (l, (&e, z)) in exponents.iter().zip(point).enumerate() {
        if Some(l) == skip {
            continue;
        }
        for _ in 0..e {
            acc *= z;
        }
    }
    acc
}

/// `D^order` of `x^mu` for real `mu > −1`.
///
/// When `mu − order + 1` is a pole of Γ the coefficient `1/Γ` vanishes and
/// the result is zero.
pub fn rl_deriv_power(mu: f64, order: f64, z: Complex) -> Result<Complex, NumericsError> {
    if !(mu > -1.0) {
        return Err(NumericsError::Domain(format!("power {mu} must exceed -1")));
    }
    let denom = match gamma(mu - order + 1.0) {
        Ok(g) => g,
        Err(NumericsError::Pole(_)) => return Ok(Complex::new(0.0, 0.0)),
        Err(e) => return Err(e),
    };
    let coeff = gamma(mu + 1.0)? / denom;
    Ok(cpow_principal(z, mu - order)? * coeff)
}

/// `D^order` of `z^mu` for an integer power `mu ≥ 0`.
///
/// Non-negative integer orders use the classical rule
/// `mu (mu−1) ··· (mu−n+1) z^(mu−n)` (zero for `n > mu`).
pub fn rl_deriv_monomial(mu: u32, order: f64, z: Complex) -> Result<Complex, NumericsError> {
    if is_integer_order(order) && order.round() >= 0.0 {
        let n = order.round() as u32;
        if n > mu {
            return Ok(Complex::new(0.0, 0.0));
        }
        let falling: f64 = (mu - n + 1..=mu).map(f64::from).product();
        let mut power = Complex::new(1.0, 0.0);
        for _ in 0..mu - n {
            power *= z;
        }
        return Ok(power * falling);
    }
    rl_deriv_power(f64::from(mu), order, z)
}

/// The order actually applied along coordinate `coord`: `α` away from zero,
/// `1` at an exact zero.
pub fn beta_mask(alpha: FracOrder, coord: Complex) -> f64 {
    if coord.norm() != 0.0 {
        alpha.value()
    } else {
        1.0
    }
}

/// Termwise `D^order` with respect to variable `var_index` of a polynomial,
/// every other variable held constant, evaluated at `point`.
pub fn rl_deriv_poly(
    terms: &[MonomialTerm],
    var_index: usize,
    order: f64,
    point: &[Complex],
) -> Result<Complex, NumericsError> {
    if var_index >= point.len() {
        return Err(NumericsError::Shape(format!(
            "variable index {var_index} out of range for dim {}",
            point.len()
        )));
    }
    let mut sum = Complex::new(0.0, 0.0);
    for term in terms {
        if term.exponents.len() != point.len() {
            return Err(NumericsError::Shape(format!(
                "term has {} exponents, point has dim {}",
                term.exponents.len(),
                point.len()
            )));
        }
        let others = product_of_powers(&term.exponents, point, Some(var_index));
        let d = rl_deriv_monomial(term.exponents[var_index], order, point[var_index])?;
        sum += term.coeff * others * d;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn rel(a: Complex, b: Complex) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn frac_order_guard() {
        assert!(FracOrder::new(1.0).is_err());
        assert!(FracOrder::new(-2.0 + 1e-13).is_err());
        assert!(FracOrder::new(f64::NAN).is_err());
        assert_eq!(FracOrder::new(0.5).unwrap().value(), 0.5);
        assert!(FracOrder::new(1.0 + 1e-9).is_ok());
    }

    #[test]
    fn monomial_examples() {
        // Γ(2)/Γ(1.5) = 2/√π
        let v = rl_deriv_monomial(1, 0.5, c(1.0, 0.0)).unwrap();
        assert!(rel(v, c(2.0 / PI.sqrt(), 0.0)) < 1e-13);
        assert!(rel(v, c(std::f64::consts::FRAC_2_SQRT_PI, 0.0)) < 1e-10);
        // 4^{-1/2}/Γ(1/2)
        let v = rl_deriv_monomial(0, 0.5, c(4.0, 0.0)).unwrap();
        assert!(rel(v, c(0.5 / PI.sqrt(), 0.0)) < 1e-13);
        assert!(rel(v, c(0.282_094_791_8, 0.0)) < 1e-9);
        assert_eq!(rl_deriv_monomial(3, 1.0, c(2.0, 0.0)).unwrap(), c(12.0, 0.0));
    }

    #[test]
    fn integer_orders_are_classical() {
        assert_eq!(rl_deriv_monomial(0, 1.0, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(rl_deriv_monomial(1, 1.0, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(rl_deriv_monomial(2, 3.0, c(5.0, 1.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(rl_deriv_monomial(4, 2.0, c(1.0, 1.0)).unwrap(), c(0.0, 24.0));
        assert_eq!(rl_deriv_monomial(3, 0.0, c(2.0, 0.0)).unwrap(), c(8.0, 0.0));
        // drift within tolerance still dispatches to the classical rule
        assert_eq!(rl_deriv_monomial(1, 1.0 + 1e-14, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn negative_integer_order_is_repeated_integration() {
        // I^1 x^2 = x^3 / 3
        let v = rl_deriv_monomial(2, -1.0, c(2.0, 0.0)).unwrap();
        assert!(rel(v, c(8.0 / 3.0, 0.0)) < 1e-14);
    }

    #[test]
    fn zero_base_negative_power_is_domain_error() {
        assert!(matches!(rl_deriv_monomial(0, 0.5, c(0.0, 0.0)), Err(NumericsError::Domain(_))));
        assert_eq!(rl_deriv_monomial(2, 0.5, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn beta_mask_branches() {
        let a = FracOrder::new(0.7).unwrap();
        assert_eq!(beta_mask(a, c(2.3, 0.0)), 0.7);
        assert_eq!(beta_mask(a, c(0.0, 0.0)), 1.0);
        assert_eq!(beta_mask(a, c(0.0, -0.0)), 1.0);
        let a = FracOrder::new(-0.53).unwrap();
        assert_eq!(beta_mask(a, c(-1.0, 0.0)), -0.53);
        assert_eq!(beta_mask(a, c(0.0, 1e-300)), -0.53);
    }

    #[test]
    fn poly_examples() {
        let x0 = [MonomialTerm::new(c(1.0, 0.0), vec![1, 0])];
        let v = rl_deriv_poly(&x0, 0, 0.5, &[c(1.0, 0.0), c(9.0, 0.0)]).unwrap();
        assert!(rel(v, c(std::f64::consts::FRAC_2_SQRT_PI, 0.0)) < 1e-10);

        // 2 x_1^2 is a constant in x_0: 18 · 4^{-1/2} / Γ(1/2)
        let x1sq = [MonomialTerm::new(c(2.0, 0.0), vec![0, 2])];
        let v = rl_deriv_poly(&x1sq, 0, 0.5, &[c(4.0, 0.0), c(3.0, 0.0)]).unwrap();
        assert!(rel(v, c(9.0 / PI.sqrt(), 0.0)) < 1e-13);
        assert!(rel(v, c(5.077_706_252_3, 0.0)) < 1e-10);
    }

    #[test]
    fn poly_integer_order_is_partial_derivative() {
        // p = 3 x0^2 x1 - x1^3 + 2 ; ∂p/∂x0 = 6 x0 x1 ; ∂p/∂x1 = 3 x0^2 - 3 x1^2
        let p = [
            MonomialTerm::new(c(3.0, 0.0), vec![2, 1]),
            MonomialTerm::new(c(-1.0, 0.0), vec![0, 3]),
            MonomialTerm::new(c(2.0, 0.0), vec![0, 0]),
        ];
        let pt = [c(1.5, 0.5), c(-2.0, 1.0)];
        let d0 = rl_deriv_poly(&p, 0, 1.0, &pt).unwrap();
        let d1 = rl_deriv_poly(&p, 1, 1.0, &pt).unwrap();
        assert!((d0 - pt[0] * pt[1] * 6.0).norm() < 1e-12);
        assert!((d1 - (pt[0] * pt[0] * 3.0 - pt[1] * pt[1] * 3.0)).norm() < 1e-12);
    }

    #[test]
    fn poly_shape_errors() {
        let t = [MonomialTerm::new(c(1.0, 0.0), vec![1])];
        assert!(rl_deriv_poly(&t, 1, 0.5, &[c(1.0, 0.0)]).is_err());
        assert!(rl_deriv_poly(&t, 0, 0.5, &[c(1.0, 0.0), c(1.0, 0.0)]).is_err());
    }
}
