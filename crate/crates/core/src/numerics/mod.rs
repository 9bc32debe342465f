//! Complex scalars, dense complex vectors and matrices, and the special
//! functions the fractional operators are built on.
//!
//! Everything here is a pure function of its inputs.

mod gamma;
mod linalg;

pub use gamma::gamma;
pub use linalg::{det, lu_solve, sign_matrix, trace, CMatrix, CVector, Lu};

pub use num_complex::Complex64 as Complex;

use thiserror::Error;

/// Pivot modulus below which a matrix is declared singular.
pub const PIVOT_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("gamma has a pole at {0}")]
    Pole(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("matrix is singular (pivot modulus {pivot:e} at column {column})")]
    SingularMatrix { column: usize, pivot: f64 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
}

/// Builds a complex number, rejecting NaN and infinite parts.
pub fn checked_complex(re: f64, im: f64) -> Result<Complex, NumericsError> {
    if re.is_finite() && im.is_finite() {
        Ok(Complex::new(re, im))
    } else {
        Err(NumericsError::NonFinite(format!("({re}, {im})")))
    }
}

/// Principal-branch power `exp(w · Log z)` with `Im(Log z) ∈ (−π, π]`.
///
/// `0^w` is `0` for `w > 0` and a domain error otherwise.
pub fn cpow_principal(z: Complex, w: f64) -> Result<Complex, NumericsError> {
    if z.re == 0.0 && z.im == 0.0 {
        return if w > 0.0 {
            Ok(Complex::new(0.0, 0.0))
        } else {
            Err(NumericsError::Domain(format!("0 raised to non-positive power {w}")))
        };
    }
    if w == 0.0 {
        return Ok(Complex::new(1.0, 0.0));
    }
    if w == 1.0 {
        return Ok(z);
    }
    // `arg` is atan2, which already lands in (−π, π]; a negative zero
    // imaginary part would flip it to −π, so normalise the sign first.
    let z = if z.im == 0.0 { Complex::new(z.re, 0.0) } else { z };
    let log = Complex::new(z.norm().ln(), z.arg());
    Ok((log * w).exp())
}

/// Euclidean norm over moduli.
pub fn norm2(v: &[Complex]) -> f64 {
    // hypot-style scaling keeps huge diverging iterates from overflowing early
    let scale = v.iter().map(|z| z.re.abs().max(z.im.abs())).fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return if scale.is_nan() { f64::NAN } else { scale };
    }
    let sum: f64 = v.iter().map(|z| (z / scale).norm_sqr()).sum();
    scale * sum.sqrt()
}

/// Infinity norm over moduli.
pub fn norm_inf(v: &[Complex]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex, b: Complex, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn cpow_examples() {
        let r = cpow_principal(Complex::new(4.0, 0.0), 0.5).unwrap();
        assert!(close(r, Complex::new(2.0, 0.0), 1e-15));
        let r = cpow_principal(Complex::new(-1.0, 0.0), 0.5).unwrap();
        assert!(close(r, Complex::new(0.0, 1.0), 1e-15));
        let r = cpow_principal(Complex::new(0.0, 0.0), 2.5).unwrap();
        assert_eq!(r, Complex::new(0.0, 0.0));
    }

    #[test]
    fn cpow_negative_zero_imag_uses_upper_branch() {
        let r = cpow_principal(Complex::new(-1.0, -0.0), 0.5).unwrap();
        assert!(close(r, Complex::new(0.0, 1.0), 1e-15));
    }

    #[test]
    fn cpow_zero_base_rejects_non_positive_power() {
        assert!(matches!(
            cpow_principal(Complex::new(0.0, 0.0), 0.0),
            Err(NumericsError::Domain(_))
        ));
        assert!(matches!(
            cpow_principal(Complex::new(0.0, 0.0), -0.5),
            Err(NumericsError::Domain(_))
        ));
    }

    #[test]
    fn cpow_identities() {
        for z in [Complex::new(1.5, -2.0), Complex::new(-3.0, 0.0), Complex::new(0.0, 0.7)] {
            assert_eq!(cpow_principal(z, 1.0).unwrap(), z);
            assert_eq!(cpow_principal(z, 0.0).unwrap(), Complex::new(1.0, 0.0));
        }
    }

    #[test]
    fn norm2_example() {
        let v = [Complex::new(3.0, 0.0), Complex::new(0.0, 4.0)];
        assert!((norm2(&v) - 5.0).abs() < 1e-15);
        assert_eq!(norm2(&[]), 0.0);
    }

    #[test]
    fn checked_complex_rejects_nan() {
        assert!(checked_complex(f64::NAN, 0.0).is_err());
        assert!(checked_complex(1.0, f64::INFINITY).is_err());
        assert!(checked_complex(1.0, 2.0).is_ok());
    }
}
