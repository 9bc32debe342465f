use std::f64::consts::PI;

use super::NumericsError;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const POLE_TOL: f64 = 1e-14;

/// Gamma function Γ(x).
///
/// Lanczos approximation (g = 7, n = 9) for `x ≥ 0.5` and the reflection
/// formula `Γ(x)Γ(1−x) = π / sin(πx)` below that. Non-positive integers
/// (within 1e-14) are poles.
pub fn gamma(x: f64) -> Result<f64, NumericsError> {
    if x.is_nan() {
        return Err(NumericsError::NonFinite("gamma(NaN)".into()));
    }
    if x <= 0.0 && (x - x.round()).abs() < POLE_TOL {
        return Err(NumericsError::Pole(x));
    }
    if x > 0.0 && x == x.floor() && x <= 21.0 {
        // exact factorial for small positive integers
        return Ok((1..x as u64).map(|k| k as f64).product());
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma_unchecked(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut sum = LANCZOS_COEF[0];
        for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            sum += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn known_values() {
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-14);
        // reflection: Γ(−0.5) = −2√π
        assert!(rel(gamma(-0.5).unwrap(), -2.0 * PI.sqrt()) < 1e-14);
        assert!(rel(gamma(-0.5).unwrap(), -3.544_907_701_811_032) < 1e-14);
    }

    #[test]
    fn poles() {
        for x in [0.0, -1.0, -2.0, -17.0, -3.0 + 1e-15] {
            assert!(matches!(gamma(x), Err(NumericsError::Pole(_))), "{x}");
        }
        assert!(gamma(-3.0 + 1e-9).is_ok());
    }

    #[test]
    fn factorials_up_to_fifty() {
        // Γ(n) = (n−1)! accumulated in f64; the product itself carries a
        // few ulps of rounding, far inside the tolerance.
        let mut fact = 1.0f64;
        for n in 1..=50u32 {
            if n > 1 {
                fact *= (n - 1) as f64;
            }
            // bypass the exact lookup so the Lanczos path is exercised too
            let approx = gamma_unchecked(n as f64);
            assert!(rel(approx, fact) < 1e-12, "n={n} rel={}", rel(approx, fact));
        }
    }

    #[test]
    fn half_integers_against_closed_form() {
        // Γ(k + 1/2) = (2k)! / (4^k k!) √π
        let mut value = PI.sqrt();
        for k in 0..40 {
            let x = k as f64 + 0.5;
            assert!(rel(gamma(x).unwrap(), value) < 1e-12, "x={x}");
            value *= x;
        }
        // and downward via Γ(x−1) = Γ(x)/(x−1)
        let mut value = PI.sqrt();
        for k in 1..45 {
            let x = 0.5 - k as f64;
            value /= x;
            assert!(rel(gamma(x).unwrap(), value) < 1e-12, "x={x}");
        }
    }
}
