//! Oracles shared by the integration tests. None of this calls into the
//! library's own gamma or power code.

/// Γ for positive arguments: shift up to z ≥ 15, then the Stirling series.
pub fn stirling_gamma(z: f64) -> f64 {
    assert!(z > 0.0);
    let mut shift = 1.0;
    let mut z = z;
    while z < 15.0 {
        shift *= z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    let ln = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series;
    ln.exp() / shift
}

/// Composite Gauss-Legendre (5 points) on [0, 1].
pub fn integrate_unit(f: impl Fn(f64) -> f64, panels: usize) -> f64 {
    let nodes = [
        (0.0, 128.0 / 225.0),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
        (0.906_179_845_938_664, 0.236_926_885_056_189_1),
    ];
    let h = 1.0 / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for (t, w) in nodes {
            sum += w * f(mid + 0.5 * h * t);
        }
    }
    sum * 0.5 * h
}

/// `D^α x^μ` at real `x > 0` from the integral definition: with
/// `n = max(⌈α⌉, 0)` and `ν = n − α > 0`, `I^ν x^μ = C x^(μ+ν)` where
/// `C = (1/Γ(ν)) ∫_0^1 (1−s)^(ν−1) s^μ ds`, then `n` ordinary derivatives.
/// The substitution `1 − s = v^(1/ν)` removes the endpoint singularity.
pub fn quadrature_rl(mu: f64, alpha: f64, x: f64) -> f64 {
    let n = alpha.ceil().max(0.0);
    let nu = n - alpha;
    let k = 1.0 / nu;
    let integral = integrate_unit(|v| k * (1.0 - v.powf(k)).powf(mu), 400);
    let c = integral / stirling_gamma(nu);
    let mut p = mu + nu;
    let mut coeff = c;
    for _ in 0..n as usize {
        coeff *= p;
        p -= 1.0;
    }
    coeff * x.powf(p)
}
