//! Estimate the order of convergence from the last step lengths of a run.

use fracfp::prelude::*;

fn main() {
    let problem = BuiltinProblem;
    let x0 = CVector::from_real(&[4.78, 4.78]).unwrap();
    let alpha = FracOrder::new(0.5).unwrap();
    for (label, cfg) in [
        ("quasi-Newton", MethodConfig::new(MethodKind::QuasiNewton)),
        ("quasi-Newton, hybrid", MethodConfig::new(MethodKind::QuasiNewton).with_hybrid_delta(7.0)),
        ("Newton", MethodConfig::new(MethodKind::ClassicalNewton)),
    ] {
        let t = iterate(&problem, &cfg, alpha, &x0).unwrap();
        let tail: Vec<String> = t.step_norms.iter().rev().take(4).rev().map(|s| format!("{s:.2e}")).collect();
        println!("{label}: {} in {} steps, last steps [{}], P = {:.4?}", t.status, t.iterations(), tail.join(", "), t.p_final);
    }

    let synthetic: Vec<f64> = (1..5).map(|k| 0.1f64.powf(1.5f64.powi(k))).collect();
    println!("synthetic order 1.5 sequence: {:.6}", order_estimate(&synthetic).unwrap());
}
