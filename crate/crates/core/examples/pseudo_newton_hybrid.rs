//! Pseudo-Newton with and without the Newton switch, from the same start.

use fracfp::prelude::*;

fn main() {
    let problem = BuiltinProblem;
    let x0 = CVector::from_real(&[14.55, 14.55]).unwrap();
    let alpha = FracOrder::new(2.028082).unwrap();
    for delta in [None, Some(13.0)] {
        let mut cfg = MethodConfig::new(MethodKind::PseudoNewton);
        cfg.hybrid_delta = delta;
        let t = iterate(&problem, &cfg, alpha, &x0).unwrap();
        let x = t.last_point();
        println!(
            "delta {:?}: {} after {} iterations at ({:.8}, {:.8}), |grad| = {:.2e}",
            delta,
            t.status,
            t.iterations(),
            x[0],
            x[1],
            t.last_grad_norm()
        );
    }
}
