//! Plain quasi-Newton sweep over a grid of orders on the built-in problem.

use fracfp::prelude::*;
use fracfp::sweep::ProblemSpec;

fn main() {
    let cfg = SweepConfig::new(
        ProblemSpec::Builtin,
        MethodConfig::new(MethodKind::QuasiNewton),
        CVector::from_real(&[5.21, 5.21]).unwrap(),
        AlphaSpec::Grid { lo: -0.95, hi: 0.95, count: 39 },
    );
    let report = run_sweep(&cfg).unwrap();
    println!("{} of {} orders converged", report.records.len(), report.alpha_count());
    for r in &report.records {
        println!(
            "alpha {:>9.6}  x = ({:.6}, {:.6})  {:>6}  n = {:>3}  P = {}",
            r.alpha.value(),
            r.point[0],
            r.point[1],
            r.kind,
            r.iterations,
            r.p_n.map_or("-".into(), |p| format!("{p:.4}")),
        );
    }
    if let Some(p) = report.mean_p {
        println!("mean order {p:.4}");
    }
}
