//! Classify candidate points from the signs of the real Hessian.

use fracfp::prelude::*;

fn main() {
    let problem = BuiltinProblem;
    let candidates = [
        [Complex::new(3.98115471, 0.0), Complex::new(3.92170125, 0.0)],
        [Complex::new(-0.20172521, 0.0), Complex::new(-2.13862013, 0.0)],
        [Complex::new(1.52183063, -0.04852431), Complex::new(-1.07285283, -0.62177498)],
    ];
    for x in &candidates {
        let g = CVector::new(problem.gradient(x).to_vec()).unwrap();
        let c = classify(&problem.hessian(x)).unwrap();
        println!(
            "({:.6}, {:.6}): |grad| = {:.1e}, det sign {}, trace of signs {}, {}",
            x[0],
            x[1],
            fracfp::numerics::norm2(&g),
            c.delta_d,
            c.delta_t,
            c.kind
        );
    }
}
