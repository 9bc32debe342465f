//! Fractional Newton-Raphson on a polynomial gradient field read from text.

use fracfp::prelude::*;

fn main() {
    let sys = parse_polynomial_system(include_str!("data/cubic.poly")).unwrap();
    println!("system:\n{sys}");
    let problem = PolynomialProblem::from_gradient_field(sys).unwrap();
    let x0 = CVector::from_real(&[2.0, 1.5]).unwrap();
    for alpha in [0.5, 0.9, 1.3] {
        let cfg = MethodConfig::new(MethodKind::FracNewtonRaphson).with_hybrid_delta(0.5);
        let t = iterate(&problem, &cfg, FracOrder::new(alpha).unwrap(), &x0).unwrap();
        let x = t.last_point();
        println!("alpha {alpha}: {} in {} steps, x = ({:.8}, {:.8})", t.status, t.iterations(), x[0], x[1]);
    }
}
