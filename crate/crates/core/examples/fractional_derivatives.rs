//! Riemann-Liouville derivatives of monomials at real and complex points.

use fracfp::prelude::*;

fn main() {
    let x = Complex::new(2.0, 0.0);
    for order in [-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0] {
        let v = rl_deriv_monomial(3, order, x).unwrap();
        println!("D^{order:>4} x^3 at x=2: {:.10}", v.re);
    }

    // half derivative of a constant, off the real axis
    let z = Complex::new(-1.0, 0.5);
    println!("D^0.5 1 at {z}: {:.10}", rl_deriv_monomial(0, 0.5, z).unwrap());
    println!("Gamma(0.5)^2 = {:.12}", gamma(0.5).unwrap().powi(2));

    // the mask falls back to order 1 on a zero coordinate
    let alpha = FracOrder::new(0.7).unwrap();
    println!("beta at 0: {}, beta at 1: {}", beta_mask(alpha, Complex::new(0.0, 0.0)), beta_mask(alpha, x));
}
