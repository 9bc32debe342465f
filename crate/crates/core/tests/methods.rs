use fracfp::frac::FracOrder;
use fracfp::methods::{iterate, phi, IterationTrace, MethodConfig, MethodKind, TraceStatus};
use fracfp::numerics::{lu_solve, norm2, CVector, Complex};
use fracfp::problem::{parse_polynomial_system, BuiltinProblem, PolynomialProblem, Problem};
use fracfp::sweep::Demo;
use proptest::prelude::*;

const KINDS: [MethodKind; 4] =
    [MethodKind::QuasiNewton, MethodKind::PseudoNewton, MethodKind::FracNewtonRaphson, MethodKind::ClassicalNewton];

fn demo_traces(demo: Demo) -> (MethodConfig, Vec<IterationTrace>) {
    let cfg = demo.config();
    let traces = fracfp::sweep::run_traces(&cfg).unwrap();
    (cfg.method, traces)
}

proptest! {
    #[test]
    fn exact_zeros_are_fixed_points(
        a in -5i32..5,
        b in -5i32..5,
        alpha in -1.9f64..2.9,
        kind in 0usize..4,
        hybrid in proptest::option::of(0.1f64..100.0),
    ) {
        prop_assume!((alpha - alpha.round()).abs() > 1e-3);
        // integer data keeps the zero exact in floating point
        let text = format!("x1^2 - {}\nx1*x2 - ({}, 0)", a * a, a * b);
        let problem = PolynomialProblem::from_gradient_field(parse_polynomial_system(&text).unwrap()).unwrap();
        let xi = CVector::from_real(&[a as f64, b as f64]).unwrap();
        prop_assert_eq!(norm2(&problem.gradient(&xi)), 0.0);
        let mut cfg = MethodConfig::new(KINDS[kind]);
        cfg.hybrid_delta = hybrid;
        let alpha = FracOrder::new(alpha).unwrap();
        prop_assert_eq!(phi(&cfg, &problem, alpha, &xi).unwrap(), xi.clone());
        let t = iterate(&problem, &cfg, alpha, &xi).unwrap();
        prop_assert_eq!(t.status, TraceStatus::Converged);
        prop_assert_eq!(t.last_point(), &xi);
    }

    #[test]
    fn one_newton_step(re in proptest::collection::vec(-4.0f64..4.0, 2), im in proptest::collection::vec(-1.0f64..1.0, 2)) {
        let x = CVector::new(vec![Complex::new(re[0], im[0]), Complex::new(re[1], im[1])]).unwrap();
        let p = BuiltinProblem;
        let cfg = MethodConfig::new(MethodKind::ClassicalNewton);
        if let Ok(d) = lu_solve(&p.hessian(&x), &p.gradient(&x)) {
            let next = phi(&cfg, &p, FracOrder::new(0.5).unwrap(), &x).unwrap();
            let want = &x - &d;
            prop_assert!(norm2(&(&next - &want)) <= 1e-12 * norm2(&want).max(1.0));
        }
    }
}

#[test]
fn converged_traces_meet_the_gradient_bound() {
    for demo in Demo::ALL {
        let (cfg, traces) = demo_traces(demo);
        for t in traces {
            assert_eq!(t.iterates.len(), t.step_norms.len() + 1);
            assert_eq!(t.grad_norms.len(), t.iterates.len());
            if t.status == TraceStatus::Converged {
                assert!(t.last_grad_norm() <= cfg.tol_grad);
            }
        }
    }
}

#[test]
fn plain_quasi_newton_tail_is_linear() {
    let (_, traces) = demo_traces(Demo::Table1);
    let ps: Vec<f64> = traces
        .iter()
        .filter(|t| t.status == TraceStatus::Converged)
        .filter_map(|t| t.p_final)
        .collect();
    assert!(ps.len() >= 10, "{} converged orders with an order estimate", ps.len());
    for p in ps {
        assert!(p > 0.7 && p < 1.3, "{p}");
    }
}

/// Converged hybrid runs whose last three iterates were all inside the
/// Newton region.
fn newton_tail_orders(demo: Demo) -> Vec<(f64, f64)> {
    let (cfg, traces) = demo_traces(demo);
    let delta = cfg.hybrid_delta.unwrap();
    traces
        .iter()
        .filter(|t| t.status == TraceStatus::Converged && t.grad_norms.len() >= 4)
        .filter(|t| t.grad_norms[t.grad_norms.len() - 4..t.grad_norms.len() - 1].iter().all(|&g| g <= delta))
        .filter_map(|t| t.p_final.map(|p| (t.alpha.value(), p)))
        .collect()
}

#[test]
fn hybrid_newton_tail_is_superlinear() {
    for demo in [Demo::Table2, Demo::Table3] {
        let orders = newton_tail_orders(demo);
        assert!(!orders.is_empty());
        for (alpha, p) in orders {
            assert!(p >= 1.5, "{demo} alpha {alpha}: P = {p}");
        }
    }
}
