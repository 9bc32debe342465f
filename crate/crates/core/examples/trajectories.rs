//! Dump full iterate histories for a short sweep.

use fracfp::sweep::{run_traces, write_trajectories, Demo};

fn main() {
    let mut cfg = Demo::Table3.config();
    cfg.alpha = fracfp::sweep::AlphaSpec::List(vec![0.998185, 2.028082]);
    let traces = run_traces(&cfg).unwrap();
    write_trajectories(&traces, std::io::stdout().lock()).unwrap();
}
