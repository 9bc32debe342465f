//! Run a sweep described by a JSON config file and print the CSV.
//!
//! `cargo run --example config_sweep [path/to/config.json]`

use std::path::PathBuf;

use fracfp::sweep::{parse_config, run_sweep, write_csv};

fn main() {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data/cubic_sweep.json"));
    let cfg = match parse_config(&path) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            std::process::exit(2);
        }
    };
    let report = run_sweep(&cfg).unwrap();
    write_csv(&report, std::io::stdout().lock()).unwrap();
    eprintln!("{} landing points, {} duplicates dropped, {} orders failed", report.records.len(), report.duplicates.len(), report.failures.len());
}
