use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fracfp::numerics::{CVector, Complex};
use fracfp::sweep::{
    classify_point, parse_config, run_sweep, run_traces, write_csv, write_trajectories, ConfigError, Demo, SweepConfig,
    SweepError,
};
use log::{error, info};

#[derive(Parser)]
#[command(name = "fracfp", version, about = "Fractional fixed-point sweeps over the order α")]
struct Cli {
    /// Worker threads for per-α runs (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Only log errors
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep and write one CSV row per converged order
    Sweep {
        config: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Write the full iterate sequence of every order
    Trajectories {
        config: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run one of the shipped reproduction sweeps
    Demo {
        /// table1, table2 or table3
        name: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Classify a point of the config's problem, e.g. `3.98,3.92` or `1.3-0.36i,0.99-0.67i`
    Classify { config: PathBuf, point: String },
}

enum Failure {
    Config(String),
    AllFailed,
    Other(String),
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Other(e.to_string())
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn write_to<F>(path: Option<&Path>, f: F) -> Result<(), Failure>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let result = match path {
        Some(p) => std::fs::File::create(p).and_then(|file| f(&mut io::BufWriter::new(file))),
        None => f(&mut io::stdout().lock()),
    };
    result.map_err(|e| match path {
        Some(p) => Failure::Other(format!("writing {}: {e}", p.display())),
        None => Failure::Other(format!("writing stdout: {e}")),
    })
}

fn sweep(cfg: &SweepConfig, output: Option<PathBuf>) -> Result<(), Failure> {
    let report = run_sweep(cfg)?;
    let out = output.or_else(|| cfg.output.clone());
    write_to(out.as_deref(), |w| write_csv(&report, w))?;
    for (alpha, status) in &report.failures {
        info!("alpha {alpha}: {status}");
    }
    if let Some(p) = report.mean_p {
        info!("mean order {p:.4}");
    }
    if report.records.is_empty() && report.duplicates.is_empty() {
        return Err(Failure::AllFailed);
    }
    Ok(())
}

fn parse_point(text: &str) -> Result<CVector, ConfigError> {
    let elems = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<Complex>()
                .map_err(|_| ConfigError::new("point", format!("cannot parse {s:?} as a complex number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    CVector::new(elems).map_err(|e| ConfigError::new("point", e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sweep { config, output } => sweep(&parse_config(&config)?, output),
        Command::Demo { name, output } => sweep(&name.parse::<Demo>()?.config(), output),
        Command::Trajectories { config, output } => {
            let cfg = parse_config(&config)?;
            let traces = run_traces(&cfg)?;
            write_to(output.as_deref(), |w| write_trajectories(&traces, w))
        }
        Command::Classify { config, point } => {
            let cfg = parse_config(&config)?;
            let (cls, grad_norm) = classify_point(&cfg, &parse_point(&point)?)?;
            println!("delta_d={} delta_t={} kind={} grad_norm={grad_norm:.7e}", cls.delta_d, cls.delta_t, cls.kind);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "error" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            error!("--jobs {jobs}: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            error!("{msg}");
            ExitCode::from(2)
        }
        Err(Failure::AllFailed) => {
            error!("no order converged");
            ExitCode::from(3)
        }
        Err(Failure::Other(msg)) => {
            error!("{msg}");
            ExitCode::from(1)
        }
    }
}
