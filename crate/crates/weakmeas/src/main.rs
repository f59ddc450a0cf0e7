//! `weakmeas` — weak quantum measurement experiments from the command line.
//!
//! One subcommand per experiment; a JSON config file supplies the base
//! parameters and flags override individual values. Results go to stdout or
//! `--out` as a JSON document or the experiment's CSV table.
//!
//! Exit codes: 0 success, 2 config error, 3 numerical failure, 1 other.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use weakmeas::config::{ConfigError, ExperimentConfig, ExperimentKind};
use weakmeas::experiment::{run_experiment, RunError};
use weakmeas::report::{emit_results, OutputFormat, ReportError};

#[derive(Parser)]
#[command(
    name = "weakmeas",
    version,
    about = "Weak quantum measurement simulations: Gaussian pointers, repeated \
             single-copy measurements, Leggett-Garg budgets, weak-value tomography"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single weak measurements: moments, histogram, POVM completeness
    MeterCheck(RunArgs),
    /// The N-slot pointer apparatus: closed forms vs sampled outcomes
    Idealized(RunArgs),
    /// Repeated weak measurements on a single copy
    Repeat(RunArgs),
    /// Leggett-Garg weak-vs-strong resource accounting
    Lg(RunArgs),
    /// Minimize the state-averaged tomography error volume over |b+|^2
    TomoOptimize(RunArgs),
    /// Weak-value tomography round trip, noiseless and noisy
    TomoRoundtrip(RunArgs),
}

impl Command {
    fn kind(&self) -> ExperimentKind {
        match self {
            Self::MeterCheck(_) => ExperimentKind::MeterCheck,
            Self::Idealized(_) => ExperimentKind::Idealized,
            Self::Repeat(_) => ExperimentKind::Repeat,
            Self::Lg(_) => ExperimentKind::Lg,
            Self::TomoOptimize(_) => ExperimentKind::TomoOptimize,
            Self::TomoRoundtrip(_) => ExperimentKind::TomoRoundtrip,
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Self::MeterCheck(a)
            | Self::Idealized(a)
            | Self::Repeat(a)
            | Self::Lg(a)
            | Self::TomoOptimize(a)
            | Self::TomoRoundtrip(a) => a,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; flags below override its values
    #[arg(long)]
    config: Option<PathBuf>,

    /// Master seed for all random substreams
    #[arg(long)]
    seed: Option<u64>,

    /// Output path (defaults to the config's output_path, else stdout)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format: json or csv
    #[arg(long, default_value = "json")]
    format: OutputFormat,

    /// Number of realizations / samples / copies (meaning per experiment)
    #[arg(long)]
    realizations: Option<usize>,

    /// Steps per realization (repeat), slot count N (idealized), or the
    /// repetition count entering delta_s (tomography)
    #[arg(long)]
    steps: Option<usize>,

    /// Pointer spread of the weak measurement apparatus
    #[arg(long = "delta-p")]
    delta_p: Option<f64>,
}

fn build_config(kind: ExperimentKind, args: &RunArgs) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let cfg = ExperimentConfig::from_file(&path.display().to_string())?;
            if cfg.experiment != kind {
                return Err(ConfigError::Invalid {
                    field: "experiment".into(),
                    reason: format!(
                        "config file is for `{}` but the `{}` subcommand was invoked",
                        cfg.experiment.name(),
                        kind.name()
                    ),
                });
            }
            cfg
        }
        None => ExperimentConfig::default_for(kind),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(realizations) = args.realizations {
        cfg.realizations = realizations;
    }
    if let Some(steps) = args.steps {
        cfg.m_steps = steps;
    }
    if let Some(delta_p) = args.delta_p {
        cfg.delta_p = delta_p;
    }
    if let Some(out) = &args.out {
        cfg.output_path = Some(out.display().to_string());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), RunError> {
    let args = cli.command.args();
    let cfg = build_config(cli.command.kind(), args)?;
    let doc = run_experiment(&cfg)?;
    let path = cfg.output_path.as_ref().map(PathBuf::from);
    emit_results(&doc, args.format, path.as_deref()).map_err(|e| match e {
        ReportError::Io(io) => RunError::Io(io),
        ReportError::Json(j) => RunError::Internal(j.to_string()),
    })?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
