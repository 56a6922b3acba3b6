//! `sdirng`: simulate, estimate, certify and extract from the command line.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sdirng_core::Error;

use config::ConfigFlags;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("privacy test failed: {0}")]
    PrivacyFail(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(Error::Domain(_)) => 2,
            CliError::PrivacyFail(_) => 4,
            CliError::Core(Error::NonConvergence { .. }) => 5,
            CliError::Core(Error::Invariant(_) | Error::Inconsistent(_)) => 1,
            CliError::Core(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}

#[derive(Debug, Parser)]
#[command(name = "sdirng", version, about = "Semi-device-independent randomness: simulation and certification")]
struct Cli {
    /// Cap on worker threads; 1 gives the sequential reference behaviour.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(flatten)]
    config: ConfigFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Indicators,
    Thresholds,
    Probabilities,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the protocol and write a round log (plus a config echo).
    Simulate {
        /// Log file name inside the output directory.
        #[arg(long, default_value = "rounds.csv")]
        output: String,
    },
    /// Conditional tables and confidence bounds from a round log.
    Estimate {
        #[arg(long)]
        log: PathBuf,
        /// Interval construction: clopper-pearson or poisson.
        #[arg(long, default_value = "clopper-pearson")]
        method: String,
    },
    /// Privacy test and min-entropy certification.
    Certify {
        /// Round log to certify.
        #[arg(long, conflicts_with_all = ["mode", "alpha"])]
        log: Option<PathBuf>,
        /// Certify a uniform indicator constraint instead of a log:
        /// vector, worst_case or average.
        #[arg(long, requires = "alpha")]
        mode: Option<String>,
        #[arg(long, requires = "mode")]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 1e-4)]
        delta: f64,
    },
    /// Raw bit string and von Neumann output from a round log.
    Extract {
        #[arg(long)]
        log: PathBuf,
    },
    /// Data behind the indicator, threshold and probability plots.
    Figures {
        #[arg(value_enum)]
        which: Figure,
        /// Round log (probabilities only).
        #[arg(long)]
        log: Option<PathBuf>,
        /// Constraint width for indicator curves.
        #[arg(long, default_value_t = 1e-4)]
        delta: f64,
        #[arg(long = "alpha-min", default_value_t = 0.40)]
        alpha_min: f64,
        #[arg(long = "alpha-max", default_value_t = 0.85)]
        alpha_max: f64,
        #[arg(long = "alpha-step", default_value_t = 0.005)]
        alpha_step: f64,
        /// Efficiencies for the threshold surface (comma separated).
        #[arg(long = "etas", value_delimiter = ',')]
        etas: Option<Vec<f64>>,
        #[arg(long = "beta-step", default_value_t = 0.01)]
        beta_step: f64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let cfg = config::RunConfig::resolve(&cli.config)?;
    match cli.command {
        Command::Simulate { output } => commands::simulate(&cfg, &output),
        Command::Estimate { log, method } => commands::estimate(&cfg, &log, &method),
        Command::Certify { log, mode, alpha, delta } => match (log, mode, alpha) {
            (Some(log), _, _) => commands::certify_log(&cfg, &log),
            (None, Some(mode), Some(alpha)) => commands::certify_indicator(&cfg, &mode, alpha, delta),
            _ => Err(CliError::Usage("certify needs --log, or --mode with --alpha".into())),
        },
        Command::Extract { log } => commands::extract(&cfg, &log),
        Command::Figures {
            which,
            log,
            delta,
            alpha_min,
            alpha_max,
            alpha_step,
            etas,
            beta_step,
        } => match which {
            Figure::Indicators => commands::figure_indicators(&cfg, delta, alpha_min, alpha_max, alpha_step),
            Figure::Thresholds => commands::figure_thresholds(
                &cfg,
                &etas.unwrap_or_else(|| vec![cfg.eta]),
                beta_step,
            ),
            Figure::Probabilities => {
                let log = log.ok_or_else(|| CliError::Usage("figures probabilities needs --log".into()))?;
                commands::figure_probabilities(&cfg, &log)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sdirng: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
