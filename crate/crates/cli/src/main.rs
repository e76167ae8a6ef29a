//! `binbound`: certified checks of the binomial bound and its applications.
//!
//! Exit codes: 0 every verdict holds, 1 some verdict fails, 2 some verdict
//! is undecided at the precision cap, 3 usage or input error.

mod commands;
mod config;
mod render;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Format, Overrides, RunConfig, ENV_PRECISION_CAP};

pub const EXIT_USAGE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "binbound",
    version,
    about = "Certified checks of a Gaussian-form binomial bound and its applications"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalArgs {
    /// Output format (default depends on the subcommand).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// First dyadic precision in bits.
    #[arg(long, global = true)]
    precision_start: Option<u32>,
    /// Largest dyadic precision in bits.
    #[arg(long, global = true)]
    precision_cap: Option<u32>,
    /// Seed for Monte-Carlo cross-checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Skip the hardware-precision first pass.
    #[arg(long, global = true)]
    no_fast_path: bool,
    /// `key = value` config file, overridden by the environment and flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certified sweeps of the bound, its even-length companion and the
    /// auxiliary inequalities used in its proof.
    #[command(subcommand)]
    Verify(commands::VerifyCmd),
    /// Optimal coefficients of the quadratic-exponent bound for even M.
    Tune(commands::TuneArgs),
    /// Boolean functions: bent counts, continuation counts and bounds.
    #[command(subcommand)]
    Bent(commands::BentCmd),
    /// Latin dependence degree of permutation, balanced or spectra ensembles.
    Latin(commands::LatinArgs),
    /// Bounded sum-of-squares counts and their weighted lower bound.
    Squares(commands::SquaresArgs),
    /// Log2 enclosures of C(n, k), the bound and classical reference bounds.
    CompareBounds(commands::CompareArgs),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<binbound::Error> for CliError {
    fn from(e: binbound::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn build_config(g: &GlobalArgs) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::default();
    if let Some(p) = &g.config {
        cfg.apply_file(p)?;
    }
    cfg.apply_env(std::env::var(ENV_PRECISION_CAP).ok().as_deref())?;
    cfg.apply_overrides(&Overrides {
        precision_start: g.precision_start,
        precision_cap: g.precision_cap,
        workers: g.workers,
        format: g.format,
        seed: g.seed,
        fast_path: g.no_fast_path.then_some(false),
    });
    cfg.validate()?;
    Ok(cfg)
}

fn run() -> Result<binbound::Status, CliError> {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                // A closed pipe (`binbound --help | head`) is not an error.
                let _ = write!(io::stdout(), "{e}");
                return Ok(binbound::Status::Holds);
            }
            return Err(CliError::Usage(e.render().to_string()));
        }
    };
    let cfg = build_config(&cli.global).map_err(CliError::Usage)?;
    if let Some(w) = cfg.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    }
    let mut out: Box<dyn Write> = match &cli.global.output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let status = match &cli.command {
        Command::Verify(c) => commands::verify(c, &cfg, &mut out)?,
        Command::Tune(a) => commands::tune(a, &cfg, &mut out)?,
        Command::Bent(c) => commands::bent(c, &cfg, &mut out)?,
        Command::Latin(a) => commands::latin(a, &cfg, &mut out)?,
        Command::Squares(a) => commands::squares(a, &cfg, &mut out)?,
        Command::CompareBounds(a) => commands::compare(a, &cfg, &mut out)?,
    };
    out.flush()?;
    Ok(status)
}

fn main() -> ExitCode {
    match run() {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(CliError::Usage(msg)) => {
            eprint!("{msg}");
            if !msg.ends_with('\n') {
                eprintln!();
            }
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
