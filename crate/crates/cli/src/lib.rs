//! `sdoflab` command-line interface.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or invalid input,
//! 3 infeasible allocation, 4 I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sdoflab_core::{AntennaConfig, Error as CoreError};

pub mod commands;
pub mod output;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "SDOFLAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "sdoflab",
    version,
    about = "Sum SDoF, precoder design and rate sweeps for two MIMO transmitters and an eavesdropper"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the closed-form sum SDoF, regime and jamming allocation.
    Sdof(SdofArgs),
    /// Sample one channel realization and emit its precoders and audit as JSON.
    Design(DesignArgs),
    /// Run a Monte Carlo power sweep; writes CSV samples and a JSON summary.
    Simulate(SimulateArgs),
    /// Run the self-check suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct AntennaArgs {
    /// Antennas at transmitter 1.
    #[arg(long)]
    pub m1: usize,
    /// Antennas at transmitter 2.
    #[arg(long)]
    pub m2: usize,
    /// Antennas at the legitimate receiver.
    #[arg(long)]
    pub n: usize,
    /// Antennas at the eavesdropper.
    #[arg(long)]
    pub ne: usize,
}

impl AntennaArgs {
    pub fn config(&self) -> Result<AntennaConfig, CliError> {
        Ok(AntennaConfig::new(self.m1, self.m2, self.n, self.ne)?)
    }
}

#[derive(Debug, Args)]
pub struct SdofArgs {
    #[command(flatten)]
    pub antennas: AntennaArgs,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[arg(long, required_unless_present = "recheck", conflicts_with = "recheck")]
    pub m1: Option<usize>,
    #[arg(long, required_unless_present = "recheck", conflicts_with = "recheck")]
    pub m2: Option<usize>,
    #[arg(long, required_unless_present = "recheck", conflicts_with = "recheck")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "recheck", conflicts_with = "recheck")]
    pub ne: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Re-check a saved design report instead of creating one.
    #[arg(long, conflicts_with = "out")]
    pub recheck: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Static,
    TimeVarying,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// RunConfig JSON file; command-line flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub m1: Option<usize>,
    #[arg(long)]
    pub m2: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub ne: Option<usize>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub start_db: Option<f64>,
    #[arg(long)]
    pub stop_db: Option<f64>,
    #[arg(long)]
    pub step_db: Option<f64>,
    /// Regression window lower end in dB.
    #[arg(long)]
    pub window_lo: Option<f64>,
    /// Regression window upper end in dB.
    #[arg(long)]
    pub window_hi: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub sigma2: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Eavesdropper draws averaged per trial in time-varying mode.
    #[arg(long)]
    pub eve_uses: Option<u64>,
    /// Allowed |slope - closed form| for the pass flag.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// JSON summary output; stdout (stderr when the CSV goes to stdout) when
    /// omitted.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 5)]
    pub max_antennas: usize,
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,
    /// Add quick Monte Carlo slope checks.
    #[arg(long)]
    pub full: bool,
    /// Report file; stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Substitute a wrong closed form to confirm the suite fails.
    #[arg(long, hide = true)]
    pub inject_formula_error: bool,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(what: &str, e: std::io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: format!("{what}: {e}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::InfeasibleAllocation(_) => EXIT_INFEASIBLE,
            CoreError::InvalidConfig(_) | CoreError::InvalidMatrix(_) | CoreError::DimensionMismatch(_) => {
                EXIT_USAGE
            }
            CoreError::InsufficientData(_) => EXIT_USAGE,
            CoreError::Unsolvable { .. } | CoreError::NumericalFailure(_) => EXIT_VERIFY_FAILED,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Sdof(a) => commands::sdof(&a, stdout),
        Command::Design(a) => commands::design(&a, stdout),
        Command::Simulate(a) => commands::simulate(&a, stdout, stderr),
        Command::Verify(a) => commands::verify(&a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

/// Caps the global worker pool at `SDOFLAB_THREADS` when it is set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize =
        value.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
            CliError::usage(format!("{THREADS_ENV} must be a positive integer, got {value:?}"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::usage(format!("cannot size thread pool: {e}")))
}
