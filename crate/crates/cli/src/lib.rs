//! Batch command-line front end for the `tlqe` library.
//!
//! Exit codes: 0 success, 2 fit failure, 64 usage error, 65 data error,
//! 70 internal error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub mod commands;
pub mod input;
pub mod output;

pub use input::{read_dataset, InputDigest};
pub use output::{Results, RunOutput};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FIT_FAILURE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("fit failure: {0}")]
    FitFailure(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::FitFailure(_) => EXIT_FIT_FAILURE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<tlqe::Error> for CliError {
    fn from(e: tlqe::Error) -> Self {
        use tlqe::Error as E;
        let msg = e.to_string();
        match e {
            E::InvalidParams(_) | E::InvalidPrior(_) | E::Config(_) => CliError::Usage(msg),
            E::Domain(_) | E::InvalidData(_) => CliError::Data(msg),
            E::Simulation(_) => CliError::FitFailure(msg),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    Tlqe,
    Tle,
}

#[derive(Debug, Parser)]
#[command(
    name = "tlqe",
    version,
    about = "Topp-Leone generated q-exponential lifetime analysis"
)]
pub struct Cli {
    /// Output format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximum-likelihood fit of one model.
    Fit {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum)]
        dist: Dist,
        /// Extra starting point: alpha,lambda[,q].
        #[arg(long, allow_hyphen_values = true)]
        init: Option<String>,
    },
    /// Fit several models and rank them by AIC.
    Compare {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', required = true, num_args = 1..)]
        dists: Vec<Dist>,
    },
    /// Draw variates by inversion.
    Sample {
        #[arg(long, value_enum)]
        dist: Dist,
        /// alpha,lambda[,q]
        #[arg(long, allow_hyphen_values = true)]
        params: String,
        #[arg(
            short = 'n',
            value_parser = clap::value_parser!(u64).range(1..),
            required_unless_present = "uniforms"
        )]
        n: Option<u64>,
        #[arg(long, required_unless_present = "uniforms")]
        seed: Option<u64>,
        /// Apply the quantile to the uniforms listed in this file instead.
        #[arg(long, conflicts_with_all = ["n", "seed"])]
        uniforms: Option<PathBuf>,
    },
    /// Normal approximation to the posterior of the shape alpha.
    Bayes {
        #[arg(long)]
        data: PathBuf,
        /// uniform | jeffreys:m | gamma:a,p
        #[arg(long)]
        prior: String,
        /// Fixed parent parameters: lambda,q.
        #[arg(
            long,
            allow_hyphen_values = true,
            required_unless_present = "plugin_mle"
        )]
        base: Option<String>,
        /// Fix lambda and q at their TLqE maximum-likelihood estimates.
        #[arg(long, conflicts_with = "base")]
        plugin_mle: bool,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
    },
    /// Monte Carlo study of the TLqE estimators.
    Simulate {
        /// True alpha,lambda,q.
        #[arg(long, default_value = "2,0.5,1.3", allow_hyphen_values = true)]
        params: String,
        #[arg(long, value_delimiter = ',', default_value = "100,500")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        reps: usize,
        #[arg(long, default_value_t = tlqe::simstudy::GOLDEN_SEED)]
        seed: u64,
        /// Report stem; writes STEM.csv and STEM.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate pdf, cdf, survival, hazard and cumulative hazard on a grid.
    Curves {
        #[arg(long, value_enum)]
        dist: Dist,
        #[arg(long, allow_hyphen_values = true)]
        params: String,
        /// START:STOP:STEP
        #[arg(long)]
        grid: String,
        /// CSV file to write.
        #[arg(long)]
        out: PathBuf,
    },
}

/// What a command produced, before it is wrapped in a [`RunOutput`].
#[derive(Debug)]
pub struct Executed {
    pub exit_code: i32,
    pub digest: Option<InputDigest>,
    pub warnings: Vec<String>,
    /// Where to also write the JSON envelope, for commands that emit reports.
    pub report_json: Option<PathBuf>,
    pub results: Results,
}

/// Parse `args` (program name first), run the command and return the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let echo = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match execute(&cli, echo) {
        Ok((output, code)) => {
            for w in &output.warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            let rendered = match cli.format {
                Format::Text => output.to_text(),
                Format::Json => output.to_json(),
            };
            if let Err(e) = stdout.write_all(rendered.as_bytes()) {
                let _ = writeln!(stderr, "internal error: writing output: {e}");
                return EXIT_INTERNAL;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

/// Run a parsed command and build its envelope; writes report files.
pub fn execute(cli: &Cli, command_echo: Vec<String>) -> Result<(RunOutput, i32), CliError> {
    let done = commands::execute(&cli.command)?;
    let output = RunOutput {
        tool: output::TOOL,
        version: output::VERSION,
        command: command_echo,
        input_digest: done.digest,
        warnings: done.warnings,
        results: done.results,
    };
    if let Some(path) = &done.report_json {
        commands::write_file(path, &output.to_json())?;
    }
    Ok((output, done.exit_code))
}
