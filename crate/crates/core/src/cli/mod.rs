//! Command-line driver. Every command prints a [`Report`] as JSON; file
//! artifacts (tensors, connections) go to `--out` or, without it, to
//! stdout with the report on stderr.
//!
//! Exit codes: `0` every check passed (expected obstructions included),
//! `1` some check failed, `2` usage, I/O or parse error.

mod commands;
pub mod report;
mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::io::FormatError;
use crate::random::ComponentMask;
use crate::realization::RealizationError;

pub use commands::{cmd_check, cmd_dims, cmd_gen, cmd_realize, cmd_verify};
pub use report::{Check, Report, Status, Summary, TableRow, WitnessEntry};
pub use table::{cmd_table, expected_verdict, OBSTRUCTED, YES};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(#[from] FormatError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Realization(#[from] RealizationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Linear,
    RicciConstant,
    Projective,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Linear => "linear",
            Mode::RicciConstant => "ricci-constant",
            Mode::Projective => "projective",
        }
    }
}

/// A report plus an optional file artifact.
#[derive(Debug, Clone)]
pub struct Output {
    pub report: Report,
    pub artifact: Option<String>,
}

#[derive(Debug, Parser)]
#[command(name = "curvforge", version, about = "Exact curvature operator algebra and jet realization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random curvature operator with the given components.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// `all`, `none`, or a comma list of `weyl`, `sym`, `alt`.
        #[arg(long, default_value = "all")]
        mask: ComponentMask,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a tensor file and check its decomposition.
    Check { file: PathBuf },
    /// Realize a tensor file as the curvature of a jet connection.
    Realize {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Linear)]
        mode: Mode,
        #[arg(long, default_value_t = 6)]
        order: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check curvature identities of a connection file.
    Verify { file: PathBuf },
    /// Reproduce the eight-row realization table.
    Table {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 6)]
        order: u32,
    },
    /// Compare component dimension formulas with computed ranks.
    Dims {
        #[arg(long, default_value_t = 3)]
        m: usize,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn execute(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Gen { seed, m, mask, .. } => cmd_gen(*seed, *m, *mask),
        Command::Check { file } => cmd_check(&file.display().to_string(), &read(file)?),
        Command::Realize { file, mode, order, .. } => {
            cmd_realize(&file.display().to_string(), &read(file)?, *mode, *order)
        }
        Command::Verify { file } => cmd_verify(&file.display().to_string(), &read(file)?),
        Command::Table { seed, m, order } => cmd_table(*seed, *m, *order),
        Command::Dims { m } => cmd_dims(*m),
    }
}

/// Parses `args`, runs the command and writes its output; returns the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let output = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let out = match &cli.command {
        Command::Gen { out, .. } | Command::Realize { out, .. } => out.as_ref(),
        _ => None,
    };
    let report = output.report.to_json();
    let written = match (output.artifact, out) {
        (Some(artifact), Some(path)) => std::fs::write(path, artifact)
            .map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })
            .map(|_| stdout.write_all(report.as_bytes())),
        (Some(artifact), None) => Ok(stdout
            .write_all(artifact.as_bytes())
            .and_then(|_| stderr.write_all(report.as_bytes()))),
        (None, _) => Ok(stdout.write_all(report.as_bytes())),
    };
    match written {
        Ok(Ok(())) => output.report.exit_code(),
        Ok(Err(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
