//! Command-line front end: subcommands `validate`, `k0`, `homotopy-check` and
//! `build {germ|semidirect|sigma}`.

#![allow(clippy::result_large_err)]

mod commands;
mod error;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use error::{CliError, Failure, EXIT_AMBIGUOUS, EXIT_INVALID, EXIT_PARSE, EXIT_PASS};
pub use report::{InputDigest, RunReport};

#[derive(Debug, Parser)]
#[command(name = "etale-twist", version, about = "Finite groupoid twists, convolution algebras and K0")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Print the result as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Absolute tolerance for floating identity checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of homotopy samples on the grid i/(N-1).
    #[arg(long, global = true, default_value_t = 11, value_parser = clap::value_parser!(u64).range(2..))]
    pub samples: u64,
    /// Also write the full run report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate any known input file; the schema is detected from its keys.
    Validate {
        file: PathBuf,
        /// Groupoid that cocycle and homotopy files refer to.
        #[arg(long)]
        groupoid: Option<PathBuf>,
        /// Semigroup that twisted-action files refer to.
        #[arg(long)]
        semigroup: Option<PathBuf>,
    },
    /// Compute K0 of the twisted convolution algebra.
    K0 {
        groupoid: PathBuf,
        /// Defaults to the trivial cocycle.
        cocycle: Option<PathBuf>,
    },
    /// Sample a homotopy of cocycles and compare K0 along it.
    HomotopyCheck { groupoid: PathBuf, homotopy: PathBuf },
    /// Build a groupoid and write it with its sidecars.
    Build {
        #[command(subcommand)]
        kind: BuildKind,
    },
}

#[derive(Debug, Subcommand)]
pub enum BuildKind {
    /// Germ groupoid of a twisted inverse semigroup action.
    Germ {
        semigroup: PathBuf,
        /// Defaults to the canonical action on the spectrum.
        action: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Semidirect product groupoid of a directed action.
    Semidirect {
        action: PathBuf,
        /// Cocycle on the acting group, pulled back along the labeling.
        #[arg(long)]
        cocycle: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Total groupoid of the twist with fibres C_m.
    Sigma {
        groupoid: PathBuf,
        cocycle: PathBuf,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let echo = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let report = commands::execute(&cli, echo);
    let status = report.exit;
    if let Err(e) = report::emit(&report, &cli.global, out, err) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_PARSE;
    }
    status
}
