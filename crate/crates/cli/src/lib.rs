//! The `crossing` command-line tool.
//!
//! Every command prints a report on stdout, as aligned text or, with
//! `--json`, as one line of JSON with sorted keys and `"schema": 1`.
//! Exit codes: 0 on success, 1 when a check fails (a negative x-exponent
//! in the centralizer under ntnr, or a conjugacy residual above the
//! threshold), 2 on usage or input errors.

mod commands;
pub mod document;
pub mod report;

use std::ffi::OsString;
use std::fmt;

use clap::{Args, Parser, Subcommand};

pub use document::FieldDocument;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Location {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    Core(crossing_core::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Location {
                path,
                line,
                column,
                message,
            } => write!(f, "{path}:{line}:{column}: {message}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<crossing_core::Error> for CliError {
    fn from(e: crossing_core::Error) -> Self {
        CliError::Core(e)
    }
}

/// What a run produced; `main` prints it and exits with `code`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "crossing", version, about = "Normal forms, resonances and holonomy of crossing-type vector fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Print one line of JSON instead of aligned text.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug, Clone)]
struct FieldOpts {
    /// Input document (`-` reads stdin).
    #[arg(long, value_name = "PATH")]
    field: String,
    /// z-degree cap; overrides the document header.
    #[arg(long, value_name = "D")]
    degree: Option<u32>,
    /// Reject fields that are not x-normalized.
    #[arg(long)]
    require_x_normalized: bool,
}

#[derive(Args, Debug, Clone)]
struct EigenOpts {
    /// Document whose header supplies `mu`.
    #[arg(long, value_name = "PATH")]
    field: Option<String>,
    /// Comma-separated eigenvalues, e.g. `-1/3,-1/2`.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    mu: Option<String>,
    /// Degree bound.
    #[arg(long, value_name = "D")]
    degree: Option<u32>,
}

#[derive(Args, Debug, Clone)]
struct WindowOpts {
    #[command(flatten)]
    eigen: EigenOpts,
    /// Laurent exponent window `lo,hi` for x.
    #[arg(long, value_name = "LO,HI", allow_hyphen_values = true, default_value = "-5,5")]
    x_window: String,
}

#[derive(Args, Debug, Clone)]
struct NumericOpts {
    /// Integrator tolerance.
    #[arg(long, value_name = "TOL", default_value_t = crossing_core::holonomy::DEFAULT_TOL)]
    tol: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form, normalizer and resonant coefficients of an x-normalized field.
    Normalize {
        #[command(flatten)]
        input: FieldOpts,
        /// Largest x-exponent kept.
        #[arg(long, value_name = "M")]
        x_cap: Option<i32>,
        #[command(flatten)]
        out: Output,
    },
    /// Resonant indices up to a degree bound, and the negative-resonance decision.
    Resonances {
        #[command(flatten)]
        eigen: EigenOpts,
        #[command(flatten)]
        out: Output,
    },
    /// Classification in dimension 2 from the eigenvalue ratio.
    Classify2 {
        #[arg(long, value_name = "COEF", allow_hyphen_values = true)]
        lambda: String,
        #[command(flatten)]
        out: Output,
    },
    /// Classification in dimension 3 from the two transverse eigenvalues.
    Classify3 {
        #[arg(long, value_name = "COEF", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, value_name = "COEF", allow_hyphen_values = true)]
        mu: String,
        #[command(flatten)]
        out: Output,
    },
    /// Monomial basis of the centralizer of x∂x + L(mu) in an x-window.
    Centralizer {
        #[command(flatten)]
        window: WindowOpts,
        #[command(flatten)]
        out: Output,
    },
    /// Checks that no centralizer monomial has a negative x-exponent when ntnr holds.
    CheckTheorem1 {
        #[command(flatten)]
        window: WindowOpts,
        #[command(flatten)]
        out: Output,
    },
    /// Bracket of the two fields in a two-section document.
    CheckCommute {
        #[command(flatten)]
        input: FieldOpts,
        #[command(flatten)]
        out: Output,
    },
    /// Exponential of a nilpotent field.
    Exp {
        #[command(flatten)]
        input: FieldOpts,
        #[command(flatten)]
        out: Output,
    },
    /// Logarithm of an automorphism tangent to the identity.
    Log {
        #[command(flatten)]
        input: FieldOpts,
        #[command(flatten)]
        out: Output,
    },
    /// Holonomy jet of the separatrix at x = 1.
    Holonomy {
        #[command(flatten)]
        input: FieldOpts,
        #[command(flatten)]
        numeric: NumericOpts,
        #[command(flatten)]
        out: Output,
    },
    /// Compares the holonomies of a field and its pushforward by a map.
    ConjugacyCheck {
        #[command(flatten)]
        input: FieldOpts,
        #[command(flatten)]
        numeric: NumericOpts,
        /// Largest acceptable residual.
        #[arg(long, value_name = "R", default_value_t = 1e-6)]
        threshold: f64,
        #[command(flatten)]
        out: Output,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match commands::dispatch(cli.command) {
        Ok((value, json, code)) => Outcome {
            code,
            stdout: if json { report::json_line(&value) } else { report::text(&value) },
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
