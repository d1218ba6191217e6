//! Command-line frontend.
//!
//! Exit codes: 0 on success, 1 when a method ran but its property failed
//! (non-convergence, metric violation, numerical failure), 2 on usage or
//! input errors.

mod commands;
pub mod function_spec;
pub mod metric_check;
mod render;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::numerics::StepSchedule;

pub use commands::{
    DiffDocument, HolderDocument, IntegrateDocument, MetricDocument, TaylorDocument, TaylorRow,
    TrailRow, LITERAL_WARNING,
};
pub use function_spec::FunctionSpec;

/// Environment variable selecting the digits printed in table mode.
pub const PRECISION_ENV: &str = "FRACTAL_CALC_PRECISION";
const DEFAULT_PRECISION: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "fractal-calc",
    version,
    about = "Local fractional calculus toolkit"
)]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    /// Fractal order alpha, 0 < alpha <= 1
    #[arg(long, global = true, default_value_t = 1.0)]
    pub alpha: f64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,

    /// Write the report to this file instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiffMethod {
    /// Difference quotient along a step schedule
    Limit,
    /// Exact coefficient shift of the series form
    Series,
    /// Log-log Hölder fit
    Holder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Literal,
    Measure,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Fixed,
    Newton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Base,
    Fractal,
}

#[derive(Debug, Subcommand)]
#[command(allow_negative_numbers = true)]
pub enum Command {
    /// Local fractional derivative at a point
    Diff {
        /// Catalog name, const:v, affine:c:b or series:[c0,...]@center
        function: String,
        x0: f64,
        #[arg(long, value_enum, default_value_t = DiffMethod::Limit)]
        method: DiffMethod,
        /// Step schedule h0:ratio:count
        #[arg(long, value_parser = parse_schedule)]
        schedule: Option<StepSchedule>,
    },
    /// Local fractional integral over [a, b]
    Integrate {
        /// Catalog name, const:v, affine:c:b or series:[c0,...]@center
        function: String,
        a: f64,
        b: f64,
        #[arg(long, value_enum, default_value_t = Backend::Series)]
        backend: Backend,
        #[arg(long, default_value_t = 1000)]
        partitions: usize,
    },
    /// Fixed-point or Newton-type iteration
    Solve {
        /// Catalog name, const:v, affine:c:b or series:[c0,...]@center
        function: String,
        x0: f64,
        #[arg(long, value_enum, default_value_t = Mode::Fixed)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Variant::Base)]
        variant: Variant,
        /// Tolerance on |x_{k+1} - x_k|; the stopping threshold on the
        /// fractal step is tol^alpha
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        /// Tail length for the contraction estimate
        #[arg(long, default_value_t = 5)]
        window: usize,
    },
    /// Truncated generalized Taylor series with remainder bounds
    Taylor {
        /// Catalog name, const:v, affine:c:b or series:[c0,...]@center
        function: String,
        x: f64,
        #[arg(long)]
        terms: Option<usize>,
        /// Bound on the next local fractional derivative; when omitted, a
        /// grid estimate from the series is used, which is not a proof
        #[arg(long)]
        derivative_bound: Option<f64>,
    },
    /// Hölder exponent from a log-log fit (ignores --alpha)
    Holder {
        /// Catalog name, const:v, affine:c:b or series:[c0,...]@center
        function: String,
        x0: f64,
        #[arg(long, value_parser = parse_schedule)]
        schedule: Option<StepSchedule>,
    },
    /// Verify the metric axioms over a CSV file of base coordinates
    CheckMetric {
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long)]
        points: PathBuf,
    },
    /// List the test-function catalog
    Catalog,
}

fn parse_schedule(s: &str) -> std::result::Result<StepSchedule, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [h0, ratio, count] = parts.as_slice() else {
        return Err(format!("expected h0:ratio:count, got {s:?}"));
    };
    let h0 = h0.parse::<f64>().map_err(|e| e.to_string())?;
    let ratio = ratio.parse::<f64>().map_err(|e| e.to_string())?;
    let count = count.parse::<usize>().map_err(|e| e.to_string())?;
    StepSchedule::new(h0, ratio, count).map_err(|e| e.to_string())
}

/// Captured result of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Report produced by a command before it is written out.
pub(crate) struct Rendered {
    pub body: String,
    pub warning: Option<String>,
    pub code: i32,
}

pub(crate) fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Evaluation { .. }
        | Error::DegenerateFit(_)
        | Error::Range { .. }
        | Error::DerivativeVanishes { .. }
        | Error::InsufficientData { .. }
        | Error::NoSignChange { .. }
        | Error::BoundUnavailable(_) => 1,
        _ => 2,
    }
}

fn precision() -> usize {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&p: &usize| p <= 17)
        .unwrap_or(DEFAULT_PRECISION)
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
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let rendered = match commands::dispatch(&cli, precision()) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                code: exit_code(&e),
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let mut stderr = rendered
        .warning
        .map(|w| format!("warning: {w}\n"))
        .unwrap_or_default();
    let stdout = match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered.body) {
                stderr.push_str(&format!("error: cannot write {}: {e}\n", path.display()));
                return Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr,
                };
            }
            String::new()
        }
        None => rendered.body,
    };
    Outcome {
        code: rendered.code,
        stdout,
        stderr,
    }
}
