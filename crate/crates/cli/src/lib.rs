//! Job files in, reports out.
//!
//! A job file has a `[space]` section, any number of `[complex.NAME]` and
//! `[class.NAME]` sections, and one `[job]` section naming the operation.

pub mod job;
pub mod report;
pub mod run;
pub mod syntax;

use std::fmt;

pub use job::{parse_input, JobSpec, Op};
pub use report::{Node, Report};
pub use run::run;
pub use syntax::ParseError;

#[derive(Debug)]
pub enum CliError {
    Parse(ParseError),
    Precondition(String),
    Core(equivar::Error),
    Io(String),
}

impl CliError {
    /// 2 for bad input or a violated precondition, 3 for a failed certificate.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_certification_failure() => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "parse error: {e}"),
            CliError::Precondition(rule) => write!(f, "precondition violated: {rule}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<equivar::Error> for CliError {
    fn from(e: equivar::Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Table,
    Machine,
}

/// Parses `text`, applies flag overrides, runs, and renders.
pub fn execute(
    text: &str,
    order: Option<i64>,
    window: Option<(i64, i64)>,
    format: Format,
) -> Result<String, CliError> {
    let mut job = parse_input(text)?;
    if order.is_some() {
        job.params.order = order;
    }
    if window.is_some() {
        job.params.window = window;
    }
    let report = run(&job)?;
    Ok(match format {
        Format::Table => report.render_table(),
        Format::Machine => report.render_machine(),
    })
}

/// Parses `a..b`.
pub fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("window `{s}` must look like a..b"))?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|_| format!("`{lo}` is not an integer"))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|_| format!("`{hi}` is not an integer"))?;
    if lo > hi {
        return Err(format!("window {lo}..{hi} is empty"));
    }
    Ok((lo, hi))
}
