//! Command-line front end: reports, formula comparisons and grid scans.

pub mod args;
pub mod compare;
pub mod error;
pub mod load;
pub mod report;
pub mod scan;

pub use args::{Cli, Command};
pub use error::{CliError, CliResult};

use std::io::Write;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Runs a parsed command, writing primary output to `out`.
/// Returns the process exit status for non-error outcomes.
pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<i32> {
    match cli.command {
        Command::Report(a) => report::run(&a, out),
        Command::Compare(a) => compare::run(&a, out),
        Command::Scan(a) => scan::run(&a, out),
        Command::Catalog(a) => load::catalog_cmd(&a, out),
        Command::Export(a) => load::export_cmd(&a, out),
        Command::Validate(a) => load::validate_cmd(&a, out),
    }
}

/// Formats a float with 12 significant digits for CSV output.
pub fn csv_float(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    format!("{v:.11e}")
}
