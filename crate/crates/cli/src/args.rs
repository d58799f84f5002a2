use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "warpcurv", version, about = "Curvature of multiply warped spacetimes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ricci components, isotropy and null sectional curvature at a point.
    Report(ReportArgs),
    /// Closed forms against the coordinate oracle over random samples.
    Compare(CompareArgs),
    /// A quantity along a coordinate line, as CSV.
    Scan(ScanArgs),
    /// Lists the built-in models.
    Catalog(CatalogArgs),
    /// Prints a model's specification as JSON.
    Export(ModelArgs),
    /// Checks a model's known facts along both evaluation paths.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Catalog model name.
    #[arg(required_unless_present = "spec")]
    pub model: Option<String>,
    /// Specification file in the JSON manifold format.
    #[arg(long, conflicts_with = "model")]
    pub spec: Option<PathBuf>,
    /// Mass parameter for schwarzschild_exterior.
    #[arg(long)]
    pub mass: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Coordinates as name=value pairs, e.g. t=1,x=0; unset coordinates use the default point.
    #[arg(long)]
    pub point: Option<String>,
    #[arg(long, env = "WARPCURV_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Number of degenerate planes to sample.
    #[arg(long, default_value_t = 10)]
    pub planes: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ComparePath {
    AsDerived,
    AsPrinted,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, env = "WARPCURV_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ComparePath::AsDerived)]
    pub path: ComparePath,
    /// Where to write the discrepancy ledger.
    #[arg(long, default_value = "ledger.json")]
    pub ledger: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanQuantity {
    #[value(name = "KU", alias = "ku")]
    Ku,
    #[value(name = "ricci")]
    Ricci,
    #[value(name = "numerator")]
    Numerator,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Coordinate to vary.
    #[arg(long, default_value = "t")]
    pub var: String,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long, default_value_t = 21)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = ScanQuantity::Ku)]
    pub quantity: ScanQuantity,
    /// Fixed coordinates for the remaining axes.
    #[arg(long)]
    pub point: Option<String>,
    #[arg(long, env = "WARPCURV_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct CatalogArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, env = "WARPCURV_SEED", default_value_t = 0)]
    pub seed: u64,
}
