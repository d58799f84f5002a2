use std::io::Write;

use warpcurv::null::{seeded_plane, specialized_null_curvature};

use crate::args::{ScanArgs, ScanQuantity};
use crate::csv_float;
use crate::error::{CliError, CliResult};
use crate::load::{load, parse_point};
use crate::report::{oracle_null, ricci_pair, scalar_curvature};

pub const CSV_HEADER: &str = "coordinate,quantity,value,oracle_value,abs_diff";

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub coordinate: f64,
    pub value: f64,
    pub oracle_value: f64,
}

/// Grid values; every grid point reuses the same plane seed so the plane has
/// the same coefficients in the orthonormal frames.
pub fn scan(args: &ScanArgs) -> CliResult<(&'static str, Vec<ScanRow>)> {
    let m = load(&args.model)?;
    let spec = &m.spec;
    let names = spec.coordinate_names();
    let idx = names.iter().position(|n| n == &args.var).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown coordinate '{}'; coordinates are {}",
            args.var,
            names.join(", ")
        ))
    })?;
    if args.steps == 0 {
        return Err(CliError::Usage("--steps must be positive".into()));
    }
    let base = parse_point(spec, args.point.as_deref())?;
    let mut flat = spec.flatten_point(&base)?;
    let label = match args.quantity {
        ScanQuantity::Ku => "KU",
        ScanQuantity::Ricci => "ricci_scalar",
        ScanQuantity::Numerator => "numerator",
    };
    let mut rows = Vec::with_capacity(args.steps);
    for k in 0..args.steps {
        let x = if args.steps == 1 {
            args.from
        } else {
            args.from + (args.to - args.from) * k as f64 / (args.steps - 1) as f64
        };
        flat[idx] = x;
        let p = spec.split_point(&flat)?;
        spec.check_point(&p)?;
        let (value, oracle_value) = match args.quantity {
            ScanQuantity::Ku | ScanQuantity::Numerator => {
                let plane = seeded_plane(spec, &p, args.seed)?;
                let r = specialized_null_curvature(spec, &plane)?;
                let o = oracle_null(spec, &plane)?;
                if args.quantity == ScanQuantity::Ku {
                    (r.value, o)
                } else {
                    (r.numerator, o * plane.g_ss)
                }
            }
            ScanQuantity::Ricci => {
                let (closed, oracle) = ricci_pair(spec, &p)?;
                (
                    scalar_curvature(spec, &p, &closed)?,
                    scalar_curvature(spec, &p, &oracle)?,
                )
            }
        };
        rows.push(ScanRow {
            coordinate: x,
            value,
            oracle_value,
        });
    }
    Ok((label, rows))
}

pub fn run(args: &ScanArgs, out: &mut dyn Write) -> CliResult<i32> {
    let (label, rows) = scan(args)?;
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{label},{},{},{}",
            csv_float(r.coordinate),
            csv_float(r.value),
            csv_float(r.oracle_value),
            csv_float((r.value - r.oracle_value).abs())
        )?;
    }
    Ok(0)
}
