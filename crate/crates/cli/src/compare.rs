use std::io::Write;

use serde::{Deserialize, Serialize};
use warpcurv::manifold::{ManifoldSpec, Point};
use warpcurv::null::{
    default_frame, plane_rng, sample_null_plane, specialized_null_curvature, NullCurvatureResult, NullPlane,
};

use crate::args::{CompareArgs, ComparePath};
use crate::error::CliResult;
use crate::load::load;
use crate::report::{oracle_null, printed_values, tolerance};

pub const AS_DERIVED: &str = "as_derived";
pub const AS_PRINTED: &str = "as_printed";
pub const ORACLE: &str = "oracle";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub model: String,
    pub point: serde_json::Map<String, serde_json::Value>,
    pub plane_seed: u64,
    pub term: String,
    pub path_a: String,
    pub path_b: String,
    pub value_a: f64,
    pub value_b: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareSummary {
    pub model: String,
    pub path: &'static str,
    pub samples: usize,
    pub seed: u64,
    /// Largest `|closed form − oracle|` over all samples.
    pub max_abs_diff: f64,
    pub agree: bool,
    pub ledger_entries: usize,
}

/// The `i`-th sample: point and plane drawn from one per-sample seed.
pub fn sample(spec: &ManifoldSpec, plane_seed: u64) -> warpcurv::error::Result<NullPlane> {
    let mut rng = plane_rng(plane_seed);
    let p = spec.sample_point(&mut rng);
    let u = default_frame(spec, &p)?;
    sample_null_plane(spec, &p, &u, &mut rng)
}

fn point_map(spec: &ManifoldSpec, p: &Point) -> CliResult<serde_json::Map<String, serde_json::Value>> {
    let flat = spec.flatten_point(p)?;
    Ok(spec
        .coordinate_names()
        .into_iter()
        .zip(flat)
        .map(|(n, v)| (n, serde_json::json!(v)))
        .collect())
}

struct Recorder<'a> {
    model: &'a str,
    point: serde_json::Map<String, serde_json::Value>,
    plane_seed: u64,
    entries: &'a mut Vec<LedgerEntry>,
}

impl Recorder<'_> {
    fn check(&mut self, term: String, path_a: &str, path_b: &str, a: f64, b: f64) -> bool {
        let d = (a - b).abs();
        let bad = !(d <= tolerance(a, b));
        if bad {
            self.entries.push(LedgerEntry {
                model: self.model.to_string(),
                point: self.point.clone(),
                plane_seed: self.plane_seed,
                term,
                path_a: path_a.into(),
                path_b: path_b.into(),
                value_a: a,
                value_b: b,
                abs_diff: d,
            });
        }
        bad
    }
}

fn term_labels<'a>(a: &'a NullCurvatureResult, b: &'a NullCurvatureResult) -> Vec<&'a str> {
    let mut labels: Vec<&str> = Vec::new();
    for t in a.breakdown.iter().chain(&b.breakdown) {
        if !labels.contains(&t.label.as_str()) {
            labels.push(&t.label);
        }
    }
    labels
}

/// Runs the comparison and returns the summary and ledger.
pub fn compare(args: &CompareArgs) -> CliResult<(CompareSummary, Vec<LedgerEntry>)> {
    let m = load(&args.model)?;
    let spec = &m.spec;
    let mut ledger = Vec::new();
    let mut max_abs_diff = 0.0_f64;
    let mut agree = true;
    for i in 0..args.samples {
        let plane_seed = args.seed.wrapping_add(i as u64);
        let plane = sample(spec, plane_seed)?;
        let mut rec = Recorder {
            model: &m.name,
            point: point_map(spec, &plane.point)?,
            plane_seed,
            entries: &mut ledger,
        };
        let derived = specialized_null_curvature(spec, &plane)?;
        let o = oracle_null(spec, &plane)?;
        max_abs_diff = max_abs_diff.max((derived.value - o).abs());
        if rec.check("value".into(), AS_DERIVED, ORACLE, derived.value, o) {
            agree = false;
        }
        if rec.check(
            "numerator".into(),
            AS_DERIVED,
            ORACLE,
            derived.numerator,
            o * plane.g_ss,
        ) {
            agree = false;
        }
        if args.path == ComparePath::AsPrinted {
            for (form, printed) in printed_values(spec, &plane) {
                let pl = if form.needs_fiber_s() {
                    plane.without_base_part(spec)?
                } else {
                    plane.clone()
                };
                let reference = form.derived(spec, &pl)?;
                let name = form.name();
                let printed = match printed {
                    Ok(r) => r,
                    Err(e) => {
                        rec.entries.push(LedgerEntry {
                            model: m.name.clone(),
                            point: rec.point.clone(),
                            plane_seed,
                            term: format!("{name}.error: {e}"),
                            path_a: AS_PRINTED.into(),
                            path_b: AS_DERIVED.into(),
                            value_a: 0.0,
                            value_b: reference.value,
                            abs_diff: reference.value.abs(),
                        });
                        continue;
                    }
                };
                for label in term_labels(&reference, &printed) {
                    rec.check(
                        format!("{name}.{label}"),
                        AS_PRINTED,
                        AS_DERIVED,
                        printed.term(label),
                        reference.term(label),
                    );
                }
                rec.check(
                    format!("{name}.denominator"),
                    AS_PRINTED,
                    AS_DERIVED,
                    printed.denominator,
                    reference.denominator,
                );
                let o = if form.needs_fiber_s() {
                    oracle_null(spec, &pl)?
                } else {
                    o
                };
                rec.check(format!("{name}.value"), AS_PRINTED, ORACLE, printed.value, o);
            }
        }
    }
    let summary = CompareSummary {
        model: m.name.clone(),
        path: match args.path {
            ComparePath::AsDerived => AS_DERIVED,
            ComparePath::AsPrinted => AS_PRINTED,
        },
        samples: args.samples,
        seed: args.seed,
        max_abs_diff,
        agree,
        ledger_entries: ledger.len(),
    };
    Ok((summary, ledger))
}

pub fn run(args: &CompareArgs, out: &mut dyn Write) -> CliResult<i32> {
    let (summary, ledger) = compare(args)?;
    let file = std::fs::File::create(&args.ledger)?;
    let mut w = std::io::BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, &ledger)?;
    writeln!(w)?;
    w.flush()?;
    serde_json::to_writer_pretty(&mut *out, &summary)?;
    writeln!(out)?;
    Ok(if summary.agree { 0 } else { 1 })
}
