use std::io::Write;

use serde::Serialize;
use warpcurv::error::Result as GeoResult;
use warpcurv::formulas::ricci_mwp;
use warpcurv::manifold::{ManifoldSpec, Point};
use warpcurv::null::{
    applicable_printed_forms, as_printed, default_frame, isotropy_scan, seeded_plane, specialized_null_curvature,
    NullCurvatureResult, NullPlane, PrintedForm,
};
use warpcurv::oracle::{null_sectional_oracle, riemann_oracle};

use crate::args::{Format, ReportArgs};
use crate::error::CliResult;
use crate::load::{load, parse_point};
use crate::{csv_float, TOOL_VERSION};

/// Agreement threshold between two evaluation paths.
pub fn tolerance(a: f64, b: f64) -> f64 {
    1e-10_f64.max(1e-8 * a.abs().max(b.abs()))
}

pub fn oracle_null(spec: &ManifoldSpec, plane: &NullPlane) -> GeoResult<f64> {
    let x = spec.flatten_point(&plane.point)?;
    null_sectional_oracle(&spec.assemble_chart(), &x, &plane.l.flatten(), &plane.s.flatten())
}

/// Ricci components in coordinates from the closed forms and from the oracle.
pub fn ricci_pair(spec: &ManifoldSpec, p: &Point) -> GeoResult<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let n = spec.total_dim();
    let basis = (0..n)
        .map(|k| {
            let mut c = vec![0.0; n];
            c[k] = 1.0;
            spec.split(&c)
        })
        .collect::<GeoResult<Vec<_>>>()?;
    let closed = basis
        .iter()
        .map(|a| basis.iter().map(|b| ricci_mwp(spec, p, a, b)).collect())
        .collect::<GeoResult<Vec<Vec<f64>>>>()?;
    let t = riemann_oracle(&spec.assemble_chart(), &spec.flatten_point(p)?)?;
    let oracle = (0..n).map(|i| (0..n).map(|j| t.ricci[(i, j)]).collect()).collect();
    Ok((closed, oracle))
}

/// `Σ g^{ij} Ric_ij` for a coordinate Ricci matrix.
pub fn scalar_curvature(spec: &ManifoldSpec, p: &Point, ric: &[Vec<f64>]) -> GeoResult<f64> {
    let g = spec.metric_matrix(p)?;
    let gi = g
        .try_inverse()
        .ok_or_else(|| warpcurv::error::GeometryError::Degeneracy("metric not invertible".into()))?;
    let n = ric.len();
    Ok((0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| gi[(i, j)] * ric[i][j])
        .sum())
}

#[derive(Debug, Serialize)]
pub struct PrintedValue {
    pub form: PrintedForm,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Every applicable printed form on the plane; remarks use the same plane
/// spanned with a fiber-tangent `S`.
pub fn printed_values(spec: &ManifoldSpec, plane: &NullPlane) -> Vec<(PrintedForm, GeoResult<NullCurvatureResult>)> {
    applicable_printed_forms(spec)
        .into_iter()
        .map(|f| {
            let r = if f.needs_fiber_s() {
                plane.without_base_part(spec).and_then(|pl| as_printed(f, spec, &pl))
            } else {
                as_printed(f, spec, plane)
            };
            (f, r)
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct RicciBlock {
    pub specialized: Vec<Vec<f64>>,
    pub oracle: Vec<Vec<f64>>,
    pub max_abs_diff: f64,
    pub scalar: f64,
}

#[derive(Debug, Serialize)]
pub struct IsotropyBlock {
    pub planes: usize,
    pub mean: f64,
    pub max_deviation: f64,
}

#[derive(Debug, Serialize)]
pub struct PlaneReport {
    pub index: usize,
    pub plane_seed: u64,
    pub l: Vec<f64>,
    pub s: Vec<f64>,
    pub specialized: NullCurvatureResult,
    pub oracle: f64,
    pub abs_diff: f64,
    pub discrepancy: bool,
    pub as_printed: Vec<PrintedValue>,
}

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub tool_version: &'static str,
    pub model: String,
    pub spec_hash: String,
    pub seed: u64,
    pub coordinates: Vec<String>,
    pub point: Vec<f64>,
    pub ricci: RicciBlock,
    pub isotropy: IsotropyBlock,
    pub planes: Vec<PlaneReport>,
    pub discrepancies: usize,
}

pub fn build(args: &ReportArgs) -> CliResult<ReportDocument> {
    let m = load(&args.model)?;
    let spec = &m.spec;
    let p = parse_point(spec, args.point.as_deref())?;
    let (closed, oracle) = ricci_pair(spec, &p)?;
    let max_abs_diff = closed
        .iter()
        .flatten()
        .zip(oracle.iter().flatten())
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    let scalar = scalar_curvature(spec, &p, &closed)?;
    let u = default_frame(spec, &p)?;
    let iso = isotropy_scan(spec, &p, &u, args.planes.max(2), args.seed)?;
    let mut planes = Vec::with_capacity(args.planes);
    for index in 0..args.planes {
        let plane_seed = args.seed.wrapping_add(index as u64);
        let plane = seeded_plane(spec, &p, plane_seed)?;
        let specialized = specialized_null_curvature(spec, &plane)?;
        let o = oracle_null(spec, &plane)?;
        let abs_diff = (specialized.value - o).abs();
        let as_printed = printed_values(spec, &plane)
            .into_iter()
            .map(|(form, r)| match r {
                Ok(r) => PrintedValue {
                    form,
                    value: Some(r.value),
                    error: None,
                },
                Err(e) => PrintedValue {
                    form,
                    value: None,
                    error: Some(e.to_string()),
                },
            })
            .collect();
        planes.push(PlaneReport {
            index,
            plane_seed,
            l: plane.l.flatten(),
            s: plane.s.flatten(),
            discrepancy: abs_diff > tolerance(specialized.value, o),
            specialized,
            oracle: o,
            abs_diff,
            as_printed,
        });
    }
    Ok(ReportDocument {
        tool_version: TOOL_VERSION,
        spec_hash: m.spec_hash()?,
        model: m.name,
        seed: args.seed,
        coordinates: spec.coordinate_names(),
        point: spec.flatten_point(&p)?,
        ricci: RicciBlock {
            specialized: closed,
            oracle,
            max_abs_diff,
            scalar,
        },
        isotropy: IsotropyBlock {
            planes: iso.values.len(),
            mean: iso.mean,
            max_deviation: iso.max_deviation,
        },
        discrepancies: planes.iter().filter(|p| p.discrepancy).count(),
        planes,
    })
}

pub fn run(args: &ReportArgs, out: &mut dyn Write) -> CliResult<i32> {
    let doc = build(args)?;
    match args.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => write_csv(&doc, out)?,
        Format::Text => write_text(&doc, out)?,
    }
    Ok(0)
}

fn write_csv(doc: &ReportDocument, out: &mut dyn Write) -> CliResult<()> {
    writeln!(out, "item,quantity,value,oracle_value,abs_diff")?;
    let n = doc.ricci.specialized.len();
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (doc.ricci.specialized[i][j], doc.ricci.oracle[i][j]);
            writeln!(
                out,
                "{}{},ricci,{},{},{}",
                doc.coordinates[i],
                doc.coordinates[j],
                csv_float(a),
                csv_float(b),
                csv_float((a - b).abs())
            )?;
        }
    }
    for p in &doc.planes {
        writeln!(
            out,
            "plane{},KU,{},{},{}",
            p.index,
            csv_float(p.specialized.value),
            csv_float(p.oracle),
            csv_float(p.abs_diff)
        )?;
    }
    Ok(())
}

fn write_text(doc: &ReportDocument, out: &mut dyn Write) -> CliResult<()> {
    writeln!(out, "model      {}", doc.model)?;
    writeln!(out, "spec hash  {}", doc.spec_hash)?;
    let point: Vec<String> = doc
        .coordinates
        .iter()
        .zip(&doc.point)
        .map(|(n, v)| format!("{n}={v}"))
        .collect();
    writeln!(out, "point      {}", point.join(", "))?;
    writeln!(out, "seed       {}", doc.seed)?;
    writeln!(out, "\nRicci (closed form)")?;
    for row in &doc.ricci.specialized {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>14.6e}")).collect();
        writeln!(out, "  {}", cells.join(" "))?;
    }
    writeln!(out, "  scalar curvature {:.12e}", doc.ricci.scalar)?;
    writeln!(out, "  max |closed − oracle| {:.3e}", doc.ricci.max_abs_diff)?;
    writeln!(
        out,
        "\nisotropy over {} planes: mean K_U {:.12e}, max deviation {:.3e}",
        doc.isotropy.planes, doc.isotropy.mean, doc.isotropy.max_deviation
    )?;
    writeln!(out, "\n{:>5} {:>22} {:>22} {:>10}", "plane", "K_U", "oracle", "|diff|")?;
    for p in &doc.planes {
        writeln!(
            out,
            "{:>5} {:>22.14e} {:>22.14e} {:>10.3e}{}",
            p.index,
            p.specialized.value,
            p.oracle,
            p.abs_diff,
            if p.discrepancy { "  !" } else { "" }
        )?;
    }
    writeln!(out, "\ndiscrepancies {}", doc.discrepancies)?;
    Ok(())
}
