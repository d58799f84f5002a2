//! Named spacetimes with analytic facts, checked through both the closed
//! forms and the coordinate oracle.

use serde::Serialize;

use crate::error::{GeometryError, Result};
use crate::formulas::{ricci_mwp, riemann_mwp, WarpedFrame};
use crate::manifold::{FiberSpec, Interval, ManifoldSpec, Point, TangentVector};
use crate::null::{default_frame, isotropy_scan, plane_rng, sample_null_plane, specialized_null_curvature, NullPlane};
use crate::oracle::{null_sectional_oracle, riemann_oracle};
use crate::scalar::{ScalarFn, WarpingFunction};

pub const DEFAULT_SCHWARZSCHILD_MASS: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Quantity {
    /// `K_U` on random degenerate planes.
    NullCurvature,
    /// `K_U − K_F` on planes whose `S` is tangent to the spatial factor.
    NullMinusFiber,
    /// Largest component of `Ric − λg`.
    EinsteinResidual { lambda: f64 },
    /// Largest component of the Riemann tensor.
    Riemann,
    /// Spread of `K_U` over planes at one point.
    Isotropy { planes: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Expected {
    Equals(f64),
    /// `k_F / b(t)²` with the first warping function.
    InverseSquareWarp(f64),
    AtLeast(f64),
    /// No closed value; the closed form must agree with the oracle.
    MatchesOracle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Region {
    /// Seeded random points inside the guard bands.
    Sampled(usize),
    /// Default fiber point at the listed times.
    Times(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnownFact {
    pub quantity: Quantity,
    pub region: Region,
    pub expected: Expected,
    pub tolerance: f64,
    pub note: &'static str,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub spec: ManifoldSpec,
    pub known_facts: Vec<KnownFact>,
}

fn fact(quantity: Quantity, region: Region, expected: Expected, tolerance: f64, note: &'static str) -> KnownFact {
    KnownFact {
        quantity,
        region,
        expected,
        tolerance,
        note,
    }
}

fn of_t(f: ScalarFn) -> WarpingFunction {
    WarpingFunction::of_time(f)
}

pub const MODEL_NAMES: [&str; 8] = [
    "minkowski",
    "einstein_static",
    "anti_de_sitter_cover",
    "schwarzschild_exterior",
    "kasner_vacuum",
    "kasner_flat",
    "grw_exponential",
    "generalized_reissner_nordstrom_demo",
];

pub fn catalog() -> Vec<CatalogEntry> {
    MODEL_NAMES
        .iter()
        .map(|n| entry(n).expect("catalog names resolve"))
        .collect()
}

/// Looks up a catalog entry by name.
pub fn entry(name: &str) -> Result<CatalogEntry> {
    use Expected::*;
    use Quantity::*;
    use Region::*;
    let e = match name {
        "minkowski" => CatalogEntry {
            name: "minkowski",
            description: "R × R³ with −dt² + dx² + dy² + dz²",
            spec: ManifoldSpec::grw(
                Interval::real_line(),
                of_t(ScalarFn::constant(1.0)),
                FiberSpec::euclidean(3),
            )?,
            known_facts: vec![
                fact(NullCurvature, Sampled(20), Equals(0.0), 1e-10, "flat"),
                fact(Riemann, Sampled(10), Equals(0.0), 1e-10, "flat"),
                fact(Isotropy { planes: 10 }, Sampled(3), Equals(0.0), 1e-10, "flat"),
            ],
        },
        "einstein_static" => CatalogEntry {
            name: "einstein_static",
            description: "R × S³ with −dt² + g_S³",
            spec: ManifoldSpec::ssst(
                Interval::real_line(),
                of_t(ScalarFn::constant(1.0)),
                FiberSpec::sphere(3, 1.0),
            )?,
            known_facts: vec![
                fact(
                    NullCurvature,
                    Sampled(20),
                    Equals(1.0),
                    1e-10,
                    "K_U = K_F for a constant potential",
                ),
                fact(
                    NullMinusFiber,
                    Sampled(20),
                    Equals(0.0),
                    1e-10,
                    "constant potential has zero Hessian",
                ),
                fact(Isotropy { planes: 10 }, Sampled(3), Equals(0.0), 1e-10, "round sphere"),
            ],
        },
        "anti_de_sitter_cover" => CatalogEntry {
            name: "anti_de_sitter_cover",
            description: "R × H³ with −cosh²r dt² + g_H³",
            spec: ManifoldSpec::ssst(
                Interval::real_line(),
                WarpingFunction::on_axis(ScalarFn::Cosh { coeff: 1.0, rate: 1.0 }, 0),
                FiberSpec::hyperbolic(3, 1.0),
            )?,
            known_facts: vec![
                fact(NullCurvature, Sampled(20), Equals(0.0), 1e-10, "constant curvature −1"),
                fact(
                    EinsteinResidual { lambda: -3.0 },
                    Sampled(10),
                    Equals(0.0),
                    1e-8,
                    "Ric = −3g",
                ),
                fact(
                    NullMinusFiber,
                    Sampled(20),
                    Equals(1.0),
                    1e-8,
                    "H(f) = f g_F gives K_U − K_F = +1",
                ),
            ],
        },
        "schwarzschild_exterior" => return schwarzschild_exterior(DEFAULT_SCHWARZSCHILD_MASS),
        "kasner_vacuum" => CatalogEntry {
            name: "kasner_vacuum",
            description: "Kasner with φ = t and p = (2/3, 2/3, −1/3)",
            spec: ManifoldSpec::kasner(
                Interval::positive(),
                ScalarFn::power(1.0, 1.0),
                vec![2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0],
                vec![FiberSpec::euclidean(1); 3],
            )?,
            known_facts: vec![
                fact(
                    EinsteinResidual { lambda: 0.0 },
                    Times(vec![0.5, 1.0, 2.0]),
                    Equals(0.0),
                    1e-8,
                    "vacuum",
                ),
                fact(
                    Isotropy { planes: 20 },
                    Times(vec![1.0]),
                    AtLeast(1e-3),
                    0.0,
                    "anisotropic",
                ),
                fact(NullCurvature, Sampled(20), MatchesOracle, 1e-8, "closed form"),
            ],
        },
        "kasner_flat" => CatalogEntry {
            name: "kasner_flat",
            description: "Kasner with φ = t and p = (1, 0, 0)",
            spec: ManifoldSpec::kasner(
                Interval::positive(),
                ScalarFn::power(1.0, 1.0),
                vec![1.0, 0.0, 0.0],
                vec![FiberSpec::euclidean(1); 3],
            )?,
            known_facts: vec![
                fact(Riemann, Sampled(10), Equals(0.0), 1e-9, "flat"),
                fact(NullCurvature, Sampled(20), Equals(0.0), 1e-9, "flat"),
            ],
        },
        "grw_exponential" => CatalogEntry {
            name: "grw_exponential",
            description: "R ×_{e^t} S³",
            spec: ManifoldSpec::grw(
                Interval::real_line(),
                of_t(ScalarFn::exp(1.0, 1.0)),
                FiberSpec::sphere(3, 1.0),
            )?,
            known_facts: vec![
                fact(
                    NullCurvature,
                    Sampled(20),
                    InverseSquareWarp(1.0),
                    1e-10,
                    "K_U = K_F/b² for exponential b",
                ),
                fact(
                    Isotropy { planes: 10 },
                    Sampled(3),
                    Equals(0.0),
                    1e-10,
                    "isotropic fiber",
                ),
            ],
        },
        "generalized_reissner_nordstrom_demo" => CatalogEntry {
            name: "generalized_reissner_nordstrom_demo",
            description: "(0,∞) ×_t R ×_{t²} S²",
            spec: ManifoldSpec::mgrw(
                Interval::positive(),
                vec![of_t(ScalarFn::power(1.0, 1.0)), of_t(ScalarFn::power(1.0, 2.0))],
                vec![FiberSpec::euclidean(1), FiberSpec::sphere(2, 1.0)],
            )?,
            known_facts: vec![fact(NullCurvature, Sampled(20), MatchesOracle, 1e-8, "closed form")],
        },
        other => {
            return Err(GeometryError::Validation(format!(
                "unknown model '{other}'; known models: {}",
                MODEL_NAMES.join(", ")
            )))
        }
    };
    Ok(e)
}

/// Exterior Schwarzschild with mass `m`.
pub fn schwarzschild_exterior(mass: f64) -> Result<CatalogEntry> {
    Ok(CatalogEntry {
        name: "schwarzschild_exterior",
        description: "−(1−2m/r)dt² + (1−2m/r)⁻¹dr² + r²(dθ² + sin²θ dφ²)",
        spec: ManifoldSpec::ssst(
            Interval::real_line(),
            of_t(ScalarFn::Schwarzschild { mass }),
            FiberSpec::schwarzschild_spatial(mass),
        )?,
        known_facts: vec![
            fact(
                Quantity::EinsteinResidual { lambda: 0.0 },
                Region::Sampled(10),
                Expected::Equals(0.0),
                1e-8,
                "vacuum",
            ),
            fact(
                Quantity::NullCurvature,
                Region::Sampled(20),
                Expected::MatchesOracle,
                1e-8,
                "closed form",
            ),
        ],
    })
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Path {
    Specialized,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactResult {
    pub quantity: Quantity,
    pub region: Region,
    pub path: Path,
    pub expected: Expected,
    /// Worst deviation from the expectation, or the smallest observed value
    /// for lower bounds.
    pub worst: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub model: String,
    pub seed: u64,
    pub results: Vec<FactResult>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }
}

fn region_points(spec: &ManifoldSpec, region: &Region, seed: u64) -> Vec<Point> {
    match region {
        Region::Sampled(n) => {
            let mut rng = plane_rng(seed);
            (0..*n).map(|_| spec.sample_point(&mut rng)).collect()
        }
        Region::Times(ts) => ts
            .iter()
            .map(|&t| {
                let mut p = spec.default_point();
                p.base[0] = t;
                p
            })
            .collect(),
    }
}

fn plane_at(spec: &ManifoldSpec, p: &Point, seed: u64, k: usize) -> Result<NullPlane> {
    let u = default_frame(spec, p)?;
    sample_null_plane(spec, p, &u, &mut plane_rng(seed.wrapping_add(k as u64)))
}

fn oracle_null(spec: &ManifoldSpec, plane: &NullPlane) -> Result<f64> {
    let x = spec.flatten_point(&plane.point)?;
    null_sectional_oracle(&spec.assemble_chart(), &x, &plane.l.flatten(), &plane.s.flatten())
}

fn basis(spec: &ManifoldSpec, k: usize) -> Result<TangentVector> {
    let mut c = vec![0.0; spec.total_dim()];
    c[k] = 1.0;
    spec.split(&c)
}

/// `K_F` of the spatial plane spanned by the fiber parts of `L` and `S`.
fn spatial_sectional(spec: &ManifoldSpec, plane: &NullPlane, oracle: bool) -> Result<f64> {
    let (v, w) = (&plane.l.fibers[0], &plane.s.fibers[0]);
    let x = &plane.point.fibers[0];
    if oracle {
        let t = riemann_oracle(&spec.fibers[0].chart(), x)?;
        let area = t.inner(v, v) * t.inner(w, w) - t.inner(v, w).powi(2);
        Ok(t.inner(&t.apply(v, w, w), v) / area)
    } else {
        let frame = WarpedFrame::at(spec, &plane.point)?;
        let g = &frame.base;
        let area = g.inner(v, v) * g.inner(w, w) - g.inner(v, w).powi(2);
        Ok(g.inner(&g.curvature_apply(v, w, w), v) / area)
    }
}

/// Observed values of the quantity at one point, along one path.
fn observe(spec: &ManifoldSpec, q: &Quantity, p: &Point, seed: u64, k: usize, path: Path) -> Result<Vec<f64>> {
    let oracle = path == Path::Oracle;
    match q {
        Quantity::NullCurvature => {
            let plane = plane_at(spec, p, seed, k)?;
            Ok(vec![if oracle {
                oracle_null(spec, &plane)?
            } else {
                specialized_null_curvature(spec, &plane)?.value
            }])
        }
        Quantity::NullMinusFiber => {
            let plane = plane_at(spec, p, seed, k)?.without_base_part(spec)?;
            let k_u = if oracle {
                oracle_null(spec, &plane)?
            } else {
                specialized_null_curvature(spec, &plane)?.value
            };
            Ok(vec![k_u - spatial_sectional(spec, &plane, oracle)?])
        }
        Quantity::EinsteinResidual { lambda } => {
            let n = spec.total_dim();
            let g = spec.metric_matrix(p)?;
            let ric: Vec<f64> = if oracle {
                let t = riemann_oracle(&spec.assemble_chart(), &spec.flatten_point(p)?)?;
                (0..n * n).map(|ij| t.ricci[(ij / n, ij % n)]).collect()
            } else {
                let e = (0..n).map(|i| basis(spec, i)).collect::<Result<Vec<_>>>()?;
                let mut out = Vec::with_capacity(n * n);
                for a in &e {
                    for b in &e {
                        out.push(ricci_mwp(spec, p, a, b)?);
                    }
                }
                out
            };
            Ok((0..n * n).map(|ij| ric[ij] - lambda * g[(ij / n, ij % n)]).collect())
        }
        Quantity::Riemann => {
            let n = spec.total_dim();
            if oracle {
                let t = riemann_oracle(&spec.assemble_chart(), &spec.flatten_point(p)?)?;
                Ok(vec![t.riemann.max_abs()])
            } else {
                let e = (0..n).map(|i| basis(spec, i)).collect::<Result<Vec<_>>>()?;
                let mut m = 0.0_f64;
                for a in &e {
                    for b in &e {
                        for c in &e {
                            m = m.max(riemann_mwp(spec, p, a, b, c)?.max_abs());
                        }
                    }
                }
                Ok(vec![m])
            }
        }
        Quantity::Isotropy { planes } => {
            let u = default_frame(spec, p)?;
            let s = seed.wrapping_add(k as u64);
            if oracle {
                let mut rng = plane_rng(s);
                let vals = (0..*planes)
                    .map(|_| oracle_null(spec, &sample_null_plane(spec, p, &u, &mut rng)?))
                    .collect::<Result<Vec<_>>>()?;
                let mean = vals.iter().sum::<f64>() / vals.len().max(1) as f64;
                Ok(vec![vals.iter().fold(0.0_f64, |m, v| m.max((v - mean).abs()))])
            } else {
                Ok(vec![isotropy_scan(spec, p, &u, *planes, s)?.max_deviation])
            }
        }
    }
}

fn evaluate_fact(spec: &ManifoldSpec, f: &KnownFact, seed: u64, path: Path) -> FactResult {
    let mut result = FactResult {
        quantity: f.quantity.clone(),
        region: f.region.clone(),
        path,
        expected: f.expected.clone(),
        worst: 0.0,
        tolerance: f.tolerance,
        pass: true,
        error: None,
    };
    if f.expected == Expected::MatchesOracle && path == Path::Oracle {
        return result;
    }
    if let Expected::AtLeast(_) = f.expected {
        result.worst = f64::INFINITY;
    }
    let points = region_points(spec, &f.region, seed);
    for (k, p) in points.iter().enumerate() {
        let outcome = (|| -> Result<()> {
            let values = observe(spec, &f.quantity, p, seed, k, path)?;
            match f.expected {
                Expected::Equals(x) => {
                    for v in values {
                        let d = (v - x).abs();
                        result.worst = result.worst.max(d);
                        result.pass &= d <= f.tolerance * x.abs().max(1.0);
                    }
                }
                Expected::InverseSquareWarp(k_f) => {
                    let b = spec.warpings[0].value(&p.base);
                    let x = k_f / (b * b);
                    for v in values {
                        let d = (v - x).abs();
                        result.worst = result.worst.max(d);
                        result.pass &= d <= f.tolerance * x.abs().max(1.0);
                    }
                }
                Expected::AtLeast(x) => {
                    for v in values {
                        result.worst = result.worst.min(v);
                        result.pass &= v >= x;
                    }
                }
                Expected::MatchesOracle => {
                    let o = observe(spec, &f.quantity, p, seed, k, Path::Oracle)?;
                    for (v, w) in values.iter().zip(&o) {
                        let d = (v - w).abs();
                        result.worst = result.worst.max(d);
                        result.pass &= d <= f.tolerance * w.abs().max(1.0);
                    }
                }
            }
            Ok(())
        })();
        if let Err(e) = outcome {
            result.pass = false;
            result.error = Some(e.to_string());
            break;
        }
    }
    result
}

/// Evaluates every known fact along both paths.
pub fn validate_entry(entry: &CatalogEntry, seed: u64) -> ValidationReport {
    let results = entry
        .known_facts
        .iter()
        .flat_map(|f| {
            [Path::Specialized, Path::Oracle]
                .into_iter()
                .map(move |path| evaluate_fact(&entry.spec, f, seed, path))
        })
        .collect();
    ValidationReport {
        model: entry.name.to_string(),
        seed,
        results,
    }
}
