//! Declarative description of multiply warped products, points and tangent
//! vectors, and the assembled product metric.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dual::HyperDual;
use crate::error::{GeometryError, Result};
use crate::oracle::{riemann_oracle, CoordinateChart};
use crate::scalar::{check_positive, ScalarFn, WarpingFunction};

/// Margin by which queried base coordinates must stay inside the interval.
pub const INTERIOR_MARGIN: f64 = 1e-12;

/// Smallest eigenvalue accepted for a Riemannian fiber metric.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Angular guard band used when sampling sphere-like charts.
pub const ANGLE_GUARD: f64 = 0.1;

/// Radial guard factor for Schwarzschild charts: samples keep `r ≥ 2m·1.01`.
pub const HORIZON_GUARD: f64 = 1.01;

// ---------------------------------------------------------------------------
// Interval

/// Open interval `(t1, t2)` with possibly infinite endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub t1: f64,
    pub t2: f64,
}

impl Interval {
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        if t1.is_nan() || t2.is_nan() || t1 == f64::INFINITY || t2 == f64::NEG_INFINITY || t1 >= t2 {
            return Err(GeometryError::Validation(format!(
                "interval endpoints must satisfy t1 < t2, got ({t1}, {t2})"
            )));
        }
        Ok(Self { t1, t2 })
    }

    pub fn real_line() -> Self {
        Self {
            t1: f64::NEG_INFINITY,
            t2: f64::INFINITY,
        }
    }

    pub fn positive() -> Self {
        Self {
            t1: 0.0,
            t2: f64::INFINITY,
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        t.is_finite() && t > self.t1 + INTERIOR_MARGIN && t < self.t2 - INTERIOR_MARGIN
    }

    pub fn check(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(GeometryError::Domain(format!(
                "t = {t} is not inside ({}, {})",
                self.t1, self.t2
            )))
        }
    }

    /// A finite window inside the interval used for probing and sampling.
    pub fn window(&self) -> (f64, f64) {
        match (self.t1.is_finite(), self.t2.is_finite()) {
            (true, true) => {
                let w = self.t2 - self.t1;
                (self.t1 + 0.05 * w, self.t2 - 0.05 * w)
            }
            (true, false) => (self.t1 + 0.1, self.t1 + 3.0),
            (false, true) => (self.t2 - 3.0, self.t2 - 0.1),
            (false, false) => (-2.0, 2.0),
        }
    }

    pub fn probe_points(&self, n: usize) -> Vec<f64> {
        let (a, b) = self.window();
        (0..n).map(|i| a + (b - a) * (i as f64 + 0.5) / n as f64).collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (a, b) = self.window();
        rng.random_range(a..=b)
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalDoc {
    t1: Option<f64>,
    t2: Option<f64>,
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IntervalDoc {
            t1: self.t1.is_finite().then_some(self.t1),
            t2: self.t2.is_finite().then_some(self.t2),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = IntervalDoc::deserialize(d)?;
        Interval::new(doc.t1.unwrap_or(f64::NEG_INFINITY), doc.t2.unwrap_or(f64::INFINITY))
            .map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Fibers

/// Coordinate model of a Riemannian factor.
///
/// Sphere and hyperbolic charts use hyperspherical coordinates:
/// `R²(dχ₁² + sin²χ₁ dχ₂² + …)` and `dρ² + R² sinh²(ρ/R)(dχ₂² + sin²χ₂ dχ₃² + …)`.
#[derive(Clone)]
pub enum FiberModel {
    Euclidean,
    Sphere {
        radius: f64,
    },
    Hyperbolic {
        radius: f64,
    },
    /// `(1 − 2m/r)⁻¹ dr² + r²(dθ² + sin²θ dφ²)` on `r > 2m`.
    SchwarzschildSpatial {
        mass: f64,
    },
    /// User chart; `constant_curvature` is checked against the oracle.
    Custom {
        chart: CoordinateChart,
        constant_curvature: Option<f64>,
        /// A point inside the chart domain; samples stay within 0.1 of it.
        reference: Vec<f64>,
    },
}

impl fmt::Debug for FiberModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Euclidean => f.write_str("Euclidean"),
            Self::Sphere { radius } => write!(f, "Sphere(R={radius})"),
            Self::Hyperbolic { radius } => write!(f, "Hyperbolic(R={radius})"),
            Self::SchwarzschildSpatial { mass } => write!(f, "SchwarzschildSpatial(m={mass})"),
            Self::Custom { constant_curvature, .. } => write!(f, "Custom(k={constant_curvature:?})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FiberSpec {
    pub dim: usize,
    pub model: FiberModel,
}

fn angular_block(
    n: usize,
    scale: HyperDual,
    angles: &[HyperDual],
    out: &mut [HyperDual],
    offset: usize,
    stride: usize,
) {
    // diagonal entries scale·(1, sin²a₀, sin²a₀ sin²a₁, …) starting at `offset`
    let mut acc = scale;
    for k in 0..n {
        if k > 0 {
            acc = acc * angles[k - 1].sin().powi(2);
        }
        out[(offset + k) * stride + offset + k] = acc;
    }
}

impl FiberSpec {
    pub fn euclidean(dim: usize) -> Self {
        Self {
            dim,
            model: FiberModel::Euclidean,
        }
    }

    pub fn sphere(dim: usize, radius: f64) -> Self {
        Self {
            dim,
            model: FiberModel::Sphere { radius },
        }
    }

    pub fn hyperbolic(dim: usize, radius: f64) -> Self {
        Self {
            dim,
            model: FiberModel::Hyperbolic { radius },
        }
    }

    pub fn schwarzschild_spatial(mass: f64) -> Self {
        Self {
            dim: 3,
            model: FiberModel::SchwarzschildSpatial { mass },
        }
    }

    pub fn custom(chart: CoordinateChart, constant_curvature: Option<f64>, reference: Vec<f64>) -> Self {
        Self {
            dim: chart.dim(),
            model: FiberModel::Custom {
                chart,
                constant_curvature,
                reference,
            },
        }
    }

    /// Constant sectional curvature when the model has one.
    pub fn constant_curvature(&self) -> Option<f64> {
        match &self.model {
            FiberModel::Euclidean => Some(0.0),
            FiberModel::Sphere { radius } => Some(1.0 / (radius * radius)),
            FiberModel::Hyperbolic { radius } => Some(-1.0 / (radius * radius)),
            FiberModel::SchwarzschildSpatial { .. } => None,
            FiberModel::Custom { constant_curvature, .. } => *constant_curvature,
        }
    }

    pub fn model_name(&self) -> &'static str {
        match self.model {
            FiberModel::Euclidean => "euclidean",
            FiberModel::Sphere { .. } => "sphere",
            FiberModel::Hyperbolic { .. } => "hyperbolic",
            FiberModel::SchwarzschildSpatial { .. } => "schwarzschild",
            FiberModel::Custom { .. } => "custom",
        }
    }

    /// Fiber metric on hyper-dual coordinates, row-major.
    pub fn metric_dual(&self, x: &[HyperDual]) -> Vec<HyperDual> {
        let n = self.dim;
        let mut g = vec![HyperDual::default(); n * n];
        match &self.model {
            FiberModel::Euclidean => {
                for i in 0..n {
                    g[i * n + i] = HyperDual::constant(1.0);
                }
            }
            FiberModel::Sphere { radius } => {
                angular_block(n, HyperDual::constant(radius * radius), x, &mut g, 0, n);
            }
            FiberModel::Hyperbolic { radius } => {
                g[0] = HyperDual::constant(1.0);
                if n > 1 {
                    let s = (x[0] / *radius).sinh() * *radius;
                    angular_block(n - 1, s * s, &x[1..], &mut g, 1, n);
                }
            }
            FiberModel::SchwarzschildSpatial { mass } => {
                let r = x[0];
                g[0] = (1.0 - 2.0 * *mass / r).recip();
                g[4] = r * r;
                g[8] = r * r * x[1].sin().powi(2);
            }
            FiberModel::Custom { chart, .. } => return (chart.metric_fn())(x),
        }
        g
    }

    pub fn metric_at(&self, x: &[f64]) -> DMatrix<f64> {
        let xs: Vec<HyperDual> = x.iter().map(|&v| HyperDual::constant(v)).collect();
        let g = self.metric_dual(&xs);
        DMatrix::from_fn(self.dim, self.dim, |i, j| g[i * self.dim + j].re)
    }

    pub fn chart(&self) -> CoordinateChart {
        if let FiberModel::Custom { chart, .. } = &self.model {
            return chart.clone();
        }
        let me = self.clone();
        CoordinateChart::from_fn(self.dim, move |x| me.metric_dual(x))
    }

    pub fn coordinate_names(&self) -> Vec<String> {
        match self.model {
            FiberModel::Euclidean => {
                const XYZ: [&str; 3] = ["x", "y", "z"];
                if self.dim <= 3 {
                    XYZ[..self.dim].iter().map(|s| s.to_string()).collect()
                } else {
                    (1..=self.dim).map(|i| format!("x{i}")).collect()
                }
            }
            FiberModel::SchwarzschildSpatial { .. } => {
                vec!["r".into(), "theta".into(), "phi".into()]
            }
            FiberModel::Hyperbolic { .. } if self.dim == 3 => {
                vec!["r".into(), "theta".into(), "phi".into()]
            }
            FiberModel::Sphere { .. } if self.dim == 2 => vec!["theta".into(), "phi".into()],
            FiberModel::Sphere { .. } | FiberModel::Hyperbolic { .. } => {
                (1..=self.dim).map(|i| format!("chi{i}")).collect()
            }
            FiberModel::Custom { .. } => (1..=self.dim).map(|i| format!("u{i}")).collect(),
        }
    }

    fn check_angles(angles: &[f64], x: &[f64]) -> Result<()> {
        for a in angles {
            if !(*a > INTERIOR_MARGIN && *a < PI - INTERIOR_MARGIN) {
                return Err(GeometryError::Domain(format!(
                    "polar angle {a} outside (0, π) at {x:?}"
                )));
            }
        }
        Ok(())
    }

    /// Checks shape and that `x` lies in the chart domain.
    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(GeometryError::shape("fiber coordinates", self.dim, x.len()));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::Domain(format!("non-finite fiber coordinate {x:?}")));
        }
        match &self.model {
            FiberModel::Euclidean => Ok(()),
            FiberModel::Sphere { .. } => Self::check_angles(&x[..self.dim.saturating_sub(1)], x),
            FiberModel::Hyperbolic { .. } => {
                if self.dim > 1 {
                    if !(x[0] > INTERIOR_MARGIN) {
                        return Err(GeometryError::Domain(format!(
                            "radial coordinate must be positive at {x:?}"
                        )));
                    }
                    Self::check_angles(&x[1..self.dim - 1], x)?;
                }
                Ok(())
            }
            FiberModel::SchwarzschildSpatial { mass } => {
                if !(x[0] > 2.0 * mass + INTERIOR_MARGIN) {
                    return Err(GeometryError::Domain(format!(
                        "r = {} is not outside the horizon r = {}",
                        x[0],
                        2.0 * mass
                    )));
                }
                Self::check_angles(&x[1..2], x)
            }
            FiberModel::Custom { .. } => {
                let g = self.metric_at(x);
                if g.iter().any(|v| !v.is_finite()) {
                    return Err(GeometryError::Domain(format!(
                        "custom fiber metric not finite at {x:?}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// A point away from coordinate singularities, inside the guard bands.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let angle = |rng: &mut R| rng.random_range(ANGLE_GUARD..=PI - ANGLE_GUARD);
        let azimuth = |rng: &mut R| rng.random_range(0.0..2.0 * PI);
        let n = self.dim;
        match &self.model {
            FiberModel::Euclidean => (0..n).map(|_| rng.random_range(-2.0..=2.0)).collect(),
            FiberModel::Custom { reference, .. } => {
                reference.iter().map(|x| x + rng.random_range(-0.1..=0.1)).collect()
            }
            FiberModel::Sphere { .. } => (0..n)
                .map(|k| if k + 1 < n { angle(rng) } else { azimuth(rng) })
                .collect(),
            FiberModel::Hyperbolic { radius } => (0..n)
                .map(|k| {
                    if k == 0 {
                        if n == 1 {
                            rng.random_range(-2.0..=2.0)
                        } else {
                            rng.random_range(0.1 * radius..=2.0 * radius)
                        }
                    } else if k + 1 < n {
                        angle(rng)
                    } else {
                        azimuth(rng)
                    }
                })
                .collect(),
            FiberModel::SchwarzschildSpatial { mass } => vec![
                rng.random_range(2.0 * mass * HORIZON_GUARD..=10.0 * mass),
                angle(rng),
                azimuth(rng),
            ],
        }
    }

    pub fn default_point(&self) -> Vec<f64> {
        let n = self.dim;
        match &self.model {
            FiberModel::Euclidean => vec![0.0; n],
            FiberModel::Custom { reference, .. } => reference.clone(),
            FiberModel::Sphere { .. } => (0..n).map(|k| if k + 1 < n { PI / 2.0 } else { 0.0 }).collect(),
            FiberModel::Hyperbolic { radius } => (0..n)
                .map(|k| {
                    if k == 0 {
                        if n == 1 {
                            0.0
                        } else {
                            *radius
                        }
                    } else if k + 1 < n {
                        PI / 2.0
                    } else {
                        0.0
                    }
                })
                .collect(),
            FiberModel::SchwarzschildSpatial { mass } => vec![4.0 * mass, PI / 2.0, 0.0],
        }
    }

    /// Checks parameters, positive definiteness at sampled points, and for
    /// custom charts with a curvature tag, that the oracle agrees with it.
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(GeometryError::Validation("fiber dimension must be ≥ 1".into()));
        }
        match &self.model {
            FiberModel::Sphere { radius } | FiberModel::Hyperbolic { radius } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(GeometryError::Validation(format!(
                        "radius must be positive, got {radius}"
                    )));
                }
            }
            FiberModel::SchwarzschildSpatial { mass } => {
                if !(mass.is_finite() && *mass > 0.0) {
                    return Err(GeometryError::Validation(format!("mass must be positive, got {mass}")));
                }
                if self.dim != 3 {
                    return Err(GeometryError::Validation(
                        "Schwarzschild spatial fiber is 3-dimensional".into(),
                    ));
                }
            }
            FiberModel::Custom { chart, reference, .. } => {
                if chart.dim() != self.dim {
                    return Err(GeometryError::shape("custom fiber chart", self.dim, chart.dim()));
                }
                if reference.len() != self.dim {
                    return Err(GeometryError::shape(
                        "custom fiber reference point",
                        self.dim,
                        reference.len(),
                    ));
                }
            }
            FiberModel::Euclidean => {}
        }
        let mut probes = vec![self.default_point()];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        probes.extend((0..4).map(|_| self.sample_point(&mut rng)));
        for x in &probes {
            self.check_point(x)?;
            check_positive_definite(&self.metric_at(x), "fiber metric")?;
        }
        if let (FiberModel::Custom { chart, .. }, Some(k)) = (&self.model, self.constant_curvature()) {
            if self.dim >= 2 {
                let x = &probes[0];
                let t = riemann_oracle(chart, x)?;
                let (mut e0, mut e1) = (vec![0.0; self.dim], vec![0.0; self.dim]);
                e0[0] = 1.0;
                e1[1] = 1.0;
                let num = t.inner(&t.apply(&e0, &e1, &e1), &e0);
                let den = t.inner(&e0, &e0) * t.inner(&e1, &e1) - t.inner(&e0, &e1).powi(2);
                let measured = num / den;
                if (measured - k).abs() > 1e-8 * k.abs().max(1.0) {
                    return Err(GeometryError::Validation(format!(
                        "curvature tag {k} disagrees with chart curvature {measured}"
                    )));
                }
            }
        }
        Ok(())
    }
}

use rand::SeedableRng;

pub(crate) fn check_positive_definite(g: &DMatrix<f64>, what: &str) -> Result<()> {
    if (g - g.transpose()).abs().max() > 1e-12 * g.abs().max().max(1.0) {
        return Err(GeometryError::Validation(format!("{what} is not symmetric")));
    }
    let eig = g.clone().symmetric_eigen();
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > POSITIVITY_TOL) {
        return Err(GeometryError::Validation(format!(
            "{what} is not positive definite (smallest eigenvalue {min})"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Manifold specification

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ManifoldKind {
    #[serde(rename = "MGRW")]
    Mgrw,
    #[serde(rename = "GRW")]
    Grw,
    Kasner,
    #[serde(rename = "SSST")]
    Ssst,
    MultiplyWarped,
}

impl fmt::Display for ManifoldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Mgrw => "MGRW",
            Self::Grw => "GRW",
            Self::Kasner => "Kasner",
            Self::Ssst => "SSST",
            Self::MultiplyWarped => "MultiplyWarped",
        })
    }
}

#[derive(Debug, Clone)]
pub enum BaseSpec {
    /// One-dimensional base with metric `−dt²`.
    Interval(Interval),
    /// General base chart; only available through the library API.
    Chart(CoordinateChart),
}

impl BaseSpec {
    pub fn dim(&self) -> usize {
        match self {
            Self::Interval(_) => 1,
            Self::Chart(c) => c.dim(),
        }
    }

    pub fn interval(&self) -> Option<&Interval> {
        match self {
            Self::Interval(i) => Some(i),
            Self::Chart(_) => None,
        }
    }
}

/// `B ×_{b_1} F_1 × … ×_{b_m} F_m`, or a standard static spacetime
/// `−f²dt² ⊕ g_F` when `kind` is SSST.
///
/// For SSST, `warpings[0]` is the static potential `f` evaluated on the
/// coordinates of `fibers[0]`; for every other kind the warpings are
/// functions of the base coordinates.
#[derive(Debug, Clone)]
pub struct ManifoldSpec {
    pub kind: ManifoldKind,
    pub base: BaseSpec,
    pub warpings: Vec<WarpingFunction>,
    pub fibers: Vec<FiberSpec>,
    pub kasner_exponents: Option<Vec<f64>>,
}

impl ManifoldSpec {
    pub fn mgrw(base: Interval, warpings: Vec<WarpingFunction>, fibers: Vec<FiberSpec>) -> Result<Self> {
        Self {
            kind: ManifoldKind::Mgrw,
            base: BaseSpec::Interval(base),
            warpings,
            fibers,
            kasner_exponents: None,
        }
        .validated()
    }

    pub fn grw(base: Interval, b: WarpingFunction, fiber: FiberSpec) -> Result<Self> {
        Self {
            kind: ManifoldKind::Grw,
            base: BaseSpec::Interval(base),
            warpings: vec![b],
            fibers: vec![fiber],
            kasner_exponents: None,
        }
        .validated()
    }

    /// Warpings `φ^{p_i}` sharing one scale function `φ`.
    pub fn kasner(base: Interval, phi: ScalarFn, exponents: Vec<f64>, fibers: Vec<FiberSpec>) -> Result<Self> {
        let warpings = exponents
            .iter()
            .map(|&p| WarpingFunction::of_time(ScalarFn::pow(phi.clone(), p)))
            .collect();
        Self {
            kind: ManifoldKind::Kasner,
            base: BaseSpec::Interval(base),
            warpings,
            fibers,
            kasner_exponents: Some(exponents),
        }
        .validated()
    }

    pub fn ssst(base: Interval, f: WarpingFunction, fiber: FiberSpec) -> Result<Self> {
        Self {
            kind: ManifoldKind::Ssst,
            base: BaseSpec::Interval(base),
            warpings: vec![f],
            fibers: vec![fiber],
            kasner_exponents: None,
        }
        .validated()
    }

    pub fn multiply_warped(base: BaseSpec, warpings: Vec<WarpingFunction>, fibers: Vec<FiberSpec>) -> Result<Self> {
        Self {
            kind: ManifoldKind::MultiplyWarped,
            base,
            warpings,
            fibers,
            kasner_exponents: None,
        }
        .validated()
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.fibers.len()
    }

    pub fn is_ssst(&self) -> bool {
        self.kind == ManifoldKind::Ssst
    }

    pub fn interval(&self) -> Option<&Interval> {
        self.base.interval()
    }

    /// Shared Kasner scale function `φ`.
    pub fn kasner_phi(&self) -> Option<&ScalarFn> {
        match self.warpings.first()?.expr()? {
            ScalarFn::Pow { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.fibers.len();
        if m == 0 || self.warpings.len() != m {
            return Err(GeometryError::Validation(format!(
                "need m ≥ 1 warpings and fibers of equal length, got {} and {m}",
                self.warpings.len()
            )));
        }
        if matches!(self.kind, ManifoldKind::Grw | ManifoldKind::Ssst) && m != 1 {
            return Err(GeometryError::Validation(format!(
                "{} requires exactly one fiber",
                self.kind
            )));
        }
        if self.kind != ManifoldKind::MultiplyWarped && self.interval().is_none() {
            return Err(GeometryError::Validation(format!(
                "{} requires an interval base",
                self.kind
            )));
        }
        for f in &self.fibers {
            f.validate()?;
        }
        match self.kind {
            ManifoldKind::Kasner => self.validate_kasner()?,
            _ if self.kasner_exponents.is_some() => {
                return Err(GeometryError::Validation(
                    "kasner_exponents given for a non-Kasner spec".into(),
                ))
            }
            _ => {}
        }
        if self.is_ssst() {
            let fiber = &self.fibers[0];
            let w = &self.warpings[0];
            if let Some(axis) = w.axis() {
                if axis >= fiber.dim {
                    return Err(GeometryError::Validation(format!(
                        "static potential axis {axis} exceeds fiber dimension {}",
                        fiber.dim
                    )));
                }
            }
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
            let mut probes = vec![fiber.default_point()];
            probes.extend((0..8).map(|_| fiber.sample_point(&mut rng)));
            check_positive(w, &probes, "static potential f")?;
        } else {
            let probes: Vec<Vec<f64>> = match &self.base {
                BaseSpec::Interval(i) => i.probe_points(16).into_iter().map(|t| vec![t]).collect(),
                BaseSpec::Chart(_) => Vec::new(),
            };
            for (i, w) in self.warpings.iter().enumerate() {
                if let Some(axis) = w.axis() {
                    if axis >= self.base.dim() {
                        return Err(GeometryError::Validation(format!(
                            "warping {i} axis {axis} exceeds base dimension {}",
                            self.base.dim()
                        )));
                    }
                }
                check_positive(w, &probes, &format!("warping b_{}", i + 1))?;
            }
        }
        Ok(())
    }

    fn validate_kasner(&self) -> Result<()> {
        let p = self
            .kasner_exponents
            .as_ref()
            .ok_or_else(|| GeometryError::Validation("Kasner spec needs kasner_exponents".into()))?;
        if p.len() != self.m() {
            return Err(GeometryError::shape("kasner_exponents", self.m(), p.len()));
        }
        let mut phi: Option<&ScalarFn> = None;
        for (w, &pi) in self.warpings.iter().zip(p) {
            match w.expr() {
                Some(ScalarFn::Pow { base, exponent }) if *exponent == pi && w.axis() == Some(0) => {
                    if let Some(prev) = phi {
                        if prev != base.as_ref() {
                            return Err(GeometryError::Validation(
                                "Kasner warpings must share one scale function φ".into(),
                            ));
                        }
                    }
                    phi = Some(base);
                }
                _ => {
                    return Err(GeometryError::Validation(format!(
                        "Kasner warping must be φ^{pi} for the shared φ"
                    )))
                }
            }
        }
        Ok(())
    }

    // -- layout ----------------------------------------------------------

    pub fn base_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn fiber_dims(&self) -> Vec<usize> {
        self.fibers.iter().map(|f| f.dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.base_dim() + self.fibers.iter().map(|f| f.dim).sum::<usize>()
    }

    /// Starting flat index of each fiber block.
    pub fn fiber_offsets(&self) -> Vec<usize> {
        let mut off = self.base_dim();
        self.fibers
            .iter()
            .map(|f| {
                let o = off;
                off += f.dim;
                o
            })
            .collect()
    }

    pub fn coordinate_names(&self) -> Vec<String> {
        let mut names: Vec<String> = match self.base_dim() {
            1 => vec!["t".into()],
            n => (1..=n).map(|i| format!("b{i}")).collect(),
        };
        let multi = self.m() > 1;
        for (i, f) in self.fibers.iter().enumerate() {
            for n in f.coordinate_names() {
                names.push(if multi { format!("{n}{}", i + 1) } else { n });
            }
        }
        names
    }

    // -- points ----------------------------------------------------------

    pub fn check_point(&self, p: &Point) -> Result<()> {
        if p.base.len() != self.base_dim() {
            return Err(GeometryError::shape("base coordinates", self.base_dim(), p.base.len()));
        }
        if p.fibers.len() != self.m() {
            return Err(GeometryError::shape("fiber count", self.m(), p.fibers.len()));
        }
        match &self.base {
            BaseSpec::Interval(i) => i.check(p.base[0])?,
            BaseSpec::Chart(_) => {
                if p.base.iter().any(|v| !v.is_finite()) {
                    return Err(GeometryError::Domain(format!("non-finite base point {:?}", p.base)));
                }
            }
        }
        for (f, x) in self.fibers.iter().zip(&p.fibers) {
            f.check_point(x)?;
        }
        if self.is_ssst() {
            let f = self.warpings[0].value(&p.fibers[0]);
            if !(f.is_finite() && f > 0.0) {
                return Err(GeometryError::Domain(format!("static potential f = {f} at {p:?}")));
            }
        } else {
            for (i, w) in self.warpings.iter().enumerate() {
                let b = w.value(&p.base);
                if !(b.is_finite() && b > 0.0) {
                    return Err(GeometryError::Domain(format!(
                        "warping b_{} = {b} at {:?}",
                        i + 1,
                        p.base
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn default_point(&self) -> Point {
        let base = match &self.base {
            BaseSpec::Interval(i) => {
                let (a, b) = i.window();
                vec![if i.contains(1.0) && a <= 1.0 && 1.0 <= b {
                    1.0
                } else {
                    0.5 * (a + b)
                }]
            }
            BaseSpec::Chart(c) => vec![0.0; c.dim()],
        };
        Point {
            base,
            fibers: self.fibers.iter().map(|f| f.default_point()).collect(),
        }
    }

    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let base = match &self.base {
            BaseSpec::Interval(i) => vec![i.sample(rng)],
            BaseSpec::Chart(c) => (0..c.dim()).map(|_| rng.random_range(-1.0..=1.0)).collect(),
        };
        Point {
            base,
            fibers: self.fibers.iter().map(|f| f.sample_point(rng)).collect(),
        }
    }

    pub fn check_vector(&self, v: &TangentVector) -> Result<()> {
        if v.base.len() != self.base_dim() {
            return Err(GeometryError::shape("base vector part", self.base_dim(), v.base.len()));
        }
        if v.fibers.len() != self.m() {
            return Err(GeometryError::shape("fiber vector parts", self.m(), v.fibers.len()));
        }
        for (f, x) in self.fibers.iter().zip(&v.fibers) {
            if x.len() != f.dim {
                return Err(GeometryError::shape("fiber vector part", f.dim, x.len()));
            }
        }
        Ok(())
    }

    pub fn zero_vector(&self) -> TangentVector {
        TangentVector {
            base: vec![0.0; self.base_dim()],
            fibers: self.fibers.iter().map(|f| vec![0.0; f.dim]).collect(),
        }
    }

    /// `∂_t` on an interval base.
    pub fn time_vector(&self) -> TangentVector {
        let mut v = self.zero_vector();
        v.base[0] = 1.0;
        v
    }

    // -- flat representation ----------------------------------------------

    pub fn flatten(&self, v: &TangentVector) -> Result<Vec<f64>> {
        self.check_vector(v)?;
        Ok(v.flatten())
    }

    pub fn split(&self, c: &[f64]) -> Result<TangentVector> {
        if c.len() != self.total_dim() {
            return Err(GeometryError::shape("flat components", self.total_dim(), c.len()));
        }
        let nb = self.base_dim();
        let mut off = nb;
        let fibers = self
            .fibers
            .iter()
            .map(|f| {
                let part = c[off..off + f.dim].to_vec();
                off += f.dim;
                part
            })
            .collect();
        Ok(TangentVector {
            base: c[..nb].to_vec(),
            fibers,
        })
    }

    pub fn flatten_point(&self, p: &Point) -> Result<Vec<f64>> {
        self.check_point(p)?;
        let mut out = p.base.clone();
        for x in &p.fibers {
            out.extend_from_slice(x);
        }
        Ok(out)
    }

    pub fn split_point(&self, c: &[f64]) -> Result<Point> {
        let v = self.split(c)?;
        Ok(Point {
            base: v.base,
            fibers: v.fibers,
        })
    }

    // -- metric -------------------------------------------------------------

    /// Block-diagonal product metric on hyper-dual flat coordinates.
    pub fn metric_dual(&self, x: &[HyperDual]) -> Vec<HyperDual> {
        let n = self.total_dim();
        let nb = self.base_dim();
        let mut g = vec![HyperDual::default(); n * n];
        let base = &x[..nb];
        match &self.base {
            BaseSpec::Interval(_) => {
                g[0] = if self.is_ssst() {
                    let f = self.warpings[0].eval(&x[1..1 + self.fibers[0].dim]);
                    -(f * f)
                } else {
                    HyperDual::constant(-1.0)
                };
            }
            BaseSpec::Chart(c) => {
                let gb = (c.metric_fn())(base);
                for i in 0..nb {
                    for j in 0..nb {
                        g[i * n + j] = gb[i * nb + j];
                    }
                }
            }
        }
        let mut off = nb;
        for (k, f) in self.fibers.iter().enumerate() {
            let s = f.dim;
            let gf = f.metric_dual(&x[off..off + s]);
            let b2 = if self.is_ssst() {
                HyperDual::constant(1.0)
            } else {
                let b = self.warpings[k].eval(base);
                b * b
            };
            for i in 0..s {
                for j in 0..s {
                    g[(off + i) * n + off + j] = b2 * gf[i * s + j];
                }
            }
            off += s;
        }
        g
    }

    /// The product metric as one coordinate chart of dimension `1 + Σ s_i`.
    pub fn assemble_chart(&self) -> CoordinateChart {
        let me = self.clone();
        CoordinateChart::from_fn(self.total_dim(), move |x| me.metric_dual(x))
    }

    pub fn metric_matrix(&self, p: &Point) -> Result<DMatrix<f64>> {
        let x = self.flatten_point(p)?;
        let xs: Vec<HyperDual> = x.iter().map(|&v| HyperDual::constant(v)).collect();
        let g = self.metric_dual(&xs);
        let n = self.total_dim();
        Ok(DMatrix::from_fn(n, n, |i, j| g[i * n + j].re))
    }

    /// `g(X, Y) = g_B(X_B, Y_B) + Σ b_i² g_{F_i}(V_i, W_i)`; for SSST the base
    /// term is `−f² a_X a_Y` and the fiber is unwarped.
    pub fn metric_eval(&self, p: &Point, x: &TangentVector, y: &TangentVector) -> Result<f64> {
        self.check_point(p)?;
        self.check_vector(x)?;
        self.check_vector(y)?;
        let base = match &self.base {
            BaseSpec::Interval(_) => {
                let lapse = if self.is_ssst() {
                    self.warpings[0].value(&p.fibers[0]).powi(2)
                } else {
                    1.0
                };
                -lapse * x.base[0] * y.base[0]
            }
            BaseSpec::Chart(c) => bilinear(&c.metric_at(&p.base)?, &x.base, &y.base),
        };
        let mut total = base;
        for (k, f) in self.fibers.iter().enumerate() {
            let gf = bilinear(&f.metric_at(&p.fibers[k]), &x.fibers[k], &y.fibers[k]);
            let b2 = if self.is_ssst() {
                1.0
            } else {
                self.warpings[k].value(&p.base).powi(2)
            };
            total += b2 * gf;
        }
        Ok(total)
    }

    /// Number of negative eigenvalues of the product metric at `p`.
    pub fn negative_index(&self, p: &Point) -> Result<usize> {
        let g = self.metric_matrix(p)?;
        Ok(g.symmetric_eigen().eigenvalues.iter().filter(|v| **v < 0.0).count())
    }

    pub fn check_lorentzian(&self, p: &Point) -> Result<()> {
        match self.negative_index(p)? {
            1 => Ok(()),
            k => Err(GeometryError::Signature(format!(
                "metric has {k} negative eigenvalues at {p:?}"
            ))),
        }
    }

    // -- JSON ---------------------------------------------------------------

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| GeometryError::Serialization(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| GeometryError::Serialization(e.to_string()))
    }
}

pub(crate) fn bilinear(g: &DMatrix<f64>, u: &[f64], v: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..u.len() {
        if u[i] == 0.0 {
            continue;
        }
        for j in 0..v.len() {
            s += u[i] * g[(i, j)] * v[j];
        }
    }
    s
}

#[derive(Serialize, Deserialize)]
struct FiberDoc {
    dim: usize,
    model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mass: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct SpecDoc {
    kind: ManifoldKind,
    base: Interval,
    warpings: Vec<WarpingFunction>,
    fibers: Vec<FiberDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kasner_exponents: Option<Vec<f64>>,
}

impl Serialize for FiberSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (radius, mass) = match &self.model {
            FiberModel::Sphere { radius } | FiberModel::Hyperbolic { radius } => (Some(*radius), None),
            FiberModel::SchwarzschildSpatial { mass } => (None, Some(*mass)),
            FiberModel::Euclidean => (None, None),
            FiberModel::Custom { .. } => {
                return Err(serde::ser::Error::custom(
                    "custom fiber metrics are not JSON-expressible",
                ))
            }
        };
        FiberDoc {
            dim: self.dim,
            model: self.model_name().into(),
            radius,
            mass,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiberSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let doc = FiberDoc::deserialize(d)?;
        let radius = || doc.radius.ok_or_else(|| D::Error::custom("fiber model needs a radius"));
        let model = match doc.model.as_str() {
            "euclidean" => FiberModel::Euclidean,
            "sphere" => FiberModel::Sphere { radius: radius()? },
            "hyperbolic" => FiberModel::Hyperbolic { radius: radius()? },
            "schwarzschild" => FiberModel::SchwarzschildSpatial {
                mass: doc.mass.unwrap_or(1.0),
            },
            "custom" => {
                return Err(D::Error::custom(
                    "custom fiber metrics are available only through the library API",
                ))
            }
            other => return Err(D::Error::custom(format!("unknown fiber model `{other}`"))),
        };
        Ok(FiberSpec { dim: doc.dim, model })
    }
}

impl Serialize for ManifoldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let base = match &self.base {
            BaseSpec::Interval(i) => i,
            BaseSpec::Chart(_) => return Err(serde::ser::Error::custom("chart bases are not JSON-expressible")),
        };
        let n = if self.kasner_exponents.is_some() { 5 } else { 4 };
        let mut st = s.serialize_struct("ManifoldSpec", n)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("base", base)?;
        st.serialize_field("warpings", &self.warpings)?;
        st.serialize_field("fibers", &self.fibers)?;
        if let Some(p) = &self.kasner_exponents {
            st.serialize_field("kasner_exponents", p)?;
        }
        st.end()
    }
}

impl<'de> Deserialize<'de> for ManifoldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = SpecDoc::deserialize(d)?;
        let fibers = doc
            .fibers
            .into_iter()
            .map(|f| {
                FiberSpec::deserialize(serde_json::to_value(f).map_err(serde::de::Error::custom)?)
                    .map_err(serde::de::Error::custom)
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        let spec = ManifoldSpec {
            kind: doc.kind,
            base: BaseSpec::Interval(doc.base),
            warpings: doc.warpings,
            fibers,
            kasner_exponents: doc.kasner_exponents,
        };
        spec.validate().map_err(serde::de::Error::custom)?;
        Ok(spec)
    }
}

// ---------------------------------------------------------------------------
// Points and vectors

/// A point in product coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub base: Vec<f64>,
    pub fibers: Vec<Vec<f64>>,
}

impl Point {
    pub fn at_time(t: f64, fibers: Vec<Vec<f64>>) -> Self {
        Self { base: vec![t], fibers }
    }

    pub fn t(&self) -> f64 {
        self.base[0]
    }
}

/// A tangent vector split into its base part and one part per fiber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentVector {
    pub base: Vec<f64>,
    pub fibers: Vec<Vec<f64>>,
}

impl TangentVector {
    pub fn new(base: Vec<f64>, fibers: Vec<Vec<f64>>) -> Self {
        Self { base, fibers }
    }

    pub fn flatten(&self) -> Vec<f64> {
        let mut out = self.base.clone();
        for v in &self.fibers {
            out.extend_from_slice(v);
        }
        out
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            base: self.base.iter().map(|v| v * c).collect(),
            fibers: self.fibers.iter().map(|f| f.iter().map(|v| v * c).collect()).collect(),
        }
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: f64, other: &Self) -> Self {
        Self {
            base: self.base.iter().zip(&other.base).map(|(a, b)| a + c * b).collect(),
            fibers: self
                .fibers
                .iter()
                .zip(&other.fibers)
                .map(|(u, v)| u.iter().zip(v).map(|(a, b)| a + c * b).collect())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.base.iter().chain(self.fibers.iter().flatten()).all(|v| *v == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.base
            .iter()
            .chain(self.fibers.iter().flatten())
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::riemann_oracle;
    use rand_chacha::ChaCha8Rng;

    fn grw_s3(b: ScalarFn) -> ManifoldSpec {
        ManifoldSpec::grw(
            Interval::real_line(),
            WarpingFunction::of_time(b),
            FiberSpec::sphere(3, 1.0),
        )
        .unwrap()
    }

    #[test]
    fn interval_rules() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(f64::INFINITY, 2.0).is_err());
        let i = Interval::positive();
        assert!(!i.contains(0.0));
        assert!(i.contains(1e-6));
        let s = serde_json::to_string(&i).unwrap();
        assert_eq!(s, r#"{"t1":0.0,"t2":null}"#);
        assert_eq!(serde_json::from_str::<Interval>(&s).unwrap(), i);
    }

    #[test]
    fn metric_eval_examples() {
        let spec = grw_s3(ScalarFn::constant(2.0));
        let p = spec.default_point();
        let dt = spec.time_vector();
        assert_eq!(spec.metric_eval(&p, &dt, &dt).unwrap(), -1.0);
        // unit vector on S³ at χ = (π/2, π/2, 0)
        let v = TangentVector::new(vec![0.0], vec![vec![0.0, 0.0, 1.0]]);
        assert!((spec.metric_eval(&p, &v, &v).unwrap() - 4.0).abs() < 1e-15);

        let ads = ManifoldSpec::ssst(
            Interval::real_line(),
            WarpingFunction::of_time(ScalarFn::Cosh { coeff: 1.0, rate: 1.0 }),
            FiberSpec::hyperbolic(3, 1.0),
        )
        .unwrap();
        let r = 0.7;
        let p = Point::at_time(0.0, vec![vec![r, 1.0, 0.0]]);
        let g = ads.metric_eval(&p, &ads.time_vector(), &ads.time_vector()).unwrap();
        assert!((g + r.cosh().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn assembled_kasner_chart() {
        let spec = ManifoldSpec::kasner(
            Interval::positive(),
            ScalarFn::power(1.0, 1.0),
            vec![2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0],
            vec![FiberSpec::euclidean(1); 3],
        )
        .unwrap();
        let t: f64 = 1.9;
        let g = spec.assemble_chart().metric_at(&[t, 0.0, 0.0, 0.0]).unwrap();
        let expect = [-1.0, t.powf(4.0 / 3.0), t.powf(4.0 / 3.0), t.powf(-2.0 / 3.0)];
        for i in 0..4 {
            assert!((g[(i, i)] - expect[i]).abs() < 1e-14);
        }
        let tensors = riemann_oracle(&spec.assemble_chart(), &[t, 0.0, 0.0, 0.0]).unwrap();
        assert!(tensors.ricci.abs().max() < 1e-12);
    }

    #[test]
    fn schwarzschild_line_element() {
        let m = 1.0;
        let spec = ManifoldSpec::ssst(
            Interval::real_line(),
            WarpingFunction::of_time(ScalarFn::Schwarzschild { mass: m }),
            FiberSpec::schwarzschild_spatial(m),
        )
        .unwrap();
        let (r, th) = (3.3_f64, 1.2_f64);
        let g = spec.assemble_chart().metric_at(&[0.0, r, th, 0.4]).unwrap();
        let a = 1.0 - 2.0 * m / r;
        assert!((g[(0, 0)] + a).abs() < 1e-15);
        assert!((g[(1, 1)] - 1.0 / a).abs() < 1e-14);
        assert_eq!(g[(2, 2)], r * r);
        assert_eq!(g[(3, 3)], r * r * th.sin().powi(2));
        assert!(spec
            .check_point(&Point::at_time(0.0, vec![vec![1.5, 1.0, 0.0]]))
            .unwrap_err()
            .is_domain());
    }

    #[test]
    fn flatten_examples() {
        let spec = grw_s3(ScalarFn::constant(1.0));
        let v = TangentVector::new(vec![-1.0], vec![vec![1.0, 0.0, 0.0]]);
        assert_eq!(spec.flatten(&v).unwrap(), vec![-1.0, 1.0, 0.0, 0.0]);
        let two = ManifoldSpec::mgrw(
            Interval::positive(),
            vec![
                WarpingFunction::of_time(ScalarFn::power(1.0, 1.0)),
                WarpingFunction::of_time(ScalarFn::power(1.0, 2.0)),
            ],
            vec![FiberSpec::euclidean(1), FiberSpec::sphere(2, 1.0)],
        )
        .unwrap();
        let v = TangentVector::new(vec![0.3], vec![vec![1.0], vec![0.0, 2.0]]);
        assert_eq!(two.flatten(&v).unwrap(), vec![0.3, 1.0, 0.0, 2.0]);
        assert!(two.split(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(ManifoldSpec::mgrw(Interval::positive(), vec![], vec![]).is_err());
        assert!(ManifoldSpec::grw(
            Interval::real_line(),
            WarpingFunction::of_time(ScalarFn::power(1.0, 1.0)),
            FiberSpec::euclidean(3)
        )
        .is_err());
        let bad_tag = FiberSpec::custom(FiberSpec::sphere(2, 1.0).chart(), Some(-1.0), vec![1.0, 0.0]);
        assert!(bad_tag.validate().is_err());
        let good_tag = FiberSpec::custom(FiberSpec::hyperbolic(3, 2.0).chart(), Some(-0.25), vec![1.0, 1.0, 0.0]);
        good_tag.validate().unwrap();
    }

    #[test]
    fn json_round_trip() {
        let spec = ManifoldSpec::kasner(
            Interval::positive(),
            ScalarFn::power(1.0, 1.0),
            vec![2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0],
            vec![FiberSpec::euclidean(1); 3],
        )
        .unwrap();
        let s = spec.to_json().unwrap();
        let back = ManifoldSpec::from_json(&s).unwrap();
        assert_eq!(back.kasner_exponents, spec.kasner_exponents);
        assert_eq!(back.to_json().unwrap(), s);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = spec.sample_point(&mut rng);
        assert_eq!(back.metric_matrix(&p).unwrap(), spec.metric_matrix(&p).unwrap());
    }
}
