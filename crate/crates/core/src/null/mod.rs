//! Null congruences, degenerate planes and null sectional curvature.
//!
//! `K_N(Π) = g(R(L,S)S, L) / g(S,S)` for a plane spanned by a null `L` and a
//! spacelike `S ⊥ L`. Normalizing `g(L, U) = −1` against a timelike frame `U`
//! gives the `U`-normalized curvature `K_U`.

mod derived;
mod printed;

pub use derived::{
    grw_null_curvature, grw_remark, kasner_null_curvature, mgrw_null_curvature, ssst_null_curvature,
    ssst_null_curvature_h, ssst_null_curvature_unit, ssst_remark, type1_null_curvature, type2_null_curvature,
    type3_null_curvature,
};
pub use printed::{applicable_printed_forms, as_printed, PrintedForm};

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::formulas::WarpedFrame;
use crate::manifold::{bilinear, BaseSpec, ManifoldKind, ManifoldSpec, Point, TangentVector};

/// Tolerance for the plane invariants, scaled by vector and metric size.
pub const NULL_TOL: f64 = 1e-10;

pub const HESSIAN_TY_K: &str = "hessian_tY_k";
pub const HESSIAN_YY: &str = "hessian_YY";
pub const HESSIAN_TT_WW: &str = "hessian_tt_WW";
pub const HESSIAN_TY_I: &str = "hessian_tY_i";
pub const CROSS_FIBER_VW: &str = "cross_fiber_VW";
pub const FIBER_CURVATURE: &str = "fiber_curvature";
pub const WARPING_GRADIENT: &str = "warping_gradient";
pub const CROSS_FIBER_MIXED: &str = "cross_fiber_mixed";

pub const GRAD_NORM: &str = "grad_norm";
pub const HESSIAN_VV: &str = "hessian_VV";
pub const HESSIAN_VW_PAIR: &str = "hessian_VW_pair";
pub const HESSIAN_WW: &str = "hessian_WW";

/// Offset term of the `Y = 0` remarks, `K_U − K_F`-type contribution.
pub const WARPING_OFFSET: &str = "warping_offset";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullCurvatureResult {
    pub numerator: f64,
    pub denominator: f64,
    pub value: f64,
    pub breakdown: Vec<Term>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl NullCurvatureResult {
    /// Builds a result whose numerator is the sum of the terms.
    pub fn from_terms(terms: Vec<(&str, f64)>, denominator: f64) -> Result<Self> {
        if !(denominator > 0.0) {
            return Err(GeometryError::Plane(format!("g(S,S) = {denominator} is not positive")));
        }
        let numerator = terms.iter().map(|(_, v)| v).sum::<f64>();
        Ok(Self {
            numerator,
            denominator,
            value: numerator / denominator,
            breakdown: terms
                .into_iter()
                .map(|(l, v)| Term {
                    label: l.to_string(),
                    value: v,
                })
                .collect(),
            notes: Vec::new(),
        })
    }

    /// A value-level result, used by the `Y = 0` remarks.
    pub(crate) fn from_value_terms(terms: Vec<(&str, f64)>, denominator: f64) -> Result<Self> {
        let value: f64 = terms.iter().map(|(_, v)| v).sum();
        let mut r = Self::from_terms(terms, denominator)?;
        r.value = value;
        r.numerator = value * denominator;
        Ok(r)
    }

    pub fn term(&self, label: &str) -> f64 {
        self.breakdown
            .iter()
            .filter(|t| t.label == label)
            .map(|t| t.value)
            .sum()
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.notes.push(note.to_string());
        self
    }

    pub(crate) fn scaled(mut self, numerator_factor: f64) -> Self {
        for t in &mut self.breakdown {
            t.value *= numerator_factor;
        }
        self.numerator *= numerator_factor;
        self.value *= numerator_factor;
        self
    }
}

// ---------------------------------------------------------------------------
// Planes

/// A degenerate plane `span(L, S)` at a point, with cached invariants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullPlane {
    pub point: Point,
    pub l: TangentVector,
    pub s: TangentVector,
    pub frame_u: Option<TangentVector>,
    pub g_ll: f64,
    pub g_ls: f64,
    pub g_ss: f64,
    /// `Q = g(L,L)g(S,S) − g(L,S)²`.
    pub q: f64,
    pub g_lu: Option<f64>,
}

/// The product metric at a point as a matrix acting on flat components.
pub(crate) struct Gram {
    g: DMatrix<f64>,
    gmax: f64,
}

impl Gram {
    pub(crate) fn at(spec: &ManifoldSpec, p: &Point) -> Result<Self> {
        let g = spec.metric_matrix(p)?;
        let gmax = g.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
        Ok(Self { g, gmax })
    }

    pub(crate) fn inner(&self, u: &TangentVector, v: &TangentVector) -> f64 {
        bilinear(&self.g, &u.flatten(), &v.flatten())
    }

    fn scale(&self, u: &TangentVector, v: &TangentVector) -> f64 {
        let nu = u.flatten().iter().map(|x| x * x).sum::<f64>().sqrt();
        let nv = v.flatten().iter().map(|x| x * x).sum::<f64>().sqrt();
        (self.gmax * nu * nv).max(1.0)
    }
}

impl NullPlane {
    pub fn new(
        spec: &ManifoldSpec,
        point: Point,
        l: TangentVector,
        s: TangentVector,
        frame_u: Option<TangentVector>,
    ) -> Result<Self> {
        spec.check_vector(&l)?;
        spec.check_vector(&s)?;
        let gram = Gram::at(spec, &point)?;
        let (g_ll, g_ls, g_ss) = (gram.inner(&l, &l), gram.inner(&l, &s), gram.inner(&s, &s));
        let q = g_ll * g_ss - g_ls * g_ls;
        let sll = gram.scale(&l, &l);
        let sls = gram.scale(&l, &s);
        if g_ll.abs() > NULL_TOL * sll {
            return Err(GeometryError::Plane(format!("g(L,L) = {g_ll:e} is not null")));
        }
        if !(g_ss > NULL_TOL * gram.scale(&s, &s)) {
            return Err(GeometryError::Plane(format!("g(S,S) = {g_ss:e} is not spacelike")));
        }
        if q.abs() > NULL_TOL * sls * sls {
            return Err(GeometryError::Plane(format!("plane is not degenerate, Q = {q:e}")));
        }
        let g_lu = match &frame_u {
            Some(u) => {
                spec.check_vector(u)?;
                let v = gram.inner(&l, u);
                if (v + 1.0).abs() > NULL_TOL * gram.scale(&l, u) {
                    return Err(GeometryError::Plane(format!("g(L,U) = {v} is not −1")));
                }
                Some(v)
            }
            None => None,
        };
        Ok(Self {
            point,
            l,
            s,
            frame_u,
            g_ll,
            g_ls,
            g_ss,
            q,
            g_lu,
        })
    }

    /// The same plane with `S` replaced by `S + αL`.
    pub fn with_gauge(&self, spec: &ManifoldSpec, alpha: f64) -> Result<Self> {
        Self::new(
            spec,
            self.point.clone(),
            self.l.clone(),
            self.s.axpy(alpha, &self.l),
            self.frame_u.clone(),
        )
    }

    /// The plane with `L` replaced by `cL`; the frame normalization is dropped.
    pub fn with_scaled_l(&self, spec: &ManifoldSpec, c: f64) -> Result<Self> {
        Self::new(spec, self.point.clone(), self.l.scaled(c), self.s.clone(), None)
    }

    /// The same plane spanned by `L` and an `S` without base component.
    pub fn without_base_part(&self, spec: &ManifoldSpec) -> Result<Self> {
        let (a, h) = (self.l.base[0], self.s.base[0]);
        if a == 0.0 {
            return Err(GeometryError::Construction("L has no base component".into()));
        }
        let mut s = self.s.axpy(-h / a, &self.l);
        s.base[0] = 0.0;
        Self::new(spec, self.point.clone(), self.l.clone(), s, self.frame_u.clone())
    }
}

/// The standard observer frame: `∂_t` on an interval base, `f⁻¹∂_t` for a
/// static spacetime, and the normalized first coordinate vector for a
/// general base chart.
pub fn default_frame(spec: &ManifoldSpec, p: &Point) -> Result<TangentVector> {
    let gram = Gram::at(spec, p)?;
    let dt = spec.time_vector();
    let g00 = gram.inner(&dt, &dt);
    if !(g00 < 0.0) {
        return Err(GeometryError::Signature(format!(
            "first coordinate vector is not timelike (g = {g00})"
        )));
    }
    Ok(match (&spec.base, spec.kind) {
        (BaseSpec::Interval(_), ManifoldKind::Ssst) => dt.scaled(1.0 / spec.warpings[0].value(&p.fibers[0])),
        (BaseSpec::Interval(_), _) => dt,
        (BaseSpec::Chart(_), _) => dt.scaled(1.0 / (-g00).sqrt()),
    })
}

/// Returns the `L` in `C(U)` along the spatial part of `direction`:
/// `g(L,L) = 0` and `g(L,U) = −1`.
pub fn normalize_null(
    spec: &ManifoldSpec,
    p: &Point,
    u: &TangentVector,
    direction: &TangentVector,
) -> Result<TangentVector> {
    spec.check_vector(u)?;
    spec.check_vector(direction)?;
    let gram = Gram::at(spec, p)?;
    let guu = gram.inner(u, u);
    if !(guu < 0.0) {
        return Err(GeometryError::Signature(format!(
            "frame U is not timelike (g(U,U) = {guu})"
        )));
    }
    let e = direction.axpy(-gram.inner(direction, u) / guu, u);
    let gee = gram.inner(&e, &e);
    if !(gee > NULL_TOL * gram.scale(&e, &e)) || e.is_zero() {
        return Err(GeometryError::Construction(
            "direction has no spatial part relative to U".into(),
        ));
    }
    let n = (-guu).sqrt();
    // L = (U/n + E/|E|)/n
    Ok(u.scaled(1.0 / (n * n)).axpy(1.0 / (n * gee.sqrt()), &e))
}

/// Completes a candidate to a spacelike `S` with `g(L,S) = 0` by adding a
/// multiple of the frame (default `∂_t`), and validates the plane.
pub fn make_degenerate_plane(
    spec: &ManifoldSpec,
    p: &Point,
    l: &TangentVector,
    s_candidate: &TangentVector,
    frame_u: Option<&TangentVector>,
) -> Result<NullPlane> {
    spec.check_vector(l)?;
    spec.check_vector(s_candidate)?;
    let gram = Gram::at(spec, p)?;
    let gll = gram.inner(l, l);
    if gll.abs() > NULL_TOL * gram.scale(l, l) {
        return Err(GeometryError::Plane(format!("L is not null, g(L,L) = {gll:e}")));
    }
    let t = match frame_u {
        Some(u) => u.clone(),
        None => spec.time_vector(),
    };
    let glt = gram.inner(l, &t);
    if glt.abs() <= NULL_TOL * gram.scale(l, &t) {
        return Err(GeometryError::Construction("L is orthogonal to the frame".into()));
    }
    let s = s_candidate.axpy(-gram.inner(l, s_candidate) / glt, &t);
    let gss = gram.inner(&s, &s);
    let tol = NULL_TOL * gram.scale(&s, &s);
    if gss.abs() <= tol || s.is_zero() {
        return Err(GeometryError::DegenerateInput("S candidate is parallel to L".into()));
    }
    if gss < 0.0 {
        return Err(GeometryError::Signature(format!(
            "completed S is timelike, g(S,S) = {gss}"
        )));
    }
    let frame = frame_u.filter(|u| (gram.inner(l, u) + 1.0).abs() <= NULL_TOL * gram.scale(l, u));
    NullPlane::new(spec, p.clone(), l.clone(), s, frame.cloned())
}

pub fn plane_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian coefficients in an orthonormal frame of every factor.
pub fn random_vector<R: Rng + ?Sized>(spec: &ManifoldSpec, p: &Point, rng: &mut R) -> Result<TangentVector> {
    spec.check_point(p)?;
    let mut gauss = |n: usize| -> Vec<f64> { (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect() };
    let mut v = spec.zero_vector();
    v.base = match &spec.base {
        BaseSpec::Interval(_) => {
            let lapse = if spec.is_ssst() {
                spec.warpings[0].value(&p.fibers[0])
            } else {
                1.0
            };
            vec![gauss(1)[0] / lapse]
        }
        BaseSpec::Chart(c) => {
            let g = c.metric_at(&p.base)?;
            let eig = g.symmetric_eigen();
            let z = gauss(c.dim());
            let mut out = vec![0.0; c.dim()];
            for k in 0..c.dim() {
                let w = z[k] / eig.eigenvalues[k].abs().sqrt();
                for i in 0..c.dim() {
                    out[i] += w * eig.eigenvectors[(i, k)];
                }
            }
            out
        }
    };
    for (i, f) in spec.fibers.iter().enumerate() {
        let g = f.metric_at(&p.fibers[i]);
        let chol = g
            .cholesky()
            .ok_or_else(|| GeometryError::Validation("fiber metric is not positive definite".into()))?;
        let z = nalgebra::DVector::from_vec(gauss(f.dim));
        let e = chol
            .l()
            .transpose()
            .solve_upper_triangular(&z)
            .ok_or_else(|| GeometryError::Degeneracy("fiber frame".into()))?;
        let b = if spec.is_ssst() {
            1.0
        } else {
            spec.warpings[i].value(&p.base)
        };
        v.fibers[i] = e.iter().map(|x| x / b).collect();
    }
    Ok(v)
}

/// A random degenerate plane in `C(U)` at `p`.
pub fn sample_null_plane<R: Rng + ?Sized>(
    spec: &ManifoldSpec,
    p: &Point,
    u: &TangentVector,
    rng: &mut R,
) -> Result<NullPlane> {
    for _ in 0..16 {
        let d = random_vector(spec, p, rng)?;
        let l = match normalize_null(spec, p, u, &d) {
            Ok(l) => l,
            Err(GeometryError::Construction(_)) => continue,
            Err(e) => return Err(e),
        };
        let alpha: f64 = rng.random_range(-1.0..=1.0);
        let cand = random_vector(spec, p, rng)?.axpy(alpha, &l);
        match make_degenerate_plane(spec, p, &l, &cand, Some(u)) {
            Ok(plane) => return Ok(plane),
            Err(GeometryError::DegenerateInput(_)) | Err(GeometryError::Construction(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(GeometryError::Construction(
        "could not sample a degenerate plane".into(),
    ))
}

/// Seeded convenience wrapper: the `k`-th plane of a seed at a point.
pub fn seeded_plane(spec: &ManifoldSpec, p: &Point, seed: u64) -> Result<NullPlane> {
    let u = default_frame(spec, p)?;
    sample_null_plane(spec, p, &u, &mut plane_rng(seed))
}

// ---------------------------------------------------------------------------
// Evaluation

const PARTS_L: [&str; 2] = ["T", "V"];
const PARTS_S: [&str; 2] = ["Y", "W"];

fn base_only(v: &TangentVector) -> TangentVector {
    let mut out = v.clone();
    for f in &mut out.fibers {
        f.iter_mut().for_each(|x| *x = 0.0);
    }
    out
}

fn fiber_only(v: &TangentVector) -> TangentVector {
    let mut out = v.clone();
    out.base.iter_mut().for_each(|x| *x = 0.0);
    out
}

/// `g(R(L,S)S,L)/g(S,S)` from the closed-form curvature, expanded into the
/// sixteen blocks obtained by splitting `L = T + V` and `S = Y + W` into base
/// and fiber parts.
pub fn null_curvature_generic(spec: &ManifoldSpec, plane: &NullPlane) -> Result<NullCurvatureResult> {
    let frame = WarpedFrame::at(spec, &plane.point)?;
    let lp = [base_only(&plane.l), fiber_only(&plane.l)];
    let sp = [base_only(&plane.s), fiber_only(&plane.s)];
    let own = |v: &TangentVector| frame.to_own(v);
    let mut terms: Vec<(String, f64)> = Vec::with_capacity(16);
    for (d, ld) in lp.iter().enumerate() {
        for (c, sc) in sp.iter().enumerate() {
            for (b, sb) in sp.iter().enumerate() {
                for (a, la) in lp.iter().enumerate() {
                    let label = format!("R({},{}){}.{}", PARTS_L[a], PARTS_S[b], PARTS_S[c], PARTS_L[d]);
                    let r = frame.riemann_own(&own(la), &own(sb), &own(sc));
                    terms.push((label, frame.inner_own(&r, &own(ld))));
                }
            }
        }
    }
    let den = frame.inner_own(&own(&plane.s), &own(&plane.s));
    NullCurvatureResult::from_terms(terms.iter().map(|(l, v)| (l.as_str(), *v)).collect(), den)
}

/// The specialized evaluator for the spec's kind, falling back to the generic
/// path for general multiply warped products.
pub fn specialized_null_curvature(spec: &ManifoldSpec, plane: &NullPlane) -> Result<NullCurvatureResult> {
    match spec.kind {
        ManifoldKind::Grw => grw_null_curvature(spec, plane),
        ManifoldKind::Mgrw => mgrw_null_curvature(spec, plane),
        ManifoldKind::Kasner => kasner_null_curvature(spec, plane),
        ManifoldKind::Ssst => ssst_null_curvature(spec, plane),
        ManifoldKind::MultiplyWarped => match spec.base {
            BaseSpec::Interval(_) => mgrw_null_curvature(spec, plane),
            BaseSpec::Chart(_) => null_curvature_generic(spec, plane),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotropyStats {
    pub mean: f64,
    pub max_deviation: f64,
    pub values: Vec<f64>,
}

/// Samples `n_planes` degenerate planes in `C(U)` and reports the spread of `K_U`.
pub fn isotropy_scan(
    spec: &ManifoldSpec,
    p: &Point,
    u: &TangentVector,
    n_planes: usize,
    seed: u64,
) -> Result<IsotropyStats> {
    let mut rng = plane_rng(seed);
    let values = (0..n_planes)
        .map(|_| {
            let plane = sample_null_plane(spec, p, u, &mut rng)?;
            Ok(specialized_null_curvature(spec, &plane)?.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mean = if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    };
    let max_deviation = values.iter().fold(0.0_f64, |m, v| m.max((v - mean).abs()));
    Ok(IsotropyStats {
        mean,
        max_deviation,
        values,
    })
}
