//! Closed-form null sectional curvature on multiply warped spacetimes.
//!
//! With `L = a∂_t + ΣV_i` and `S = h∂_t + ΣW_j` on `(I, −dt²) ×_{b_1} F_1 ×
//! … ×_{b_m} F_m`, the numerator `g(R(L,S)S, L)` is
//!
//! ```text
//!   a h Σ b_k b_k'' g_F(W_k,V_k)                                  hessian_tY_k
//! − h² Σ b_k b_k'' g_F(V_k,V_k)                                   hessian_YY
//! − a² Σ b_j b_j'' g_F(W_j,W_j)                                   hessian_tt_WW
//! + a h Σ b_i b_i'' g_F(W_i,V_i)                                  hessian_tY_i
//! + Σ_{j≠k} b_k b_j b_k' b_j' g_F(V_k,V_k) g_F(W_j,W_j)           cross_fiber_VW
//! + Σ b_i² g_F(R_F(W_i,V_i)V_i, W_i)                              fiber_curvature
//! − Σ b_i² b_i'² [g_F(V_i,W_i)² − g_F(V_i,V_i) g_F(W_i,W_i)]      warping_gradient
//! − Σ_{j≠k} b_k b_j b_k' b_j' g_F(V_k,W_k) g_F(V_j,W_j)           cross_fiber_mixed
//! ```
//!
//! and the denominator is `−h² + Σ b_j² g_F(W_j,W_j)`.

use super::*;
use crate::manifold::ManifoldKind;
use crate::scalar::ScalarFn;

/// Warping jet `(b, b', b'')` at the point.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Jet {
    pub b: f64,
    pub db: f64,
    pub ddb: f64,
}

/// Fiber inner products of the plane components, with `sect = g_F(R_F(W,V)V,W)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct FiberPair {
    pub gvv: f64,
    pub gww: f64,
    pub gvw: f64,
    pub sect: f64,
}

/// Interval-base decomposition of a plane.
#[derive(Debug, Clone)]
pub(crate) struct Split {
    pub a: f64,
    pub h: f64,
    pub pairs: Vec<FiberPair>,
}

pub(crate) fn require_interval(spec: &ManifoldSpec, what: &str) -> Result<()> {
    if spec.is_ssst() || spec.interval().is_none() {
        return Err(GeometryError::Validation(format!(
            "{what} needs an interval base, got {}",
            spec.kind
        )));
    }
    Ok(())
}

fn require_dims(spec: &ManifoldSpec, dims: &[usize], what: &str) -> Result<()> {
    require_interval(spec, what)?;
    if spec.fiber_dims() != dims {
        return Err(GeometryError::Validation(format!(
            "{what} needs fiber dimensions {dims:?}, got {:?}",
            spec.fiber_dims()
        )));
    }
    Ok(())
}

pub(crate) fn split(spec: &ManifoldSpec, plane: &NullPlane, l: &TangentVector) -> Result<Split> {
    spec.check_vector(l)?;
    spec.check_vector(&plane.s)?;
    let frame = WarpedFrame::at(spec, &plane.point)?;
    let pairs = frame
        .fibers
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let (v, w) = (&l.fibers[i], &plane.s.fibers[i]);
            let r = f.curvature_apply(w, v, v);
            FiberPair {
                gvv: f.inner(v, v),
                gww: f.inner(w, w),
                gvw: f.inner(v, w),
                sect: f.inner(&r, w),
            }
        })
        .collect();
    Ok(Split {
        a: l.base[0],
        h: plane.s.base[0],
        pairs,
    })
}

pub(crate) fn interval_jets(spec: &ManifoldSpec, t: f64) -> Vec<Jet> {
    spec.warpings
        .iter()
        .map(|w| {
            let d = w.eval(&[crate::dual::HyperDual::variable(t)]);
            Jet {
                b: d.re,
                db: d.e1,
                ddb: d.e12,
            }
        })
        .collect()
}

/// `(φ^p)`, `(φ^p)'`, `(φ^p)''` by the chain rule.
pub(crate) fn kasner_jets(phi: &ScalarFn, exponents: &[f64], t: f64) -> Vec<Jet> {
    let (f, df, ddf) = phi.jet(t);
    exponents
        .iter()
        .map(|&p| Jet {
            b: f.powf(p),
            db: p * f.powf(p - 1.0) * df,
            ddb: p * (p - 1.0) * f.powf(p - 2.0) * df * df + p * f.powf(p - 1.0) * ddf,
        })
        .collect()
}

pub(crate) fn mgrw_terms(sp: &Split, jets: &[Jet]) -> Vec<(&'static str, f64)> {
    let (a, h) = (sp.a, sp.h);
    let ps = &sp.pairs;
    let sum = |f: &dyn Fn(&Jet, &FiberPair) -> f64| jets.iter().zip(ps).map(|(j, p)| f(j, p)).sum::<f64>();
    let cross = |f: &dyn Fn(&FiberPair, &FiberPair) -> f64| {
        let mut s = 0.0;
        for k in 0..jets.len() {
            for j in 0..jets.len() {
                if j != k {
                    s += jets[k].b * jets[j].b * jets[k].db * jets[j].db * f(&ps[k], &ps[j]);
                }
            }
        }
        s
    };
    let ty = a * h * sum(&|j, p| j.b * j.ddb * p.gvw);
    vec![
        (HESSIAN_TY_K, ty),
        (HESSIAN_YY, -h * h * sum(&|j, p| j.b * j.ddb * p.gvv)),
        (HESSIAN_TT_WW, -a * a * sum(&|j, p| j.b * j.ddb * p.gww)),
        (HESSIAN_TY_I, ty),
        (CROSS_FIBER_VW, cross(&|k, j| k.gvv * j.gww)),
        (FIBER_CURVATURE, sum(&|j, p| j.b * j.b * p.sect)),
        (
            WARPING_GRADIENT,
            -sum(&|j, p| j.b * j.b * j.db * j.db * (p.gvw * p.gvw - p.gvv * p.gww)),
        ),
        (CROSS_FIBER_MIXED, -cross(&|k, j| k.gvw * j.gvw)),
    ]
}

pub(crate) fn mgrw_denominator(sp: &Split, jets: &[Jet]) -> f64 {
    -sp.h * sp.h + jets.iter().zip(&sp.pairs).map(|(j, p)| j.b * j.b * p.gww).sum::<f64>()
}

fn evaluate(spec: &ManifoldSpec, plane: &NullPlane, jets: &[Jet]) -> Result<NullCurvatureResult> {
    let sp = split(spec, plane, &plane.l)?;
    NullCurvatureResult::from_terms(mgrw_terms(&sp, jets), mgrw_denominator(&sp, jets))
}

pub fn mgrw_null_curvature(spec: &ManifoldSpec, plane: &NullPlane) -> Result<NullCurvatureResult> {
    require_interval(spec, "multiply warped evaluator")?;
    evaluate(spec, plane, &interval_jets(spec, plane.point.t()))
}

pub fn grw_null_curvature(spec: &ManifoldSpec, plane: &NullPlane) -> Result<NullCurvatureResult> {
    require_interval(spec, "GRW evaluator")?;
    if spec.m() != 1 {
        return Err(GeometryError::Validation(format!(
            "GRW evaluator needs one fiber, got {}",
            spec.m()
        )));
    }
    evaluate(spec, plane, &interval_jets(spec, plane.point.t()))
}

pub(crate) fn kasner_data(spec: &ManifoldSpec) -> Result<(&ScalarFn, &[f64])> {
    require_interval(spec, "Kasner evaluator")?;
    match (spec.kind, spec.kasner_phi(), &spec.kasner_exponents) {
        (ManifoldKind::Kasner, Some(phi), Some(p)) => Ok((phi, p)),
        _ => Err(GeometryError::Validation(format!(
            "{} spec has no Kasner exponents",
            spec.kind
        ))),
    }
}

pub fn kasner_null_curvature(spec: &ManifoldSpec, plane: &NullPlane) -> Result<NullCurvatureResult> {
    let (phi, p) = kasner_data(spec)?;
    evaluate(spec, plane, &kasner_jets(phi, p, plane.point.t()))
}

/// One warped three-dimensional fiber.
pub fn type1_null_curvature(spec: &ManifoldSpec, plane: &NullPlane) -> Result<NullCurvatureResult> {
    require_dims(spec, &[3], "type I evaluator")?;
    evaluate(spec, plane, &interval_jets(spec, plane.point.t()))
}

/// A warped line and a warped surface.
pub fn type2_null_curvature(spec: &ManifoldSpec, plane: &NullPlane) -> Result<NullCurvatureResult> {
    require_dims(spec, &[1, 2], "type II evaluator")?;
    evaluate(spec, plane, &interval_jets(spec, plane.point.t()))
}

pub(crate) const KASNER_CONSTRAINT_TOL: f64 = 1e-12;

pub(crate) fn check_kasner_constraint(p: &[f64]) -> Result<()> {
    let s1: f64 = p.iter().sum();
    let s2: f64 = p.iter().map(|x| x * x).sum();
    if (s1 - 1.0).abs() > KASNER_CONSTRAINT_TOL || (s2 - 1.0).abs() > KASNER_CONSTRAINT_TOL {
        return Err(GeometryError::Constraint(format!(
            "Kasner exponents {p:?} give Σp = {s1}, Σp² = {s2}"
        )));
    }
    Ok(())
}

/// Three warped lines with vacuum Kasner exponents.
pub fn type3_null_curvature(spec: &ManifoldSpec, plane: &NullPlane) -> Result<NullCurvatureResult> {
    require_dims(spec, &[1, 1, 1], "type III evaluator")?;
    let (phi, p) = kasner_data(spec)?;
    check_kasner_constraint(p)?;
    evaluate(spec, plane, &kasner_jets(phi, p, plane.point.t()))
}

/// `K_U = a²(K_F/b² − b''/b + (b'/b)²)` on planes with no base component in `S`.
pub fn grw_remark(spec: &ManifoldSpec, plane: &NullPlane) -> Result<NullCurvatureResult> {
    require_interval(spec, "GRW remark")?;
    if spec.m() != 1 {
        return Err(GeometryError::Validation("GRW remark needs one fiber".into()));
    }
    let (k_f, j, sp) = remark_data(spec, plane)?;
    let a2 = sp.a * sp.a;
    NullCurvatureResult::from_value_terms(
        vec![
            (FIBER_CURVATURE, a2 * k_f / (j.b * j.b)),
            (WARPING_OFFSET, a2 * (-j.ddb / j.b + (j.db / j.b).powi(2))),
        ],
        mgrw_denominator(&sp, &[j]),
    )
}

pub(crate) fn remark_data(spec: &ManifoldSpec, plane: &NullPlane) -> Result<(f64, Jet, Split)> {
    let sp = split(spec, plane, &plane.l)?;
    let tol = NULL_TOL * plane.s.max_abs().max(1.0);
    if sp.h.abs() > tol {
        return Err(GeometryError::Validation(format!(
            "remark applies to planes with S tangent to the fiber, got h = {}",
            sp.h
        )));
    }
    let p = sp.pairs[0];
    let area = p.gvv * p.gww - p.gvw * p.gvw;
    if !(area > 0.0) {
        return Err(GeometryError::Plane("fiber plane is degenerate".into()));
    }
    let j = interval_jets(spec, plane.point.t())[0];
    Ok((p.sect / area, j, sp))
}

// ---------------------------------------------------------------------------
// Static spacetimes

/// Static decomposition: `a`, `h` time components and the spatial factor data.
pub(crate) struct StaticSplit {
    pub a: f64,
    pub h: f64,
    pub f: f64,
    pub grad_norm: f64,
    pub hvv: f64,
    pub hvw: f64,
    pub hww: f64,
    pub gvv: f64,
    pub gvw: f64,
    pub gww: f64,
    /// `g_F(R_F(V,W)W,V)`.
    pub sect: f64,
}

pub(crate) fn require_static(spec: &ManifoldSpec) -> Result<()> {
    if !spec.is_ssst() {
        return Err(GeometryError::Validation(format!(
            "static evaluator needs an SSST spec, got {}",
            spec.kind
        )));
    }
    Ok(())
}

pub(crate) fn static_split(
    spec: &ManifoldSpec,
    point: &Point,
    l: &TangentVector,
    s: &TangentVector,
) -> Result<StaticSplit> {
    require_static(spec)?;
    spec.check_vector(l)?;
    spec.check_vector(s)?;
    let frame = WarpedFrame::at(spec, point)?;
    let geo = frame.warp(0);
    let base = &frame.base;
    let (v, w) = (&l.fibers[0], &s.fibers[0]);
    let hess = |x: &[f64], y: &[f64]| bilinear(&geo.hessian, x, y);
    let r = base.curvature_apply(v, w, w);
    Ok(StaticSplit {
        a: l.base[0],
        h: s.base[0],
        f: geo.value,
        grad_norm: geo.norm_sq,
        hvv: hess(v, v),
        hvw: hess(v, w),
        hww: hess(w, w),
        gvv: base.inner(v, v),
        gvw: base.inner(v, w),
        gww: base.inner(w, w),
        sect: base.inner(&r, v),
    })
}

fn static_denominator(s: &StaticSplit) -> f64 {
    -s.f * s.f * s.h * s.h + s.gww
}

/// `g_F(R_F(V,W)W,V) + a²f H(W,W) + h²f H(V,V) − 2ahf H(V,W)` over
/// `−f²h² + g_F(W,W)` for `L = a∂_t + V`, `S = h∂_t + W`.
pub fn ssst_null_curvature(spec: &ManifoldSpec, plane: &NullPlane) -> Result<NullCurvatureResult> {
    let s = static_split(spec, &plane.point, &plane.l, &plane.s)?;
    NullCurvatureResult::from_terms(static_terms(&s), static_denominator(&s))
}

pub(crate) fn static_terms(s: &StaticSplit) -> Vec<(&'static str, f64)> {
    vec![
        (GRAD_NORM, 0.0),
        (HESSIAN_VV, s.h * s.h * s.f * s.hvv),
        (HESSIAN_VW_PAIR, -2.0 * s.a * s.h * s.f * s.hvw),
        (HESSIAN_WW, s.a * s.a * s.f * s.hww),
        (FIBER_CURVATURE, s.sect),
    ]
}

/// The plane through `L = f⁻¹∂_t + V/|V|` and `S = h∂_t + W`, with `W`
/// adjusted along `V` so that `g(L,S) = 0`.
pub fn ssst_null_curvature_h(
    spec: &ManifoldSpec,
    point: &Point,
    v: &[f64],
    w: &[f64],
    h: f64,
) -> Result<NullCurvatureResult> {
    let plane = ssst_plane_h(spec, point, v, w, h)?;
    ssst_null_curvature(spec, &plane)
}

pub fn ssst_plane_h(spec: &ManifoldSpec, point: &Point, v: &[f64], w: &[f64], h: f64) -> Result<NullPlane> {
    require_static(spec)?;
    spec.check_point(point)?;
    let gf = spec.fibers[0].metric_at(&point.fibers[0]);
    let f = spec.warpings[0].value(&point.fibers[0]);
    let nv = bilinear(&gf, v, v).sqrt();
    if !(nv > 0.0) {
        return Err(GeometryError::Construction("V must be nonzero".into()));
    }
    let v: Vec<f64> = v.iter().map(|x| x / nv).collect();
    let lambda = f * h - bilinear(&gf, &v, w);
    let w: Vec<f64> = w.iter().zip(&v).map(|(x, y)| x + lambda * y).collect();
    let l = TangentVector::new(vec![1.0 / f], vec![v]);
    let s = TangentVector::new(vec![h], vec![w]);
    let u = TangentVector::new(vec![1.0 / f], vec![vec![0.0; spec.fibers[0].dim]]);
    NullPlane::new(spec, point.clone(), l, s, Some(u))
}

/// Same plane with `S` rescaled to `g(S,S) = 1`; the value equals the numerator.
pub fn ssst_null_curvature_unit(spec: &ManifoldSpec, plane: &NullPlane) -> Result<NullCurvatureResult> {
    let unit = plane.s.scaled(1.0 / plane.g_ss.sqrt());
    let s = static_split(spec, &plane.point, &plane.l, &unit)?;
    NullCurvatureResult::from_terms(static_terms(&s), static_denominator(&s))
}

/// `K_U = (af)²(K_F + H(W,W)/(f g_F(W,W)))` on planes with `S` tangent to the
/// spatial factor.
pub fn ssst_remark(spec: &ManifoldSpec, plane: &NullPlane) -> Result<NullCurvatureResult> {
    let (k_f, s) = static_remark_data(spec, plane)?;
    let c = (s.a * s.f).powi(2);
    NullCurvatureResult::from_value_terms(
        vec![(FIBER_CURVATURE, c * k_f), (WARPING_OFFSET, c * s.hww / (s.f * s.gww))],
        static_denominator(&s),
    )
}

pub(crate) fn static_remark_data(spec: &ManifoldSpec, plane: &NullPlane) -> Result<(f64, StaticSplit)> {
    let s = static_split(spec, &plane.point, &plane.l, &plane.s)?;
    if s.h.abs() > NULL_TOL * plane.s.max_abs().max(1.0) {
        return Err(GeometryError::Validation(format!(
            "remark applies to planes with S tangent to the spatial factor, got h = {}",
            s.h
        )));
    }
    let area = s.gvv * s.gww - s.gvw * s.gvw;
    if !(area > 0.0) {
        return Err(GeometryError::Plane("spatial plane is degenerate".into()));
    }
    Ok((s.sect / area, s))
}
