//! Published closed forms, evaluated literally.
//!
//! Each form assumes `L = −∂_t + V` (or `L = −f⁻¹∂_t + V` for static
//! spacetimes). The plane's `L` is rescaled to that normalization, the printed
//! expression is evaluated term by term, and the numerator is scaled back.
//! Labels match the derived breakdown so the two can be compared term by term.

use serde::{Deserialize, Serialize};

use super::derived::{
    check_kasner_constraint, interval_jets, kasner_data, kasner_jets, mgrw_denominator, remark_data, require_interval,
    require_static, split, static_remark_data, static_split, FiberPair, Jet, Split,
};
use super::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrintedForm {
    /// General multiply warped formula with its own denominator.
    Theorem,
    /// Same numerator over the product denominator of the derivation's last line.
    TheoremAppendix,
    /// Specialization to `Y = h∂_t`.
    HCorollary,
    GrwCorollary,
    /// `K_U = K_F/b² + b''/b − (b'/b)²` on `Y = 0` planes.
    GrwRemark,
    KasnerCorollary,
    TypeI,
    TypeII,
    TypeIII,
    /// Static formula for general `Y`.
    SsstGeneral,
    SsstH,
    /// Static formula under `g(S,S) = 1`.
    SsstUnit,
    /// `K_U = K_F − H(W,W)/(f g_F(W,W))` on `Y = 0` planes.
    SsstRemark,
}

impl PrintedForm {
    pub const ALL: [PrintedForm; 13] = [
        Self::Theorem,
        Self::TheoremAppendix,
        Self::HCorollary,
        Self::GrwCorollary,
        Self::GrwRemark,
        Self::KasnerCorollary,
        Self::TypeI,
        Self::TypeII,
        Self::TypeIII,
        Self::SsstGeneral,
        Self::SsstH,
        Self::SsstUnit,
        Self::SsstRemark,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Theorem => "theorem",
            Self::TheoremAppendix => "theorem_appendix",
            Self::HCorollary => "h_corollary",
            Self::GrwCorollary => "grw_corollary",
            Self::GrwRemark => "grw_remark",
            Self::KasnerCorollary => "kasner_corollary",
            Self::TypeI => "type_i",
            Self::TypeII => "type_ii",
            Self::TypeIII => "type_iii",
            Self::SsstGeneral => "ssst_general",
            Self::SsstH => "ssst_h",
            Self::SsstUnit => "ssst_unit",
            Self::SsstRemark => "ssst_remark",
        }
    }

    /// Whether the form only applies to planes with no base part in `S`.
    pub fn needs_fiber_s(self) -> bool {
        matches!(self, Self::GrwRemark | Self::SsstRemark)
    }

    pub fn applies_to(self, spec: &ManifoldSpec) -> bool {
        let interval = !spec.is_ssst() && spec.interval().is_some();
        let dims = spec.fiber_dims();
        let kasner = spec.kind == ManifoldKind::Kasner && spec.kasner_exponents.is_some();
        match self {
            Self::Theorem | Self::TheoremAppendix | Self::HCorollary => interval,
            Self::GrwCorollary | Self::GrwRemark => interval && spec.m() == 1,
            Self::KasnerCorollary => interval && kasner,
            Self::TypeI => interval && dims == [3],
            Self::TypeII => interval && dims == [1, 2],
            Self::TypeIII => {
                interval
                    && kasner
                    && dims == [1, 1, 1]
                    && check_kasner_constraint(spec.kasner_exponents.as_deref().unwrap_or(&[])).is_ok()
            }
            Self::SsstGeneral | Self::SsstH | Self::SsstUnit | Self::SsstRemark => spec.is_ssst(),
        }
    }

    /// The derived evaluator this form is compared against.
    pub fn derived(self, spec: &ManifoldSpec, plane: &NullPlane) -> Result<NullCurvatureResult> {
        match self {
            Self::Theorem | Self::TheoremAppendix | Self::HCorollary => mgrw_null_curvature(spec, plane),
            Self::GrwCorollary => grw_null_curvature(spec, plane),
            Self::GrwRemark => grw_remark(spec, plane),
            Self::KasnerCorollary => kasner_null_curvature(spec, plane),
            Self::TypeI => type1_null_curvature(spec, plane),
            Self::TypeII => type2_null_curvature(spec, plane),
            Self::TypeIII => type3_null_curvature(spec, plane),
            Self::SsstGeneral | Self::SsstH => ssst_null_curvature(spec, plane),
            Self::SsstUnit => ssst_null_curvature_unit(spec, plane),
            Self::SsstRemark => ssst_remark(spec, plane),
        }
    }
}

impl std::fmt::Display for PrintedForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

pub fn applicable_printed_forms(spec: &ManifoldSpec) -> Vec<PrintedForm> {
    PrintedForm::ALL.into_iter().filter(|f| f.applies_to(spec)).collect()
}

/// Evaluates a printed form on the plane.
pub fn as_printed(form: PrintedForm, spec: &ManifoldSpec, plane: &NullPlane) -> Result<NullCurvatureResult> {
    if !form.applies_to(spec) {
        if form == PrintedForm::TypeIII {
            if let Ok((_, p)) = kasner_data(spec) {
                check_kasner_constraint(p)?;
            }
        }
        return Err(GeometryError::Validation(format!(
            "{form} does not apply to a {} spec",
            spec.kind
        )));
    }
    if spec.is_ssst() {
        return static_form(form, spec, plane);
    }
    require_interval(spec, form.name())?;
    let a = plane.l.base[0];
    if a == 0.0 {
        return Err(GeometryError::Plane("L has no time component".into()));
    }
    // L' = −L/a has time component −1; the numerator is quadratic in L.
    let lp = plane.l.scaled(-1.0 / a);
    let sp = split(spec, plane, &lp)?;
    let t = plane.point.t();
    let jets = interval_jets(spec, t);
    let r = match form {
        PrintedForm::Theorem => {
            NullCurvatureResult::from_terms(theorem_terms(&sp, &jets), mgrw_denominator(&sp, &jets))?
        }
        PrintedForm::TheoremAppendix => {
            let den: f64 = jets
                .iter()
                .zip(&sp.pairs)
                .map(|(j, p)| j.b * j.b * (-sp.h * sp.h) * p.gww)
                .sum();
            product_denominator(theorem_terms(&sp, &jets), den)?
        }
        PrintedForm::HCorollary => h_corollary(&sp, &jets)?,
        PrintedForm::GrwCorollary => grw_corollary(&sp, jets[0])?,
        PrintedForm::GrwRemark => {
            let (k_f, j, sp) = remark_data(spec, plane)?;
            let a2 = sp.a * sp.a;
            return NullCurvatureResult::from_value_terms(
                vec![
                    (FIBER_CURVATURE, a2 * k_f / (j.b * j.b)),
                    (WARPING_OFFSET, a2 * (j.ddb / j.b - (j.db / j.b).powi(2))),
                ],
                mgrw_denominator(&sp, &[j]),
            );
        }
        PrintedForm::KasnerCorollary => {
            let (phi, p) = kasner_data(spec)?;
            kasner_corollary(&sp, phi.value(t), p, &kasner_jets(phi, p, t))?
        }
        PrintedForm::TypeI => type_i(&sp, jets[0])?,
        PrintedForm::TypeII => type_ii(&sp, jets[0], jets[1])?,
        PrintedForm::TypeIII => {
            let (phi, p) = kasner_data(spec)?;
            check_kasner_constraint(p)?;
            type_iii(&sp, phi.value(t), p)?
        }
        _ => unreachable!("static forms handled above"),
    };
    Ok(r.scaled(a * a))
}

/// A result whose printed denominator may be nonpositive; the value is then
/// reported as is rather than rejected.
fn product_denominator(terms: Vec<(&str, f64)>, den: f64) -> Result<NullCurvatureResult> {
    let numerator: f64 = terms.iter().map(|(_, v)| v).sum();
    Ok(NullCurvatureResult {
        numerator,
        denominator: den,
        value: numerator / den,
        breakdown: terms
            .into_iter()
            .map(|(l, v)| Term {
                label: l.to_string(),
                value: v,
            })
            .collect(),
        notes: vec!["printed denominator".into()],
    })
}

fn sum(jets: &[Jet], ps: &[FiberPair], f: impl Fn(&Jet, &FiberPair) -> f64) -> f64 {
    jets.iter().zip(ps).map(|(j, p)| f(j, p)).sum()
}

fn cross(n: usize, f: impl Fn(usize, usize) -> f64) -> f64 {
    let mut s = 0.0;
    for k in 0..n {
        for j in 0..n {
            if j != k {
                s += f(k, j);
            }
        }
    }
    s
}

fn theorem_terms(sp: &Split, jets: &[Jet]) -> Vec<(&'static str, f64)> {
    let (h, ps) = (sp.h, &sp.pairs);
    // H(∂_t, Y) = h b'' and H(Y, Y) = h² b''.
    let ty = sum(jets, ps, |j, p| j.b * p.gvw * h * j.ddb);
    vec![
        (HESSIAN_TY_K, ty),
        (HESSIAN_YY, sum(jets, ps, |j, p| j.b * p.gvv * h * h * j.ddb)),
        (HESSIAN_TT_WW, -sum(jets, ps, |j, p| j.b * j.ddb * p.gww)),
        (HESSIAN_TY_I, ty),
        (
            CROSS_FIBER_VW,
            -cross(jets.len(), |k, j| {
                jets[k].b * jets[j].db.powi(2) * ps[k].gvv * ps[j].gww
            }),
        ),
        (FIBER_CURVATURE, sum(jets, ps, |j, p| j.b * j.b * p.sect)),
        (
            WARPING_GRADIENT,
            -sum(jets, ps, |j, p| {
                j.b * j.b * j.db * j.db * j.ddb * (p.gvw * p.gvw - p.gvv * p.gww)
            }),
        ),
    ]
}

fn h_corollary(sp: &Split, jets: &[Jet]) -> Result<NullCurvatureResult> {
    let (h, ps) = (sp.h, &sp.pairs);
    let ty = sum(jets, ps, |j, p| h * j.b * j.ddb * p.gvw);
    let terms = vec![
        (HESSIAN_TY_K, ty),
        (HESSIAN_YY, sum(jets, ps, |j, p| h * h * j.b * j.ddb * p.gvv)),
        (HESSIAN_TT_WW, -sum(jets, ps, |j, p| j.b * j.ddb * p.gww)),
        (HESSIAN_TY_I, ty),
        (
            CROSS_FIBER_VW,
            -cross(jets.len(), |k, j| {
                jets[k].b * jets[j].db.powi(2) * ps[k].gvv * ps[j].gww
            }),
        ),
        (FIBER_CURVATURE, sum(jets, ps, |j, p| j.b * j.b * p.sect)),
        (
            WARPING_GRADIENT,
            -sum(jets, ps, |j, p| {
                j.b * j.db.powi(4) * j.ddb * (p.gvw * p.gvw - p.gvv * p.gww)
            }),
        ),
    ];
    // −h'' + Σ b² g_F(W,W), with h constant along the plane.
    let den = sum(jets, ps, |j, p| j.b * j.b * p.gww);
    Ok(NullCurvatureResult::from_terms(terms, den)?.with_note("h'' taken as 0"))
}

fn grw_corollary(sp: &Split, j: Jet) -> Result<NullCurvatureResult> {
    let p = sp.pairs[0];
    let h = sp.h;
    let terms = vec![
        (HESSIAN_TT_WW, -j.b * j.ddb * p.gww),
        (FIBER_CURVATURE, j.b * j.b * p.sect),
        (HESSIAN_YY, j.b * p.gvv * h * h * j.ddb),
        (
            WARPING_GRADIENT,
            j.b * j.b * j.db * j.db * (p.gvw * p.gvw - p.gww / (j.b * j.b)),
        ),
    ];
    NullCurvatureResult::from_terms(terms, -h * h + j.b * j.b * p.gww)
}

fn kasner_corollary(sp: &Split, phi: f64, p: &[f64], jets: &[Jet]) -> Result<NullCurvatureResult> {
    let (h, ps) = (sp.h, &sp.pairs);
    let pw = |e: f64| phi.powf(e);
    let n = p.len();
    // Hessians of φ^p are taken exactly; the remaining factors are as printed.
    let ty: f64 = (0..n).map(|k| pw(p[k]) * ps[k].gvw * h * jets[k].ddb).sum();
    let terms = vec![
        (HESSIAN_TY_K, ty),
        (
            HESSIAN_YY,
            (0..n).map(|k| pw(p[k]) * ps[k].gvv * h * h * jets[k].ddb).sum(),
        ),
        (
            HESSIAN_TT_WW,
            -(0..n)
                .map(|j| pw(p[j]) * p[j] * (p[j] - 1.0) * pw(p[j] - 2.0) * ps[j].gww)
                .sum::<f64>(),
        ),
        (HESSIAN_TY_I, ty),
        (
            CROSS_FIBER_VW,
            -cross(n, |k, j| {
                pw(p[k]) * p[j] * p[j] * pw(2.0 * (p[j] - 1.0)) * ps[k].gvv * ps[j].gww
            }),
        ),
        (FIBER_CURVATURE, (0..n).map(|i| pw(2.0 * p[i]) * ps[i].sect).sum()),
        (
            WARPING_GRADIENT,
            -(0..n)
                .map(|i| {
                    pw(2.0 * p[i])
                        * p[i]
                        * p[i]
                        * pw(2.0 * (p[i] - 1.0))
                        * p[i]
                        * (p[i] - 1.0)
                        * pw(p[i] - 2.0)
                        * (ps[i].gvw * ps[i].gvw - ps[i].gvv * ps[i].gww)
                })
                .sum::<f64>(),
        ),
    ];
    let den: f64 = (0..n).map(|j| pw(2.0 * p[j]) * (-h * h) + ps[j].gww).sum();
    product_denominator(terms, den)
}

fn type_i(sp: &Split, j: Jet) -> Result<NullCurvatureResult> {
    let p = sp.pairs[0];
    let h = sp.h;
    let terms = vec![
        (HESSIAN_YY, h * h * j.b * j.ddb * p.gvv),
        (HESSIAN_TT_WW, -j.b * j.ddb * p.gww),
        (HESSIAN_TY_K, j.b * j.ddb * p.gvw),
        (FIBER_CURVATURE, j.b * j.b * p.sect),
        (
            WARPING_GRADIENT,
            -j.b * j.b * j.db * j.db * (p.gvw * p.gvw - p.gvv * p.gvw),
        ),
    ];
    Ok(NullCurvatureResult::from_terms(terms, -h * h + j.b * j.b * p.gww)?.with_note("no printed denominator"))
}

fn type_ii(sp: &Split, j1: Jet, j2: Jet) -> Result<NullCurvatureResult> {
    let (p1, p2) = (sp.pairs[0], sp.pairs[1]);
    // Line components: f1 h1 = g(V_1, W_1), h1² = g(W_1, W_1).
    let f = sp.h;
    let terms = vec![
        (HESSIAN_TY_K, j1.b * p1.gvw * f * j1.ddb),
        (HESSIAN_YY, j2.b * f * f * j2.ddb * p2.gvv),
        (HESSIAN_TT_WW, -j1.b * j1.ddb * p1.gww - j2.b * j2.ddb * p2.gww),
        (HESSIAN_TY_I, j1.b * p1.gvw * f * j1.ddb + j2.b * j2.ddb * p2.gvw),
        (FIBER_CURVATURE, j2.b * j2.b * p2.sect),
        (
            WARPING_GRADIENT,
            -j2.b * j2.b * j2.db * j2.db * (p2.gvw * p2.gvw - p2.gvv * p2.gww),
        ),
    ];
    NullCurvatureResult::from_terms(terms, -f * f + j1.b * j1.b * p1.gww + j2.b * j2.b * p2.gww)
}

fn type_iii(sp: &Split, phi: f64, p: &[f64]) -> Result<NullCurvatureResult> {
    let ps = &sp.pairs;
    let f = sp.h;
    let pw = |e: f64| phi.powf(e);
    let n = p.len();
    let terms = vec![
        (HESSIAN_TY_K, -(0..n).map(|i| pw(p[i]) * ps[i].gvw).sum::<f64>()),
        (
            HESSIAN_YY,
            (0..n)
                .map(|k| pw(p[k]) * ps[k].gvv * f * f * p[k] * (p[k] - 1.0) * pw(p[k] - 2.0))
                .sum(),
        ),
        (
            HESSIAN_TT_WW,
            -(0..n)
                .map(|j| p[j] * (p[j] - 1.0) * pw(p[j] - 2.0) * pw(p[j]) * ps[j].gww)
                .sum::<f64>(),
        ),
        (
            HESSIAN_TY_I,
            (0..n)
                .map(|i| pw(p[i]) * ps[i].gvw * f * p[i] * (p[i] - 1.0) * pw(p[i] - 2.0))
                .sum(),
        ),
        (
            CROSS_FIBER_VW,
            -cross(n, |k, j| {
                pw(p[k]) * ps[k].gvv * p[j] * p[j] * pw(2.0 * p[j] - 2.0) * ps[j].gww
            }),
        ),
    ];
    let den = -f * f * (0..n).map(|j| pw(2.0 * p[j]) * ps[j].gww).sum::<f64>();
    product_denominator(terms, den)
}

fn static_form(form: PrintedForm, spec: &ManifoldSpec, plane: &NullPlane) -> Result<NullCurvatureResult> {
    require_static(spec)?;
    let a = plane.l.base[0];
    if a == 0.0 {
        return Err(GeometryError::Plane("L has no time component".into()));
    }
    let f = spec.warpings[0].value(&plane.point.fibers[0]);
    // L' = −L/(af) has time component −1/f.
    let c = -1.0 / (a * f);
    let lp = plane.l.scaled(c);
    let back = 1.0 / (c * c);
    if form == PrintedForm::SsstRemark {
        let (k_f, s) = static_remark_data(spec, plane)?;
        let q = (s.a * s.f).powi(2);
        return NullCurvatureResult::from_value_terms(
            vec![(FIBER_CURVATURE, q * k_f), (WARPING_OFFSET, -q * s.hww / (s.f * s.gww))],
            -s.f * s.f * s.h * s.h + s.gww,
        );
    }
    let s_vec = match form {
        PrintedForm::SsstUnit => plane.s.scaled(1.0 / plane.g_ss.sqrt()),
        _ => plane.s.clone(),
    };
    let s = static_split(spec, &plane.point, &lp, &s_vec)?;
    // g_I(Y, ∂_t) = −h, g_I(Y, Y) = −h².
    let (gy_t, gy_y) = (-s.h, -s.h * s.h);
    // Literal fiber term g_F(R_F(V,W)V,W), which is −g_F(R_F(V,W)W,V).
    let fiber = -s.sect;
    let terms = match form {
        PrintedForm::SsstGeneral => vec![
            (GRAD_NORM, -s.grad_norm * (gy_t * gy_t + gy_y)),
            (HESSIAN_VV, -s.f * gy_y * s.hvv),
            (HESSIAN_VW_PAIR, -gy_t * s.hvw + gy_t * s.hvw),
            (HESSIAN_WW, s.hww / s.f),
            (FIBER_CURVATURE, fiber),
        ],
        PrintedForm::SsstH => vec![
            (HESSIAN_VV, s.f * s.h * s.h * s.hvv),
            (HESSIAN_WW, s.hww / s.f),
            (FIBER_CURVATURE, fiber),
        ],
        PrintedForm::SsstUnit => vec![
            (GRAD_NORM, -s.grad_norm * (gy_t * gy_t + gy_y)),
            (HESSIAN_VV, -s.f * gy_y * s.hvv),
            (HESSIAN_WW, -s.hww / s.f),
            (FIBER_CURVATURE, fiber),
        ],
        _ => unreachable!("interval forms handled by the caller"),
    };
    let den = -s.f * s.f * s.h * s.h + s.gww;
    let r = NullCurvatureResult::from_terms(terms, den)?.scaled(back);
    Ok(if form == PrintedForm::SsstGeneral {
        r.with_note("the two H(V,W) terms cancel")
    } else {
        r
    })
}
