//! Closed-form connection and curvature of multiply warped products.
//!
//! Everything here works factor by factor and never assembles the product
//! chart. A standard static spacetime `−f²dt² ⊕ g_F` is handled as the warped
//! product `F ×_f I` whose base is the spatial factor and whose single fiber
//! is the time line with metric `−dt²`; the conversion is internal and all
//! public functions take and return vectors in the user layout of
//! [`ManifoldSpec`].

use nalgebra::DMatrix;

use crate::dual::HyperDual;
use crate::error::{GeometryError, Result};
use crate::manifold::{bilinear, BaseSpec, ManifoldSpec, Point, TangentVector};
use crate::oracle::{riemann_oracle, scalar_jet, CoordinateChart, CurvatureTensors};
use crate::scalar::WarpingFunction;
use crate::tensor::Array3;

/// A factor of the product, in the user layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    Base,
    Fiber(usize),
}

/// A vector field lifted from one factor, given by its components at the
/// point and optionally its Jacobian `jac[(k, i)] = ∂_i V^k` in that factor's
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedField {
    pub origin: Factor,
    pub vector: Vec<f64>,
    pub jacobian: Option<DMatrix<f64>>,
}

impl LiftedField {
    pub fn new(origin: Factor, vector: Vec<f64>) -> Self {
        Self {
            origin,
            vector,
            jacobian: None,
        }
    }

    pub fn with_jacobian(mut self, jac: DMatrix<f64>) -> Self {
        self.jacobian = Some(jac);
        self
    }

    /// The lift as a tangent vector with one populated block.
    pub fn to_vector(&self, spec: &ManifoldSpec) -> Result<TangentVector> {
        let mut v = spec.zero_vector();
        let slot = match self.origin {
            Factor::Base => &mut v.base,
            Factor::Fiber(i) => v
                .fibers
                .get_mut(i)
                .ok_or_else(|| GeometryError::shape("fiber index", spec.m(), i + 1))?,
        };
        if slot.len() != self.vector.len() {
            return Err(GeometryError::shape("lifted field", slot.len(), self.vector.len()));
        }
        slot.copy_from_slice(&self.vector);
        Ok(v)
    }
}

/// A scalar function lifted from one factor.
pub struct LiftedScalar<'a> {
    pub origin: Factor,
    pub func: &'a dyn Fn(&[HyperDual]) -> HyperDual,
}

/// Curvature data of one factor.
#[derive(Debug, Clone)]
pub enum FactorCurvature {
    Constant(f64),
    Tensor(Box<CurvatureTensors>),
}

/// Metric, connection and curvature of one factor at the point.
#[derive(Debug, Clone)]
pub struct FactorGeometry {
    pub dim: usize,
    pub point: Vec<f64>,
    pub metric: DMatrix<f64>,
    pub metric_inv: DMatrix<f64>,
    pub gamma: Array3,
    pub curvature: FactorCurvature,
    chart: CoordinateChart,
}

impl FactorGeometry {
    fn from_chart(chart: CoordinateChart, point: &[f64], constant: Option<f64>) -> Result<Self> {
        let dim = chart.dim();
        let tensors = riemann_oracle(&chart, point)?;
        let curvature = match constant {
            Some(k) => FactorCurvature::Constant(k),
            None if dim == 1 => FactorCurvature::Constant(0.0),
            None => FactorCurvature::Tensor(Box::new(tensors.clone())),
        };
        Ok(Self {
            dim,
            point: point.to_vec(),
            metric: tensors.metric,
            metric_inv: tensors.metric_inv,
            gamma: tensors.gamma,
            curvature,
            chart,
        })
    }

    fn line(value: f64) -> Self {
        Self {
            dim: 1,
            point: vec![value],
            metric: DMatrix::from_element(1, 1, -1.0),
            metric_inv: DMatrix::from_element(1, 1, -1.0),
            gamma: Array3::zeros(1),
            curvature: FactorCurvature::Constant(0.0),
            chart: CoordinateChart::from_fn(1, |_| vec![HyperDual::constant(-1.0)]),
        }
    }

    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        bilinear(&self.metric, u, v)
    }

    fn raise(&self, covector: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.metric_inv[(i, j)] * covector[j]).sum())
            .collect()
    }

    /// `R(A,B)C` of the factor's own metric.
    pub fn curvature_apply(&self, a: &[f64], b: &[f64], c: &[f64]) -> Vec<f64> {
        match &self.curvature {
            FactorCurvature::Constant(k) => {
                let (bc, ac) = (self.inner(b, c), self.inner(a, c));
                (0..self.dim).map(|l| k * (bc * a[l] - ac * b[l])).collect()
            }
            FactorCurvature::Tensor(t) => t.apply(a, b, c),
        }
    }

    pub fn ricci(&self, a: &[f64], b: &[f64]) -> f64 {
        match &self.curvature {
            FactorCurvature::Constant(k) => k * (self.dim as f64 - 1.0) * self.inner(a, b),
            FactorCurvature::Tensor(t) => t.ricci_form(a, b),
        }
    }

    /// `∇_A B` inside the factor, `jac[(k, i)] = ∂_i B^k`.
    fn connection(&self, a: &[f64], b: &[f64], jac: &DMatrix<f64>) -> Vec<f64> {
        (0..self.dim)
            .map(|k| {
                let mut s = 0.0;
                for i in 0..self.dim {
                    s += a[i] * jac[(k, i)];
                    for j in 0..self.dim {
                        s += self.gamma.get(k, i, j) * a[i] * b[j];
                    }
                }
                s
            })
            .collect()
    }

    /// Covariant Hessian, gradient and Laplacian of a scalar on the factor.
    fn scalar_geometry(&self, func: &dyn Fn(&[HyperDual]) -> HyperDual) -> ScalarGeometry {
        let (value, d, dd) = scalar_jet(func, &self.point);
        let n = self.dim;
        let hessian = DMatrix::from_fn(n, n, |i, j| {
            dd[(i, j)] - (0..n).map(|k| self.gamma.get(k, i, j) * d[k]).sum::<f64>()
        });
        let grad = self.raise(&d);
        let laplacian = self.metric_inv.component_mul(&hessian).sum();
        let norm_sq = d.iter().zip(&grad).map(|(a, b)| a * b).sum();
        ScalarGeometry {
            value,
            grad,
            hessian,
            laplacian,
            norm_sq,
        }
    }

    pub fn chart(&self) -> &CoordinateChart {
        &self.chart
    }
}

/// Value, gradient, Hessian, Laplacian and `g(grad, grad)` of a scalar on the
/// base factor.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarGeometry {
    pub value: f64,
    pub grad: Vec<f64>,
    pub hessian: DMatrix<f64>,
    pub laplacian: f64,
    pub norm_sq: f64,
}

impl ScalarGeometry {
    /// Base objects of `b(t)` on `(I, −dt²)`: `grad b = −b'∂_t`,
    /// `g(grad b, grad b) = −b'²`, `H^b(∂_t,∂_t) = b''`, `Δb = −b''`.
    pub fn interval(b: f64, db: f64, ddb: f64) -> Self {
        Self {
            value: b,
            grad: vec![-db],
            hessian: DMatrix::from_element(1, 1, ddb),
            laplacian: -ddb,
            norm_sq: -db * db,
        }
    }

    /// `∇_X grad b`, raised from the Hessian.
    fn nabla_grad(&self, base: &FactorGeometry, x: &[f64]) -> Vec<f64> {
        let hx: Vec<f64> = (0..base.dim)
            .map(|i| (0..base.dim).map(|j| self.hessian[(i, j)] * x[j]).sum())
            .collect();
        base.raise(&hx)
    }

    fn derivative_along(&self, base: &FactorGeometry, x: &[f64]) -> f64 {
        // X(b) = g_B(grad b, X)
        base.inner(&self.grad, x)
    }
}

/// Which of the nine curvature cases a factor pattern falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RiemannCase {
    /// `R(X,Y)Z = R_B(X,Y)Z`
    BaseBaseBase = 1,
    /// `R(V,X)Y = −(H^{b_i}(X,Y)/b_i) V`
    FiberBaseBase = 2,
    /// mixed distinct fibers with a base slot, vanishing
    DistinctFibers = 3,
    /// `R(X,Y)V = 0`
    BaseBaseFiber = 4,
    /// `R(V,W)X = 0` for one fiber
    FiberFiberBase = 5,
    /// `R(V,W)U = 0` for `V,W ∈ F_i`, `U ∈ F_l`, `l ≠ i`
    SameSameOther = 6,
    /// `R(U,V)W = −g(V,W) g_B(grad b_i, grad b_k)/(b_i b_k) U`
    OtherSameSame = 7,
    /// `R(X,V)W = −(g(V,W)/b_i) ∇_X grad b_i`
    BaseFiberFiber = 8,
    /// `R(V,W)U = R_{F_i}(V,W)U + (‖grad b_i‖²/b_i²)(g(V,U)W − g(W,U)V)`
    FiberFiberFiber = 9,
}

/// The case together with whether the first two slots were swapped to reach it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseDispatch {
    pub case: RiemannCase,
    pub swapped: bool,
}

/// Classifies a factor pattern of the warped product in its own layout
/// (`Factor::Base` is the warped product's base).
pub fn classify(a: Factor, b: Factor, c: Factor) -> CaseDispatch {
    use Factor::{Base as B, Fiber as F};
    use RiemannCase::*;
    let plain = |case| CaseDispatch { case, swapped: false };
    let swap = |case| CaseDispatch { case, swapped: true };
    match (a, b, c) {
        (B, B, B) => plain(BaseBaseBase),
        (F(_), B, B) => plain(FiberBaseBase),
        (B, F(_), B) => swap(FiberBaseBase),
        (B, B, F(_)) => plain(BaseBaseFiber),
        (F(i), F(k), B) if i == k => plain(FiberFiberBase),
        (F(_), F(_), B) => plain(DistinctFibers),
        (B, F(i), F(k)) if i == k => plain(BaseFiberFiber),
        (F(i), B, F(k)) if i == k => swap(BaseFiberFiber),
        (B, F(_), F(_)) | (F(_), B, F(_)) => plain(DistinctFibers),
        (F(i), F(k), F(l)) if i == k && k == l => plain(FiberFiberFiber),
        (F(i), F(k), F(_)) if i == k => plain(SameSameOther),
        (F(_), F(k), F(l)) if k == l => plain(OtherSameSame),
        (F(i), F(_), F(l)) if i == l => swap(OtherSameSame),
        (F(_), F(_), F(_)) => plain(DistinctFibers),
    }
}

/// Pointwise data of all factors, in the warped product's own layout.
#[derive(Debug, Clone)]
pub struct WarpedFrame {
    pub base: FactorGeometry,
    pub fibers: Vec<FactorGeometry>,
    pub warps: Vec<ScalarGeometry>,
    static_layout: bool,
}

/// Multilinear slot value: base part plus one part per fiber.
type Parts = TangentVector;

impl WarpedFrame {
    pub fn at(spec: &ManifoldSpec, p: &Point) -> Result<Self> {
        spec.check_point(p)?;
        if spec.is_ssst() {
            let fiber = &spec.fibers[0];
            let x = &p.fibers[0];
            let base = FactorGeometry::from_chart(fiber.chart(), x, fiber.constant_curvature())?;
            let f = &spec.warpings[0];
            let warp = base.scalar_geometry(&|y: &[HyperDual]| f.eval(y));
            return Ok(Self {
                base,
                fibers: vec![FactorGeometry::line(p.base[0])],
                warps: vec![warp],
                static_layout: true,
            });
        }
        let fibers = spec
            .fibers
            .iter()
            .zip(&p.fibers)
            .map(|(f, x)| FactorGeometry::from_chart(f.chart(), x, f.constant_curvature()))
            .collect::<Result<Vec<_>>>()?;
        let (base, warps) = match &spec.base {
            BaseSpec::Interval(_) => {
                let t = p.base[0];
                let warps = spec
                    .warpings
                    .iter()
                    .map(|w| {
                        let d = w.eval(&[HyperDual::variable(t)]);
                        ScalarGeometry::interval(d.re, d.e1, d.e12)
                    })
                    .collect();
                (FactorGeometry::line(t), warps)
            }
            BaseSpec::Chart(c) => {
                let base = FactorGeometry::from_chart(c.clone(), &p.base, None)?;
                let warps = spec
                    .warpings
                    .iter()
                    .map(|w| base.scalar_geometry(&|y: &[HyperDual]| w.eval(y)))
                    .collect();
                (base, warps)
            }
        };
        Ok(Self {
            base,
            fibers,
            warps,
            static_layout: false,
        })
    }

    pub fn m(&self) -> usize {
        self.fibers.len()
    }

    /// Converts a user-layout vector to the warped product's own layout.
    pub fn to_own(&self, v: &TangentVector) -> Parts {
        if self.static_layout {
            TangentVector::new(v.fibers[0].clone(), vec![v.base.clone()])
        } else {
            v.clone()
        }
    }

    pub fn from_own(&self, v: Parts) -> TangentVector {
        if self.static_layout {
            let TangentVector { base, mut fibers } = v;
            TangentVector::new(fibers.remove(0), vec![base])
        } else {
            v
        }
    }

    pub fn own_factor(&self, f: Factor) -> Factor {
        match (self.static_layout, f) {
            (false, f) => f,
            (true, Factor::Base) => Factor::Fiber(0),
            (true, Factor::Fiber(_)) => Factor::Base,
        }
    }

    fn zero(&self) -> Parts {
        TangentVector::new(
            vec![0.0; self.base.dim],
            self.fibers.iter().map(|f| vec![0.0; f.dim]).collect(),
        )
    }

    fn part<'a>(&self, v: &'a Parts, f: Factor) -> &'a [f64] {
        match f {
            Factor::Base => &v.base,
            Factor::Fiber(i) => &v.fibers[i],
        }
    }

    fn single(&self, f: Factor, comps: Vec<f64>) -> Parts {
        let mut out = self.zero();
        match f {
            Factor::Base => out.base = comps,
            Factor::Fiber(i) => out.fibers[i] = comps,
        }
        out
    }

    fn factors(&self) -> impl Iterator<Item = Factor> + '_ {
        std::iter::once(Factor::Base).chain((0..self.m()).map(Factor::Fiber))
    }

    /// Full metric on lifts from the same factor.
    fn lifted_inner(&self, f: Factor, u: &[f64], v: &[f64]) -> f64 {
        match f {
            Factor::Base => self.base.inner(u, v),
            Factor::Fiber(i) => self.warps[i].value.powi(2) * self.fibers[i].inner(u, v),
        }
    }

    pub fn inner_own(&self, a: &Parts, b: &Parts) -> f64 {
        self.factors()
            .map(|f| self.lifted_inner(f, self.part(a, f), self.part(b, f)))
            .sum()
    }

    /// `R(A,B)C` for three lifts, dispatched to the closed form of its case.
    pub fn riemann_lifted(&self, fa: Factor, a: &[f64], fb: Factor, b: &[f64], fc: Factor, c: &[f64]) -> Parts {
        let d = classify(fa, fb, fc);
        let ((fa, a), (fb, b)) = if d.swapped {
            ((fb, b), (fa, a))
        } else {
            ((fa, a), (fb, b))
        };
        let sign = if d.swapped { -1.0 } else { 1.0 };
        let scaled = |f: Factor, v: Vec<f64>, s: f64| self.single(f, v.into_iter().map(|x| sign * s * x).collect());
        match d.case {
            RiemannCase::BaseBaseBase => scaled(Factor::Base, self.base.curvature_apply(a, b, c), 1.0),
            RiemannCase::FiberBaseBase => {
                let Factor::Fiber(i) = fa else { unreachable!() };
                let w = &self.warps[i];
                let h = bilinear(&w.hessian, b, c);
                scaled(fa, a.to_vec(), -h / w.value)
            }
            RiemannCase::OtherSameSame => {
                let (Factor::Fiber(k), Factor::Fiber(i)) = (fa, fb) else {
                    unreachable!()
                };
                let (wi, wk) = (&self.warps[i], &self.warps[k]);
                let cross = self.base.inner(&wi.grad, &wk.grad);
                let gvw = self.lifted_inner(fb, b, c);
                scaled(fa, a.to_vec(), -gvw * cross / (wi.value * wk.value))
            }
            RiemannCase::BaseFiberFiber => {
                let Factor::Fiber(i) = fb else { unreachable!() };
                let w = &self.warps[i];
                let gvw = self.lifted_inner(fb, b, c);
                scaled(Factor::Base, w.nabla_grad(&self.base, a), -gvw / w.value)
            }
            RiemannCase::FiberFiberFiber => {
                let Factor::Fiber(i) = fa else { unreachable!() };
                let w = &self.warps[i];
                let coef = w.norm_sq / (w.value * w.value);
                let (gvu, gwu) = (self.lifted_inner(fa, a, c), self.lifted_inner(fa, b, c));
                let rf = self.fibers[i].curvature_apply(a, b, c);
                let out = (0..a.len()).map(|l| rf[l] + coef * (gvu * b[l] - gwu * a[l])).collect();
                scaled(fa, out, 1.0)
            }
            RiemannCase::DistinctFibers
            | RiemannCase::BaseBaseFiber
            | RiemannCase::FiberFiberBase
            | RiemannCase::SameSameOther => self.zero(),
        }
    }

    /// `R(A,B)C` for general vectors by multilinear expansion over factors.
    pub fn riemann_own(&self, a: &Parts, b: &Parts, c: &Parts) -> Parts {
        let mut out = self.zero();
        let nonzero = |v: &Parts, f: Factor| self.part(v, f).iter().any(|x| *x != 0.0);
        for fa in self.factors().filter(|f| nonzero(a, *f)) {
            for fb in self.factors().filter(|f| nonzero(b, *f)) {
                for fc in self.factors().filter(|f| nonzero(c, *f)) {
                    let r = self.riemann_lifted(fa, self.part(a, fa), fb, self.part(b, fb), fc, self.part(c, fc));
                    out = out.axpy(1.0, &r);
                }
            }
        }
        out
    }

    /// `Ric(A,B)` for two lifts.
    pub fn ricci_lifted(&self, fa: Factor, a: &[f64], fb: Factor, b: &[f64]) -> f64 {
        match (fa, fb) {
            (Factor::Base, Factor::Base) => {
                let mut r = self.base.ricci(a, b);
                for (i, w) in self.warps.iter().enumerate() {
                    r -= self.fibers[i].dim as f64 * bilinear(&w.hessian, a, b) / w.value;
                }
                r
            }
            (Factor::Fiber(i), Factor::Fiber(k)) if i == k => {
                let w = &self.warps[i];
                let s = self.fibers[i].dim as f64;
                let mut coef = w.laplacian / w.value + (s - 1.0) * w.norm_sq / (w.value * w.value);
                for (k, wk) in self.warps.iter().enumerate() {
                    if k != i {
                        coef += self.fibers[k].dim as f64 * self.base.inner(&w.grad, &wk.grad) / (w.value * wk.value);
                    }
                }
                self.fibers[i].ricci(a, b) - coef * self.lifted_inner(fa, a, b)
            }
            _ => 0.0,
        }
    }

    pub fn ricci_own(&self, a: &Parts, b: &Parts) -> f64 {
        let mut s = 0.0;
        for fa in self.factors() {
            for fb in self.factors() {
                s += self.ricci_lifted(fa, self.part(a, fa), fb, self.part(b, fb));
            }
        }
        s
    }

    pub fn warp(&self, i: usize) -> &ScalarGeometry {
        &self.warps[i]
    }
}

fn check_lift(spec: &ManifoldSpec, l: &LiftedField) -> Result<()> {
    l.to_vector(spec).map(|_| ())
}

/// `∇_A B` for lifted fields.
///
/// Base–base uses the base connection, mixed pairs give `(X(b_i)/b_i) V`,
/// distinct fibers give zero, and one fiber gives
/// `∇^{F_i}_V W − (g(V,W)/b_i) grad_B b_i`.
pub fn covariant_derivative(spec: &ManifoldSpec, p: &Point, a: &LiftedField, b: &LiftedField) -> Result<TangentVector> {
    check_lift(spec, a)?;
    check_lift(spec, b)?;
    let frame = WarpedFrame::at(spec, p)?;
    let (fa, fb) = (frame.own_factor(a.origin), frame.own_factor(b.origin));
    let need_jac = || {
        b.jacobian.as_ref().ok_or_else(|| {
            GeometryError::Capability(format!("∇_A B with A, B on {:?} needs the Jacobian of B", b.origin))
        })
    };
    let out = match (fa, fb) {
        (Factor::Base, Factor::Base) => {
            let jac = need_jac()?;
            frame.single(Factor::Base, frame.base.connection(&a.vector, &b.vector, jac))
        }
        (Factor::Base, Factor::Fiber(i)) | (Factor::Fiber(i), Factor::Base) => {
            let (x, v) = if fa == Factor::Base {
                (&a.vector, &b.vector)
            } else {
                (&b.vector, &a.vector)
            };
            let w = &frame.warps[i];
            let c = w.derivative_along(&frame.base, x) / w.value;
            frame.single(Factor::Fiber(i), v.iter().map(|y| c * y).collect())
        }
        (Factor::Fiber(i), Factor::Fiber(k)) if i == k => {
            let jac = need_jac()?;
            let w = &frame.warps[i];
            let along = frame.fibers[i].connection(&a.vector, &b.vector, jac);
            let gvw = frame.lifted_inner(fa, &a.vector, &b.vector);
            let mut out = frame.single(fa, along);
            out.base = w.grad.iter().map(|g| -gvw / w.value * g).collect();
            out
        }
        _ => frame.zero(),
    };
    Ok(frame.from_own(out))
}

/// `grad(φ∘π) = grad_B φ` for base scalars and
/// `grad(ψ∘σ_i) = (1/b_i²) grad_{F_i} ψ` for fiber scalars.
pub fn gradient_lift(spec: &ManifoldSpec, p: &Point, s: &LiftedScalar<'_>) -> Result<TangentVector> {
    let frame = WarpedFrame::at(spec, p)?;
    let f = frame.own_factor(s.origin);
    let out = match f {
        Factor::Base => frame.single(f, frame.base.scalar_geometry(s.func).grad),
        Factor::Fiber(i) => {
            let b2 = frame.warps[i].value.powi(2);
            let g = frame.fibers[i].scalar_geometry(s.func).grad;
            frame.single(f, g.into_iter().map(|x| x / b2).collect())
        }
    };
    Ok(frame.from_own(out))
}

/// `Δ(φ∘π) = Δ_B φ + Σ s_i g_B(grad φ, grad b_i)/b_i` and
/// `Δ(ψ∘σ_i) = Δ_{F_i}ψ / b_i²`.
pub fn laplacian_lift(spec: &ManifoldSpec, p: &Point, s: &LiftedScalar<'_>) -> Result<f64> {
    let frame = WarpedFrame::at(spec, p)?;
    Ok(match frame.own_factor(s.origin) {
        Factor::Base => {
            let phi = frame.base.scalar_geometry(s.func);
            let mut lap = phi.laplacian;
            for (i, w) in frame.warps.iter().enumerate() {
                lap += frame.fibers[i].dim as f64 * frame.base.inner(&phi.grad, &w.grad) / w.value;
            }
            lap
        }
        Factor::Fiber(i) => frame.fibers[i].scalar_geometry(s.func).laplacian / frame.warps[i].value.powi(2),
    })
}

/// `R(A,B)C` for lifted fields.
pub fn riemann_lifted(
    spec: &ManifoldSpec,
    p: &Point,
    a: &LiftedField,
    b: &LiftedField,
    c: &LiftedField,
) -> Result<TangentVector> {
    for l in [a, b, c] {
        check_lift(spec, l)?;
    }
    let frame = WarpedFrame::at(spec, p)?;
    let r = frame.riemann_lifted(
        frame.own_factor(a.origin),
        &a.vector,
        frame.own_factor(b.origin),
        &b.vector,
        frame.own_factor(c.origin),
        &c.vector,
    );
    Ok(frame.from_own(r))
}

/// `R(A,B)C` for arbitrary tangent vectors.
pub fn riemann_mwp(
    spec: &ManifoldSpec,
    p: &Point,
    a: &TangentVector,
    b: &TangentVector,
    c: &TangentVector,
) -> Result<TangentVector> {
    for v in [a, b, c] {
        spec.check_vector(v)?;
    }
    let frame = WarpedFrame::at(spec, p)?;
    let r = frame.riemann_own(&frame.to_own(a), &frame.to_own(b), &frame.to_own(c));
    Ok(frame.from_own(r))
}

/// `Ric(A,B)` for arbitrary tangent vectors.
pub fn ricci_mwp(spec: &ManifoldSpec, p: &Point, a: &TangentVector, b: &TangentVector) -> Result<f64> {
    spec.check_vector(a)?;
    spec.check_vector(b)?;
    let frame = WarpedFrame::at(spec, p)?;
    Ok(frame.ricci_own(&frame.to_own(a), &frame.to_own(b)))
}

/// Base reductions of one warping function on an interval base.
pub fn interval_warp(w: &WarpingFunction, t: f64) -> ScalarGeometry {
    let d = w.eval(&[HyperDual::variable(t)]);
    ScalarGeometry::interval(d.re, d.e1, d.e12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{FiberSpec, Interval};
    use crate::oracle::{covariant_derivative_oracle, gradient_oracle, laplacian_oracle, riemann_oracle};
    use crate::scalar::ScalarFn;

    fn grw(b: ScalarFn, fiber: FiberSpec) -> ManifoldSpec {
        ManifoldSpec::grw(Interval::positive(), WarpingFunction::of_time(b), fiber).unwrap()
    }

    #[test]
    fn dispatch_is_total_for_two_fibers() {
        let fs = [Factor::Base, Factor::Fiber(0), Factor::Fiber(1)];
        let mut seen = std::collections::HashSet::new();
        for a in fs {
            for b in fs {
                for c in fs {
                    seen.insert(classify(a, b, c).case);
                }
            }
        }
        assert_eq!(seen.len(), 9);
    }

    #[test]
    fn mixed_covariant_derivative() {
        let spec = grw(ScalarFn::power(1.0, 2.0), FiberSpec::euclidean(3));
        let t = 1.3;
        let p = Point::at_time(t, vec![vec![0.0; 3]]);
        let x = LiftedField::new(Factor::Base, vec![1.0]);
        let v = LiftedField::new(Factor::Fiber(0), vec![1.0, 0.0, 0.0]);
        let d = covariant_derivative(&spec, &p, &x, &v).unwrap();
        assert!((d.fibers[0][0] - 2.0 / t).abs() < 1e-14);
        assert_eq!(covariant_derivative(&spec, &p, &v, &x).unwrap(), d);
        assert!(matches!(
            covariant_derivative(&spec, &p, &v, &v),
            Err(GeometryError::Capability(_))
        ));
    }

    #[test]
    fn case_two_on_quadratic_warping() {
        let spec = grw(ScalarFn::power(1.0, 2.0), FiberSpec::euclidean(1));
        let t = 0.8;
        let p = Point::at_time(t, vec![vec![0.0]]);
        let v = LiftedField::new(Factor::Fiber(0), vec![1.0]);
        let dt = LiftedField::new(Factor::Base, vec![1.0]);
        let r = riemann_lifted(&spec, &p, &v, &dt, &dt).unwrap();
        assert!((r.fibers[0][0] + 2.0 / (t * t)).abs() < 1e-13);
    }

    #[test]
    fn case_seven_sign_with_two_linear_warpings() {
        let lin = WarpingFunction::of_time(ScalarFn::power(1.0, 1.0));
        let spec = ManifoldSpec::mgrw(
            Interval::positive(),
            vec![lin.clone(), lin],
            vec![FiberSpec::euclidean(1), FiberSpec::euclidean(1)],
        )
        .unwrap();
        let t = 1.7;
        let p = Point::at_time(t, vec![vec![0.0], vec![0.0]]);
        let u = LiftedField::new(Factor::Fiber(1), vec![1.0]);
        let v = LiftedField::new(Factor::Fiber(0), vec![1.0]);
        let r = riemann_lifted(&spec, &p, &u, &v, &v).unwrap();
        // g(V,V) = t², g_B(grad b_1, grad b_2) = −1: coefficient +g(V,V)/t² = 1
        assert!((r.fibers[1][0] - 1.0).abs() < 1e-14);
        let chart = spec.assemble_chart();
        let o = riemann_oracle(&chart, &[t, 0.0, 0.0]).unwrap();
        let ro = o.apply(&[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0], &[0.0, 1.0, 0.0]);
        assert!((ro[2] - r.fibers[1][0]).abs() < 1e-13);
    }

    #[test]
    fn laplacian_with_exponential_warping() {
        let spec = grw(ScalarFn::exp(1.0, 1.0), FiberSpec::euclidean(3));
        let p = Point::at_time(0.6, vec![vec![0.0; 3]]);
        let phi = |x: &[HyperDual]| x[0];
        let s = LiftedScalar {
            origin: Factor::Base,
            func: &phi,
        };
        let lap = laplacian_lift(&spec, &p, &s).unwrap();
        assert!((lap + 3.0).abs() < 1e-14);
        let chart = spec.assemble_chart();
        let x = spec.flatten_point(&p).unwrap();
        let oracle = laplacian_oracle(&chart, &x, &|y: &[HyperDual]| y[0]).unwrap();
        assert!((lap - oracle).abs() < 1e-13);
        let g = gradient_lift(&spec, &p, &s).unwrap();
        assert_eq!(g.base, vec![-1.0]);
        assert_eq!(gradient_oracle(&chart, &x, &|y: &[HyperDual]| y[0]).unwrap()[0], -1.0);
    }

    #[test]
    fn fiber_scalars_scale_by_warping() {
        let spec = grw(ScalarFn::constant(2.0), FiberSpec::sphere(2, 1.0));
        let p = Point::at_time(1.0, vec![vec![1.1, 0.3]]);
        let psi = |x: &[HyperDual]| x[0].cos();
        let s = LiftedScalar {
            origin: Factor::Fiber(0),
            func: &psi,
        };
        let g = gradient_lift(&spec, &p, &s).unwrap();
        assert!((g.fibers[0][0] + 1.1_f64.sin() / 4.0).abs() < 1e-15);
        let lap = laplacian_lift(&spec, &p, &s).unwrap();
        // cos θ is an eigenfunction of the unit-sphere Laplacian with eigenvalue −2
        assert!((lap + 2.0 * 1.1_f64.cos() / 4.0).abs() < 1e-14);
    }

    #[test]
    fn same_fiber_derivative_matches_oracle() {
        let spec = grw(ScalarFn::power(1.0, 1.5), FiberSpec::sphere(2, 1.0));
        let p = Point::at_time(1.2, vec![vec![0.9, 0.4]]);
        let v = LiftedField::new(Factor::Fiber(0), vec![0.3, -0.7]);
        let jac = DMatrix::from_row_slice(2, 2, &[0.2, 0.1, -0.4, 0.5]);
        let w = LiftedField::new(Factor::Fiber(0), vec![1.0, 0.2]).with_jacobian(jac.clone());
        let d = covariant_derivative(&spec, &p, &v, &w).unwrap();
        let mut full = DMatrix::zeros(3, 3);
        full.view_mut((1, 1), (2, 2)).copy_from(&jac);
        let x = spec.flatten_point(&p).unwrap();
        let o = covariant_derivative_oracle(&spec.assemble_chart(), &x, &[0.0, 0.3, -0.7], &[0.0, 1.0, 0.2], &full)
            .unwrap();
        let flat = d.flatten();
        for k in 0..3 {
            assert!((flat[k] - o[k]).abs() < 1e-13, "{flat:?} vs {o:?}");
        }
    }
}
