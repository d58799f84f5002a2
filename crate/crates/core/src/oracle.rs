//! Coordinate-chart curvature engine used as independent ground truth.
//!
//! Everything here works from a bare metric `x ↦ g_{μν}(x)` with no knowledge
//! of warped product structure. First and second metric derivatives come from
//! hyper-dual evaluation, so the only error source is floating-point rounding.
//!
//! Index conventions: `gamma.get(k, i, j) = Γ^k_{ij}` and
//! `riemann.get(l, i, j, k) = R^l_{ijk}` where `R(∂_i, ∂_j)∂_k = R^l_{ijk} ∂_l`
//! and `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]}Z`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::dual::HyperDual;
use crate::error::{GeometryError, Result};
use crate::tensor::{Array3, Array4};

/// Row-major `n×n` metric evaluator over hyper-dual coordinates.
pub type MetricFn = Arc<dyn Fn(&[HyperDual]) -> Vec<HyperDual> + Send + Sync>;

/// Relative tolerance for null and orthogonality conditions on planes.
pub const PLANE_TOL: f64 = 1e-10;

#[derive(Clone)]
pub struct CoordinateChart {
    dim: usize,
    metric: MetricFn,
}

impl fmt::Debug for CoordinateChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoordinateChart").field("dim", &self.dim).finish()
    }
}

impl CoordinateChart {
    pub fn new(dim: usize, metric: MetricFn) -> Self {
        Self { dim, metric }
    }

    pub fn from_fn(dim: usize, f: impl Fn(&[HyperDual]) -> Vec<HyperDual> + Send + Sync + 'static) -> Self {
        Self::new(dim, Arc::new(f))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric_fn(&self) -> &MetricFn {
        &self.metric
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(GeometryError::shape("chart point", self.dim, x.len()));
        }
        Ok(())
    }

    /// Evaluates the raw hyper-dual metric and checks its shape and finiteness.
    pub fn eval_dual(&self, x: &[HyperDual]) -> Result<Vec<HyperDual>> {
        let g = (self.metric)(x);
        if g.len() != self.dim * self.dim {
            return Err(GeometryError::shape("metric components", self.dim * self.dim, g.len()));
        }
        if g.iter().any(|v| !v.is_finite()) {
            let at: Vec<f64> = x.iter().map(|v| v.re).collect();
            return Err(GeometryError::Domain(format!("metric is not finite at {at:?}")));
        }
        Ok(g)
    }

    pub fn metric_at(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.check_point(x)?;
        let xs: Vec<HyperDual> = x.iter().map(|&v| HyperDual::constant(v)).collect();
        let g = self.eval_dual(&xs)?;
        Ok(DMatrix::from_fn(self.dim, self.dim, |i, j| g[i * self.dim + j].re))
    }

    /// Metric value with all first and second partial derivatives.
    pub fn jet(&self, x: &[f64]) -> Result<MetricJet> {
        self.check_point(x)?;
        let n = self.dim;
        let mut g = DMatrix::zeros(n, n);
        let mut dg = vec![DMatrix::zeros(n, n); n];
        let mut ddg = vec![vec![DMatrix::zeros(n, n); n]; n];
        for a in 0..n {
            for b in a..n {
                let xs: Vec<HyperDual> = x
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| {
                        HyperDual::new(v, if k == a { 1.0 } else { 0.0 }, if k == b { 1.0 } else { 0.0 }, 0.0)
                    })
                    .collect();
                let m = self.eval_dual(&xs)?;
                for i in 0..n {
                    for j in 0..n {
                        let v = m[i * n + j];
                        if a == 0 && b == 0 {
                            g[(i, j)] = v.re;
                        }
                        if a == b {
                            dg[a][(i, j)] = v.e1;
                        }
                        ddg[a][b][(i, j)] = v.e12;
                        ddg[b][a][(i, j)] = v.e12;
                    }
                }
            }
        }
        let det = g.determinant();
        if !(det.abs() > 1e-12) {
            return Err(GeometryError::Degeneracy(format!("|det g| = {} at {x:?}", det.abs())));
        }
        let g_inv = g
            .clone()
            .try_inverse()
            .ok_or_else(|| GeometryError::Degeneracy(format!("metric not invertible at {x:?}")))?;
        Ok(MetricJet { g, g_inv, dg, ddg })
    }
}

/// Metric with partial derivatives at one point: `dg[k] = ∂_k g`,
/// `ddg[k][l] = ∂_k ∂_l g`.
#[derive(Debug, Clone)]
pub struct MetricJet {
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    pub dg: Vec<DMatrix<f64>>,
    pub ddg: Vec<Vec<DMatrix<f64>>>,
}

impl MetricJet {
    fn dim(&self) -> usize {
        self.g.nrows()
    }

    /// Christoffel symbols of the first kind `Γ_{l,ij}`, stored as `(l, i, j)`.
    fn first_kind(&self) -> Array3 {
        Array3::from_fn(self.dim(), |l, i, j| {
            0.5 * (self.dg[i][(j, l)] + self.dg[j][(i, l)] - self.dg[l][(i, j)])
        })
    }

    pub fn christoffel(&self) -> Array3 {
        let n = self.dim();
        let first = self.first_kind();
        Array3::from_fn(n, |k, i, j| {
            (0..n).map(|l| self.g_inv[(k, l)] * first.get(l, i, j)).sum()
        })
    }

    /// `∂_m Γ^k_{ij}` stored as `(m, k, i, j)`.
    fn christoffel_derivative(&self) -> Array4 {
        let n = self.dim();
        let first = self.first_kind();
        // ∂_m g^{kl} = −g^{ka} ∂_m g_{ab} g^{bl}
        let dginv: Vec<DMatrix<f64>> = (0..n).map(|m| -(&self.g_inv * &self.dg[m] * &self.g_inv)).collect();
        Array4::from_fn(n, |m, k, i, j| {
            (0..n)
                .map(|l| {
                    let d_first = 0.5 * (self.ddg[m][i][(j, l)] + self.ddg[m][j][(i, l)] - self.ddg[m][l][(i, j)]);
                    dginv[m][(k, l)] * first.get(l, i, j) + self.g_inv[(k, l)] * d_first
                })
                .sum()
        })
    }
}

/// Levi-Civita coefficients `Γ^k_{ij} = ½ g^{kl}(∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij})`.
pub fn christoffel(chart: &CoordinateChart, x: &[f64]) -> Result<Array3> {
    Ok(chart.jet(x)?.christoffel())
}

/// Connection, curvature and Ricci tensor of a chart at one point.
#[derive(Debug, Clone)]
pub struct CurvatureTensors {
    pub point: Vec<f64>,
    pub metric: DMatrix<f64>,
    pub metric_inv: DMatrix<f64>,
    pub gamma: Array3,
    pub riemann: Array4,
    pub ricci: DMatrix<f64>,
}

/// Symmetry and identity residuals of a curvature tensor.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SymmetryResiduals {
    pub christoffel_symmetry: f64,
    pub antisymmetry_first_pair: f64,
    pub antisymmetry_last_pair: f64,
    pub pair_symmetry: f64,
    pub first_bianchi: f64,
    pub ricci_symmetry: f64,
}

impl SymmetryResiduals {
    pub fn max(&self) -> f64 {
        [
            self.christoffel_symmetry,
            self.antisymmetry_first_pair,
            self.antisymmetry_last_pair,
            self.pair_symmetry,
            self.first_bianchi,
            self.ricci_symmetry,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn riemann_oracle(chart: &CoordinateChart, x: &[f64]) -> Result<CurvatureTensors> {
    let jet = chart.jet(x)?;
    let n = chart.dim();
    let gamma = jet.christoffel();
    let dgamma = jet.christoffel_derivative();
    // R^l_{ijk} = ∂_i Γ^l_{jk} − ∂_j Γ^l_{ik} + Γ^l_{im} Γ^m_{jk} − Γ^l_{jm} Γ^m_{ik}
    let riemann = Array4::from_fn(n, |l, i, j, k| {
        let mut r = dgamma.get(i, l, j, k) - dgamma.get(j, l, i, k);
        for m in 0..n {
            r += gamma.get(l, i, m) * gamma.get(m, j, k) - gamma.get(l, j, m) * gamma.get(m, i, k);
        }
        r
    });
    let ricci = DMatrix::from_fn(n, n, |j, k| (0..n).map(|l| riemann.get(l, l, j, k)).sum());
    Ok(CurvatureTensors {
        point: x.to_vec(),
        metric: jet.g,
        metric_inv: jet.g_inv,
        gamma,
        riemann,
        ricci,
    })
}

impl CurvatureTensors {
    pub fn dim(&self) -> usize {
        self.metric.nrows()
    }

    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += u[i] * self.metric[(i, j)] * v[j];
            }
        }
        s
    }

    /// `R(A, B)C` as a contravariant component vector.
    pub fn apply(&self, a: &[f64], b: &[f64], c: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|l| {
                let mut s = 0.0;
                for i in 0..n {
                    if a[i] == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        if b[j] == 0.0 {
                            continue;
                        }
                        for k in 0..n {
                            s += self.riemann.get(l, i, j, k) * a[i] * b[j] * c[k];
                        }
                    }
                }
                s
            })
            .collect()
    }

    /// `R_{lijk} = g_{lμ} R^μ_{ijk}`.
    pub fn lowered(&self, l: usize, i: usize, j: usize, k: usize) -> f64 {
        (0..self.dim())
            .map(|m| self.metric[(l, m)] * self.riemann.get(m, i, j, k))
            .sum()
    }

    pub fn lowered_all(&self) -> Array4 {
        Array4::from_fn(self.dim(), |l, i, j, k| self.lowered(l, i, j, k))
    }

    /// Largest absolute covariant curvature component, used to scale tolerances.
    pub fn scale(&self) -> f64 {
        self.lowered_all().max_abs()
    }

    pub fn ricci_form(&self, u: &[f64], v: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += u[i] * self.ricci[(i, j)] * v[j];
            }
        }
        s
    }

    pub fn ricci_scalar(&self) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += self.metric_inv[(i, j)] * self.ricci[(i, j)];
            }
        }
        s
    }

    pub fn residuals(&self) -> SymmetryResiduals {
        let n = self.dim();
        let low = self.lowered_all();
        let mut r = SymmetryResiduals::default();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    r.christoffel_symmetry = r
                        .christoffel_symmetry
                        .max((self.gamma.get(a, b, c) - self.gamma.get(a, c, b)).abs());
                    for d in 0..n {
                        let v = low.get(a, b, c, d);
                        r.antisymmetry_first_pair = r.antisymmetry_first_pair.max((v + low.get(a, c, b, d)).abs());
                        r.antisymmetry_last_pair = r.antisymmetry_last_pair.max((v + low.get(d, b, c, a)).abs());
                        r.pair_symmetry = r.pair_symmetry.max((v - low.get(c, d, a, b)).abs());
                        r.first_bianchi = r
                            .first_bianchi
                            .max((v + low.get(a, c, d, b) + low.get(a, d, b, c)).abs());
                    }
                }
                r.ricci_symmetry = r.ricci_symmetry.max((self.ricci[(a, b)] - self.ricci[(b, a)]).abs());
            }
        }
        r
    }

    /// `g(R(L,S)S, L)`.
    pub fn null_numerator(&self, l: &[f64], s: &[f64]) -> f64 {
        self.inner(&self.apply(l, s, s), l)
    }

    /// `g(R(L,S)S,L) / g(S,S)` after checking that `(L, S)` spans a
    /// degenerate plane.
    pub fn null_sectional(&self, l: &[f64], s: &[f64]) -> Result<f64> {
        check_null_plane(&self.metric, l, s)?;
        Ok(self.null_numerator(l, s) / self.inner(s, s))
    }
}

fn euclid_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Validates `g(L,L) ≈ 0`, `g(L,S) ≈ 0` and `g(S,S) > 0` with tolerances
/// scaled by the metric and vector magnitudes.
pub fn check_null_plane(g: &DMatrix<f64>, l: &[f64], s: &[f64]) -> Result<()> {
    let n = g.nrows();
    if l.len() != n || s.len() != n {
        return Err(GeometryError::shape("null plane vectors", n, l.len().min(s.len())));
    }
    let gnorm = g.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    let form = |u: &[f64], v: &[f64]| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += u[i] * g[(i, j)] * v[j];
            }
        }
        acc
    };
    let (ll, ls, ss) = (form(l, l), form(l, s), form(s, s));
    let l2 = euclid_sq(l);
    let s2 = euclid_sq(s);
    if ll.abs() > PLANE_TOL * gnorm * l2.max(1.0) {
        return Err(GeometryError::Plane(format!("g(L,L) = {ll:e} is not null")));
    }
    if ls.abs() > PLANE_TOL * gnorm * (l2 * s2).sqrt().max(1.0) {
        return Err(GeometryError::Plane(format!("g(L,S) = {ls:e} is not zero")));
    }
    if !(ss > PLANE_TOL * gnorm * s2) {
        return Err(GeometryError::Plane(format!("g(S,S) = {ss:e} is not spacelike")));
    }
    Ok(())
}

/// `K_N(Π) = g(R(L,S)S,L) / g(S,S)` computed from the chart alone.
pub fn null_sectional_oracle(chart: &CoordinateChart, x: &[f64], l: &[f64], s: &[f64]) -> Result<f64> {
    riemann_oracle(chart, x)?.null_sectional(l, s)
}

/// A scalar field on chart coordinates, evaluable on hyper-dual numbers.
pub type ScalarField<'a> = &'a dyn Fn(&[HyperDual]) -> HyperDual;

/// Value, partial derivatives and second partials of a scalar field.
pub fn scalar_jet(phi: ScalarField<'_>, x: &[f64]) -> (f64, Vec<f64>, DMatrix<f64>) {
    let n = x.len();
    let mut value = 0.0;
    let mut grad = vec![0.0; n];
    let mut hess = DMatrix::zeros(n, n);
    if n == 0 {
        let v = phi(&[]);
        return (v.re, grad, hess);
    }
    for a in 0..n {
        for b in a..n {
            let xs: Vec<HyperDual> = x
                .iter()
                .enumerate()
                .map(|(k, &v)| HyperDual::new(v, if k == a { 1.0 } else { 0.0 }, if k == b { 1.0 } else { 0.0 }, 0.0))
                .collect();
            let v = phi(&xs);
            if a == 0 && b == 0 {
                value = v.re;
            }
            if a == b {
                grad[a] = v.e1;
            }
            hess[(a, b)] = v.e12;
            hess[(b, a)] = v.e12;
        }
    }
    (value, grad, hess)
}

/// Covariant Hessian `H(φ)_{ij} = ∂_i∂_jφ − Γ^k_{ij} ∂_kφ`.
pub fn hessian_oracle(chart: &CoordinateChart, x: &[f64], phi: ScalarField<'_>) -> Result<DMatrix<f64>> {
    let gamma = christoffel(chart, x)?;
    let (_, d, dd) = scalar_jet(phi, x);
    let n = chart.dim();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        dd[(i, j)] - (0..n).map(|k| gamma.get(k, i, j) * d[k]).sum::<f64>()
    }))
}

/// `grad φ = g^{ij} ∂_jφ ∂_i`.
pub fn gradient_oracle(chart: &CoordinateChart, x: &[f64], phi: ScalarField<'_>) -> Result<Vec<f64>> {
    let jet = chart.jet(x)?;
    let (_, d, _) = scalar_jet(phi, x);
    let n = chart.dim();
    Ok((0..n).map(|i| (0..n).map(|j| jet.g_inv[(i, j)] * d[j]).sum()).collect())
}

/// `Δφ = g^{ij} H(φ)_{ij}`.
pub fn laplacian_oracle(chart: &CoordinateChart, x: &[f64], phi: ScalarField<'_>) -> Result<f64> {
    let jet = chart.jet(x)?;
    let h = hessian_oracle(chart, x, phi)?;
    Ok(jet.g_inv.component_mul(&h).sum())
}

/// `(∇_A B)^k = A^i ∂_i B^k + Γ^k_{ij} A^i B^j`, where `jac[(k, i)] = ∂_i B^k`.
pub fn covariant_derivative_oracle(
    chart: &CoordinateChart,
    x: &[f64],
    a: &[f64],
    b: &[f64],
    jac: &DMatrix<f64>,
) -> Result<Vec<f64>> {
    let gamma = christoffel(chart, x)?;
    let n = chart.dim();
    Ok((0..n)
        .map(|k| {
            let mut s = 0.0;
            for i in 0..n {
                s += a[i] * jac[(k, i)];
                for j in 0..n {
                    s += gamma.get(k, i, j) * a[i] * b[j];
                }
            }
            s
        })
        .collect())
}

/// Largest `|∇_k g_{ij}|` at a point.
pub fn metric_compatibility_residual(chart: &CoordinateChart, x: &[f64]) -> Result<f64> {
    let jet = chart.jet(x)?;
    let gamma = jet.christoffel();
    let n = chart.dim();
    let mut worst = 0.0_f64;
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut r = jet.dg[k][(i, j)];
                for l in 0..n {
                    r -= gamma.get(l, k, i) * jet.g[(l, j)] + gamma.get(l, k, j) * jet.g[(i, l)];
                }
                worst = worst.max(r.abs());
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_chart(n: usize, f: impl Fn(&[HyperDual]) -> Vec<HyperDual> + Send + Sync + 'static) -> CoordinateChart {
        CoordinateChart::from_fn(n, move |x| {
            let d = f(x);
            let mut m = vec![HyperDual::default(); n * n];
            for i in 0..n {
                m[i * n + i] = d[i];
            }
            m
        })
    }

    fn unit_sphere2() -> CoordinateChart {
        diag_chart(2, |x| vec![HyperDual::constant(1.0), x[0].sin().powi(2)])
    }

    fn minkowski() -> CoordinateChart {
        diag_chart(4, |_| {
            vec![
                HyperDual::constant(-1.0),
                HyperDual::constant(1.0),
                HyperDual::constant(1.0),
                HyperDual::constant(1.0),
            ]
        })
    }

    #[test]
    fn minkowski_is_flat() {
        let c = minkowski();
        let t = riemann_oracle(&c, &[0.3, -1.0, 2.0, 0.5]).unwrap();
        assert_eq!(t.gamma.max_abs(), 0.0);
        assert_eq!(t.riemann.max_abs(), 0.0);
    }

    #[test]
    fn sphere_christoffels_at_equator() {
        let c = unit_sphere2();
        let g = christoffel(&c, &[std::f64::consts::FRAC_PI_2, 0.3]).unwrap();
        // Γ^θ_{φφ} = −sinθ cosθ, Γ^φ_{θφ} = cotθ, both 0 at θ = π/2
        assert!(g.get(0, 1, 1).abs() < 1e-15);
        assert!(g.get(1, 0, 1).abs() < 1e-15);
        let theta = 0.8_f64;
        let g = christoffel(&c, &[theta, 0.3]).unwrap();
        assert!((g.get(0, 1, 1) + theta.sin() * theta.cos()).abs() < 1e-14);
        assert!((g.get(1, 0, 1) - theta.cos() / theta.sin()).abs() < 1e-14);
        assert!((g.get(1, 1, 0) - theta.cos() / theta.sin()).abs() < 1e-14);
    }

    #[test]
    fn sphere_curvature_sign() {
        // R^θ_{θφφ} = sin²θ: positive sectional curvature under this convention.
        let theta = 1.1_f64;
        let t = riemann_oracle(&unit_sphere2(), &[theta, 0.0]).unwrap();
        assert!((t.riemann.get(0, 0, 1, 1) - theta.sin().powi(2)).abs() < 1e-14);
        let (x, y) = ([1.0, 0.0], [0.0, 1.0 / theta.sin()]);
        let k = t.inner(&t.apply(&x, &y, &y), &x);
        assert!((k - 1.0).abs() < 1e-13);
        // Ric = (n − 1) K g
        assert!((t.ricci[(0, 0)] - 1.0).abs() < 1e-13);
        assert!((t.ricci[(1, 1)] - theta.sin().powi(2)).abs() < 1e-13);
    }

    #[test]
    fn grw_christoffel_and_warping_curvature() {
        // diag(−1, t²): Γ^x_{tx} = 1/t
        let c = diag_chart(2, |x| vec![HyperDual::constant(-1.0), x[0] * x[0]]);
        let t0 = 1.7;
        let g = christoffel(&c, &[t0, 0.2]).unwrap();
        assert!((g.get(1, 0, 1) - 1.0 / t0).abs() < 1e-14);
        // b = t² gives R(V, ∂t)∂t = −(b''/b) V = −(2/t²) V
        let c = diag_chart(2, |x| vec![HyperDual::constant(-1.0), x[0].powi(4)]);
        let t = riemann_oracle(&c, &[t0, 0.0]).unwrap();
        let r = t.apply(&[0.0, 1.0], &[1.0, 0.0], &[1.0, 0.0]);
        assert!((r[1] + 2.0 / (t0 * t0)).abs() < 1e-13);
        assert!(r[0].abs() < 1e-14);
    }

    #[test]
    fn residuals_vanish_on_curved_chart() {
        let c = CoordinateChart::from_fn(3, |x| {
            let a = x[0].exp();
            let b = (x[1] * x[0]).cosh();
            let o = x[2] * 0.1;
            vec![
                -HyperDual::constant(1.0) - o * o,
                o,
                HyperDual::default(),
                o,
                a * a,
                HyperDual::default(),
                HyperDual::default(),
                HyperDual::default(),
                b * b,
            ]
        });
        let x = [0.3, 0.4, 0.7];
        let t = riemann_oracle(&c, &x).unwrap();
        assert!(t.residuals().max() < 1e-12, "{:?}", t.residuals());
        assert!(metric_compatibility_residual(&c, &x).unwrap() < 1e-13);
    }

    #[test]
    fn hessian_on_line_and_constants() {
        let line = CoordinateChart::from_fn(1, |_| vec![HyperDual::constant(-1.0)]);
        let h = hessian_oracle(&line, &[0.4], &|x| x[0] * x[0]).unwrap();
        assert_eq!(h[(0, 0)], 2.0);
        let c = unit_sphere2();
        let k = |_: &[HyperDual]| HyperDual::constant(3.0);
        assert_eq!(hessian_oracle(&c, &[1.0, 1.0], &k).unwrap().abs().max(), 0.0);
        assert_eq!(laplacian_oracle(&c, &[1.0, 1.0], &k).unwrap(), 0.0);
        assert!(gradient_oracle(&c, &[1.0, 1.0], &k).unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn singular_metric_is_rejected() {
        let c = diag_chart(2, |x| vec![HyperDual::constant(1.0), x[0] * x[0]]);
        assert!(matches!(
            christoffel(&c, &[0.0, 0.0]),
            Err(GeometryError::Degeneracy(_))
        ));
    }

    #[test]
    fn null_plane_validation() {
        let t = riemann_oracle(&minkowski(), &[0.0; 4]).unwrap();
        let l = [1.0, 1.0, 0.0, 0.0];
        assert_eq!(t.null_sectional(&l, &[0.0, 0.0, 1.0, 0.0]).unwrap(), 0.0);
        assert!(t.null_sectional(&[1.0, 0.5, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0]).is_err());
        assert!(t.null_sectional(&l, &[1.0, 1.0, 0.0, 0.0]).is_err());
        assert!(t.null_sectional(&l, &[0.0, 1.0, 1.0, 0.0]).is_err());
    }
}
