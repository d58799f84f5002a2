//! Scalar functions used as warping functions and static potentials.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dual::HyperDual;
use crate::error::{GeometryError, Result};

/// A closed-form scalar function of one real variable.
///
/// Serializes as `{"form": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", content = "params", rename_all = "snake_case")]
pub enum ScalarFn {
    /// `value`
    Const { value: f64 },
    /// `coeff · x^exponent`
    Power { coeff: f64, exponent: f64 },
    /// `coeff · e^(rate·x)`
    Exp { coeff: f64, rate: f64 },
    /// `Σ coeffs[i] · x^i`
    Poly { coeffs: Vec<f64> },
    /// `coeff · cosh(rate·x)`
    Cosh { coeff: f64, rate: f64 },
    /// `√(1 − 2·mass/x)`
    Schwarzschild { mass: f64 },
    /// `base(x)^exponent`, the generalized Kasner warping `φ^p`.
    Pow { base: Box<ScalarFn>, exponent: f64 },
}

impl ScalarFn {
    pub fn constant(value: f64) -> Self {
        Self::Const { value }
    }

    pub fn power(coeff: f64, exponent: f64) -> Self {
        Self::Power { coeff, exponent }
    }

    pub fn exp(coeff: f64, rate: f64) -> Self {
        Self::Exp { coeff, rate }
    }

    pub fn pow(base: ScalarFn, exponent: f64) -> Self {
        Self::Pow {
            base: Box::new(base),
            exponent,
        }
    }

    pub fn eval(&self, x: HyperDual) -> HyperDual {
        match self {
            Self::Const { value } => HyperDual::constant(*value),
            Self::Power { coeff, exponent } => x.powf(*exponent) * *coeff,
            Self::Exp { coeff, rate } => (x * *rate).exp() * *coeff,
            Self::Poly { coeffs } => coeffs.iter().rev().fold(HyperDual::default(), |acc, &c| acc * x + c),
            Self::Cosh { coeff, rate } => (x * *rate).cosh() * *coeff,
            Self::Schwarzschild { mass } => (1.0 - 2.0 * *mass / x).sqrt(),
            Self::Pow { base, exponent } => base.eval(x).powf(*exponent),
        }
    }

    /// Value, first and second derivative at `x`.
    pub fn jet(&self, x: f64) -> (f64, f64, f64) {
        let d = self.eval(HyperDual::variable(x));
        (d.re, d.e1, d.e12)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.eval(HyperDual::constant(x)).re
    }
}

/// A user-supplied scalar field on a factor's coordinates.
#[derive(Clone)]
pub struct CustomScalar(pub Arc<dyn Fn(&[HyperDual]) -> HyperDual + Send + Sync>);

impl fmt::Debug for CustomScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CustomScalar(..)")
    }
}

/// A positive smooth function on the factor it warps from.
///
/// On an interval base this is `b(t)`; for a static spacetime it is the
/// potential `f` on the spatial factor, depending on one coordinate `axis`.
#[derive(Debug, Clone)]
pub enum WarpingFunction {
    Expr { func: ScalarFn, axis: usize },
    Custom(CustomScalar),
}

impl WarpingFunction {
    pub fn of_time(func: ScalarFn) -> Self {
        Self::Expr { func, axis: 0 }
    }

    pub fn on_axis(func: ScalarFn, axis: usize) -> Self {
        Self::Expr { func, axis }
    }

    pub fn custom(f: impl Fn(&[HyperDual]) -> HyperDual + Send + Sync + 'static) -> Self {
        Self::Custom(CustomScalar(Arc::new(f)))
    }

    pub fn eval(&self, x: &[HyperDual]) -> HyperDual {
        match self {
            Self::Expr { func, axis } => func.eval(x[*axis]),
            Self::Custom(c) => (c.0)(x),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let xs: Vec<HyperDual> = x.iter().map(|&v| HyperDual::constant(v)).collect();
        self.eval(&xs).re
    }

    pub fn expr(&self) -> Option<&ScalarFn> {
        match self {
            Self::Expr { func, .. } => Some(func),
            Self::Custom(_) => None,
        }
    }

    pub fn axis(&self) -> Option<usize> {
        match self {
            Self::Expr { axis, .. } => Some(*axis),
            Self::Custom(_) => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct WarpingDoc {
    #[serde(flatten)]
    func: ScalarFn,
    #[serde(default, skip_serializing_if = "is_zero")]
    axis: usize,
}

fn is_zero(v: &usize) -> bool {
    *v == 0
}

impl Serialize for WarpingFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Expr { func, axis } => WarpingDoc {
                func: func.clone(),
                axis: *axis,
            }
            .serialize(s),
            Self::Custom(_) => Err(serde::ser::Error::custom(
                "custom warping functions are not JSON-expressible",
            )),
        }
    }
}

impl<'de> Deserialize<'de> for WarpingFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = WarpingDoc::deserialize(d)?;
        Ok(Self::Expr {
            func: doc.func,
            axis: doc.axis,
        })
    }
}

/// Checks that a function of one variable stays positive and finite at the
/// given sample abscissae.
pub(crate) fn check_positive(f: &WarpingFunction, samples: &[Vec<f64>], what: &str) -> Result<()> {
    for x in samples {
        let v = f.value(x);
        if !(v.is_finite() && v > 0.0) {
            return Err(GeometryError::Validation(format!(
                "{what} must be positive, got {v} at {x:?}"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jets_of_catalog_forms() {
        let t = 1.7;
        let (b, db, ddb) = ScalarFn::exp(2.0, 0.5).jet(t);
        assert!((b - 2.0 * (0.5 * t).exp()).abs() < 1e-14);
        assert!((db - 0.5 * b).abs() < 1e-14);
        assert!((ddb - 0.25 * b).abs() < 1e-14);

        let (b, db, ddb) = ScalarFn::power(1.0, 2.0).jet(t);
        assert_eq!((b, db, ddb), (t * t, 2.0 * t, 2.0));

        let (b, db, ddb) = ScalarFn::Poly {
            coeffs: vec![1.0, -2.0, 3.0],
        }
        .jet(t);
        assert!((b - (1.0 - 2.0 * t + 3.0 * t * t)).abs() < 1e-13);
        assert!((db - (-2.0 + 6.0 * t)).abs() < 1e-13);
        assert!((ddb - 6.0).abs() < 1e-13);
    }

    #[test]
    fn kasner_chain_rule() {
        // (φ^p)'' with φ = t² and p = 2/3 is (4/3)(1/3) t^(-2/3)
        let p = 2.0 / 3.0;
        let f = ScalarFn::pow(ScalarFn::power(1.0, 2.0), p);
        let t = 1.4;
        let (b, db, ddb) = f.jet(t);
        let expect_b = t.powf(2.0 * p);
        let expect_db = 2.0 * p * t.powf(2.0 * p - 1.0);
        let expect_ddb = 2.0 * p * (2.0 * p - 1.0) * t.powf(2.0 * p - 2.0);
        assert!((b - expect_b).abs() < 1e-13);
        assert!((db - expect_db).abs() < 1e-13);
        assert!((ddb - expect_ddb).abs() < 1e-13);
    }

    #[test]
    fn json_shape() {
        let w = WarpingFunction::of_time(ScalarFn::exp(1.0, 1.0));
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"form":"exp","params":{"coeff":1.0,"rate":1.0}}"#);
        let w = WarpingFunction::on_axis(ScalarFn::Cosh { coeff: 1.0, rate: 1.0 }, 2);
        let s = serde_json::to_string(&w).unwrap();
        let back: WarpingFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back.axis(), Some(2));
        assert!(serde_json::to_string(&WarpingFunction::custom(|x| x[0])).is_err());
    }
}
