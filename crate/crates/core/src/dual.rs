//! Hyper-dual numbers for exact first and second derivatives.
//!
//! A hyper-dual number `a + b ε₁ + c ε₂ + d ε₁ε₂` with `ε₁² = ε₂² = 0` carries
//! two independent first-order perturbations and their cross term. Seeding
//! coordinate `i` on `ε₁` and coordinate `j` on `ε₂` yields `∂ᵢf`, `∂ⱼf` and
//! `∂ᵢ∂ⱼf` after one evaluation, with no truncation error.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HyperDual {
    pub re: f64,
    pub e1: f64,
    pub e2: f64,
    pub e12: f64,
}

impl HyperDual {
    #[inline]
    pub const fn new(re: f64, e1: f64, e2: f64, e12: f64) -> Self {
        Self { re, e1, e2, e12 }
    }

    #[inline]
    pub const fn constant(re: f64) -> Self {
        Self::new(re, 0.0, 0.0, 0.0)
    }

    /// A single variable seeded on both perturbations, so that
    /// `f(x).e1 == f'(x)` and `f(x).e12 == f''(x)`.
    #[inline]
    pub const fn variable(re: f64) -> Self {
        Self::new(re, 1.0, 1.0, 0.0)
    }

    /// Applies a scalar function given its value and first two derivatives
    /// at `self.re`.
    #[inline]
    pub fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        Self {
            re: f0,
            e1: f1 * self.e1,
            e2: f1 * self.e2,
            e12: f1 * self.e12 + f2 * self.e1 * self.e2,
        }
    }

    pub fn recip(self) -> Self {
        let inv = 1.0 / self.re;
        self.chain(inv, -inv * inv, 2.0 * inv * inv * inv)
    }

    pub fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.re))
    }

    pub fn exp(self) -> Self {
        let e = self.re.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        let inv = 1.0 / self.re;
        self.chain(self.re.ln(), inv, -inv * inv)
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.re.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.re.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn sinh(self) -> Self {
        let (s, c) = (self.re.sinh(), self.re.cosh());
        self.chain(s, c, s)
    }

    pub fn cosh(self) -> Self {
        let (s, c) = (self.re.sinh(), self.re.cosh());
        self.chain(c, s, c)
    }

    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Self::constant(1.0),
            1 => self,
            _ => {
                let nf = f64::from(n);
                self.chain(
                    self.re.powi(n),
                    nf * self.re.powi(n - 1),
                    nf * (nf - 1.0) * self.re.powi(n - 2),
                )
            }
        }
    }

    pub fn powf(self, p: f64) -> Self {
        if p == 0.0 {
            return Self::constant(1.0);
        }
        if p == 1.0 {
            return self;
        }
        self.chain(
            self.re.powf(p),
            p * self.re.powf(p - 1.0),
            p * (p - 1.0) * self.re.powf(p - 2.0),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.e1.is_finite() && self.e2.is_finite() && self.e12.is_finite()
    }
}

impl From<f64> for HyperDual {
    fn from(v: f64) -> Self {
        Self::constant(v)
    }
}

impl fmt::Display for HyperDual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}ε₁ + {}ε₂ + {}ε₁ε₂", self.re, self.e1, self.e2, self.e12)
    }
}

impl Add for HyperDual {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.e1 + o.e1, self.e2 + o.e2, self.e12 + o.e12)
    }
}

impl Sub for HyperDual {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.e1 - o.e1, self.e2 - o.e2, self.e12 - o.e12)
    }
}

impl Mul for HyperDual {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re,
            self.re * o.e1 + self.e1 * o.re,
            self.re * o.e2 + self.e2 * o.re,
            self.re * o.e12 + self.e1 * o.e2 + self.e2 * o.e1 + self.e12 * o.re,
        )
    }
}

impl Div for HyperDual {
    type Output = Self;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Neg for HyperDual {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.e1, -self.e2, -self.e12)
    }
}

impl Add<f64> for HyperDual {
    type Output = Self;
    #[inline]
    fn add(self, o: f64) -> Self {
        Self::new(self.re + o, self.e1, self.e2, self.e12)
    }
}

impl Sub<f64> for HyperDual {
    type Output = Self;
    #[inline]
    fn sub(self, o: f64) -> Self {
        Self::new(self.re - o, self.e1, self.e2, self.e12)
    }
}

impl Mul<f64> for HyperDual {
    type Output = Self;
    #[inline]
    fn mul(self, o: f64) -> Self {
        Self::new(self.re * o, self.e1 * o, self.e2 * o, self.e12 * o)
    }
}

impl Div<f64> for HyperDual {
    type Output = Self;
    #[inline]
    fn div(self, o: f64) -> Self {
        Self::new(self.re / o, self.e1 / o, self.e2 / o, self.e12 / o)
    }
}

impl Add<HyperDual> for f64 {
    type Output = HyperDual;
    #[inline]
    fn add(self, o: HyperDual) -> HyperDual {
        o + self
    }
}

impl Sub<HyperDual> for f64 {
    type Output = HyperDual;
    #[inline]
    fn sub(self, o: HyperDual) -> HyperDual {
        -o + self
    }
}

impl Mul<HyperDual> for f64 {
    type Output = HyperDual;
    #[inline]
    fn mul(self, o: HyperDual) -> HyperDual {
        o * self
    }
}

impl Div<HyperDual> for f64 {
    type Output = HyperDual;
    #[inline]
    fn div(self, o: HyperDual) -> HyperDual {
        o.recip() * self
    }
}

impl AddAssign for HyperDual {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for HyperDual {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl MulAssign for HyperDual {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl std::iter::Sum for HyperDual {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + b.abs())
    }

    #[test]
    fn second_derivative_of_composite() {
        // f(x) = exp(sin x) / x
        let x = 0.7_f64;
        let f = HyperDual::variable(x).sin().exp() / HyperDual::variable(x);
        let g = |x: f64| x.sin().exp() / x;
        let h = 1e-4;
        let fd1 = (g(x + h) - g(x - h)) / (2.0 * h);
        let fd2 = (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h);
        assert!((f.e1 - fd1).abs() < 1e-7);
        assert!((f.e2 - fd1).abs() < 1e-7);
        assert!((f.e12 - fd2).abs() < 1e-5);
    }

    #[test]
    fn mixed_partial_from_two_seeds() {
        // f(x, y) = x² y³ → ∂x∂y f = 6 x y²
        let (x, y) = (1.3, -0.4);
        let xd = HyperDual::new(x, 1.0, 0.0, 0.0);
        let yd = HyperDual::new(y, 0.0, 1.0, 0.0);
        let f = xd.powi(2) * yd.powi(3);
        assert!(close(f.e1, 2.0 * x * y.powi(3)));
        assert!(close(f.e2, 3.0 * x * x * y * y));
        assert!(close(f.e12, 6.0 * x * y * y));
    }

    #[test]
    fn elementary_functions_match_closed_forms() {
        let x = 0.9;
        let v = HyperDual::variable(x);
        let checks = [
            (v.sqrt(), x.sqrt(), 0.5 / x.sqrt(), -0.25 * x.powf(-1.5)),
            (v.ln(), x.ln(), 1.0 / x, -1.0 / (x * x)),
            (v.cos(), x.cos(), -x.sin(), -x.cos()),
            (v.cosh(), x.cosh(), x.sinh(), x.cosh()),
            (v.sinh(), x.sinh(), x.cosh(), x.sinh()),
            (v.powf(2.5), x.powf(2.5), 2.5 * x.powf(1.5), 3.75 * x.powf(0.5)),
            (v.recip(), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x)),
        ];
        for (d, f0, f1, f2) in checks {
            assert!(close(d.re, f0) && close(d.e1, f1) && close(d.e12, f2), "{d}");
        }
    }
}
