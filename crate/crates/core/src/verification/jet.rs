//! Forward-mode second-order jets in two variables, used as an exact
//! differentiation oracle for manufactured sources.

use std::ops::{Add, Mul, Neg, Sub};

/// Value, gradient and Hessian of a function of `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub g: [f64; 2],
    pub h: [[f64; 2]; 2],
}

/// Value and gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet1 {
    pub v: f64,
    pub g: [f64; 2],
}

impl Jet2 {
    pub fn constant(v: f64) -> Self {
        Self { v, g: [0.0; 2], h: [[0.0; 2]; 2] }
    }

    /// The coordinate `axis` at value `v`.
    pub fn var(v: f64, axis: usize) -> Self {
        let mut g = [0.0; 2];
        g[axis] = 1.0;
        Self { v, g, h: [[0.0; 2]; 2] }
    }

    pub fn scale(self, s: f64) -> Self {
        self.chain(s * self.v, s, 0.0)
    }

    /// `f(self)` given `f`, `f′` and `f″` at `self.v`.
    fn chain(self, f: f64, df: f64, d2f: f64) -> Self {
        let mut h = [[0.0; 2]; 2];
        for (p, row) in h.iter_mut().enumerate() {
            for (q, e) in row.iter_mut().enumerate() {
                *e = df * self.h[p][q] + d2f * self.g[p] * self.g[q];
            }
        }
        Self { v: f, g: [df * self.g[0], df * self.g[1]], h }
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        self.chain(r, 0.5 / r, -0.25 / (r * self.v))
    }

    /// `∂_axis` as a first-order jet.
    pub fn derivative(&self, axis: usize) -> Jet1 {
        Jet1 { v: self.g[axis], g: self.h[axis] }
    }

    pub fn first(&self) -> Jet1 {
        Jet1 { v: self.v, g: self.g }
    }
}

impl Add for Jet2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut h = self.h;
        for p in 0..2 {
            for q in 0..2 {
                h[p][q] += o.h[p][q];
            }
        }
        Self { v: self.v + o.v, g: [self.g[0] + o.g[0], self.g[1] + o.g[1]], h }
    }
}

impl Neg for Jet2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Sub for Jet2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for Jet2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut h = [[0.0; 2]; 2];
        for (p, row) in h.iter_mut().enumerate() {
            for (q, e) in row.iter_mut().enumerate() {
                *e = self.h[p][q] * o.v + self.g[p] * o.g[q] + self.g[q] * o.g[p] + self.v * o.h[p][q];
            }
        }
        Self {
            v: self.v * o.v,
            g: [self.g[0] * o.v + self.v * o.g[0], self.g[1] * o.v + self.v * o.g[1]],
            h,
        }
    }
}

impl Jet1 {
    pub fn zero() -> Self {
        Self { v: 0.0, g: [0.0; 2] }
    }

    pub fn constant(v: f64) -> Self {
        Self { v, g: [0.0; 2] }
    }

    pub fn scale(self, s: f64) -> Self {
        Self { v: s * self.v, g: [s * self.g[0], s * self.g[1]] }
    }

    pub fn recip(self) -> Self {
        let d = -1.0 / (self.v * self.v);
        Self { v: 1.0 / self.v, g: [d * self.g[0], d * self.g[1]] }
    }

    pub fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        let d = 0.5 / r;
        Self { v: r, g: [d * self.g[0], d * self.g[1]] }
    }

    /// `f(self)` given `f` and `f′` at `self.v`.
    pub fn map(self, f: f64, df: f64) -> Self {
        Self { v: f, g: [df * self.g[0], df * self.g[1]] }
    }
}

impl Add for Jet1 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { v: self.v + o.v, g: [self.g[0] + o.g[0], self.g[1] + o.g[1]] }
    }
}

impl Sub for Jet1 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { v: self.v - o.v, g: [self.g[0] - o.g[0], self.g[1] - o.g[1]] }
    }
}

impl Mul for Jet1 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { v: self.v * o.v, g: [self.g[0] * o.v + self.v * o.g[0], self.g[1] * o.v + self.v * o.g[1]] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn product_and_sine_derivatives() {
        let (x0, y0) = (0.3, 0.7);
        let (x, y) = (Jet2::var(x0, 0), Jet2::var(y0, 1));
        let f = (x * y).sin();
        let c = (x0 * y0).cos();
        let s = (x0 * y0).sin();
        assert_relative_eq!(f.g[0], y0 * c, epsilon = 1e-15);
        assert_relative_eq!(f.h[0][0], -y0 * y0 * s, epsilon = 1e-15);
        assert_relative_eq!(f.h[0][1], c - x0 * y0 * s, epsilon = 1e-15);
        assert_eq!(f.h[0][1], f.h[1][0]);
        let d = f.derivative(1);
        assert_relative_eq!(d.v, x0 * c, epsilon = 1e-15);
        assert_relative_eq!(d.g[1], -x0 * x0 * s, epsilon = 1e-15);
    }

    #[test]
    fn roots_and_reciprocals() {
        let x = Jet2::var(2.0, 0);
        let r = x.sqrt();
        assert_relative_eq!(r.g[0], 0.5 / 2f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(r.h[0][0], -0.25 * 2f64.powf(-1.5), epsilon = 1e-15);
        let j = Jet1 { v: 4.0, g: [1.0, 2.0] };
        assert_relative_eq!(j.recip().g[1], -2.0 / 16.0);
        assert_relative_eq!(j.sqrt().g[0], 0.25);
    }

    #[test]
    fn cosine_and_subtraction() {
        let x = Jet2::var(1.1, 0);
        let f = x.cos() - Jet2::constant(2.0);
        assert_relative_eq!(f.v, 1.1f64.cos() - 2.0);
        assert_relative_eq!(f.h[0][0], -(1.1f64.cos()));
    }
}
