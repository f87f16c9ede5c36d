//! Second-order forward-mode differentiation in up to `MAX_DIM` variables.

use core::ops::{Add, Mul, Sub};

use crate::smoothfn::Jet;
use crate::MAX_DIM;

/// Value, gradient and Hessian of a scalar function of `n` local variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Hd {
    n: usize,
    pub v: f64,
    pub g: [f64; MAX_DIM],
    pub h: [[f64; MAX_DIM]; MAX_DIM],
}

impl Hd {
    pub fn constant(v: f64, n: usize) -> Self {
        Hd {
            n,
            v,
            g: [0.0; MAX_DIM],
            h: [[0.0; MAX_DIM]; MAX_DIM],
        }
    }

    pub fn variable(v: f64, i: usize, n: usize) -> Self {
        let mut x = Self::constant(v, n);
        x.g[i] = 1.0;
        x
    }

    pub fn scale(mut self, s: f64) -> Self {
        self.v *= s;
        for i in 0..self.n {
            self.g[i] *= s;
            for j in 0..self.n {
                self.h[i][j] *= s;
            }
        }
        self
    }

    /// `f ∘ self` given `f, f', f''` at `self.v`.
    pub fn chain(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let mut out = Self::constant(f0, self.n);
        for i in 0..self.n {
            out.g[i] = f1 * self.g[i];
            for j in 0..self.n {
                out.h[i][j] = f1 * self.h[i][j] + f2 * self.g[i] * self.g[j];
            }
        }
        out
    }

    /// `f ∘ self` for `f` given as a jet of order ≥ 2 at `self.v`.
    pub fn compose(&self, j: &Jet) -> Self {
        self.chain(j.value(), j.derivative(1), j.derivative(2))
    }

    pub fn recip(&self) -> Self {
        let v = self.v;
        self.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }
}

impl Add for Hd {
    type Output = Hd;
    fn add(mut self, b: Hd) -> Hd {
        self.v += b.v;
        for i in 0..self.n {
            self.g[i] += b.g[i];
            for j in 0..self.n {
                self.h[i][j] += b.h[i][j];
            }
        }
        self
    }
}

impl Sub for Hd {
    type Output = Hd;
    fn sub(self, b: Hd) -> Hd {
        self + b.scale(-1.0)
    }
}

impl Mul for Hd {
    type Output = Hd;
    fn mul(self, b: Hd) -> Hd {
        let mut out = Hd::constant(self.v * b.v, self.n);
        for i in 0..self.n {
            out.g[i] = self.v * b.g[i] + b.v * self.g[i];
            for j in 0..self.n {
                out.h[i][j] = self.v * b.h[i][j] + b.v * self.h[i][j] + self.g[i] * b.g[j] + b.g[i] * self.g[j];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule_on_polynomial() {
        // f(x, y) = x²y + 3y at (2, 5): grad (2xy, x² + 3) = (20, 7), hess [[2y, 2x], [2x, 0]]
        let x = Hd::variable(2.0, 0, 2);
        let y = Hd::variable(5.0, 1, 2);
        let f = x * x * y + y.scale(3.0);
        assert_eq!(f.v, 35.0);
        assert_eq!(&f.g[..2], &[20.0, 7.0]);
        assert_eq!(f.h[0][0], 10.0);
        assert_eq!(f.h[0][1], 4.0);
        assert_eq!(f.h[1][0], 4.0);
        assert_eq!(f.h[1][1], 0.0);
        let q = f * x.recip();
        // x·y + 3y/x: d/dx = y - 3y/x² = 5 - 3.75
        assert!((q.g[0] - 1.25).abs() < 1e-15);
    }
}
