//! Truncated Taylor series in one variable.
//!
//! A jet of order `p` stores the normalized Taylor coefficients
//! `c_k = f^{(k)}(r)/k!` for `k = 0..=p`. Arithmetic on jets is exact
//! truncated series arithmetic, so evaluating an expression on the identity
//! jet yields its derivatives to rounding error.

use core::ops::{Add, Mul, Neg, Sub};

use crate::math;

/// Highest supported jet order.
pub const MAX_ORDER: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    order: usize,
    c: [f64; MAX_ORDER + 1],
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let mut c = [0.0; MAX_ORDER + 1];
        c[0] = value;
        Jet { order, c }
    }

    /// The identity `r ↦ r` expanded at `r`.
    pub fn variable(r: f64, order: usize) -> Self {
        let mut j = Self::constant(r, order);
        if order >= 1 {
            j.c[1] = 1.0;
        }
        j
    }

    pub fn from_coeffs(coeffs: &[f64]) -> Self {
        let mut j = Self::constant(0.0, coeffs.len() - 1);
        j.c[..coeffs.len()].copy_from_slice(coeffs);
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn coeff(&self, k: usize) -> f64 {
        if k <= self.order {
            self.c[k]
        } else {
            0.0
        }
    }

    pub fn set_coeff(&mut self, k: usize, v: f64) {
        self.c[k] = v;
    }

    /// `k`-th derivative (not the normalized coefficient).
    pub fn derivative(&self, k: usize) -> f64 {
        let mut fact = 1.0;
        for i in 2..=k {
            fact *= i as f64;
        }
        self.coeff(k) * fact
    }

    pub fn is_finite(&self) -> bool {
        self.c[..=self.order].iter().all(|x| x.is_finite())
    }

    pub fn scale(mut self, s: f64) -> Self {
        for x in &mut self.c[..=self.order] {
            *x *= s;
        }
        self
    }

    pub fn offset(mut self, s: f64) -> Self {
        self.c[0] += s;
        self
    }

    /// Derivative as a jet of one lower order.
    pub fn differentiate(&self) -> Self {
        assert!(self.order >= 1);
        let mut out = Self::constant(0.0, self.order - 1);
        for k in 0..self.order {
            out.c[k] = (k + 1) as f64 * self.c[k + 1];
        }
        out
    }

    /// Same series with the highest coefficient dropped.
    pub fn truncate(&self, order: usize) -> Self {
        let mut out = Self::constant(0.0, order);
        out.c[..=order].copy_from_slice(&self.c[..=order]);
        out
    }

    pub fn recip(&self) -> Self {
        Self::constant(1.0, self.order).div(self)
    }

    pub fn div(&self, b: &Jet) -> Self {
        let n = self.order.min(b.order);
        let mut q = Self::constant(0.0, n);
        let b0 = b.c[0];
        for k in 0..=n {
            let mut s = self.c[k];
            for i in 1..=k {
                s -= b.c[i] * q.c[k - i];
            }
            q.c[k] = s / b0;
        }
        q
    }

    pub fn sqrt(&self) -> Self {
        let n = self.order;
        let mut s = Self::constant(0.0, n);
        let s0 = math::sqrt(self.c[0]);
        s.c[0] = s0;
        for k in 1..=n {
            let mut acc = self.c[k];
            for i in 1..k {
                acc -= s.c[i] * s.c[k - i];
            }
            s.c[k] = acc / (2.0 * s0);
        }
        s
    }

    pub fn exp(&self) -> Self {
        let n = self.order;
        let mut e = Self::constant(0.0, n);
        e.c[0] = math::exp(self.c[0]);
        for k in 1..=n {
            let mut acc = 0.0;
            for i in 1..=k {
                acc += i as f64 * self.c[i] * e.c[k - i];
            }
            e.c[k] = acc / k as f64;
        }
        e
    }

    pub fn square(&self) -> Self {
        *self * *self
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, b: Jet) -> Jet {
        let n = self.order.min(b.order);
        let mut out = self.truncate(n);
        for k in 0..=n {
            out.c[k] += b.c[k];
        }
        out
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, b: Jet) -> Jet {
        self + (-b)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, b: Jet) -> Jet {
        let n = self.order.min(b.order);
        let mut out = Jet::constant(0.0, n);
        for k in 0..=n {
            let mut s = 0.0;
            for i in 0..=k {
                s += self.c[i] * b.c[k - i];
            }
            out.c[k] = s;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol * (1.0 + b.abs()), "{a} vs {b}");
    }

    #[test]
    fn exp_of_square_matches_closed_form_derivatives() {
        // f(r) = exp(r²): f' = 2r f, f'' = (2 + 4r²) f, f''' = (12r + 8r³) f
        let r = 0.7;
        let x = Jet::variable(r, 3);
        let f = x.square().exp();
        let e = math::exp(r * r);
        close(f.derivative(0), e, 1e-15);
        close(f.derivative(1), 2.0 * r * e, 1e-14);
        close(f.derivative(2), (2.0 + 4.0 * r * r) * e, 1e-14);
        close(f.derivative(3), (12.0 * r + 8.0 * r * r * r) * e, 1e-14);
    }

    #[test]
    fn sqrt_and_division_are_inverse() {
        let x = Jet::variable(0.3, 5).offset(1.0);
        let s = x.sqrt();
        let back = s * s;
        for k in 0..=5 {
            close(back.coeff(k), x.coeff(k), 1e-14);
        }
        let q = x.div(&s);
        for k in 0..=5 {
            close(q.coeff(k), s.coeff(k), 1e-14);
        }
    }

    #[test]
    fn differentiate_shifts_coefficients() {
        let x = Jet::variable(2.0, 3);
        let cube = x * x * x; // r³
        let d = cube.differentiate(); // 3r²
        close(d.derivative(0), 12.0, 1e-15);
        close(d.derivative(1), 12.0, 1e-15);
        close(d.derivative(2), 6.0, 1e-15);
    }
}
