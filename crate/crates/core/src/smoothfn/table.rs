//! Tabulated antiderivatives with quintic Hermite interpolation.

use alloc::vec::Vec;

use super::{quad, Jet, SmoothFn};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableOptions {
    /// Accept a panel when the interpolant misses the quadrature value at its
    /// midpoint by at most this much.
    pub interp_tol: f64,
    /// Absolute tolerance for each panel integral.
    pub quad_tol: f64,
    /// Uniform panels before adaptive refinement.
    pub initial_panels: usize,
    /// Panels narrower than this fraction of the range are always accepted.
    pub min_width_frac: f64,
    /// Accept a panel only when the interpolant's first and second
    /// derivatives at its midpoint match the integrand and its derivative to
    /// within `deriv_tol·(1 + |value|)`.
    pub deriv_tol: f64,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            interp_tol: 1e-13,
            quad_tol: 1e-15,
            initial_panels: 32,
            min_width_frac: 1e-9,
            deriv_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableStats {
    pub nodes: usize,
    pub max_midpoint_error: f64,
}

pub(super) struct Table {
    integrand: SmoothFn,
    xs: Vec<f64>,
    fs: Vec<f64>,
    gs: Vec<f64>,
    dgs: Vec<f64>,
    quad_tol: f64,
    max_midpoint_error: f64,
}

fn hermite(t: f64, h: f64, p: [f64; 6]) -> f64 {
    let [p0, m0, a0, p1, m1, a1] = p;
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let t5 = t4 * t;
    let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    let h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    let h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
    let h3 = 0.5 * (t3 - 2.0 * t4 + t5);
    let h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    let h5 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    h0 * p0 + h * h1 * m0 + h * h * (h2 * a0 + h3 * a1) + h * h4 * m1 + h5 * p1
}

/// First and second derivatives of the interpolant with respect to `x`.
fn hermite_derivs(t: f64, h: f64, p: [f64; 6]) -> (f64, f64) {
    let [p0, m0, a0, p1, m1, a1] = p;
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let d = [
        -30.0 * t2 + 60.0 * t3 - 30.0 * t4,
        1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4,
        0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4),
        0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4),
        -12.0 * t2 + 28.0 * t3 - 15.0 * t4,
        30.0 * t2 - 60.0 * t3 + 30.0 * t4,
    ];
    let dd = [
        -60.0 * t + 180.0 * t2 - 120.0 * t3,
        -36.0 * t + 96.0 * t2 - 60.0 * t3,
        0.5 * (2.0 - 18.0 * t + 36.0 * t2 - 20.0 * t3),
        0.5 * (6.0 * t - 24.0 * t2 + 20.0 * t3),
        -24.0 * t + 84.0 * t2 - 60.0 * t3,
        60.0 * t - 180.0 * t2 + 120.0 * t3,
    ];
    let comb = |b: [f64; 6]| b[0] * p0 + h * b[1] * m0 + h * h * (b[2] * a0 + b[3] * a1) + h * b[4] * m1 + b[5] * p1;
    (comb(d) / h, comb(dd) / (h * h))
}

impl Table {
    pub(super) fn build(integrand: SmoothFn, a: f64, b: f64, opts: &TableOptions) -> Result<Table> {
        integrand.check(a)?;
        integrand.check(b)?;
        if !(a < b) {
            return Err(crate::Error::InvalidInterval(alloc::format!(
                "antiderivative table requires a < b, got [{a}, {b}]"
            )));
        }
        let slope = |x: f64| {
            let j = integrand.jet_unchecked(x, 1);
            (j.value(), j.derivative(1))
        };
        let integral = |x0: f64, x1: f64| -> Result<f64> {
            Ok(quad::integrate(|x| integrand.jet_unchecked(x, 0).value(), x0, x1, opts.quad_tol)?.value)
        };
        let min_width = (b - a) * opts.min_width_frac;
        let n0 = opts.initial_panels.max(1);
        let mut xs = Vec::with_capacity(4 * n0);
        let mut fs = Vec::with_capacity(4 * n0);
        let mut gs = Vec::with_capacity(4 * n0);
        let mut dgs = Vec::with_capacity(4 * n0);
        let (g0, d0) = slope(a);
        xs.push(a);
        fs.push(0.0);
        gs.push(g0);
        dgs.push(d0);
        let mut worst: f64 = 0.0;
        let mut stack: Vec<(f64, f64)> = Vec::new();
        for i in (0..n0).rev() {
            let x0 = a + (b - a) * i as f64 / n0 as f64;
            let x1 = if i + 1 == n0 {
                b
            } else {
                a + (b - a) * (i + 1) as f64 / n0 as f64
            };
            stack.push((x0, x1));
        }
        while let Some((x0, x1)) = stack.pop() {
            let xm = 0.5 * (x0 + x1);
            let left = integral(x0, xm)?;
            let right = integral(xm, x1)?;
            let (gl, dl) = (gs[gs.len() - 1], dgs[dgs.len() - 1]);
            let (gr, dr) = slope(x1);
            let h = x1 - x0;
            let predicted = hermite(0.5, h, [0.0, gl, dl, left + right, gr, dr]);
            let err = (predicted - left).abs();
            let (pd, pdd) = hermite_derivs(0.5, h, [0.0, gl, dl, left + right, gr, dr]);
            let (gm, dm) = slope(xm);
            let slope_ok = (pd - gm).abs() <= opts.deriv_tol * (1.0 + gm.abs())
                && (pdd - dm).abs() <= opts.deriv_tol * (1.0 + dm.abs());
            if (err <= opts.interp_tol && slope_ok) || h <= min_width {
                worst = worst.max(err);
                let f0 = fs[fs.len() - 1];
                xs.push(x1);
                fs.push(f0 + left + right);
                gs.push(gr);
                dgs.push(dr);
            } else {
                stack.push((xm, x1));
                stack.push((x0, xm));
            }
        }
        Ok(Table {
            integrand,
            xs,
            fs,
            gs,
            dgs,
            quad_tol: opts.quad_tol.max(1e-15),
            max_midpoint_error: worst,
        })
    }

    pub(super) fn range(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub(super) fn integrand(&self) -> &SmoothFn {
        &self.integrand
    }

    pub(super) fn stats(&self) -> TableStats {
        TableStats {
            nodes: self.xs.len(),
            max_midpoint_error: self.max_midpoint_error,
        }
    }

    fn value(&self, r: f64) -> f64 {
        let (a, b) = self.range();
        let g = |x: f64| self.integrand.jet_unchecked(x, 0).value();
        if r < a {
            return quad::integrate(g, a, r, self.quad_tol)
                .map(|e| e.value)
                .unwrap_or(f64::NAN);
        }
        if r > b {
            let tail = quad::integrate(g, b, r, self.quad_tol)
                .map(|e| e.value)
                .unwrap_or(f64::NAN);
            return self.fs[self.fs.len() - 1] + tail;
        }
        let i = self.xs.partition_point(|x| *x <= r).clamp(1, self.xs.len() - 1) - 1;
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let t = (r - x0) / h;
        hermite(
            t,
            h,
            [
                self.fs[i],
                self.gs[i],
                self.dgs[i],
                self.fs[i + 1],
                self.gs[i + 1],
                self.dgs[i + 1],
            ],
        )
    }

    pub(super) fn jet(&self, r: f64, p: usize) -> Jet {
        let mut out = Jet::constant(self.value(r), p);
        if p >= 1 {
            let g = self.integrand.jet_unchecked(r, p - 1);
            for k in 1..=p {
                out.set_coeff(k, g.coeff(k - 1) / k as f64);
            }
        }
        out
    }
}
