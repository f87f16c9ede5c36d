//! One-dimensional C∞ functions with analytic derivatives.
//!
//! A [`SmoothFn`] is an immutable expression tree. Leaves are constants, the
//! identity, exponential glue steps and quadrature-defined antiderivatives;
//! interior nodes are arithmetic, square roots, blends, derivatives and
//! piecewise assembly. Every node evaluates on [`Jet`]s, so derivatives of
//! any order up to [`jet::MAX_ORDER`] come out of a single pass.
//!
//! The glue kernel is `g(x) = h(x) / (h(x) + h(1 - x))`, `h(x) = exp(-1/x)`
//! for `x > 0` and `0` otherwise. It is symmetric (`g(1/2) = 1/2`) and flat
//! to all orders at both ends.

pub mod jet;
pub mod quad;
mod table;

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
pub use jet::Jet;
pub use table::{TableOptions, TableStats};

use table::Table;

/// Default absolute tolerance for [`SmoothFn::integrate`] callers.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// Below this glue argument `exp(-1/x)` underflows; the jet is zero.
const GLUE_CUTOFF: f64 = 1.0 / 700.0;

#[derive(Clone)]
pub struct SmoothFn {
    node: Arc<Node>,
    lo: f64,
    hi: f64,
}

enum Node {
    Const(f64),
    Ident,
    /// `lo·g((b-r)/(b-a)) + hi·g((r-a)/(b-a))`.
    Step {
        a: f64,
        b: f64,
        lo: f64,
        hi: f64,
    },
    Sum(SmoothFn, SmoothFn),
    Diff(SmoothFn, SmoothFn),
    Prod(SmoothFn, SmoothFn),
    Quot(SmoothFn, SmoothFn),
    Affine {
        scale: f64,
        offset: f64,
        f: SmoothFn,
    },
    Sqrt(SmoothFn),
    /// `(1 - s)·f + s·g`.
    Blend {
        s: SmoothFn,
        f: SmoothFn,
        g: SmoothFn,
    },
    /// `pieces[i]` on `[breaks[i], breaks[i + 1]]`, right piece at shared ends.
    Piecewise {
        breaks: Vec<f64>,
        pieces: Vec<SmoothFn>,
    },
    Antiderivative(Table),
    Derivative(SmoothFn),
}

impl fmt::Debug for SmoothFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &*self.node {
            Node::Const(c) => return write!(f, "SmoothFn::Const({c}) on [{}, {}]", self.lo, self.hi),
            Node::Ident => "Ident",
            Node::Step { .. } => "Step",
            Node::Sum(..) => "Sum",
            Node::Diff(..) => "Diff",
            Node::Prod(..) => "Prod",
            Node::Quot(..) => "Quot",
            Node::Affine { .. } => "Affine",
            Node::Sqrt(_) => "Sqrt",
            Node::Blend { .. } => "Blend",
            Node::Piecewise { .. } => "Piecewise",
            Node::Antiderivative(_) => "Antiderivative",
            Node::Derivative(_) => "Derivative",
        };
        write!(f, "SmoothFn::{kind} on [{}, {}]", self.lo, self.hi)
    }
}

fn glue(x: Jet) -> Jet {
    let x0 = x.value();
    if x0 <= 0.0 {
        return Jet::constant(0.0, x.order());
    }
    if x0 >= 1.0 {
        return Jet::constant(1.0, x.order());
    }
    let h = |y: Jet| {
        if y.value() < GLUE_CUTOFF {
            Jet::constant(0.0, y.order())
        } else {
            (-y.recip()).exp()
        }
    };
    let h1 = h(x);
    let h2 = h(-x + Jet::constant(1.0, x.order()));
    h1.div(&(h1 + h2))
}

impl SmoothFn {
    fn new(node: Node, lo: f64, hi: f64) -> Self {
        SmoothFn {
            node: Arc::new(node),
            lo,
            hi,
        }
    }

    fn binary(node: fn(SmoothFn, SmoothFn) -> Node, a: &SmoothFn, b: &SmoothFn) -> Self {
        let lo = a.lo.max(b.lo);
        let hi = a.hi.min(b.hi);
        Self::new(node(a.clone(), b.clone()), lo, hi)
    }

    /// Constant function on the whole real line.
    pub fn constant(c: f64) -> Self {
        Self::new(Node::Const(c), f64::NEG_INFINITY, f64::INFINITY)
    }

    /// The identity `r ↦ r`.
    pub fn identity() -> Self {
        Self::new(Node::Ident, f64::NEG_INFINITY, f64::INFINITY)
    }

    /// Same function restricted to `[lo, hi]`.
    pub fn with_domain(&self, lo: f64, hi: f64) -> Self {
        SmoothFn {
            node: self.node.clone(),
            lo: lo.max(self.lo),
            hi: hi.min(self.hi),
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Returns `Some(c)` when this is a constant leaf.
    pub fn as_constant(&self) -> Option<f64> {
        match &*self.node {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn add(&self, other: &SmoothFn) -> Self {
        Self::binary(Node::Sum, self, other)
    }

    pub fn sub(&self, other: &SmoothFn) -> Self {
        Self::binary(Node::Diff, self, other)
    }

    pub fn mul(&self, other: &SmoothFn) -> Self {
        Self::binary(Node::Prod, self, other)
    }

    pub fn div(&self, other: &SmoothFn) -> Self {
        Self::binary(Node::Quot, self, other)
    }

    /// `scale·f + offset`.
    pub fn affine(&self, scale: f64, offset: f64) -> Self {
        Self::new(
            Node::Affine {
                scale,
                offset,
                f: self.clone(),
            },
            self.lo,
            self.hi,
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        self.affine(s, 0.0)
    }

    pub fn sqrt(&self) -> Self {
        Self::new(Node::Sqrt(self.clone()), self.lo, self.hi)
    }

    /// `(1 - s)·self + s·other`.
    pub fn blend(&self, other: &SmoothFn, s: &SmoothFn) -> Self {
        let lo = self.lo.max(other.lo).max(s.lo);
        let hi = self.hi.min(other.hi).min(s.hi);
        Self::new(
            Node::Blend {
                s: s.clone(),
                f: self.clone(),
                g: other.clone(),
            },
            lo,
            hi,
        )
    }

    /// First derivative as a function.
    pub fn derivative(&self) -> Self {
        Self::new(Node::Derivative(self.clone()), self.lo, self.hi)
    }

    /// Glues `pieces[i]` on `[breaks[i], breaks[i+1]]`.
    ///
    /// The caller is responsible for the pieces matching smoothly at the
    /// breakpoints; see [`SmoothFn::max_breakpoint_jump`].
    pub fn piecewise(breaks: Vec<f64>, pieces: Vec<SmoothFn>) -> Result<Self> {
        if breaks.len() != pieces.len() + 1 || pieces.is_empty() {
            return Err(Error::InvalidInterval(alloc::format!(
                "{} breakpoints for {} pieces",
                breaks.len(),
                pieces.len()
            )));
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidInterval(alloc::format!(
                "breakpoints not increasing: {breaks:?}"
            )));
        }
        let (lo, hi) = (breaks[0], breaks[breaks.len() - 1]);
        Ok(Self::new(Node::Piecewise { breaks, pieces }, lo, hi))
    }

    /// `F(r) = ∫_a^r integrand`, tabulated on `[a, b]` and interpolated by
    /// quintic Hermite splines. Derivatives of `F` come straight from the
    /// integrand; outside `[a, b]` values fall back to quadrature.
    pub fn antiderivative(integrand: &SmoothFn, a: f64, b: f64, opts: &TableOptions) -> Result<Self> {
        let table = Table::build(integrand.clone(), a, b, opts)?;
        let (lo, hi) = integrand.domain();
        Ok(Self::new(Node::Antiderivative(table), lo, hi))
    }

    /// Node counts of the antiderivative table, if this is one.
    pub fn table_stats(&self) -> Option<TableStats> {
        match &*self.node {
            Node::Antiderivative(t) => Some(t.stats()),
            _ => None,
        }
    }

    fn check(&self, r: f64) -> Result<()> {
        if r >= self.lo && r <= self.hi && r.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain {
                r,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }

    /// Taylor jet of order `order` at `r`.
    pub fn jet(&self, r: f64, order: usize) -> Result<Jet> {
        self.check(r)?;
        Ok(self.jet_unchecked(r, order))
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        Ok(self.jet(r, 0)?.value())
    }

    /// `f`, `f'` or `f''` (any order up to the jet limit) at `r`.
    pub fn eval_deriv(&self, r: f64, order: usize) -> Result<f64> {
        Ok(self.jet(r, order)?.derivative(order))
    }

    pub(crate) fn jet_unchecked(&self, r: f64, p: usize) -> Jet {
        match &*self.node {
            Node::Const(c) => Jet::constant(*c, p),
            Node::Ident => Jet::variable(r, p),
            Node::Step { a, b, lo, hi } => {
                let w = b - a;
                let up = glue(Jet::variable(r, p).offset(-a).scale(1.0 / w));
                let down = glue(Jet::variable(r, p).scale(-1.0).offset(*b).scale(1.0 / w));
                down.scale(*lo) + up.scale(*hi)
            }
            Node::Sum(f, g) => f.jet_unchecked(r, p) + g.jet_unchecked(r, p),
            Node::Diff(f, g) => f.jet_unchecked(r, p) - g.jet_unchecked(r, p),
            Node::Prod(f, g) => f.jet_unchecked(r, p) * g.jet_unchecked(r, p),
            Node::Quot(f, g) => f.jet_unchecked(r, p).div(&g.jet_unchecked(r, p)),
            Node::Affine { scale, offset, f } => f.jet_unchecked(r, p).scale(*scale).offset(*offset),
            Node::Sqrt(f) => f.jet_unchecked(r, p).sqrt(),
            Node::Blend { s, f, g } => {
                let sj = s.jet_unchecked(r, p);
                let fj = f.jet_unchecked(r, p);
                let gj = g.jet_unchecked(r, p);
                fj + sj * (gj - fj)
            }
            Node::Piecewise { breaks, pieces } => {
                let interior = &breaks[1..breaks.len() - 1];
                let i = interior.partition_point(|b| *b <= r);
                pieces[i].jet_unchecked(r, p)
            }
            Node::Antiderivative(t) => t.jet(r, p),
            Node::Derivative(f) => f.jet_unchecked(r, p + 1).differentiate(),
        }
    }

    /// `∫_a^b f` by adaptive Gauss-Kronrod with absolute tolerance `tol`.
    pub fn integrate(&self, a: f64, b: f64, tol: f64) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        self.check(a)?;
        self.check(b)?;
        let est = quad::integrate(|x| self.jet_unchecked(x, 0).value(), a, b, tol)?;
        Ok(est.value)
    }

    /// Breakpoints of every node in the tree (glue ends and piece joins),
    /// sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_breakpoints(&mut out);
        out.retain(|x| x.is_finite() && *x >= self.lo && *x <= self.hi);
        out.sort_unstable_by(|a, b| a.total_cmp(b));
        out.dedup();
        out
    }

    fn collect_breakpoints(&self, out: &mut Vec<f64>) {
        match &*self.node {
            Node::Const(_) | Node::Ident => {}
            Node::Step { a, b, .. } => {
                out.push(*a);
                out.push(*b);
            }
            Node::Sum(f, g) | Node::Diff(f, g) | Node::Prod(f, g) | Node::Quot(f, g) => {
                f.collect_breakpoints(out);
                g.collect_breakpoints(out);
            }
            Node::Affine { f, .. } | Node::Sqrt(f) | Node::Derivative(f) => f.collect_breakpoints(out),
            Node::Blend { s, f, g } => {
                s.collect_breakpoints(out);
                f.collect_breakpoints(out);
                g.collect_breakpoints(out);
            }
            Node::Piecewise { breaks, pieces } => {
                out.extend_from_slice(breaks);
                for piece in pieces {
                    piece.collect_breakpoints(out);
                }
            }
            Node::Antiderivative(t) => {
                let (a, b) = t.range();
                out.push(a);
                out.push(b);
                t.integrand().collect_breakpoints(out);
            }
        }
    }

    /// Largest relative mismatch of `f, f', f''` between the one-sided
    /// limits at any interior breakpoint, probed at `x ± h`.
    pub fn max_breakpoint_jump(&self, h: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for b in self.breakpoints() {
            if b - h < self.lo || b + h > self.hi {
                continue;
            }
            let left = self.jet_unchecked(b - h, 2);
            let right = self.jet_unchecked(b + h, 2);
            for k in 0..=2 {
                // Linear extrapolation of each one-sided value to b.
                let l = left.derivative(k) + h * left_next(&left, k);
                let r = right.derivative(k) - h * left_next(&right, k);
                let scale = 1.0f64.max(l.abs()).max(r.abs());
                worst = worst.max((l - r).abs() / scale);
            }
        }
        worst
    }
}

fn left_next(j: &Jet, k: usize) -> f64 {
    if k < j.order() {
        j.derivative(k + 1)
    } else {
        0.0
    }
}

/// Monotone C∞ step: `lo` on `(-∞, a]`, `hi` on `[b, ∞)`.
pub fn make_step(a: f64, b: f64, lo: f64, hi: f64) -> Result<SmoothFn> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInterval(alloc::format!(
            "step requires a < b, got a = {a}, b = {b}"
        )));
    }
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidInterval(alloc::format!(
            "step levels must be finite ({lo}, {hi})"
        )));
    }
    Ok(SmoothFn::new(
        Node::Step { a, b, lo, hi },
        f64::NEG_INFINITY,
        f64::INFINITY,
    ))
}

/// C∞ bump: `0` outside `[a0, b0]`, `1` on `[a1, b1]`, monotone shoulders.
///
/// A degenerate shoulder (`a0 == a1` or `b1 == b0`) is omitted, so the
/// function stays at `1` on that side, matching a bump that is flat at `0`.
pub fn make_plateau(a0: f64, a1: f64, b1: f64, b0: f64) -> Result<SmoothFn> {
    if !(a0 <= a1 && a1 <= b1 && b1 <= b0) {
        return Err(Error::InvalidInterval(alloc::format!(
            "plateau requires a0 <= a1 <= b1 <= b0, got ({a0}, {a1}, {b1}, {b0})"
        )));
    }
    if a0 == a1 && b1 == b0 {
        return Err(Error::InvalidInterval("plateau without any shoulder".into()));
    }
    let rise = if a0 < a1 {
        Some(make_step(a0, a1, 0.0, 1.0)?)
    } else {
        None
    };
    let fall = if b1 < b0 {
        Some(make_step(b1, b0, 1.0, 0.0)?)
    } else {
        None
    };
    Ok(match (rise, fall) {
        (Some(r), Some(f)) => r.mul(&f),
        (Some(r), None) => r,
        (None, Some(f)) => f,
        (None, None) => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::sqrt;

    #[test]
    fn step_plateau_values_and_midpoint() {
        let f = make_step(0.2, 0.5, 0.0, 1.0).unwrap();
        assert_eq!(f.eval(0.2).unwrap(), 0.0);
        assert_eq!(f.eval(0.1).unwrap(), 0.0);
        assert_eq!(f.eval(0.5).unwrap(), 1.0);
        assert!((f.eval(0.35).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(f.eval_deriv(0.1, 1).unwrap(), 0.0);
    }

    #[test]
    fn step_rejects_empty_interval() {
        assert!(matches!(make_step(0.5, 0.5, 0.0, 1.0), Err(Error::InvalidInterval(_))));
        assert!(matches!(make_step(0.6, 0.5, 0.0, 1.0), Err(Error::InvalidInterval(_))));
    }

    #[test]
    fn constant_derivatives_vanish() {
        let c = SmoothFn::constant(0.7);
        assert_eq!(c.eval_deriv(0.3, 2).unwrap(), 0.0);
        assert_eq!(c.eval(0.3).unwrap(), 0.7);
    }

    #[test]
    fn plateau_shape() {
        let p = make_plateau(0.0, 0.0, 0.3, 0.5).unwrap();
        assert_eq!(p.eval(0.1).unwrap(), 1.0);
        assert_eq!(p.eval(0.6).unwrap(), 0.0);
        let v = p.eval(0.4).unwrap();
        assert!(v > 0.0 && v < 1.0);
        assert!(p.eval_deriv(0.4, 1).unwrap() < 0.0);
        assert!(p.eval(0.41).unwrap() < v);
        assert!(make_plateau(0.0, 0.4, 0.3, 0.5).is_err());
    }

    #[test]
    fn first_derivative_matches_central_difference() {
        let f = make_step(0.2, 0.5, 0.0, 1.0).unwrap();
        let h = 1e-5;
        let fd = (f.eval(0.35 + h).unwrap() - f.eval(0.35 - h).unwrap()) / (2.0 * h);
        let an = f.eval_deriv(0.35, 1).unwrap();
        assert!((fd - an).abs() <= 1e-6 * an.abs(), "{fd} vs {an}");
    }

    #[test]
    fn decreasing_step_keeps_relative_accuracy_in_tail() {
        let lam = make_step(0.0, 1.0, 1.0, 0.0).unwrap();
        let v = lam.eval(0.99).unwrap();
        // 1 - g(0.99) = g(0.01) = h(0.01) / (h(0.01) + h(0.99))
        let h = |x: f64| crate::math::exp(-1.0 / x);
        let exact = h(0.01) / (h(0.01) + h(0.99));
        assert!(v > 0.0);
        assert!((v - exact).abs() <= 1e-12 * exact);
    }

    #[test]
    fn domain_errors() {
        let f = SmoothFn::constant(1.0).with_domain(0.0, 1.0);
        assert!(matches!(f.eval(1.5), Err(Error::Domain { .. })));
        assert!(f.eval(1.0).is_ok());
    }

    #[test]
    fn integrate_closed_forms() {
        let one = SmoothFn::constant(1.0);
        assert!((one.integrate(0.0, 1.0, 1e-10).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(one.integrate(0.4, 0.4, 1e-10).unwrap(), 0.0);
        let r = SmoothFn::identity();
        let g = SmoothFn::constant(1.0).sub(&r).sqrt();
        let f = SmoothFn::constant(1.0).div(&g).with_domain(0.0, 0.99);
        let v = f.integrate(0.2, 0.5, 1e-10).unwrap();
        assert!((v - 2.0 * (sqrt(0.8) - sqrt(0.5))).abs() < 1e-10);
    }

    #[test]
    fn piecewise_selects_right_piece_and_rejects_bad_breaks() {
        let f = SmoothFn::piecewise(
            alloc::vec![0.0, 0.5, 1.0],
            alloc::vec![SmoothFn::constant(1.0), SmoothFn::constant(2.0)],
        )
        .unwrap();
        assert_eq!(f.eval(0.25).unwrap(), 1.0);
        assert_eq!(f.eval(0.5).unwrap(), 2.0);
        assert!(SmoothFn::piecewise(alloc::vec![0.0, 0.0], alloc::vec![SmoothFn::constant(1.0)]).is_err());
    }

    #[test]
    fn derivative_node_matches_jet() {
        let f = make_step(0.1, 0.6, -1.0, 2.0).unwrap();
        let d = f.derivative();
        for r in [0.15, 0.3, 0.45, 0.59] {
            let j = f.jet(r, 3).unwrap();
            assert!((d.eval(r).unwrap() - j.derivative(1)).abs() < 1e-12);
            assert!((d.eval_deriv(r, 1).unwrap() - j.derivative(2)).abs() < 1e-9);
        }
    }
}
