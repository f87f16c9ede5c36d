//! Radial profile functions that flatten a hemisphere onto a cylinder.
//!
//! All functions are of `r = |y|²` on `[0, 1]`. The immersion is
//! `φ(x, y) = (θ(r)·x, y)` with `|z| = θ(r)·√(1 - r) = U(r)`, where
//!
//! ```text
//! U(r) = √γ                                 r ≤ α
//!      = √γ - ½∫_α^r Δ - e·S(r)             α ≤ r ≤ β
//!      = √(1 - r)                           r ≥ β
//! ```
//!
//! `Δ = ρ/√(1 - rρ²)`, `ρ` solves `2rρ' + ρ = ψ_{t₀}` from `ρ(α) = 0`, and
//! `t₀` is chosen so that `½∫_α^β Δ = √γ - √(1 - β)`. The root is only
//! known to quadrature accuracy; the leftover `e` (of order 1e-12) is removed
//! by a flat step `S` supported just below `β`, so the three pieces of `U`
//! agree to all orders at `β` and not only to the root tolerance.
//!
//! From `U` everything else follows: `ν - rμ = U²`, `c₁ = -(U²)'`,
//! `c₂ = √(U² + r·c₁²)` and `θ = U/√(1 - r)`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::math::sqrt;
use crate::smoothfn::{make_step, SmoothFn, TableOptions};
use crate::MAX_DIM;

/// Tolerance on the root condition for `t₀`.
pub const ROOT_TOL: f64 = 1e-9;
/// Iteration cap for the `t₀` bisection.
pub const MAX_BISECTIONS: usize = 200;
/// Absolute quadrature tolerance used for `∫Δ` in the root search.
const ROOT_QUAD_TOL: f64 = 1e-13;
/// Δ is evaluated up to `1 - DELTA_GAP`; it blows up at `r = 1`.
const DELTA_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProfileParams {
    /// Sphere dimension: the immersion is `S^n → R^{n+1}`.
    pub n: usize,
    /// Dimension of the sphere factor of the flat cylinder `S^k × D^{n-k}`.
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Width of the rise windows of `ψ₀` and `ψ₁`.
    pub eps: f64,
    pub alpha_tilde: f64,
    pub beta_tilde: f64,
    /// Window below `β` over which `ρ` is blended to `1`.
    pub blend_width: f64,
}

impl ProfileParams {
    /// Parameters with the default `ε`, `α̃`, `β̃` and blend width.
    pub fn new(n: usize, k: usize, alpha: f64, beta: f64, gamma: f64) -> Self {
        ProfileParams {
            n,
            k,
            alpha,
            beta,
            gamma,
            eps: 0.05,
            alpha_tilde: 0.5 * alpha,
            beta_tilde: 0.5 * (1.0 + beta),
            blend_width: 0.05,
        }
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    /// Every violated constraint, or `Ok` if none.
    pub fn validate(&self) -> Result<()> {
        let v = validate_params(self);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(v))
        }
    }
}

impl Default for ProfileParams {
    fn default() -> Self {
        ProfileParams::new(2, 1, 0.2, 0.5, 0.7)
    }
}

/// One failed parameter constraint.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Violation {
    /// The inequality, e.g. `β>1−γ`.
    pub constraint: String,
    /// The offending values, e.g. `0.35 ≤ 0.5`.
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails ({})", self.constraint, self.detail)
    }
}

/// Checks every inequality the construction relies on.
pub fn validate_params(p: &ProfileParams) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut fail = |constraint: &str, detail: String| {
        out.push(Violation {
            constraint: constraint.into(),
            detail,
        })
    };
    let reals = [
        ("α", p.alpha),
        ("β", p.beta),
        ("γ", p.gamma),
        ("ε", p.eps),
        ("α̃", p.alpha_tilde),
        ("β̃", p.beta_tilde),
        ("w", p.blend_width),
    ];
    for (name, x) in reals {
        if !x.is_finite() {
            fail(&format!("{name} finite"), format!("{name} = {x}"));
        }
    }
    if p.n < 2 || p.n > MAX_DIM {
        fail(&format!("2≤n≤{MAX_DIM}"), format!("n = {}", p.n));
    }
    if p.k < 1 || p.k + 1 > p.n {
        fail("1≤k≤n−1", format!("k = {}, n = {}", p.k, p.n));
    }
    let (a, b, g) = (p.alpha, p.beta, p.gamma);
    if !(a > 0.0) {
        fail("α>0", format!("{a} ≤ 0"));
    }
    if !(a < 0.5) {
        fail("α<1/2", format!("{a} ≥ 0.5"));
    }
    if !(a < g) {
        fail("α<γ", format!("{g} ≤ {a}"));
    }
    if !(g < 1.0 - a) {
        fail("γ<1−α", format!("{g} ≥ {}", 1.0 - a));
    }
    if !(a < b) {
        fail("α<β", format!("{b} ≤ {a}"));
    }
    if !(b < g) {
        fail("β<γ", format!("{b} ≥ {g}"));
    }
    if !(b > 1.0 - g) {
        fail("β>1−γ", format!("{b} ≤ {}", 1.0 - g));
    }
    if !(p.alpha_tilde > 0.0 && p.alpha_tilde < a) {
        fail("0<α̃<α", format!("α̃ = {}, α = {a}", p.alpha_tilde));
    }
    if !(p.beta_tilde > b && p.beta_tilde < 1.0) {
        fail("β<β̃<1", format!("β̃ = {}, β = {b}", p.beta_tilde));
    }
    if !(p.blend_width > 0.0 && p.blend_width < b - a) {
        fail("0<w<β−α", format!("w = {}, β−α = {}", p.blend_width, b - a));
    }
    if !(p.eps > 0.0) {
        fail("ε>0", format!("{} ≤ 0", p.eps));
    }
    out
}

/// `ψ₁` rises on `[α, α+ε]`, `ψ₀` on `[β-ε, β]`; both are `0` then `1`.
///
/// Each is built as `ψ = 2r·s' + s` for a glue step `s` over its window, so
/// the associated `ρ` is the step `s` itself. A monotone `ψ ≤ 1` cannot
/// work: it keeps `ρ ≤ 1 - √(α/r)`, far too small for `½∫Δ₁` to reach the
/// root target. The price is that `ψ₁` overshoots `1` inside its window.
pub fn build_psi_pair(p: &ProfileParams) -> Result<(SmoothFn, SmoothFn)> {
    p.validate()?;
    let max = 0.5 * (p.beta - p.alpha);
    if !(p.eps > 0.0 && p.eps < max) {
        return Err(Error::InvalidEps { eps: p.eps, max });
    }
    let from_rho = |s: SmoothFn| {
        let r = SmoothFn::identity();
        r.mul(&s.derivative()).scale(2.0).add(&s).with_domain(0.0, 1.0)
    };
    let psi0 = from_rho(make_step(p.beta - p.eps, p.beta, 0.0, 1.0)?);
    let psi1 = from_rho(make_step(p.alpha, p.alpha + p.eps, 0.0, 1.0)?);
    Ok((psi0, psi1))
}

/// `ψ_t = (1 - t)ψ₀ + tψ₁`.
pub fn psi_t(psi0: &SmoothFn, psi1: &SmoothFn, t: f64) -> SmoothFn {
    psi0.blend(psi1, &SmoothFn::constant(t))
}

fn blend_step(p: &ProfileParams) -> Result<SmoothFn> {
    make_step(p.beta - p.blend_width, p.beta, 0.0, 1.0)
}

/// Solves `2rρ' + ρ = ψ`, `ρ(α) = 0`, and blends the solution to `1` over
/// `[β - w, β]`.
pub fn solve_rho(psi: &SmoothFn, p: &ProfileParams) -> Result<SmoothFn> {
    solve_rho_with(psi, p, &TableOptions::default())
}

fn solve_rho_with(psi: &SmoothFn, p: &ProfileParams, opts: &TableOptions) -> Result<SmoothFn> {
    let r = SmoothFn::identity();
    let integrand = psi.div(&r.sqrt().scale(2.0)).with_domain(p.alpha_tilde, 1.0);
    let area = SmoothFn::antiderivative(&integrand, p.alpha, p.beta, opts)?;
    let raw = area.div(&r.sqrt());
    let knee = raw.eval(p.beta - p.blend_width)?;
    if knee > 1.0 + 1e-9 {
        return Err(Error::Blend { value: knee });
    }
    let blended = raw.blend(&SmoothFn::constant(1.0), &blend_step(p)?);
    SmoothFn::piecewise(
        vec![0.0, p.alpha, p.beta, 1.0],
        vec![SmoothFn::constant(0.0), blended, SmoothFn::constant(1.0)],
    )
}

/// `Δ = ρ/√(1 - rρ²)`, exactly `0` below `α` and `1/√(1 - r)` above `β`.
pub fn delta_of(rho: &SmoothFn, p: &ProfileParams) -> Result<SmoothFn> {
    let r = SmoothFn::identity();
    let one = SmoothFn::constant(1.0);
    let samples = 256;
    for i in 0..=samples {
        let s = p.alpha + (p.beta - p.alpha) * i as f64 / samples as f64;
        let q = rho.eval(s)?;
        if !(1.0 - s * q * q > 0.0) {
            return Err(Error::Singularity { r: s });
        }
    }
    let middle = rho.div(&one.sub(&r.mul(&rho.mul(rho))).sqrt());
    let sphere = one.div(&one.sub(&r).sqrt());
    SmoothFn::piecewise(
        vec![0.0, p.alpha, p.beta, 1.0 - DELTA_GAP],
        vec![SmoothFn::constant(0.0), middle, sphere],
    )
}

/// `½∫_α^β Δ_t - (√γ - √(1 - β))` together with `ψ_t`.
struct RootSample {
    t: f64,
    g: f64,
    psi: SmoothFn,
}

fn root_function(p: &ProfileParams, psi0: &SmoothFn, psi1: &SmoothFn, t: f64) -> Result<RootSample> {
    let psi = psi_t(psi0, psi1, t);
    // Only the value of ∫Δ matters here; the final ρ is rebuilt in full.
    let opts = TableOptions {
        deriv_tol: f64::INFINITY,
        ..TableOptions::default()
    };
    let rho = solve_rho_with(&psi, p, &opts)?;
    let delta = delta_of(&rho, p)?;
    let half = 0.5 * delta.integrate(p.alpha, p.beta, ROOT_QUAD_TOL)?;
    Ok(RootSample {
        t,
        g: half - root_target(p),
        psi,
    })
}

/// `√γ - √(1 - β)`.
pub fn root_target(p: &ProfileParams) -> f64 {
    sqrt(p.gamma) - sqrt(1.0 - p.beta)
}

/// Output of the `t₀` search.
#[derive(Debug, Clone)]
pub struct RootSolution {
    pub t0: f64,
    /// `G(t₀)`.
    pub residual: f64,
    pub iterations: usize,
    pub psi: SmoothFn,
    pub rho: SmoothFn,
    pub delta: SmoothFn,
}

/// Bisection for `G(t₀) = 0` on `[0, 1]`.
pub fn find_t0(p: &ProfileParams) -> Result<RootSolution> {
    let (psi0, psi1) = build_psi_pair(p)?;
    let lo = root_function(p, &psi0, &psi1, 0.0)?;
    let hi = root_function(p, &psi0, &psi1, 1.0)?;
    if !(lo.g <= 0.0 && hi.g >= 0.0) {
        return Err(Error::Bracket { g0: lo.g, g1: hi.g });
    }
    let (mut a, mut b) = (lo.t, hi.t);
    let mut best = if -lo.g <= hi.g { lo } else { hi };
    let mut iterations = 0;
    while iterations < MAX_BISECTIONS && best.g.abs() > 1e-3 * ROOT_TOL {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let s = root_function(p, &psi0, &psi1, mid)?;
        iterations += 1;
        if s.g < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        if s.g.abs() < best.g.abs() {
            best = s;
        }
    }
    let rho = solve_rho(&best.psi, p)?;
    let delta = delta_of(&rho, p)?;
    let residual = 0.5 * delta.integrate(p.alpha, p.beta, ROOT_QUAD_TOL)? - root_target(p);
    Ok(RootSolution {
        t0: best.t,
        residual,
        iterations,
        psi: best.psi,
        rho,
        delta,
    })
}

/// `ν`: `γ` on `[0, α]`, `1` on `[β, 1]`.
pub fn build_nu(p: &ProfileParams) -> Result<SmoothFn> {
    Ok(make_step(p.alpha, p.beta, p.gamma, 1.0)?.with_domain(0.0, 1.0))
}

/// The image radius `U = |z|` as a function of `r`, and the closing residual `e`.
fn build_radius(p: &ProfileParams, delta: &SmoothFn) -> Result<(SmoothFn, f64, SmoothFn)> {
    let integral = SmoothFn::antiderivative(delta, p.alpha, p.beta, &TableOptions::default())?;
    let sg = sqrt(p.gamma);
    let e = sg - 0.5 * integral.eval(p.beta)? - sqrt(1.0 - p.beta);
    let step = blend_step(p)?;
    let middle = integral.affine(-0.5, sg).sub(&step.scale(e));
    let samples = 256;
    for i in 0..=samples {
        let s = p.alpha + (p.beta - p.alpha) * i as f64 / samples as f64;
        if !(middle.eval(s)? > 0.0) {
            return Err(Error::Geometry { r: s });
        }
    }
    let sphere = SmoothFn::constant(1.0).sub(&SmoothFn::identity()).sqrt();
    let u = SmoothFn::piecewise(
        vec![0.0, p.alpha, p.beta, 1.0],
        vec![SmoothFn::constant(sg), middle.clone(), sphere],
    )?;
    Ok((u, e, middle))
}

/// `μ = (ν - U²)/r` on `[α, β]`, with `ν, Δ` already closed at `β`.
pub fn build_mu(p: &ProfileParams, nu: &SmoothFn, delta: &SmoothFn) -> Result<SmoothFn> {
    let (_, _, middle) = build_radius(p, delta)?;
    mu_from_radius(p, nu, &middle)
}

fn mu_from_radius(p: &ProfileParams, nu: &SmoothFn, u_mid: &SmoothFn) -> Result<SmoothFn> {
    let r = SmoothFn::identity();
    let middle = nu.sub(&u_mid.mul(u_mid)).div(&r);
    SmoothFn::piecewise(
        vec![0.0, p.alpha, p.beta, 1.0],
        vec![SmoothFn::constant(0.0), middle, SmoothFn::constant(1.0)],
    )
}

/// The solved profile system.
#[derive(Debug, Clone)]
pub struct ProfileSolution {
    pub params: ProfileParams,
    pub nu: SmoothFn,
    pub psi: SmoothFn,
    pub rho: SmoothFn,
    pub delta: SmoothFn,
    pub mu: SmoothFn,
    pub c1: SmoothFn,
    pub c2: SmoothFn,
    pub theta: SmoothFn,
    /// `2r(c₁/c₂)' + c₁/c₂`, the curvature along the radial direction.
    pub psi_eff: SmoothFn,
    /// `U(r) = |z|`, the radius of the image of the `x`-sphere.
    pub radius: SmoothFn,
    pub t0: f64,
    /// `G(t₀)`.
    pub root_residual: f64,
    /// Closing correction `e` absorbed by the flat step below `β`.
    pub closure: f64,
}

/// Runs the whole construction.
pub fn assemble_profile(p: &ProfileParams) -> Result<ProfileSolution> {
    p.validate()?;
    let root = find_t0(p)?;
    let nu = build_nu(p)?;
    let (radius, closure, u_mid) = build_radius(p, &root.delta)?;
    let mu = mu_from_radius(p, &nu, &u_mid)?;

    let r = SmoothFn::identity();
    let one = SmoothFn::constant(1.0);
    let sg = sqrt(p.gamma);
    let breaks = vec![0.0, p.alpha, p.beta, 1.0];
    let step = blend_step(p)?;

    // c₁ = -(U²)' = U·(Δ + 2e·S'), written without the cancellation in μ + rμ' - ν'.
    let c1_mid = u_mid.mul(&root.delta.add(&step.derivative().scale(2.0 * closure)));
    let c2_mid = u_mid.mul(&u_mid).add(&r.mul(&c1_mid.mul(&c1_mid))).sqrt();
    let ratio = c1_mid.div(&c2_mid);
    let psi_eff_mid = r.mul(&ratio.derivative()).scale(2.0).add(&ratio);
    let sqrt_gap = one.sub(&r).sqrt();
    let theta_mid = u_mid.div(&sqrt_gap);

    let c1 = SmoothFn::piecewise(breaks.clone(), vec![SmoothFn::constant(0.0), c1_mid, one.clone()])?;
    let c2 = SmoothFn::piecewise(breaks.clone(), vec![SmoothFn::constant(sg), c2_mid, one.clone()])?;
    let theta = SmoothFn::piecewise(
        breaks.clone(),
        vec![SmoothFn::constant(sg).div(&sqrt_gap), theta_mid, one.clone()],
    )?;
    let psi_eff = SmoothFn::piecewise(breaks, vec![SmoothFn::constant(0.0), psi_eff_mid, one])?;

    Ok(ProfileSolution {
        params: *p,
        nu,
        psi: root.psi,
        rho: root.rho,
        delta: root.delta,
        mu,
        c1,
        c2,
        theta,
        psi_eff,
        radius,
        t0: root.t0,
        root_residual: root.residual,
        closure,
    })
}

/// Column order of [`ProfileSolution::sample_row`].
pub const PROFILE_COLUMNS: [&str; 10] = ["r", "nu", "psi", "rho", "delta", "mu", "c1", "c2", "theta", "psi_eff"];

impl ProfileSolution {
    /// Principal curvatures at `r`: `(1/c₂, c₁/c₂, ψ_eff)`.
    pub fn curvature_factors(&self, r: f64) -> Result<(f64, f64, f64)> {
        let c1 = self.c1.eval(r)?;
        let c2 = self.c2.eval(r)?;
        Ok((1.0 / c2, c1 / c2, self.psi_eff.eval(r)?))
    }

    /// `[r, ν, ψ, ρ, Δ, μ, c₁, c₂, θ, ψ_eff]` at `r ∈ [0, 1)`.
    pub fn sample_row(&self, r: f64) -> Result<[f64; 10]> {
        Ok([
            r,
            self.nu.eval(r)?,
            self.psi.eval(r)?,
            self.rho.eval(r)?,
            self.delta.eval(r)?,
            self.mu.eval(r)?,
            self.c1.eval(r)?,
            self.c2.eval(r)?,
            self.theta.eval(r)?,
            self.psi_eff.eval(r)?,
        ])
    }
}
