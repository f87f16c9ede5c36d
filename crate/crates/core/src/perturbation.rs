//! Normal variations that inflate the flat cylinder over a geodesic ball.
//!
//! For `k = n - 1` the flat piece is `S^{n-1}(√γ) × [-√α, √α]`. Over a ball
//! `U ⊂ S^{n-1}` the map is pushed along its normal,
//!
//! ```text
//! F_t(q) = q + t·f(q)·N(q),   f(z, w) = l₀·λ(d(z/|z|))·σ(w),
//! ```
//!
//! where `d` is half the squared geodesic distance to the centre of `U`,
//! `λ` falls from `1` at `d = 0` to `0` at `d_cap = δ²/2`, and
//! `σ(w) = -w²/2` near the cylinder, tapered to zero before `w² = β`.
//!
//! The first variation of `H_n = det S` is `-tr(adj S · (Hess_M f + f·S²))`
//! with `Hess_M f = D²f|_T - (∂_N f)·S`. In the eigenframe of the base map
//! this is evaluated by [`det_rate_analytic`]; [`det_rate_fd`] differences the
//! determinant of the finite-difference shape operator in `t` instead.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, Region};
use crate::immersion::{shape_operator_fd, ChartPoint, FdMode, ImmersionMap};
use crate::math::{angle_between, atan2, sqrt, x_cot_x};
use crate::profile::ProfileSolution;
use crate::smoothfn::{make_plateau, make_step, SmoothFn};
use crate::{par, Vector};

/// Default bound on ball radii, in radians.
pub const DEFAULT_DELTA0: f64 = 0.15;
/// Default finite-difference step in `t` for [`det_rate_fd`].
pub const DEFAULT_RATE_STEP: f64 = 1e-5;
/// Maximum number of halvings in [`calibrate_t`].
pub const MAX_HALVINGS: u32 = 30;
/// Lower bound on `H_n` accepted anywhere after calibration.
pub const GLOBAL_H_FLOOR: f64 = -1e-12;
/// Fraction of `d_cap` that bounds the calibration target region.
pub const TARGET_FRACTION: f64 = 0.99;

/// Open geodesic ball on the unit sphere `S^m ⊂ R^{m+1}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeodesicBall {
    pub center: Vector,
    /// Geodesic radius `δ` in radians.
    pub radius: f64,
    /// Bound `δ₀` the radius was validated against.
    pub delta0: f64,
}

impl GeodesicBall {
    pub fn new(center: Vector, radius: f64, delta0: f64) -> Result<Self> {
        let c2: f64 = center.iter().map(|x| x * x).sum();
        if (c2 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(alloc::format!(
                "ball centre has |c|² = {c2}, not 1"
            )));
        }
        if !(radius > 0.0 && radius <= delta0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "ball radius {radius} outside (0, δ₀ = {delta0}]"
            )));
        }
        Ok(GeodesicBall { center, radius, delta0 })
    }

    /// Ball on `S¹` centred at angle `angle`.
    pub fn on_circle(angle: f64, radius: f64, delta0: f64) -> Result<Self> {
        let c: Vector = [crate::math::cos(angle), crate::math::sin(angle)].into_iter().collect();
        Self::new(c, radius, delta0)
    }

    /// `δ²/2`, the value of `d` on the boundary.
    pub fn d_cap(&self) -> f64 {
        0.5 * self.radius * self.radius
    }

    /// Polar angle of the centre (only meaningful on `S¹`).
    pub fn center_angle(&self) -> f64 {
        atan2(self.center[1], self.center[0])
    }

    pub fn contains(&self, dir: &[f64]) -> bool {
        angle_between(dir, &self.center) < self.radius
    }

    /// Geodesic gap to another ball (negative when they overlap).
    pub fn gap(&self, other: &GeodesicBall) -> f64 {
        angle_between(&self.center, &other.center) - self.radius - other.radius
    }
}

/// `d = ½·dist(z, c)²`, `|∇d|² = 2d` and `Δd = 1 + (m-1)·ρ·cot ρ`, `ρ = √(2d)`,
/// on the unit sphere `S^m`. The antipode of `c` is a singular point.
pub fn geodesic_quantities(z_dir: &[f64], c: &[f64], m: usize) -> Result<(f64, f64, f64)> {
    let rho = angle_between(z_dir, c);
    if rho > core::f64::consts::PI - 1e-9 {
        return Err(Error::Antipodal);
    }
    let d = 0.5 * rho * rho;
    let lap = 1.0 + (m as f64 - 1.0) * x_cot_x(rho);
    Ok((d, 2.0 * d, lap))
}

/// `½·dist(z, c)²` on the whole sphere (`π²/2` at the antipode).
pub fn half_squared_distance(z_dir: &[f64], c: &[f64]) -> f64 {
    let rho = angle_between(z_dir, c);
    0.5 * rho * rho
}

/// One normal variation `t·f·N` over a ball.
#[derive(Debug, Clone)]
pub struct NormalVariation {
    pub ball: GeodesicBall,
    /// Amplitude `l₀ > 0`.
    pub l0: f64,
    /// Variation time; `0` until applied.
    pub t: f64,
    /// `σ = -sign·w²/2` on `w² ≤ α₀`.
    pub alpha0: f64,
    /// Start of the `σ` taper, `α₀' = (α₀ + β)/2`.
    pub alpha0_taper: f64,
    /// `σ ≡ 0` for `w² ≥ β`.
    pub beta: f64,
    /// `+1` inflates; `-1` is the concave variant.
    pub sign: f64,
    /// Function of `d` on `[0, d_cap]`.
    pub lambda: SmoothFn,
    /// Function of `w`.
    pub sigma: SmoothFn,
}

/// Builds `f = l₀·λ(d)·σ(w)` for a ball; requires `α < α₀ < β`.
pub fn build_variation(
    ball: GeodesicBall,
    l0: f64,
    alpha0: f64,
    alpha: f64,
    beta: f64,
    sign: f64,
) -> Result<NormalVariation> {
    if !(l0 > 0.0 && l0.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!("l₀ = {l0} must be > 0")));
    }
    if !(alpha < alpha0 && alpha0 < beta) {
        return Err(Error::InvalidParameter(alloc::format!(
            "need α < α₀ < β, got α = {alpha}, α₀ = {alpha0}, β = {beta}"
        )));
    }
    if sign != 1.0 && sign != -1.0 {
        return Err(Error::InvalidParameter(alloc::format!("sign must be ±1, got {sign}")));
    }
    let lambda = make_step(0.0, ball.d_cap(), 1.0, 0.0)?;
    let taper = 0.5 * (alpha0 + beta);
    let (a, b) = (sqrt(taper), sqrt(beta));
    let w = SmoothFn::identity();
    let sigma = make_plateau(-b, -a, a, b)?.mul(&w.mul(&w)).scale(-0.5 * sign);
    Ok(NormalVariation {
        ball,
        l0,
        t: 0.0,
        alpha0,
        alpha0_taper: taper,
        beta,
        sign,
        lambda,
        sigma,
    })
}

impl NormalVariation {
    /// Whether `(z_dir, w)` lies in the open support `{dist < δ} × {w² < β}`.
    pub fn in_support(&self, z_dir: &[f64], w: f64) -> bool {
        w * w < self.beta && self.ball.contains(z_dir)
    }

    /// `f(z, w) = l₀·λ(d)·σ(w)` (without the time factor).
    pub fn amplitude(&self, z_dir: &[f64], w: f64) -> Result<f64> {
        if !self.in_support(z_dir, w) {
            return Ok(0.0);
        }
        let d = half_squared_distance(z_dir, &self.ball.center);
        Ok(self.l0 * self.lambda.eval(d)? * self.sigma.eval(w)?)
    }

    /// Same variation with time `t`.
    pub fn at_time(&self, t: f64) -> NormalVariation {
        let mut v = self.clone();
        v.t = t;
        v
    }

    /// The target region of calibration: `d < 0.99·d_cap` and `w² ≤ α`.
    pub fn in_target(&self, z_dir: &[f64], w: f64, alpha: f64) -> bool {
        w * w <= alpha && half_squared_distance(z_dir, &self.ball.center) < TARGET_FRACTION * self.ball.d_cap()
    }
}

fn require_hypersurface_codim(n: usize, k: usize) -> Result<()> {
    if k + 1 != n {
        return Err(Error::UnsupportedCodimension { n, k });
    }
    Ok(())
}

fn with_variation(m: &ImmersionMap, var: &NormalVariation, t: f64) -> Result<ImmersionMap> {
    require_hypersurface_codim(m.n(), m.k())?;
    if var.ball.center.len() != m.n() {
        return Err(Error::InvalidParameter(alloc::format!(
            "ball centre in R^{} but the flat piece is S^{}",
            var.ball.center.len(),
            m.n() - 1
        )));
    }
    for (i, other) in m.stack().iter().enumerate() {
        if var.ball.gap(&other.ball) < 0.0 {
            return Err(Error::SupportCollision { index: i });
        }
    }
    Ok(m.push(var.at_time(t)))
}

/// `F_t = φ + t·f·N` on top of `m`.
pub fn apply_variation(m: &ImmersionMap, var: &NormalVariation, t: f64) -> Result<ImmersionMap> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!(
            "variation time t = {t} must be ≥ 0"
        )));
    }
    with_variation(m, var, t)
}

/// Closed-form `∂/∂t det S_t` at `t = 0` for the base map of `sol`.
pub fn det_rate_analytic(sol: &ProfileSolution, var: &NormalVariation, p: &ChartPoint) -> Result<f64> {
    let (n, k) = (sol.params.n, sol.params.k);
    require_hypersurface_codim(n, k)?;
    let w = p.y[0];
    if !var.in_support(&p.dir, w) {
        return Ok(0.0);
    }
    let r = w * w;
    let u = sol.radius.jet(r, 1)?;
    let (uv, du) = (u.value(), u.derivative(1));
    let c1 = sol.c1.eval(r)?;
    let c2 = sol.c2.eval(r)?;
    let psi = sol.psi_eff.eval(r)?;
    let (d, grad_sq, lap) = geodesic_quantities(&p.dir, &var.ball.center, n - 1)?;
    let lam = var.lambda.jet(d, 2)?;
    let sig = var.sigma.jet(w, 2)?;
    let (l, l1, l2) = (lam.value(), lam.derivative(1), lam.derivative(2));
    let (s, s1, s2) = (sig.value(), sig.derivative(1), sig.derivative(2));

    let f = var.l0 * l * s;
    let df_normal = var.l0 * l * s1 * c1 * w / c2;
    let bn_sq = 1.0 / (1.0 + 4.0 * r * du * du);
    let kc = 1.0 / c2;
    let m = (n - 1) as f64;

    let angular = var.l0 * s * (l2 * grad_sq + l1 * lap) / (uv * uv) - m * kc * df_normal + m * f * kc * kc;
    let radial = var.l0 * bn_sq * l * s2 - psi * df_normal + f * psi * psi;
    let mut pow = 1.0;
    for _ in 0..(n - 2) {
        pow *= kc;
    }
    Ok(-(pow * psi * angular + pow * kc * radial))
}

/// `∂/∂t det S_t` by a Richardson-extrapolated central difference in `t`,
/// with `S_t` from [`FdMode::Split`] finite differences of `F_t`.
pub fn det_rate_fd(m: &ImmersionMap, var: &NormalVariation, p: &ChartPoint, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!("rate step h = {h} must be > 0")));
    }
    let det = |t: f64| -> Result<f64> {
        let mt = with_variation(m, var, t)?;
        Ok(shape_operator_fd(&mt, p, FdMode::Split)?.gauss_kronecker)
    };
    let d_h = (det(h)? - det(-h)?) / (2.0 * h);
    let d_half = (det(0.5 * h)? - det(-0.5 * h)?) / h;
    Ok((4.0 * d_half - d_h) / 3.0)
}

/// A support point where the analytic and finite-difference rates are
/// compared to fix the overall sign of the closed form.
pub fn sign_reference_point(var: &NormalVariation, alpha: f64) -> ChartPoint {
    let mut p = ChartPoint {
        dir: var.ball.center.clone(),
        y: Vector::new(),
    };
    p.y.push(0.5 * sqrt(alpha));
    let tau = p.tangent_basis();
    let q: Vec<f64> = tau
        .iter()
        .map(|_| 0.3 * var.ball.radius / sqrt(tau.len() as f64))
        .collect();
    let mut q = q;
    q.push(0.0);
    p.offset(&q)
}

/// Sign relating the closed form to the finite-difference rate at one point.
/// Returns `+1` when they agree; anything else is a bug in the closed form.
pub fn calibrate_sign(m: &ImmersionMap, var: &NormalVariation) -> Result<f64> {
    let alpha = m.profile().params.alpha;
    let p = sign_reference_point(var, alpha);
    let an = det_rate_analytic(m.profile(), var, &p)?;
    let fd = det_rate_fd(m, var, &p, DEFAULT_RATE_STEP)?;
    if an == 0.0 || fd == 0.0 {
        return Err(Error::InvalidParameter("sign calibration point has zero rate".into()));
    }
    Ok(if (an > 0.0) == (fd > 0.0) { 1.0 } else { -1.0 })
}

/// Outcome of [`calibrate_t`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CalibrationReport {
    pub t: f64,
    pub halvings: u32,
    pub grid: GridSpec,
    pub target_points: usize,
    /// Minimum `H_n` over the target region and where it occurs.
    pub min_h_target: f64,
    pub min_target_at: (f64, f64),
    /// Minimum `H_n` over the whole grid and where it occurs.
    pub min_h_global: f64,
    pub min_global_at: (f64, f64),
    /// Smallest `⟨∂/∂w, e_n⟩²` on `w² ≤ α₀`.
    pub min_bn_sq: f64,
    /// Smallest closed-form rate on the target region.
    pub min_rate_target: f64,
}

/// Grid over the support box of `var` on the `(u, v)` chart.
pub fn support_grid(var: &NormalVariation, nu: usize, nv: usize) -> GridSpec {
    GridSpec::new(
        nu,
        nv,
        Region::ball_shadow(var.ball.center_angle(), var.ball.radius, sqrt(var.beta)),
    )
}

/// Largest `t = t_init/2^j` (`j ≤ 30`) with `H_n > 0` on the target region
/// and `H_n ≥ -1e-12` on the whole grid.
pub fn calibrate_t(m: &ImmersionMap, var: &NormalVariation, grid: &GridSpec, t_init: f64) -> Result<CalibrationReport> {
    require_hypersurface_codim(m.n(), m.k())?;
    if m.n() != 2 {
        return Err(Error::InvalidParameter(
            "calibration grids use the (u, v) chart of S²".into(),
        ));
    }
    grid.validate()?;
    let sol = m.profile();
    let alpha = sol.params.alpha;
    if !(alpha < var.alpha0 && var.alpha0 < sol.params.beta) {
        return Err(Error::InvalidParameter(alloc::format!(
            "need α < α₀ < β, got α₀ = {} with α = {alpha}, β = {}",
            var.alpha0,
            sol.params.beta
        )));
    }
    if !(t_init > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!("t_init = {t_init} must be > 0")));
    }

    let mut min_bn_sq = f64::INFINITY;
    let samples = 400;
    for i in 0..=samples {
        let w = sqrt(var.alpha0) * i as f64 / samples as f64;
        let du = sol.radius.eval_deriv(w * w, 1)?;
        min_bn_sq = min_bn_sq.min(1.0 / (1.0 + 4.0 * w * w * du * du));
    }
    if min_bn_sq < 0.5 {
        return Err(Error::InvalidParameter(alloc::format!(
            "⟨∂/∂w, e_n⟩² drops to {min_bn_sq} < 1/2 on w² ≤ α₀; move α₀ closer to α"
        )));
    }

    let nodes = grid.nodes();
    let pts: Vec<ChartPoint> = nodes.iter().map(|nd| ChartPoint::uv(nd.u, nd.v)).collect();
    let target: Vec<bool> = pts.iter().map(|p| var.in_target(&p.dir, p.y[0], alpha)).collect();
    let target_points = target.iter().filter(|b| **b).count();
    let rates = par::map(&pts, |p| det_rate_analytic(sol, var, p));
    let mut min_rate_target = f64::INFINITY;
    for (rate, &tg) in rates.into_iter().zip(&target) {
        let rate = rate?;
        if tg {
            min_rate_target = min_rate_target.min(rate);
        }
    }
    if target_points > 0 && !(min_rate_target > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "closed-form rate is not positive on the target region (min {min_rate_target})"
        )));
    }

    let mut t = t_init;
    let mut worst = (f64::NEG_INFINITY, 0.0, 0.0);
    for halvings in 0..=MAX_HALVINGS {
        let mt = apply_variation(m, var, t)?;
        let hs = par::map(&pts, |p| mt.gauss_kronecker(p));
        let mut min_t = (f64::INFINITY, 0.0, 0.0);
        let mut min_g = (f64::INFINITY, 0.0, 0.0);
        for ((h, nd), &tg) in hs.into_iter().zip(&nodes).zip(&target) {
            let h = h?;
            if h < min_g.0 || h.is_nan() {
                min_g = (h, nd.u, nd.v);
            }
            if tg && (h < min_t.0 || h.is_nan()) {
                min_t = (h, nd.u, nd.v);
            }
        }
        let target_ok = target_points == 0 || min_t.0 > 0.0;
        if target_ok && min_g.0 >= GLOBAL_H_FLOOR {
            return Ok(CalibrationReport {
                t,
                halvings,
                grid: *grid,
                target_points,
                min_h_target: min_t.0,
                min_target_at: (min_t.1, min_t.2),
                min_h_global: min_g.0,
                min_global_at: (min_g.1, min_g.2),
                min_bn_sq,
                min_rate_target,
            });
        }
        worst = if !target_ok { min_t } else { min_g };
        t *= 0.5;
    }
    Err(Error::Calibration {
        halvings: MAX_HALVINGS,
        worst_h: worst.0,
        u: worst.1,
        v: worst.2,
    })
}
