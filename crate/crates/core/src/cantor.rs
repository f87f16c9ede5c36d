//! Cantor sets on `S¹` and the composed inflation over their complement.
//!
//! A plan removes open arcs from the circle: ball `0` is the complement of a
//! base arc, then each depth removes the middle `ratio` of every remaining
//! interval. Each removed arc is inflated by its own calibrated normal
//! variation, so after composing the first `m` balls the flat part of the
//! surface is `F_m × {w² ≤ α}` with `F_m` the circle minus those balls.

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::immersion::{scan_values, ImmersionMap};
use crate::math::{sqrt, wrap_angle};
use crate::perturbation::{
    apply_variation, build_variation, calibrate_t, support_grid, CalibrationReport, GeodesicBall, NormalVariation,
    DEFAULT_DELTA0,
};
use crate::profile::ProfileSolution;

/// Radii are scaled by this factor so that neighbouring open balls are
/// strictly separated in floating point.
pub const SHRINK: f64 = 0.999;
/// Smallest accepted gap between two planned balls, in radians.
pub const MIN_GAP: f64 = 1e-6;
/// Middle fraction removed at each depth when none is given.
pub const DEFAULT_RATIO: f64 = 0.05;
/// Construction depth when none is given.
pub const DEFAULT_DEPTH: usize = 3;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CantorPlan {
    /// Removed balls; index 0 is the complement of the base arc.
    pub balls: Vec<GeodesicBall>,
    /// Construction depth of each ball (0 for the complement).
    pub depth_of: Vec<usize>,
    pub depth: usize,
    pub ratio: f64,
    /// Length of the arc `[-L/2, L/2]` the construction runs in.
    pub base_arc: f64,
    pub delta0: f64,
}

impl CantorPlan {
    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    /// Index of the first-`upto` ball containing the angle `u`, if any.
    pub fn removed_by(&self, u: f64, upto: usize) -> Option<usize> {
        self.balls[..upto.min(self.len())]
            .iter()
            .position(|b| arc_distance(u, b.center_angle()) < b.radius)
    }

    /// Angular distance from `u` to `F_upto` (zero on `F_upto`).
    pub fn distance_to_remaining(&self, u: f64, upto: usize) -> f64 {
        match self.removed_by(u, upto) {
            Some(i) => {
                let b = &self.balls[i];
                b.radius - arc_distance(u, b.center_angle())
            }
            None => 0.0,
        }
    }

    /// Smallest geodesic gap between any two balls.
    pub fn min_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                gap = gap.min(self.balls[i].gap(&self.balls[j]));
            }
        }
        gap
    }
}

fn arc_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

/// Plan on the base arc of length `2π - 2δ₀`, so that the complement ball
/// has radius `δ₀` before shrinking.
pub fn plan_cantor(n: usize, depth: usize, ratio: f64, delta0: f64) -> Result<CantorPlan> {
    plan_cantor_on_arc(n, depth, ratio, delta0, TAU - 2.0 * delta0)
}

/// Middle-`ratio` construction inside the arc `[-L/2, L/2]`, `L = base_arc`.
pub fn plan_cantor_on_arc(n: usize, depth: usize, ratio: f64, delta0: f64, base_arc: f64) -> Result<CantorPlan> {
    if n != 2 {
        return Err(Error::InvalidParameter(alloc::format!(
            "Cantor plans live on S¹ (n = 2), got n = {n}"
        )));
    }
    if depth == 0 {
        return Err(Error::InvalidParameter("Cantor depth must be ≥ 1".into()));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidParameter(alloc::format!("ratio {ratio} outside (0, 1)")));
    }
    if !(base_arc > 0.0 && base_arc < TAU) {
        return Err(Error::InvalidParameter(alloc::format!(
            "base arc {base_arc} outside (0, 2π)"
        )));
    }
    if !(delta0 > 0.0 && delta0 <= PI) {
        return Err(Error::InvalidParameter(alloc::format!("δ₀ = {delta0} outside (0, π]")));
    }

    let mut balls = Vec::new();
    let mut depth_of = Vec::new();
    let mut push = |center: f64, length: f64, level: usize, balls: &mut Vec<GeodesicBall>| -> Result<()> {
        let index = balls.len();
        let radius = SHRINK * 0.5 * length;
        if radius > delta0 {
            return Err(Error::Plan {
                index,
                message: alloc::format!(
                    "radius {radius:.6} exceeds δ₀ = {delta0}; use a smaller ratio or base arc, or start deeper"
                ),
            });
        }
        balls.push(GeodesicBall::on_circle(center, radius, delta0)?);
        depth_of.push(level);
        Ok(())
    };

    push(PI, TAU - base_arc, 0, &mut balls)?;
    let mut intervals = alloc::vec![(-0.5 * base_arc, 0.5 * base_arc)];
    for level in 1..=depth {
        let mut next = Vec::with_capacity(2 * intervals.len());
        for &(a, b) in &intervals {
            let len = b - a;
            let mid = 0.5 * (a + b);
            let cut = ratio * len;
            push(mid, cut, level, &mut balls)?;
            next.push((a, mid - 0.5 * cut));
            next.push((mid + 0.5 * cut, b));
        }
        intervals = next;
    }

    let plan = CantorPlan {
        balls,
        depth_of,
        depth,
        ratio,
        base_arc,
        delta0,
    };
    let gap = plan.min_gap();
    if !(gap >= MIN_GAP) {
        return Err(Error::Plan {
            index: 0,
            message: alloc::format!("balls only {gap:e} rad apart"),
        });
    }
    Ok(plan)
}

/// How each ball's variation is built and calibrated.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComposeOptions {
    pub l0: f64,
    /// `α₀ = α + fraction·(β - α)`.
    pub alpha0_fraction: f64,
    pub sign: f64,
    /// First trial time; `0.1/l₀` when `None`.
    pub t_init: Option<f64>,
    /// Resolution of each ball's calibration window.
    pub calibration_grid: (usize, usize),
}

impl Default for ComposeOptions {
    fn default() -> Self {
        ComposeOptions {
            l0: 1.0,
            alpha0_fraction: 0.25,
            sign: 1.0,
            t_init: None,
            calibration_grid: (96, 96),
        }
    }
}

/// A composed map and the calibration of every applied ball.
#[derive(Debug, Clone)]
pub struct Composition {
    pub map: ImmersionMap,
    /// Calibrated variations in application order (with their `t`).
    pub variations: Vec<NormalVariation>,
    pub reports: Vec<CalibrationReport>,
}

/// Builds, calibrates and applies the variations of the first `upto` balls.
pub fn compose_stack(
    sol: Arc<ProfileSolution>,
    plan: &CantorPlan,
    upto: usize,
    opts: &ComposeOptions,
) -> Result<Composition> {
    let p = sol.params;
    if p.k + 1 != p.n {
        return Err(Error::UnsupportedCodimension { n: p.n, k: p.k });
    }
    if upto > plan.len() {
        return Err(Error::InvalidParameter(alloc::format!(
            "upto = {upto} but the plan has {} balls",
            plan.len()
        )));
    }
    let alpha0 = p.alpha + opts.alpha0_fraction * (p.beta - p.alpha);
    let t_init = opts.t_init.unwrap_or(0.1 / opts.l0);
    let mut map = ImmersionMap::from_shared(sol);
    let mut variations = Vec::with_capacity(upto);
    let mut reports = Vec::with_capacity(upto);
    for (index, ball) in plan.balls[..upto].iter().enumerate() {
        let wrap = |e: Error| Error::Ball {
            index,
            source: Box::new(e),
        };
        let var = build_variation(ball.clone(), opts.l0, alpha0, p.alpha, p.beta, opts.sign).map_err(wrap)?;
        let grid = support_grid(&var, opts.calibration_grid.0, opts.calibration_grid.1);
        let rep = calibrate_t(&map, &var, &grid, t_init).map_err(wrap)?;
        map = apply_variation(&map, &var, rep.t).map_err(wrap)?;
        variations.push(var.at_time(rep.t));
        reports.push(rep);
    }
    Ok(Composition {
        map,
        variations,
        reports,
    })
}

/// Comparison of the measured zero set of `H_n` with `F_m × {w² ≤ α}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FractalReport {
    pub upto: usize,
    pub grid: GridSpec,
    pub tol: f64,
    pub delta0: f64,
    pub zero_points: usize,
    /// Grid points of `F_m × {w² ≤ α}`.
    pub expected_zero_points: usize,
    /// Points of `F_m × {w² ≤ α}` with `|H_n| > tol`.
    pub flat_violations: usize,
    /// Interior ball points checked for `H_n > tol`, and how many failed.
    pub interior_points: usize,
    pub interior_violations: usize,
    pub negative_points: usize,
    pub min_h: f64,
    /// Largest distance, in grid cells, from a measured zero point to `F_m × {w² ≤ α}`.
    pub hausdorff_cells: f64,
    #[cfg_attr(feature = "serde", serde(skip))]
    pub zero_mask: Vec<bool>,
}

impl FractalReport {
    /// All checks hold and the zero set is within `cells` grid cells.
    pub fn passes(&self, cells: f64) -> bool {
        self.flat_violations == 0
            && self.interior_violations == 0
            && self.negative_points == 0
            && self.hausdorff_cells <= cells
    }
}

/// Scans `H_n` on `grid` and compares its zero set with `F_upto × {w² ≤ α}`.
pub fn verify_fractal_zero_set(
    m: &ImmersionMap,
    plan: &CantorPlan,
    upto: usize,
    grid: &GridSpec,
    tol: f64,
) -> Result<FractalReport> {
    if grid.nu < 512 {
        return Err(Error::InvalidParameter(alloc::format!(
            "fractal scans need ≥ 512 columns, got {}",
            grid.nu
        )));
    }
    let values = scan_values(m, grid)?;
    let alpha = m.profile().params.alpha;
    let edge = sqrt(alpha);
    let (du, dv) = grid.spacing();
    let upto = upto.min(plan.len());

    let mut rep = FractalReport {
        upto,
        grid: *grid,
        tol,
        delta0: plan.delta0,
        zero_points: 0,
        expected_zero_points: 0,
        flat_violations: 0,
        interior_points: 0,
        interior_violations: 0,
        negative_points: 0,
        min_h: f64::INFINITY,
        hausdorff_cells: 0.0,
        zero_mask: Vec::with_capacity(values.len()),
    };
    for (nd, &h) in grid.nodes().iter().zip(&values) {
        rep.min_h = rep.min_h.min(h);
        let removed = plan.removed_by(nd.u, upto);
        let flat = nd.v * nd.v <= alpha;
        if removed.is_none() && flat {
            rep.expected_zero_points += 1;
            if h.abs() > tol {
                rep.flat_violations += 1;
            }
        }
        if removed.is_some() && plan.distance_to_remaining(nd.u, upto) > du {
            rep.interior_points += 1;
            if !(h > tol) {
                rep.interior_violations += 1;
            }
        }
        if h < -tol {
            rep.negative_points += 1;
        }
        let zero = h.abs() <= tol;
        rep.zero_mask.push(zero);
        if zero {
            rep.zero_points += 1;
            let cu = plan.distance_to_remaining(nd.u, upto) / du;
            let cv = (nd.v.abs() - edge).max(0.0) / dv;
            rep.hausdorff_cells = rep.hausdorff_cells.max(sqrt(cu * cu + cv * cv));
        }
    }
    Ok(rep)
}

/// Grid points that are zero in `later` but not in `earlier`.
pub fn shrinkage_violations(earlier: &FractalReport, later: &FractalReport) -> usize {
    earlier
        .zero_mask
        .iter()
        .zip(&later.zero_mask)
        .filter(|(e, l)| **l && !**e)
        .count()
}

/// The default plan for a given `δ₀`.
pub fn default_plan(delta0: Option<f64>) -> Result<CantorPlan> {
    plan_cantor(2, DEFAULT_DEPTH, DEFAULT_RATIO, delta0.unwrap_or(DEFAULT_DELTA0))
}
