//! The invariant suite behind `kforge verify`.

use std::sync::Arc;
use std::time::Instant;

use kforge_core::immersion::{rank_estimate, sample_chart_points, shape_operator_fd, zero_set_scan, FdMode};
use kforge_core::perturbation::{det_rate_analytic, det_rate_fd, half_squared_distance, DEFAULT_RATE_STEP};
use kforge_core::profile::{assemble_profile, root_target};
use kforge_core::{ChartPoint, GridSpec, ImmersionMap, Method, ProfileParams, ProfileSolution};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::pipeline;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub seconds: f64,
    pub metrics: Value,
}

pub const CHECKS: [(u8, &str); 8] = [
    (1, "profile"),
    (2, "regions"),
    (3, "oracle"),
    (4, "zeroset"),
    (5, "rate"),
    (6, "ball"),
    (7, "cantor"),
    (8, "dimension"),
];

/// Check ids selected by a suite name (`all`, a check name, or its number).
pub fn select(suite: &str) -> Result<Vec<u8>> {
    if suite == "all" {
        return Ok(CHECKS.iter().map(|c| c.0).collect());
    }
    let mut out = Vec::new();
    for part in suite.split(',') {
        let part = part.trim();
        match CHECKS.iter().find(|(id, name)| *name == part || id.to_string() == part) {
            Some((id, _)) => out.push(*id),
            None => {
                let names: Vec<_> = CHECKS.iter().map(|c| c.1).collect();
                return Err(Error::Config(format!(
                    "unknown suite '{part}'; expected all or one of {names:?}"
                )));
            }
        }
    }
    Ok(out)
}

struct Context<'a> {
    config: &'a RunConfig,
    sol: Option<Arc<ProfileSolution>>,
}

impl Context<'_> {
    fn solution(&mut self) -> Result<Arc<ProfileSolution>> {
        if self.sol.is_none() {
            self.sol = Some(pipeline::solve(self.config)?);
        }
        Ok(self.sol.clone().unwrap())
    }
}

pub fn run(config: &RunConfig, ids: &[u8]) -> Result<Vec<CheckResult>> {
    let mut cx = Context { config, sol: None };
    let mut out = Vec::with_capacity(ids.len());
    for &id in ids {
        let start = Instant::now();
        let (passed, metrics) = match id {
            1 => profile_check(config.profile.params(), 5.0)?,
            2 => regions_check(&cx.solution()?)?,
            3 => oracle_check(&cx.solution()?, config)?,
            4 => zeroset_check(&cx.solution()?, config)?,
            5 => rate_check(&cx.solution()?, config)?,
            6 => ball_check(&cx.solution()?, config)?,
            7 => cantor_check(&cx.solution()?, config)?,
            8 => dimension_check(config)?,
            _ => return Err(Error::Config(format!("no check {id}"))),
        };
        let name = CHECKS.iter().find(|c| c.0 == id).map_or("?", |c| c.1).to_string();
        out.push(CheckResult {
            id,
            name,
            passed,
            seconds: start.elapsed().as_secs_f64(),
            metrics,
        });
    }
    Ok(out)
}

fn profile_check(p: ProfileParams, budget_s: f64) -> Result<(bool, Value)> {
    let start = Instant::now();
    let sol = assemble_profile(&p)?;
    let seconds = start.elapsed().as_secs_f64();
    let g = 0.5 * sol.delta.integrate(p.alpha, p.beta, 1e-13)? - root_target(&p);
    let below = p.beta - 1e-9;
    let mu_gap = (sol.mu.eval(below)? - 1.0).abs();
    let mu_slope = sol.mu.eval_deriv(below, 1)?.abs();
    let (lo, hi) = (p.alpha + 1e-3, p.beta - p.blend_width);
    let mut ode: f64 = 0.0;
    for i in 0..=2000 {
        let r = lo + (hi - lo) * i as f64 / 2000.0;
        let res = 2.0 * r * sol.rho.eval_deriv(r, 1)? + sol.rho.eval(r)? - sol.psi.eval(r)?;
        ode = ode.max(res.abs());
    }
    let passed = g.abs() <= 1e-9 && mu_gap <= 1e-8 && mu_slope <= 1e-5 && ode <= 1e-7 && seconds < budget_s;
    Ok((
        passed,
        json!({"t0": sol.t0, "g": g, "target": root_target(&p), "mu_gap": mu_gap, "mu_slope": mu_slope,
               "ode_residual": ode, "build_seconds": seconds}),
    ))
}

fn regions_check(sol: &Arc<ProfileSolution>) -> Result<(bool, Value)> {
    let p = sol.params;
    let m = ImmersionMap::from_shared(sol.clone());
    let (mut identity, mut sphere_k, mut radius, mut cyl_k) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut outer, mut inner) = (0, 0);
    let kc = 1.0 / p.gamma.sqrt();
    for pt in sample_chart_points(p.n, p.k, 4000, 1e-3) {
        let r = pt.r();
        if r >= p.beta_tilde {
            outer += 1;
            let img = m.evaluate(&pt)?;
            let s = pt.to_sphere();
            for (a, b) in img.iter().zip(s.x.iter().chain(s.y.iter())) {
                identity = identity.max((a - b).abs());
            }
            for k in m.shape(&pt, Method::Differentiated)?.principal_curvatures {
                sphere_k = sphere_k.max((k - 1.0).abs());
            }
        } else if r <= p.alpha {
            inner += 1;
            let img = m.evaluate(&pt)?;
            let z = img[..=p.k].iter().map(|x| x * x).sum::<f64>().sqrt();
            radius = radius.max((z - p.gamma.sqrt()).abs());
            let ks = m.shape(&pt, Method::Differentiated)?.principal_curvatures;
            let zeros = p.n - p.k;
            for (i, k) in ks.iter().enumerate() {
                let expect = if i < zeros { 0.0 } else { kc };
                cyl_k = cyl_k.max((k - expect).abs());
            }
        }
    }
    let passed = identity <= 1e-12 && sphere_k <= 1e-10 && radius <= 1e-12 && cyl_k <= 1e-10 && outer > 0 && inner > 0;
    Ok((
        passed,
        json!({"identity_error": identity, "sphere_curvature_error": sphere_k, "cylinder_radius_error": radius,
               "cylinder_spectrum_error": cyl_k, "outer_points": outer, "inner_points": inner}),
    ))
}

fn oracle_check(sol: &Arc<ProfileSolution>, config: &RunConfig) -> Result<(bool, Value)> {
    let p = sol.params;
    let tol = &config.tolerances;
    let m = ImmersionMap::from_shared(sol.clone());
    let pts = sample_chart_points(p.n, p.k, 1000, 1e-3);
    let (mut worst, mut worst_det, mut min_align) = (0.0f64, 0.0f64, f64::INFINITY);
    for pt in &pts {
        let an = m.shape(pt, Method::Analytic)?;
        let fd = shape_operator_fd(&m, pt, FdMode::Full)?;
        for (a, f) in an.principal_curvatures.iter().zip(&fd.principal_curvatures) {
            worst = worst.max((a - f).abs() / (tol.fd_relative * a.abs() + tol.fd_absolute));
        }
        let (ha, hf) = (an.gauss_kronecker, fd.gauss_kronecker);
        worst_det = worst_det.max((ha - hf).abs() / (tol.fd_relative * ha.abs() + tol.fd_absolute));
        min_align = min_align.min(an.normal.iter().zip(&fd.normal).map(|(a, b)| a * b).sum());
    }
    Ok((
        worst <= 1.0 && worst_det <= 1.0 && min_align > 0.99,
        json!({"points": pts.len(), "worst_curvature_ratio": worst, "worst_det_ratio": worst_det,
               "min_normal_alignment": min_align}),
    ))
}

fn zeroset_check(sol: &Arc<ProfileSolution>, config: &RunConfig) -> Result<(bool, Value)> {
    let alpha = sol.params.alpha;
    let m = ImmersionMap::from_shared(sol.clone());
    let grid = GridSpec::whole(512, 256);
    let tol = config.tolerances.zero;
    let rep = zero_set_scan(&m, &grid, tol)?;
    let (mut flat_bad, mut curved_bad) = (0usize, 0usize);
    for (nd, h) in grid.nodes().iter().zip(&rep.values) {
        let r = nd.v * nd.v;
        if r <= alpha && h.abs() > tol {
            flat_bad += 1;
        }
        if r >= alpha + 0.01 && !(*h > 0.0) {
            curved_bad += 1;
        }
    }
    let negative_zero = rep.negatives.len();
    Ok((
        flat_bad == 0 && curved_bad == 0 && negative_zero == 0,
        json!({"flat_violations": flat_bad, "curved_violations": curved_bad, "negative_points": negative_zero,
               "zero_points": rep.zero, "min_h": rep.min_h.h}),
    ))
}

fn rate_check(sol: &Arc<ProfileSolution>, config: &RunConfig) -> Result<(bool, Value)> {
    let m = ImmersionMap::from_shared(sol.clone());
    let var = pipeline::single_variation(config)?;
    let sign = kforge_core::perturbation::calibrate_sign(&m, &var)?;
    let centre = ChartPoint::uv(config.perturbation.center, 0.0);
    let expect = var.sign * var.l0 / sol.params.gamma.sqrt();
    let centre_rate = sign * det_rate_analytic(sol, &var, &centre)?;
    let centre_ok = (centre_rate - expect).abs() <= 1e-4 * expect.abs();

    let rel = config.tolerances.rate_relative;
    let c = config.perturbation.center;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for pt in sample_chart_points(2, 1, 20_000, 1e-3) {
        let u = pt.dir[1].atan2(pt.dir[0]);
        let q = ChartPoint::uv(c + var.ball.radius * u / std::f64::consts::PI, 0.7 * pt.y[0]);
        if half_squared_distance(&q.dir, &var.ball.center) > 0.5 * var.ball.d_cap() || q.y[0].powi(2) >= var.beta {
            continue;
        }
        let an = sign * det_rate_analytic(sol, &var, &q)?;
        let fd = det_rate_fd(&m, &var, &q, DEFAULT_RATE_STEP)?;
        worst = worst.max((an - fd).abs() / (rel * an.abs() + 1e-9));
        count += 1;
        if count == 200 {
            break;
        }
    }
    let mut outside: f64 = 0.0;
    for i in 0..50 {
        let q = ChartPoint::uv(c + var.ball.radius + 0.05 + 0.1 * i as f64, -0.9 + 0.036 * i as f64);
        outside = outside.max(det_rate_analytic(sol, &var, &q)?.abs());
        if i % 10 == 0 {
            outside = outside.max(det_rate_fd(&m, &var, &q, DEFAULT_RATE_STEP)?.abs());
        }
    }
    Ok((
        sign == 1.0 && centre_ok && worst <= 1.0 && count == 200 && outside <= 1e-10,
        json!({"sign": sign, "centre_rate": centre_rate, "expected_centre_rate": expect, "support_points": count,
               "worst_rate_ratio": worst, "outside_max": outside}),
    ))
}

fn ball_check(sol: &Arc<ProfileSolution>, config: &RunConfig) -> Result<(bool, Value)> {
    let out = pipeline::perturb(config, sol.clone())?;
    let cal = &out.calibration;
    Ok((
        cal.min_h_target > 0.0 && out.min_h_global >= -1e-12 && out.min_h_support >= -1e-12 && out.changed_outside == 0,
        json!({"t": cal.t, "halvings": cal.halvings, "min_h_target": cal.min_h_target,
               "min_h_support": out.min_h_support, "min_h_global": out.min_h_global,
               "changed_outside": out.changed_outside}),
    ))
}

fn cantor_check(sol: &Arc<ProfileSolution>, config: &RunConfig) -> Result<(bool, Value)> {
    let out = pipeline::cantor(config, sol.clone())?;
    let commute = pipeline::commutation_error(&out.composition, &GridSpec::whole(256, 64))?;
    let rank = rank_estimate(&ImmersionMap::from_shared(sol.clone()), 1000)?;
    let negatives: usize = out.stages.iter().map(|s| s.negative_points).sum();
    let last = out.stages.last().expect("stage 0 always runs");
    let cells = config.tolerances.hausdorff_cells;
    Ok((
        out.passed(cells) && commute <= 1e-12 && rank == sol.params.k && negatives == 0,
        json!({"balls": out.plan.len(), "hausdorff_cells": last.hausdorff_cells,
               "shrinkage_violations": out.shrinkage_violations, "negative_points": negatives,
               "commutation_error": commute, "rank": rank,
               "t": out.composition.reports.iter().map(|r| r.t).collect::<Vec<_>>()}),
    ))
}

fn dimension_check(config: &RunConfig) -> Result<(bool, Value)> {
    let mut pc = config.profile;
    pc.n = 3;
    pc.k = 2;
    let p = pc.params();
    let (profile_ok, profile) = profile_check(p, 5.0)?;
    let sol = Arc::new(assemble_profile(&p)?);
    let (regions_ok, regions) = regions_check(&sol)?;
    let m = ImmersionMap::from_shared(sol.clone());
    let mut spectrum: f64 = 0.0;
    for pt in sample_chart_points(3, 2, 500, 1e-3) {
        let (ks, _, kr) = sol.curvature_factors(pt.r())?;
        let mut expect = [ks, ks, kr];
        expect.sort_by(f64::total_cmp);
        let an = m.shape(&pt, Method::Analytic)?;
        let jet = m.shape(&pt, Method::Differentiated)?;
        for ((e, a), j) in expect
            .iter()
            .zip(&an.principal_curvatures)
            .zip(&jet.principal_curvatures)
        {
            spectrum = spectrum.max((e - a).abs()).max((e - j).abs() / (1.0 + e.abs()));
        }
    }
    Ok((
        profile_ok && regions_ok && spectrum <= 1e-8,
        json!({"profile": profile, "regions": regions, "spectrum_error": spectrum}),
    ))
}
