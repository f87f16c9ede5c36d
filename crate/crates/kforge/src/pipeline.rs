//! End-to-end runs shared by the command line and the verification suite.

use std::sync::Arc;

use kforge_core::cantor::{
    compose_stack, shrinkage_violations, verify_fractal_zero_set, CantorPlan, Composition, FractalReport,
};
use kforge_core::immersion::scan_values;
use kforge_core::perturbation::{
    apply_variation, build_variation, calibrate_sign, calibrate_t, det_rate_analytic, support_grid, CalibrationReport,
    GeodesicBall, NormalVariation,
};
use kforge_core::profile::assemble_profile;
use kforge_core::{ChartPoint, GridSpec, ImmersionMap, ProfileSolution};

use crate::config::RunConfig;
use crate::error::Result;

pub fn solve(config: &RunConfig) -> Result<Arc<ProfileSolution>> {
    Ok(Arc::new(assemble_profile(&config.profile.params())?))
}

/// The single-ball variation described by the perturbation section.
pub fn single_variation(config: &RunConfig) -> Result<NormalVariation> {
    let p = config.profile.params();
    let c = &config.perturbation;
    let ball = GeodesicBall::on_circle(c.center, c.radius, config.cantor.delta0)?;
    Ok(build_variation(ball, c.l0, c.alpha0(&p), p.alpha, p.beta, c.sign)?)
}

#[derive(Debug, Clone)]
pub struct PerturbOutcome {
    pub base: ImmersionMap,
    pub map: ImmersionMap,
    pub variation: NormalVariation,
    pub calibration: CalibrationReport,
    /// Closed-form rate at the ball centre on `w = 0`.
    pub centre_rate: f64,
    /// `+1` when the closed form and the finite-difference rate agree in sign.
    pub sign_check: f64,
    /// Minimum `H_n` over the support window and over the global grid.
    pub min_h_support: f64,
    pub min_h_global: f64,
    /// Grid points outside the support where the map changed at all.
    pub changed_outside: usize,
}

pub fn perturb(config: &RunConfig, sol: Arc<ProfileSolution>) -> Result<PerturbOutcome> {
    let base = ImmersionMap::from_shared(sol);
    let var = single_variation(config)?;
    let sign_check = calibrate_sign(&base, &var)?;
    let centre = ChartPoint::uv(config.perturbation.center, 0.0);
    let centre_rate = det_rate_analytic(base.profile(), &var, &centre)?;
    let [cu, cv] = config.perturbation.calibration_grid;
    let window = support_grid(&var, cu, cv);
    let t_init = config.perturbation.t_init.unwrap_or(0.1 / var.l0);
    let calibration = calibrate_t(&base, &var, &window, t_init)?;
    let map = apply_variation(&base, &var, calibration.t)?;
    let variation = var.at_time(calibration.t);

    let min_h_support = scan_values(&map, &window)?.into_iter().fold(f64::INFINITY, f64::min);
    let global = GridSpec::whole(config.grid.nu.min(512), config.grid.nv);
    let hs = scan_values(&map, &global)?;
    let min_h_global = hs.iter().copied().fold(f64::INFINITY, f64::min);
    let mut changed_outside = 0;
    for nd in global.nodes() {
        let p = ChartPoint::uv(nd.u, nd.v);
        if !variation.in_support(&p.dir, p.y[0]) && map.evaluate(&p)? != base.evaluate(&p)? {
            changed_outside += 1;
        }
    }
    Ok(PerturbOutcome {
        base,
        map,
        variation,
        calibration,
        centre_rate,
        sign_check,
        min_h_support,
        min_h_global,
        changed_outside,
    })
}

#[derive(Debug, Clone)]
pub struct CantorOutcome {
    pub plan: CantorPlan,
    pub composition: Composition,
    /// One report per composition stage `upto = 0, 1, …, len`.
    pub stages: Vec<FractalReport>,
    pub shrinkage_violations: usize,
}

impl CantorOutcome {
    pub fn passed(&self, cells: f64) -> bool {
        self.shrinkage_violations == 0 && self.stages.iter().all(|s| s.passes(cells))
    }
}

pub fn cantor(config: &RunConfig, sol: Arc<ProfileSolution>) -> Result<CantorOutcome> {
    let plan = config.cantor.plan()?;
    let upto = config.cantor.upto.unwrap_or(plan.len()).min(plan.len());
    let composition = compose_stack(sol.clone(), &plan, upto, &config.perturbation.compose_options())?;
    let grid = GridSpec::whole(config.grid.nu, config.grid.nv);
    let tol = config.tolerances.zero;
    let mut stages = Vec::with_capacity(upto + 1);
    let mut map = ImmersionMap::from_shared(sol);
    stages.push(verify_fractal_zero_set(&map, &plan, 0, &grid, tol)?);
    for (i, v) in composition.variations.iter().enumerate() {
        map = apply_variation(&map, v, v.t)?;
        stages.push(verify_fractal_zero_set(&map, &plan, i + 1, &grid, tol)?);
    }
    let shrinkage_violations = stages.windows(2).map(|w| shrinkage_violations(&w[0], &w[1])).sum();
    Ok(CantorOutcome {
        plan,
        composition,
        stages,
        shrinkage_violations,
    })
}

/// Largest difference between the composed map and the same variations
/// applied in reverse order, over image points and `H_n` on `grid`.
pub fn commutation_error(composition: &Composition, grid: &GridSpec) -> Result<f64> {
    let mut reversed = composition.map.base();
    for v in composition.variations.iter().rev() {
        reversed = apply_variation(&reversed, v, v.t)?;
    }
    let mut worst: f64 = 0.0;
    for nd in grid.nodes() {
        let p = ChartPoint::uv(nd.u, nd.v);
        let a = composition.map.evaluate(&p)?;
        let b = reversed.evaluate(&p)?;
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max((x - y).abs());
        }
        let ha = composition.map.gauss_kronecker(&p)?;
        let hb = reversed.gauss_kronecker(&p)?;
        worst = worst.max((ha - hb).abs());
    }
    Ok(worst)
}
