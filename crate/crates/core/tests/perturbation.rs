use std::sync::{Arc, OnceLock};

use kforge_core::immersion::sample_chart_points;
use kforge_core::perturbation::{
    apply_variation, build_variation, calibrate_sign, calibrate_t, det_rate_analytic, det_rate_fd,
    half_squared_distance, support_grid, DEFAULT_DELTA0, DEFAULT_RATE_STEP,
};
use kforge_core::profile::assemble_profile;
use kforge_core::{ChartPoint, Error, GeodesicBall, ImmersionMap, NormalVariation, ProfileParams, ProfileSolution};

fn profile() -> Arc<ProfileSolution> {
    static P: OnceLock<Arc<ProfileSolution>> = OnceLock::new();
    P.get_or_init(|| Arc::new(assemble_profile(&ProfileParams::default()).unwrap()))
        .clone()
}

fn variation(center: f64, radius: f64, l0: f64, sign: f64) -> NormalVariation {
    let ball = GeodesicBall::on_circle(center, radius, DEFAULT_DELTA0).unwrap();
    build_variation(ball, l0, 0.275, 0.2, 0.5, sign).unwrap()
}

/// Support points with `d ≤ d_cap/2` and `w² < β`, from a Halton sequence.
fn support_points(var: &NormalVariation, count: usize) -> Vec<ChartPoint> {
    let c = var.ball.center_angle();
    let mut out = Vec::new();
    for p in sample_chart_points(2, 1, 40 * count, 1e-3) {
        let (u, v) = (p.dir[1].atan2(p.dir[0]), p.y[0]);
        // Map the sample into the support box.
        let q = ChartPoint::uv(c + var.ball.radius * (u / std::f64::consts::PI), v * 0.7);
        if half_squared_distance(&q.dir, &var.ball.center) <= 0.5 * var.ball.d_cap() && q.y[0].powi(2) < var.beta {
            out.push(q);
        }
        if out.len() == count {
            break;
        }
    }
    assert_eq!(out.len(), count);
    out
}

#[test]
fn analytic_rate_matches_finite_differences() {
    let m = ImmersionMap::from_shared(profile());
    let var = variation(1.1, 0.15, 1.0, 1.0);
    assert_eq!(calibrate_sign(&m, &var).unwrap(), 1.0);
    let mut worst: f64 = 0.0;
    for p in support_points(&var, 200) {
        let an = det_rate_analytic(m.profile(), &var, &p).unwrap();
        let fd = det_rate_fd(&m, &var, &p, DEFAULT_RATE_STEP).unwrap();
        let err = (an - fd).abs() / (1e-4 * an.abs() + 1e-9);
        worst = worst.max(err);
        assert!(
            err <= 1.0,
            "at u = {}, w = {}: {an} vs {fd}",
            p.dir[1].atan2(p.dir[0]),
            p.y[0]
        );
    }
    eprintln!("worst normalized rate error {worst:.3}");
}

#[test]
fn rate_vanishes_outside_support_and_is_linear_in_amplitude() {
    let m = ImmersionMap::from_shared(profile());
    let v1 = variation(-2.0, 0.15, 1.0, 1.0);
    let v2 = variation(-2.0, 0.15, 2.0, 1.0);
    for p in [
        ChartPoint::uv(-2.2, 0.1),
        ChartPoint::uv(-2.0, 0.75),
        ChartPoint::uv(1.0, 0.0),
    ] {
        assert_eq!(det_rate_analytic(m.profile(), &v1, &p).unwrap(), 0.0);
        assert!(det_rate_fd(&m, &v1, &p, DEFAULT_RATE_STEP).unwrap().abs() < 1e-10);
    }
    for p in [ChartPoint::uv(-2.03, 0.2), ChartPoint::uv(-1.95, 0.5)] {
        let a = det_rate_fd(&m, &v1, &p, DEFAULT_RATE_STEP).unwrap();
        let b = det_rate_fd(&m, &v2, &p, DEFAULT_RATE_STEP).unwrap();
        assert!((b / a - 2.0).abs() < 2e-6, "{}", b / a);
    }
    let centre = ChartPoint::uv(-2.0, 0.0);
    let r = det_rate_analytic(m.profile(), &v2, &centre).unwrap();
    assert!((r - 2.0 / 0.7f64.sqrt()).abs() < 1e-12);
    let neg = variation(-2.0, 0.15, 1.0, -1.0);
    let rn = det_rate_analytic(m.profile(), &neg, &centre).unwrap();
    assert_eq!(rn, -det_rate_analytic(m.profile(), &v1, &centre).unwrap());
}

#[test]
fn applying_checks_time_and_collisions() {
    let m = ImmersionMap::from_shared(profile());
    let a = variation(0.0, 0.15, 1.0, 1.0);
    assert!(apply_variation(&m, &a, -0.1).is_err());
    let m1 = apply_variation(&m, &a, 0.05).unwrap();
    let b = variation(0.25, 0.15, 1.0, 1.0);
    assert!(matches!(
        apply_variation(&m1, &b, 0.05),
        Err(Error::SupportCollision { index: 0 })
    ));
    let c = variation(0.31, 0.15, 1.0, 1.0);
    let m2 = apply_variation(&m1, &c, 0.05).unwrap();
    // Outside both supports the map is untouched bit for bit.
    for p in [
        ChartPoint::uv(1.5, 0.1),
        ChartPoint::uv(0.0, 0.8),
        ChartPoint::uv(-3.0, -0.3),
    ] {
        assert_eq!(m2.evaluate(&p).unwrap(), m.evaluate(&p).unwrap());
        assert_eq!(m2.gauss_kronecker(&p).unwrap(), m.gauss_kronecker(&p).unwrap());
    }
    let three = ImmersionMap::new(assemble_profile(&ProfileParams::new(3, 1, 0.2, 0.5, 0.7)).unwrap());
    let ball = GeodesicBall::on_circle(0.0, 0.1, DEFAULT_DELTA0).unwrap();
    let v = build_variation(ball, 1.0, 0.275, 0.2, 0.5, 1.0).unwrap();
    assert!(matches!(
        apply_variation(&three, &v, 0.1),
        Err(Error::UnsupportedCodimension { n: 3, k: 1 })
    ));
}

#[test]
fn calibration_makes_the_ball_positively_curved() {
    let m = ImmersionMap::from_shared(profile());
    let var = variation(0.7, 0.15, 1.0, 1.0);
    let grid = support_grid(&var, 96, 96);
    let rep = calibrate_t(&m, &var, &grid, 0.1).unwrap();
    eprintln!("{rep:?}");
    assert!(rep.t > 0.0 && rep.min_h_target > 0.0 && rep.min_h_global >= -1e-12);
    assert!(rep.min_bn_sq >= 0.5);
    assert!(rep.target_points > 1000);
}
