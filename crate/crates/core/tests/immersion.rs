use std::sync::{Arc, OnceLock};

use kforge_core::immersion::{evaluate, gauss_map, rank_estimate, sample_chart_points, zero_set_scan, FdMode};
use kforge_core::profile::assemble_profile;
use kforge_core::{ChartPoint, GridSpec, ImmersionMap, Method, ProfileParams, ProfileSolution};

fn profile(n: usize, k: usize) -> Arc<ProfileSolution> {
    static CACHE: OnceLock<[Arc<ProfileSolution>; 3]> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        let build = |n, k| Arc::new(assemble_profile(&ProfileParams::new(n, k, 0.2, 0.5, 0.7)).unwrap());
        [build(2, 1), build(3, 1), build(3, 2)]
    });
    match (n, k) {
        (2, 1) => all[0].clone(),
        (3, 1) => all[1].clone(),
        (3, 2) => all[2].clone(),
        _ => unreachable!(),
    }
}

fn close(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + floor
}

#[test]
fn image_is_cylinder_then_identity() {
    let sol = profile(2, 1);
    let m = ImmersionMap::from_shared(sol.clone());
    for p in sample_chart_points(2, 1, 400, 1e-3) {
        let r = p.r();
        let x = m.evaluate(&p).unwrap();
        let via_sphere = evaluate(&sol, &p.to_sphere()).unwrap();
        for (a, b) in x.iter().zip(&via_sphere) {
            assert!((a - b).abs() < 1e-14);
        }
        let z = (x[0] * x[0] + x[1] * x[1]).sqrt();
        if r <= 0.2 {
            assert!((z - 0.7f64.sqrt()).abs() < 1e-14, "r = {r}: |z| = {z}");
        }
        if r >= 0.5 {
            let s = p.to_sphere();
            for (a, b) in x.iter().zip(s.x.iter().chain(s.y.iter())) {
                assert!((a - b).abs() < 1e-13, "r = {r}");
            }
        }
        let nrm = gauss_map(&sol, &p.to_sphere()).unwrap();
        let len: f64 = nrm.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((len - 1.0).abs() < 1e-14);
    }
}

#[test]
fn finite_differences_match_closed_form() {
    for (n, k) in [(2, 1), (3, 1), (3, 2)] {
        let m = ImmersionMap::from_shared(profile(n, k));
        for p in sample_chart_points(n, k, 64, 1e-2) {
            let an = m.shape(&p, Method::Analytic).unwrap();
            let fd = m.shape(&p, Method::FiniteDifference).unwrap();
            let jet = m.shape(&p, Method::Differentiated).unwrap();
            for ((a, f), j) in an
                .principal_curvatures
                .iter()
                .zip(&fd.principal_curvatures)
                .zip(&jet.principal_curvatures)
            {
                assert!(close(*a, *f, 1e-5, 1e-7), "({n},{k}) r = {}: {a} vs fd {f}", p.r());
                assert!(close(*a, *j, 1e-10, 1e-12), "({n},{k}) r = {}: {a} vs jet {j}", p.r());
            }
            assert!(
                close(an.gauss_kronecker, fd.gauss_kronecker, 1e-5, 1e-7),
                "({n},{k}) r = {}: {} vs {} ks {:?} {:?}",
                p.r(),
                an.gauss_kronecker,
                fd.gauss_kronecker,
                an.principal_curvatures,
                fd.principal_curvatures
            );
            for (a, b) in an.normal.iter().zip(&fd.normal) {
                assert!((a - b).abs() < 1e-7);
            }
        }
    }
}

#[test]
fn numerical_rank_equals_sphere_dimension() {
    for (n, k) in [(2, 1), (3, 1), (3, 2)] {
        let m = ImmersionMap::from_shared(profile(n, k));
        assert_eq!(rank_estimate(&m, 256).unwrap(), k, "({n},{k})");
    }
    let m = ImmersionMap::from_shared(profile(2, 1));
    assert!(rank_estimate(&m, 10).is_err());
}

#[test]
fn base_zero_set_is_the_flat_band() {
    let m = ImmersionMap::from_shared(profile(2, 1));
    let grid = GridSpec::whole(128, 256);
    let rep = zero_set_scan(&m, &grid, 1e-10).unwrap();
    assert_eq!(rep.negative, 0);
    let (_, dv) = grid.spacing();
    let edge = 0.2f64.sqrt();
    assert!(rep.zero_vmax <= edge + 1e-12);
    assert!(rep.zero_vmax > edge - dv);
    // H is flat to all orders at the band edge, so a thin shell above it
    // also reads as zero at this tolerance.
    assert!(rep.positive_vmin > edge && rep.positive_vmin < edge + 0.05);
    assert_eq!(rep.zero_columns, 128);
    assert!(zero_set_scan(&m, &GridSpec::whole(32, 256), 1e-10).is_err());
}

#[test]
fn split_mode_is_exact_without_variations() {
    let m = ImmersionMap::from_shared(profile(2, 1));
    let p = ChartPoint::uv(0.4, 0.6);
    let a = m.shape(&p, Method::Differentiated).unwrap();
    let s = kforge_core::immersion::shape_operator_fd(&m, &p, FdMode::Split).unwrap();
    assert_eq!(a.principal_curvatures, s.principal_curvatures);
}
