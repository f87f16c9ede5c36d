//! Sampling, numerical rank and zero-set classification.

use alloc::vec::Vec;

use super::{ChartPoint, FdMode, ImmersionMap};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::math::{cos, sin, sqrt};
use crate::{par, Vector};

/// Singular values above this count toward the rank.
pub const RANK_THRESHOLD: f64 = 1e-7;

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    out
}

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Deterministic low-discrepancy chart points on `S^n = S^k × D^{n-k}`
/// (sphere directions and `y` in the ball `|y| ≤ 1 - margin`).
pub fn sample_chart_points(n: usize, k: usize, count: usize, margin: f64) -> Vec<ChartPoint> {
    let mut out = Vec::with_capacity(count);
    let ymax = 1.0 - margin;
    let mut i: u64 = 1;
    while out.len() < count {
        let idx = i;
        i += 1;
        let h = |d: usize| radical_inverse(idx, PRIMES[d]);
        let dir: Vector = if k == 1 {
            let u = core::f64::consts::TAU * h(0);
            [cos(u), sin(u)].into_iter().collect()
        } else {
            let v: Vector = (0..=k).map(|d| 2.0 * h(d) - 1.0).collect();
            let l = sqrt(v.iter().map(|x| x * x).sum());
            if !(0.1..=1.0).contains(&l) {
                continue;
            }
            v.iter().map(|x| x / l).collect()
        };
        let y: Vector = (0..(n - k)).map(|d| ymax * (2.0 * h(k + 1 + d) - 1.0)).collect();
        if y.iter().map(|x| x * x).sum::<f64>() > ymax * ymax {
            continue;
        }
        out.push(ChartPoint { dir, y });
    }
    out
}

/// Minimum numerical rank of the shape operator over `samples` points.
///
/// Uses [`FdMode::Split`]: exact base derivatives, finite differences only
/// for stacked displacements.
pub fn rank_estimate(m: &ImmersionMap, samples: usize) -> Result<usize> {
    if samples < 100 {
        return Err(Error::InvalidParameter(alloc::format!(
            "rank_estimate needs ≥ 100 samples, got {samples}"
        )));
    }
    let pts = sample_chart_points(m.n(), m.k(), samples, 1e-3);
    let ranks = par::map(&pts, |p| -> Result<usize> {
        let rep = super::shape_operator_fd(m, p, FdMode::Split)?;
        Ok(rep
            .principal_curvatures
            .iter()
            .filter(|k| k.abs() > RANK_THRESHOLD)
            .count())
    });
    let mut min = usize::MAX;
    for r in ranks {
        min = min.min(r?);
    }
    Ok(min)
}

/// A grid point with its Gauss-Kronecker value.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZeroPoint {
    pub u: f64,
    pub v: f64,
    pub h: f64,
}

/// Classification of `H_n` over a grid.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZeroSetReport {
    pub grid: GridSpec,
    pub tol: f64,
    pub zero: usize,
    pub positive: usize,
    pub negative: usize,
    /// Every point with `H_n < -tol`.
    pub negatives: Vec<ZeroPoint>,
    pub min_h: ZeroPoint,
    /// Largest `|v|` of a zero point (`-1` if there are none).
    pub zero_vmax: f64,
    /// Smallest `|v|` of a positive point (`2` if there are none).
    pub positive_vmin: f64,
    /// Angular extent of the zero set: `u` values of grid columns that
    /// contain at least one zero point.
    pub zero_columns: usize,
    /// Row-major (`u` outer) mask of zero points.
    #[cfg_attr(feature = "serde", serde(skip))]
    pub zero_mask: Vec<bool>,
    /// Row-major values of `H_n`.
    #[cfg_attr(feature = "serde", serde(skip))]
    pub values: Vec<f64>,
}

/// `H_n` at every grid node, row-major.
pub fn scan_values(m: &ImmersionMap, grid: &GridSpec) -> Result<Vec<f64>> {
    grid.validate()?;
    if m.n() != 2 {
        return Err(Error::InvalidParameter("grid scans use the (u, v) chart of S²".into()));
    }
    let nodes = grid.nodes();
    let hs = par::map(&nodes, |nd| m.gauss_kronecker(&ChartPoint::uv(nd.u, nd.v)));
    hs.into_iter().collect()
}

/// Classifies each grid point as zero (`|H| ≤ tol`), positive or negative.
pub fn zero_set_scan(m: &ImmersionMap, grid: &GridSpec, tol: f64) -> Result<ZeroSetReport> {
    if grid.nu < 64 || grid.nv < 64 {
        return Err(Error::InvalidParameter(alloc::format!(
            "zero-set scan needs ≥ 64 points per dimension, got {}×{}",
            grid.nu,
            grid.nv
        )));
    }
    let values = scan_values(m, grid)?;
    Ok(classify(grid, tol, values))
}

pub(crate) fn classify(grid: &GridSpec, tol: f64, values: Vec<f64>) -> ZeroSetReport {
    let nodes = grid.nodes();
    let mut rep = ZeroSetReport {
        grid: *grid,
        tol,
        zero: 0,
        positive: 0,
        negative: 0,
        negatives: Vec::new(),
        min_h: ZeroPoint {
            u: 0.0,
            v: 0.0,
            h: f64::INFINITY,
        },
        zero_vmax: -1.0,
        positive_vmin: 2.0,
        zero_columns: 0,
        zero_mask: Vec::with_capacity(values.len()),
        values: Vec::new(),
    };
    let mut column_has_zero = alloc::vec![false; grid.nu];
    for (nd, &h) in nodes.iter().zip(&values) {
        let pt = ZeroPoint { u: nd.u, v: nd.v, h };
        if h < rep.min_h.h || h.is_nan() {
            rep.min_h = pt;
        }
        let is_zero = h.abs() <= tol;
        rep.zero_mask.push(is_zero);
        if is_zero {
            rep.zero += 1;
            rep.zero_vmax = rep.zero_vmax.max(nd.v.abs());
            column_has_zero[nd.i] = true;
        } else if h > tol {
            rep.positive += 1;
            rep.positive_vmin = rep.positive_vmin.min(nd.v.abs());
        } else {
            rep.negative += 1;
            rep.negatives.push(pt);
        }
    }
    rep.zero_columns = column_has_zero.iter().filter(|b| **b).count();
    rep.values = values;
    rep
}
