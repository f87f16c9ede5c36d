//! Sampling grids on the `(u, v)` chart of `S²`.
//!
//! `(u, v) ↦ (√(1-v²)·cos u, √(1-v²)·sin u, v)`. The `u` direction is the
//! circle `S¹` carrying the Cantor construction, `v = w` is the axial
//! coordinate of the cylinder.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{cos, sin, sqrt};
use crate::{ChartPoint, Vector};

/// Which part of the chart a grid covers.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Region {
    /// `u ∈ [-π, π)` periodic, `v ∈ [-1 + margin, 1 - margin]`.
    Whole,
    /// `u ∈ [-π, π)` periodic, `|v| ≤ vmax`.
    Band { vmax: f64 },
    /// Closed box `[u0, u1] × [v0, v1]`.
    Window { u0: f64, u1: f64, v0: f64, v1: f64 },
}

impl Region {
    /// Box around the shadow of a geodesic ball centred at angle `center`.
    pub fn ball_shadow(center: f64, radius: f64, vmax: f64) -> Self {
        Region::Window {
            u0: center - radius,
            u1: center + radius,
            v0: -vmax,
            v1: vmax,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridSpec {
    pub nu: usize,
    pub nv: usize,
    /// Pole exclusion: `|v| ≤ 1 - margin`.
    pub margin: f64,
    pub region: Region,
}

/// One grid node with its chart coordinates and row-major index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridNode {
    pub i: usize,
    pub j: usize,
    pub u: f64,
    pub v: f64,
}

impl GridSpec {
    pub fn new(nu: usize, nv: usize, region: Region) -> Self {
        GridSpec {
            nu,
            nv,
            margin: 1e-3,
            region,
        }
    }

    pub fn whole(nu: usize, nv: usize) -> Self {
        Self::new(nu, nv, Region::Whole)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu < 8 || self.nv < 8 {
            return Err(Error::InvalidParameter(alloc::format!(
                "grid resolution {}×{} below 8",
                self.nu,
                self.nv
            )));
        }
        if !(self.margin > 0.0 && self.margin < 0.1) {
            return Err(Error::InvalidParameter(alloc::format!(
                "grid margin {} outside (0, 0.1)",
                self.margin
            )));
        }
        if let Region::Window { u0, u1, v0, v1 } = self.region {
            if !(u0 < u1 && v0 < v1) {
                return Err(Error::InvalidParameter("empty grid window".into()));
            }
        }
        Ok(())
    }

    /// Whether `u` wraps around the circle (no duplicated seam column).
    pub fn periodic(&self) -> bool {
        !matches!(self.region, Region::Window { .. })
    }

    fn v_bounds(&self) -> (f64, f64) {
        let cap = 1.0 - self.margin;
        match self.region {
            Region::Whole => (-cap, cap),
            Region::Band { vmax } => (-vmax.min(cap), vmax.min(cap)),
            Region::Window { v0, v1, .. } => (v0.max(-cap), v1.min(cap)),
        }
    }

    pub fn u_at(&self, i: usize) -> f64 {
        match self.region {
            Region::Window { u0, u1, .. } => u0 + (u1 - u0) * i as f64 / (self.nu - 1) as f64,
            _ => -core::f64::consts::PI + 2.0 * core::f64::consts::PI * i as f64 / self.nu as f64,
        }
    }

    pub fn v_at(&self, j: usize) -> f64 {
        let (v0, v1) = self.v_bounds();
        v0 + (v1 - v0) * j as f64 / (self.nv - 1) as f64
    }

    /// Chart spacing `(du, dv)`.
    pub fn spacing(&self) -> (f64, f64) {
        let du = (self.u_at(1) - self.u_at(0)).abs();
        let dv = self.v_at(1) - self.v_at(0);
        (du, dv)
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nodes in row-major order (`u` outer, `v` inner).
    pub fn nodes(&self) -> Vec<GridNode> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.nu {
            let u = self.u_at(i);
            for j in 0..self.nv {
                out.push(GridNode {
                    i,
                    j,
                    u,
                    v: self.v_at(j),
                });
            }
        }
        out
    }
}

/// The chart point `(u, v)` on `S²`.
pub fn chart_uv(u: f64, v: f64) -> ChartPoint {
    let dir: Vector = [cos(u), sin(u)].into_iter().collect();
    let y: Vector = [v].into_iter().collect();
    ChartPoint { dir, y }
}

/// Point of `S²` in `R³` for `(u, v)`.
pub fn sphere_uv(u: f64, v: f64) -> [f64; 3] {
    let s = sqrt(1.0 - v * v);
    [s * cos(u), s * sin(u), v]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_grid_has_no_seam_duplicate() {
        let g = GridSpec::whole(64, 32);
        g.validate().unwrap();
        assert_eq!(g.nodes().len(), 2048);
        let last = g.u_at(63);
        assert!(last < core::f64::consts::PI);
        assert!((g.v_at(31) - (1.0 - 1e-3)).abs() < 1e-15);
    }

    #[test]
    fn window_includes_endpoints() {
        let g = GridSpec::new(9, 9, Region::ball_shadow(1.0, 0.1, 0.4));
        assert_eq!(g.u_at(0), 0.9);
        assert!((g.u_at(8) - 1.1).abs() < 1e-15);
        assert_eq!(g.v_at(8), 0.4);
        assert!(GridSpec::new(4, 9, Region::Whole).validate().is_err());
    }
}
