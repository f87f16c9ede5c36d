//! The immersion `φ(x, y) = (θ(|y|²)·x, y)` and its curvature.
//!
//! Points of `S^n ⊂ R^{k+1} × R^{n-k}` are addressed through [`ChartPoint`]s
//! `(dir, y)` with `dir ∈ S^k` and `x = √(1 - |y|²)·dir`. Local coordinates
//! around a chart point are geodesic offsets `s ∈ R^k` on `S^k` along an
//! orthonormal tangent frame, plus offsets of `y`. For `n = 2` this is the
//! `(u, v)` chart with `dir = (cos u, sin u)`, `y = v`.
//!
//! Three independent routes give the shape operator at a point:
//!
//! - [`Method::Analytic`]: the closed-form spectrum `{1/c₂ ×k, c₁/c₂ ×(n-k-1),
//!   ψ_eff}`. Valid for the base map and wherever no variation is active.
//! - [`Method::FiniteDifference`]: fundamental forms from Richardson-extrapolated
//!   central differences of the evaluator.
//! - [`Method::Differentiated`]: the same fundamental forms from exact
//!   second-order forward differentiation of the evaluator, including any
//!   stacked variations. This is what grid scans use inside supports, where
//!   the exponential tails of the variation defeat finite differences.

pub(crate) mod hyper;
mod scan;
mod shape;

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, sort_ascending};
use crate::math::{cos, sinc, sqrt};
use crate::perturbation::NormalVariation;
use crate::profile::ProfileSolution;
use crate::Vector;

pub use scan::{
    rank_estimate, sample_chart_points, scan_values, zero_set_scan, ZeroPoint, ZeroSetReport, RANK_THRESHOLD,
};
pub use shape::{shape_operator_fd, shape_operator_fd_steps, FdMode, FD_LEVELS, FD_STEP, SPLIT_STEP};

/// A point `(x, y)` of `S^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    pub x: Vector,
    pub y: Vector,
}

impl SpherePoint {
    pub fn new(x: Vector, y: Vector) -> Result<Self> {
        let s = dot(&x, &x) + dot(&y, &y);
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(alloc::format!("|x|² + |y|² = {s} is not 1")));
        }
        Ok(SpherePoint { x, y })
    }

    /// `r = |y|²`.
    pub fn r(&self) -> f64 {
        dot(&self.y, &self.y)
    }
}

/// A point of `S^n` as a unit direction `dir ∈ S^k` and `y ∈ R^{n-k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint {
    pub dir: Vector,
    pub y: Vector,
}

impl ChartPoint {
    /// The `(u, v)` point of `S²`.
    pub fn uv(u: f64, v: f64) -> Self {
        crate::grid::chart_uv(u, v)
    }

    pub fn k(&self) -> usize {
        self.dir.len() - 1
    }

    pub fn n(&self) -> usize {
        self.k() + self.y.len()
    }

    pub fn r(&self) -> f64 {
        dot(&self.y, &self.y)
    }

    pub fn to_sphere(&self) -> SpherePoint {
        let s = sqrt((1.0 - self.r()).max(0.0));
        SpherePoint {
            x: self.dir.iter().map(|d| s * d).collect(),
            y: self.y.clone(),
        }
    }

    /// Chart point of `p`; `None` at the poles `x = 0`.
    pub fn from_sphere(p: &SpherePoint) -> Option<Self> {
        let nx = norm(&p.x);
        if nx == 0.0 {
            return None;
        }
        Some(ChartPoint {
            dir: p.x.iter().map(|v| v / nx).collect(),
            y: p.y.clone(),
        })
    }

    /// Orthonormal frame of the tangent space of `S^k` at `dir`.
    pub fn tangent_basis(&self) -> Vec<Vector> {
        let k = self.k();
        if k == 1 {
            return alloc::vec![[-self.dir[1], self.dir[0]].into_iter().collect()];
        }
        let mut frame: Vec<Vector> = Vec::with_capacity(k);
        let mut candidates: Vec<(f64, usize)> = (0..=k).map(|i| (1.0 - self.dir[i] * self.dir[i], i)).collect();
        // Project the coordinate axes least aligned with dir first.
        candidates.sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        for &(_, i) in &candidates {
            if frame.len() == k {
                break;
            }
            let mut e: Vector = (0..=k).map(|j| if j == i { 1.0 } else { 0.0 }).collect();
            for _ in 0..2 {
                let pd = dot(&e, &self.dir);
                for j in 0..=k {
                    e[j] -= pd * self.dir[j];
                }
                for f in &frame {
                    let pf = dot(&e, f);
                    for j in 0..=k {
                        e[j] -= pf * f[j];
                    }
                }
            }
            let ne = norm(&e);
            if ne > 1e-6 {
                frame.push(e.iter().map(|v| v / ne).collect());
            }
        }
        frame
    }

    /// The point at local offset `q = (s, dy)`: `dir` moves along the great
    /// circle in direction `Σ s_a τ_a` by `|s|`, and `y` moves by `dy`.
    pub fn offset(&self, q: &[f64]) -> ChartPoint {
        let k = self.k();
        let (s, dy) = q.split_at(k);
        let len = norm(s);
        let (c, sc) = (cos(len), sinc(len));
        let mut dir = self.dir.clone();
        for d in dir.iter_mut() {
            *d *= c;
        }
        for (a, tau) in self.tangent_basis().iter().enumerate() {
            for j in 0..=k {
                dir[j] += sc * s[a] * tau[j];
            }
        }
        let y = self.y.iter().zip(dy).map(|(y, d)| y + d).collect();
        ChartPoint { dir, y }
    }
}

/// How a [`ShapeReport`] was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Method {
    Analytic,
    FiniteDifference,
    Differentiated,
}

/// Principal curvatures (ascending), `H_n` and `|A|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub principal_curvatures: Vector,
    pub gauss_kronecker: f64,
    pub a_norm: f64,
}

/// Curvature data at one point.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShapeReport {
    pub point_image: Vector,
    pub normal: Vector,
    pub principal_curvatures: Vector,
    pub gauss_kronecker: f64,
    pub a_norm: f64,
    pub method: Method,
}

fn check_dims(sol: &ProfileSolution, x_len: usize, y_len: usize) -> Result<()> {
    let (n, k) = (sol.params.n, sol.params.k);
    if x_len != k + 1 || y_len != n - k {
        return Err(Error::InvalidParameter(alloc::format!(
            "point in R^{x_len} × R^{y_len} does not match n = {n}, k = {k}"
        )));
    }
    Ok(())
}

/// `φ(x, y) = (θ(|y|²)·x, y)`.
pub fn evaluate(sol: &ProfileSolution, p: &SpherePoint) -> Result<Vector> {
    check_dims(sol, p.x.len(), p.y.len())?;
    let theta = sol.theta.eval(p.r())?;
    Ok(p.x.iter().map(|x| theta * x).chain(p.y.iter().copied()).collect())
}

/// `N = (z, c₁·w)/c₂` at `(z, w) = φ(p)`.
pub fn gauss_map(sol: &ProfileSolution, p: &SpherePoint) -> Result<Vector> {
    check_dims(sol, p.x.len(), p.y.len())?;
    let r = p.r();
    let theta = sol.theta.eval(r)?;
    let c1 = sol.c1.eval(r)?;
    let c2 = sol.c2.eval(r)?;
    Ok(p.x
        .iter()
        .map(|x| theta * x / c2)
        .chain(p.y.iter().map(|w| c1 * w / c2))
        .collect())
}

/// Closed-form spectrum at `r = |y|²`.
pub fn curvatures_analytic(sol: &ProfileSolution, r: f64) -> Result<Spectrum> {
    let (n, k) = (sol.params.n, sol.params.k);
    let (k_sphere, k_mid, k_radial) = sol.curvature_factors(r)?;
    let mut h = 1.0;
    let mut ks = Vector::new();
    for _ in 0..k {
        h *= k_sphere;
        ks.push(k_sphere);
    }
    for _ in 0..(n - k - 1) {
        h *= k_mid;
        ks.push(k_mid);
    }
    h *= k_radial;
    ks.push(k_radial);
    let a_norm = norm(&ks);
    sort_ascending(&mut ks);
    Ok(Spectrum {
        principal_curvatures: ks,
        gauss_kronecker: h,
        a_norm,
    })
}

/// The base immersion, optionally followed by normal variations with
/// pairwise disjoint supports.
#[derive(Debug, Clone)]
pub struct ImmersionMap {
    profile: Arc<ProfileSolution>,
    stack: Vec<NormalVariation>,
}

impl ImmersionMap {
    pub fn new(profile: ProfileSolution) -> Self {
        Self::from_shared(Arc::new(profile))
    }

    pub fn from_shared(profile: Arc<ProfileSolution>) -> Self {
        ImmersionMap {
            profile,
            stack: Vec::new(),
        }
    }

    pub fn profile(&self) -> &ProfileSolution {
        &self.profile
    }

    pub fn shared_profile(&self) -> Arc<ProfileSolution> {
        self.profile.clone()
    }

    /// Applied variations, in application order, each with its time `t`.
    pub fn stack(&self) -> &[NormalVariation] {
        &self.stack
    }

    pub fn n(&self) -> usize {
        self.profile.params.n
    }

    pub fn k(&self) -> usize {
        self.profile.params.k
    }

    /// The same base immersion with no variations.
    pub fn base(&self) -> ImmersionMap {
        ImmersionMap {
            profile: self.profile.clone(),
            stack: Vec::new(),
        }
    }

    pub(crate) fn push(&self, var: NormalVariation) -> ImmersionMap {
        let mut stack = self.stack.clone();
        stack.push(var);
        ImmersionMap {
            profile: self.profile.clone(),
            stack,
        }
    }

    fn check(&self, p: &ChartPoint) -> Result<()> {
        check_dims(&self.profile, p.dir.len(), p.y.len())
    }

    /// Base immersion at `p`: `(U(r)·dir, y)` with `U = |z|`.
    pub fn base_point(&self, p: &ChartPoint) -> Result<Vector> {
        self.check(p)?;
        let u = self.profile.radius.eval(p.r())?;
        Ok(p.dir.iter().map(|d| u * d).chain(p.y.iter().copied()).collect())
    }

    /// Gauss map of the base immersion at `p`.
    pub fn base_normal(&self, p: &ChartPoint) -> Result<Vector> {
        self.check(p)?;
        let r = p.r();
        let u = self.profile.radius.eval(r)?;
        let c1 = self.profile.c1.eval(r)?;
        let c2 = self.profile.c2.eval(r)?;
        Ok(p.dir
            .iter()
            .map(|d| u * d / c2)
            .chain(p.y.iter().map(|w| c1 * w / c2))
            .collect())
    }

    /// Indices of variations whose open support contains `p`.
    pub fn active(&self, p: &ChartPoint) -> Vec<usize> {
        (0..self.stack.len())
            .filter(|&i| !p.y.is_empty() && self.stack[i].in_support(&p.dir, p.y[0]))
            .collect()
    }

    /// `Σ t·f·N` over the variations active at `p`.
    pub fn displacement(&self, p: &ChartPoint) -> Result<Vector> {
        self.check(p)?;
        let dim = self.n() + 1;
        let mut out: Vector = (0..dim).map(|_| 0.0).collect();
        let active = self.active(p);
        if active.is_empty() {
            return Ok(out);
        }
        let normal = self.base_normal(p)?;
        for i in active {
            let var = &self.stack[i];
            let f = var.t * var.amplitude(&p.dir, p.y[0])?;
            for (o, nv) in out.iter_mut().zip(&normal) {
                *o += f * nv;
            }
        }
        Ok(out)
    }

    /// The map at `p`, including every stacked variation.
    ///
    /// Variation supports are disjoint, so every stacked map has the base
    /// Gauss map on the support of the next one; displacements are taken
    /// along the base normal.
    pub fn evaluate(&self, p: &ChartPoint) -> Result<Vector> {
        let mut x = self.base_point(p)?;
        if self.active(p).is_empty() {
            return Ok(x);
        }
        let d = self.displacement(p)?;
        for (a, b) in x.iter_mut().zip(&d) {
            *a += b;
        }
        Ok(x)
    }

    /// Shape operator at `p` by the requested method.
    ///
    /// `Method::Analytic` ignores the stack and is only meaningful where no
    /// variation is active; see [`ImmersionMap::shape_auto`].
    pub fn shape(&self, p: &ChartPoint, method: Method) -> Result<ShapeReport> {
        match method {
            Method::Analytic => {
                self.check(p)?;
                let spec = curvatures_analytic(&self.profile, p.r())?;
                Ok(ShapeReport {
                    point_image: self.base_point(p)?,
                    normal: self.base_normal(p)?,
                    principal_curvatures: spec.principal_curvatures,
                    gauss_kronecker: spec.gauss_kronecker,
                    a_norm: spec.a_norm,
                    method,
                })
            }
            Method::FiniteDifference => shape_operator_fd(self, p, FdMode::Full),
            Method::Differentiated => shape::shape_operator_jet(self, p),
        }
    }

    /// Closed form where no variation is active, exact differentiation inside supports.
    pub fn shape_auto(&self, p: &ChartPoint) -> Result<ShapeReport> {
        if self.active(p).is_empty() {
            self.shape(p, Method::Analytic)
        } else {
            self.shape(p, Method::Differentiated)
        }
    }

    /// `H_n` at `p` by [`ImmersionMap::shape_auto`].
    pub fn gauss_kronecker(&self, p: &ChartPoint) -> Result<f64> {
        Ok(self.shape_auto(p)?.gauss_kronecker)
    }
}
