//! Shape operators from first and second derivatives of the evaluator.

use alloc::vec::Vec;

use super::hyper::Hd;
use super::{ChartPoint, ImmersionMap, Method, ShapeReport};
use crate::error::{Error, Result};
use crate::linalg::{dot, generalized_eigenvalues, norm, Mat};
use crate::math::{angle_between, half_sq_acos};
use crate::Vector;

/// Base step of the full-evaluator stencil.
pub const FD_STEP: f64 = 4e-4;
/// Richardson levels of the full-evaluator stencil (`FD_STEP`, `/2`, `/4`).
pub const FD_LEVELS: usize = 3;
/// Step for differencing the variation displacement alone.
pub const SPLIT_STEP: f64 = 2.5e-4;

/// Which part of the map is differenced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdMode {
    /// Central differences of the whole evaluator from step [`FD_STEP`] down
    /// over [`FD_LEVELS`] halvings.
    Full,
    /// Exact base derivatives plus central differences of the displacement
    /// `Σ t·f·N` with step [`SPLIT_STEP`]. Errors then scale with the
    /// displacement instead of the image.
    Split,
}

/// Value, first and second derivatives of a vector function of `n` local coordinates.
pub(crate) struct Derivs {
    pub x: Vector,
    pub d1: Vec<Vector>,
    pub d2: Vec<Vector>,
    pub n: usize,
}

impl Derivs {
    fn second(&self, i: usize, j: usize) -> &Vector {
        &self.d2[i * self.n + j]
    }

    fn add(&mut self, other: &Derivs) {
        let add = |a: &mut Vector, b: &Vector| a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        add(&mut self.x, &other.x);
        for (a, b) in self.d1.iter_mut().zip(&other.d1) {
            add(a, b);
        }
        for (a, b) in self.d2.iter_mut().zip(&other.d2) {
            add(a, b);
        }
    }
}

fn lincomb(terms: &[(f64, &Vector)]) -> Vector {
    let dim = terms[0].1.len();
    (0..dim).map(|c| terms.iter().map(|(w, v)| w * v[c]).sum()).collect()
}

/// Richardson table over steps `h, h/2, …` eliminating even powers of the step.
fn richardson(levels: &[Vector]) -> Vector {
    let mut row: Vec<Vector> = levels.to_vec();
    let mut factor = 4.0;
    while row.len() > 1 {
        row = row
            .windows(2)
            .map(|w| lincomb(&[(factor / (factor - 1.0), &w[1]), (-1.0 / (factor - 1.0), &w[0])]))
            .collect();
        factor *= 4.0;
    }
    row.pop().unwrap_or_default()
}

/// Central differences at `h, h/2, …` (`levels` steps), combined by Richardson extrapolation.
pub(crate) fn stencil<F>(f: F, n: usize, h: f64, levels: usize) -> Result<Derivs>
where
    F: Fn(&[f64]) -> Result<Vector>,
{
    let mut q = [0.0; crate::MAX_DIM];
    let x0 = f(&q[..n])?;
    let mut at = |pairs: &[(usize, f64)]| -> Result<Vector> {
        q[..n].iter_mut().for_each(|v| *v = 0.0);
        for &(i, v) in pairs {
            q[i] = v;
        }
        f(&q[..n])
    };
    let steps: Vec<f64> = (0..levels).map(|l| h / (1u32 << l) as f64).collect();
    let mut d1 = Vec::with_capacity(n);
    let mut d2 = alloc::vec![Vector::new(); n * n];
    for i in 0..n {
        let mut first = Vec::with_capacity(levels);
        let mut second = Vec::with_capacity(levels);
        for &step in &steps {
            let p = at(&[(i, step)])?;
            let m = at(&[(i, -step)])?;
            first.push(lincomb(&[(0.5 / step, &p), (-0.5 / step, &m)]));
            let s2 = 1.0 / (step * step);
            second.push(lincomb(&[(s2, &p), (-2.0 * s2, &x0), (s2, &m)]));
        }
        d1.push(richardson(&first));
        d2[i * n + i] = richardson(&second);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut mixed = Vec::with_capacity(levels);
            for &step in &steps {
                let pp = at(&[(i, step), (j, step)])?;
                let pm = at(&[(i, step), (j, -step)])?;
                let mp = at(&[(i, -step), (j, step)])?;
                let mm = at(&[(i, -step), (j, -step)])?;
                let s = 0.25 / (step * step);
                mixed.push(lincomb(&[(s, &pp), (-s, &pm), (-s, &mp), (s, &mm)]));
            }
            let v = richardson(&mixed);
            d2[i * n + j] = v.clone();
            d2[j * n + i] = v;
        }
    }
    Ok(Derivs { x: x0, d1, d2, n })
}

/// Local coordinate functions at `p` as hyper-duals: `(dir, y)`.
fn local_hd(p: &ChartPoint) -> (Vec<Hd>, Vec<Hd>) {
    let k = p.k();
    let n = p.n();
    let tau = p.tangent_basis();
    let e = (0..=k)
        .map(|i| {
            let mut c = Hd::constant(p.dir[i], n);
            for (a, t) in tau.iter().enumerate() {
                c.g[a] = t[i];
                c.h[a][a] = -p.dir[i];
            }
            c
        })
        .collect();
    let y =
        p.y.iter()
            .enumerate()
            .map(|(j, &v)| Hd::variable(v, k + j, n))
            .collect();
    (e, y)
}

fn hd_derivs(xs: &[Hd], n: usize) -> Derivs {
    let x = xs.iter().map(|c| c.v).collect();
    let d1 = (0..n).map(|i| xs.iter().map(|c| c.g[i]).collect()).collect();
    let mut d2 = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            d2.push(xs.iter().map(|c| c.h[i][j]).collect());
        }
    }
    Derivs { x, d1, d2, n }
}

/// Exact derivatives of the map at `p`, optionally including the stack.
pub(crate) fn exact_derivs(m: &ImmersionMap, p: &ChartPoint, with_stack: bool) -> Result<Derivs> {
    let sol = m.profile();
    let n = p.n();
    let (e, y) = local_hd(p);
    let mut r = Hd::constant(0.0, n);
    for yj in &y {
        r = r + *yj * *yj;
    }
    let rv = p.r();
    let u = r.compose(&sol.radius.jet(rv, 2)?);
    let mut xs: Vec<Hd> = e.iter().map(|c| u * *c).chain(y.iter().copied()).collect();
    let active = if with_stack { m.active(p) } else { Vec::new() };
    if !active.is_empty() {
        let c1 = r.compose(&sol.c1.jet(rv, 2)?);
        let inv_c2 = r.compose(&sol.c2.jet(rv, 2)?).recip();
        let normal: Vec<Hd> = e
            .iter()
            .map(|c| u * *c * inv_c2)
            .chain(y.iter().map(|w| c1 * *w * inv_c2))
            .collect();
        for i in active {
            let var = &m.stack()[i];
            let center = &var.ball.center;
            let mut kappa = Hd::constant(0.0, n);
            for (c, ci) in e.iter().zip(center.iter()) {
                kappa = kappa + c.scale(*ci);
            }
            let (f0, f1, f2) = half_sq_acos(angle_between(&p.dir, center));
            let d = kappa.chain(f0, f1, f2);
            let lam = d.compose(&var.lambda.jet(d.v, 2)?);
            let sig = y[0].compose(&var.sigma.jet(y[0].v, 2)?);
            let f = (lam * sig).scale(var.l0 * var.t);
            for (x, nv) in xs.iter_mut().zip(&normal) {
                *x = *x + f * *nv;
            }
        }
    }
    Ok(hd_derivs(&xs, n))
}

/// Unit normal orthogonal to the tangents, oriented along `seed`.
fn normal_from_frame(tangents: &[Vector], seed: &Vector) -> Vector {
    let mut basis: Vec<Vector> = Vec::with_capacity(tangents.len());
    for t in tangents {
        let mut v = t.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nv = norm(&v);
        v.iter_mut().for_each(|x| *x /= nv);
        basis.push(v);
    }
    let mut nrm = seed.clone();
    for _ in 0..2 {
        for b in &basis {
            let c = dot(&nrm, b);
            nrm.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
    }
    let l = norm(&nrm);
    nrm.iter_mut().for_each(|x| *x /= l);
    if dot(&nrm, seed) < 0.0 {
        nrm.iter_mut().for_each(|x| *x = -*x);
    }
    nrm
}

pub(crate) fn report(d: &Derivs, seed: &Vector, method: Method) -> Result<ShapeReport> {
    let n = d.n;
    let g = Mat::from_fn(n, |i, j| dot(&d.d1[i], &d.d1[j]));
    let det_g = g.det();
    if !(det_g >= 1e-14) {
        return Err(Error::ChartDegeneracy { det: det_g });
    }
    let normal = normal_from_frame(&d.d1, seed);
    let b = Mat::from_fn(n, |i, j| {
        -0.5 * (dot(&normal, d.second(i, j)) + dot(&normal, d.second(j, i)))
    });
    let ks = generalized_eigenvalues(&g, &b).ok_or(Error::ChartDegeneracy { det: det_g })?;
    let a_norm = norm(&ks);
    Ok(ShapeReport {
        point_image: d.x.clone(),
        normal,
        principal_curvatures: ks,
        gauss_kronecker: b.det() / det_g,
        a_norm,
        method,
    })
}

/// Shape operator from finite differences.
pub fn shape_operator_fd(m: &ImmersionMap, p: &ChartPoint, mode: FdMode) -> Result<ShapeReport> {
    match mode {
        FdMode::Full => shape_operator_fd_steps(m, p, FD_STEP, FD_LEVELS),
        FdMode::Split => fd_report(m, p, mode, SPLIT_STEP, 2),
    }
}

/// Full-evaluator finite differences from step `h` over `levels` halvings.
pub fn shape_operator_fd_steps(m: &ImmersionMap, p: &ChartPoint, h: f64, levels: usize) -> Result<ShapeReport> {
    if !(h > 0.0) || levels == 0 || levels > 4 {
        return Err(Error::InvalidParameter(alloc::format!(
            "bad stencil: h = {h}, {levels} levels"
        )));
    }
    fd_report(m, p, FdMode::Full, h, levels)
}

fn fd_report(m: &ImmersionMap, p: &ChartPoint, mode: FdMode, h: f64, levels: usize) -> Result<ShapeReport> {
    let seed = m.base_normal(p)?;
    let n = p.n();
    let d = match mode {
        FdMode::Full => stencil(|q| m.evaluate(&p.offset(q)), n, h, levels)?,
        FdMode::Split => {
            let mut d = exact_derivs(m, p, false)?;
            if !m.active(p).is_empty() || touches_support(m, p) {
                let disp = stencil(|q| m.displacement(&p.offset(q)), n, h, levels)?;
                d.add(&disp);
            }
            d
        }
    };
    report(&d, &seed, Method::FiniteDifference)
}

/// Whether the split stencil around `p` reaches into any support.
fn touches_support(m: &ImmersionMap, p: &ChartPoint) -> bool {
    let reach = 2.0 * SPLIT_STEP;
    m.stack().iter().any(|v| {
        let ang = angle_between(&p.dir, &v.ball.center);
        let w = p.y[0].abs();
        ang < v.ball.radius + reach && w < sqrt_or_zero(v.beta) + reach
    })
}

fn sqrt_or_zero(x: f64) -> f64 {
    crate::math::sqrt(x.max(0.0))
}

/// Shape operator from exact derivatives of the full map.
pub(crate) fn shape_operator_jet(m: &ImmersionMap, p: &ChartPoint) -> Result<ShapeReport> {
    let seed = m.base_normal(p)?;
    let d = exact_derivs(m, p, true)?;
    report(&d, &seed, Method::Differentiated)
}
