use alloc::string::String;
use alloc::vec::Vec;

use crate::profile::Violation;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("r = {r} outside domain [{lo}, {hi}]")]
    Domain { r: f64, lo: f64, hi: f64 },
    #[error("non-finite integrand value at x = {x}")]
    Integrand { x: f64 },
    #[error("quadrature did not reach tolerance {tol} on [{a}, {b}] (estimate {estimate})")]
    QuadratureBudget { a: f64, b: f64, tol: f64, estimate: f64 },
    #[error("invalid parameters: {}", display_violations(.0))]
    InvalidParams(Vec<Violation>),
    #[error("invalid eps {eps}: must lie in (0, (beta - alpha)/2 = {max})")]
    InvalidEps { eps: f64, max: f64 },
    #[error("rho blend would decrease: raw rho(beta - w) = {value} > 1")]
    Blend { value: f64 },
    #[error("1 - r rho^2 <= 0 at r = {r}")]
    Singularity { r: f64 },
    #[error("no sign bracket for t0: G(0) = {g0}, G(1) = {g1}; try a smaller eps")]
    Bracket { g0: f64, g1: f64 },
    #[error("sqrt(gamma) - integral/2 < 0 at r = {r}")]
    Geometry { r: f64 },
    #[error("degenerate first fundamental form (det = {det})")]
    ChartDegeneracy { det: f64 },
    #[error("antipodal point: geodesic distance function is singular")]
    Antipodal,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("support of the new variation overlaps stacked variation {index}")]
    SupportCollision { index: usize },
    #[error("unsupported codimension: perturbation requires k = n - 1 (n = {n}, k = {k})")]
    UnsupportedCodimension { n: usize, k: usize },
    #[error("calibration failed after {halvings} halvings; worst H = {worst_h} at (u, v) = ({u}, {v})")]
    Calibration {
        halvings: u32,
        worst_h: f64,
        u: f64,
        v: f64,
    },
    #[error("ball {index}: {message}")]
    Plan { index: usize, message: String },
    #[error("ball {index}: {source}")]
    Ball {
        index: usize,
        source: alloc::boxed::Box<Error>,
    },
}

fn display_violations(v: &[Violation]) -> String {
    let mut s = String::new();
    for (i, item) in v.iter().enumerate() {
        if i > 0 {
            s.push_str("; ");
        }
        s.push_str(&alloc::format!("{item}"));
    }
    s
}
