//! Codimension-one immersions of the round sphere whose set of zero
//! Gauss-Kronecker curvature is prescribed.
//!
//! The crate is organised bottom-up:
//!
//! - [`smoothfn`]: one-dimensional C∞ functions (exponential glue steps,
//!   plateaus, quadrature-defined antiderivatives) evaluated through truncated
//!   Taylor jets, plus adaptive Gauss-Kronrod quadrature.
//! - [`profile`]: the radial profile system `ν, ψ, ρ, Δ, μ, c₁, c₂, θ` that
//!   flattens a hemisphere onto a cylinder `S^k × D^{n-k}`.
//! - [`immersion`]: the immersion `φ(x, y) = (θ(|y|²)·x, y)`, its Gauss map,
//!   closed-form principal curvatures and a finite-difference shape-operator
//!   oracle that also works on perturbed maps.
//! - [`perturbation`]: compactly supported normal variations that inflate the
//!   flat cylinder over a geodesic ball, with the first variation of
//!   `det dN` in closed form and by finite differences.
//! - [`cantor`]: Cantor-set plans on the circle, composition of disjoint
//!   variations and verification of the resulting fractal zero set.
//!
//! The crate is `no_std` + `alloc`. The `parallel` feature pulls in `std` and
//! rayon for grid scans; `serde` derives serialization for reports.

#![cfg_attr(all(not(feature = "std"), not(test)), no_std)]
// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod cantor;
pub mod error;
pub mod grid;
pub mod immersion;
pub mod linalg;
pub mod math;
pub mod perturbation;
pub mod profile;
pub mod smoothfn;

mod par;

pub use error::{Error, Result};
pub use grid::{GridSpec, Region};
pub use immersion::{ChartPoint, ImmersionMap, Method, ShapeReport, SpherePoint};
pub use perturbation::{GeodesicBall, NormalVariation};
pub use profile::{ProfileParams, ProfileSolution};
pub use smoothfn::SmoothFn;

/// Largest supported sphere dimension `n` (ambient space `R^{n+1}`).
pub const MAX_DIM: usize = 7;

/// Fixed-capacity vector used for points, normals and spectra.
pub type Vector = arrayvec::ArrayVec<f64, { MAX_DIM + 1 }>;
