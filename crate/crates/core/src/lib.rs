//! Fourier pseudo-spectral time integration of the semilinear wave equation
//!
//! ```text
//! ∂ₜ²u − Δu = −μ u^α   on the torus [-π, π]^d
//! ```
//!
//! with a filtered Strang splitting, together with the tooling to measure its
//! temporal convergence order on rough finite-energy data.
//!
//! - [`spectral`]: band-limited fields, FFT transforms, projections, norms.
//! - [`wave`]: the exact linear group `e^{tA}`, filters and the
//!   summation-by-parts multiplier `Ψ_τ`.
//! - [`integrators`]: Strang and Lie steps, time evolution, energy.
//! - [`initial_data`]: rough deterministic and random data.
//! - [`lab`]: convergence studies, order fits and report files.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod initial_data;
pub mod integrators;
pub mod lab;
pub mod selftest;
pub mod spectral;
pub mod wave;

pub use error::{Error, Result};
pub use initial_data::{make_initial_state, DataMode, InitialDataSpec};
pub use integrators::{evolve, ProblemConfig, Scheme, SchemeConfig, Stepper};
pub use spectral::{GridSpec, NormKind, TorusField};
pub use wave::StateVector;
