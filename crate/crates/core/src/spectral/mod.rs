//! Band-limited torus fields: transforms, projections and norms.

mod fft;
pub(crate) mod field;
mod grid;
pub mod snapshot;

pub use field::{NormKind, TorusField};
pub(crate) use grid::is_positive_half;
pub use grid::{norm_inf, norm_sq, GridSpec, Wavenumber};
