//! Rough initial data with prescribed Sobolev regularity.
//!
//! Coefficients decay like `(1 + |k|²)^{-(d/2 + s + ε)/2}`, which puts the
//! field in `H^{s+ε-δ}` for every `δ > 0` but not in `H^{s+ε}`.
//!
//! Random coefficients use ChaCha8 seeded with `seed` (via
//! `SeedableRng::seed_from_u64`), stream 0 for `u` and stream 1 for `v`. The
//! modes are visited in k-lexicographic order; every `k` whose first non-zero
//! component is positive, and `k = 0`, draws `Re r_k` then `Im r_k` uniformly
//! from `[-1, 1]`. The mirrored mode gets `conj(r_k)` and `r_0` keeps its real
//! part only, so the field is real.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{is_positive_half, norm_sq, GridSpec, NormKind, TorusField};
use crate::wave::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DataMode {
    #[default]
    Deterministic,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialDataSpec {
    pub mode: DataMode,
    pub eps: f64,
    /// Target of `‖u⁰‖_{H¹}`.
    pub target_u: f64,
    /// Target of `‖v⁰‖_{L²}`.
    pub target_v: f64,
    pub seed: u64,
}

impl Default for InitialDataSpec {
    fn default() -> Self {
        Self {
            mode: DataMode::Deterministic,
            eps: 1e-4,
            target_u: 3.0,
            target_v: 3.0,
            seed: 0,
        }
    }
}

impl InitialDataSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) {
            return Err(Error::Config(format!(
                "eps must be positive, got {}",
                self.eps
            )));
        }
        if !(self.target_u > 0.0 && self.target_v > 0.0) {
            return Err(Error::Config("norm targets must be positive".into()));
        }
        Ok(())
    }

    /// Regularity index of `u⁰`, `1 + ε`.
    pub fn s_u(&self) -> f64 {
        1.0 + self.eps
    }

    /// Regularity index of `v⁰`, `ε`.
    pub fn s_v(&self) -> f64 {
        self.eps
    }
}

/// `(1 + |k|²)^{-(d/2 + s + ε)/2}`
pub fn rough_weight(k2: f64, dim: usize, s: f64, eps: f64) -> f64 {
    (1.0 + k2).powf(-(dim as f64 / 2.0 + s + eps) / 2.0)
}

/// Real, even, positive coefficients `(1 + |k|²)^{-(d/2 + s + ε)/2}`.
pub fn deterministic_rough(grid: GridSpec, s: f64, eps: f64) -> TorusField {
    TorusField::from_fn(grid, true, |k| {
        Complex64::new(rough_weight(norm_sq(k), grid.dim(), s, eps), 0.0)
    })
}

/// The rough weights multiplied by Hermitian-symmetrised uniform draws.
pub fn random_rough(grid: GridSpec, s: f64, eps: f64, seed: u64) -> TorusField {
    random_rough_stream(grid, s, eps, seed, 0)
}

fn random_rough_stream(grid: GridSpec, s: f64, eps: f64, seed: u64, stream: u64) -> TorusField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut field = TorusField::zeros(grid, true);
    let coeff = field.coefficients_mut();
    for index in grid.lexicographic_indices() {
        let k = grid.wavenumber(index);
        let is_zero = k == [0, 0, 0];
        if !is_zero && !is_positive_half(&k) {
            continue;
        }
        let re = rng.random_range(-1.0..=1.0);
        let im = rng.random_range(-1.0..=1.0);
        let w = rough_weight(norm_sq(&k), grid.dim(), s, eps);
        if is_zero {
            coeff[index] = Complex64::new(w * re, 0.0);
        } else {
            let value = Complex64::new(w * re, w * im);
            coeff[index] = value;
            coeff[grid.mirror_index(index)] = value.conj();
        }
    }
    field
}

/// `(target / ‖f‖) · f`.
pub fn scale_to(field: &TorusField, kind: NormKind, target: f64) -> Result<TorusField> {
    let norm = field.norm(kind)?;
    if !(norm > 0.0) {
        return Err(Error::Domain("cannot scale a field of zero norm".into()));
    }
    Ok(field.scale(target / norm))
}

/// `(u⁰, v⁰)` with `‖u⁰‖_{H¹} = target_u` and `‖v⁰‖_{L²} = target_v`, scaled
/// on the given grid.
pub fn make_initial_state(spec: &InitialDataSpec, grid: GridSpec) -> Result<StateVector> {
    spec.validate()?;
    // the (s, ε) split is immaterial: the weights only see s + ε
    let (u, v) = match spec.mode {
        DataMode::Deterministic => (
            deterministic_rough(grid, 1.0, spec.eps),
            deterministic_rough(grid, 0.0, spec.eps),
        ),
        DataMode::Random => (
            random_rough_stream(grid, 1.0, spec.eps, spec.seed, 0),
            random_rough_stream(grid, 0.0, spec.eps, spec.seed, 1),
        ),
    };
    StateVector::new(
        scale_to(&u, NormKind::Sobolev(1.0), spec.target_u)?,
        scale_to(&v, NormKind::Sobolev(0.0), spec.target_v)?,
    )
}
