//! Fourier multipliers of the linear wave system `U' = AU`, `A = [[0, I], [Δ, 0]]`,
//! acting on states `U = (u, ∂ₜu)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{norm_inf, GridSpec, NormKind, TorusField};

/// The pair `(u, v) ≈ (u, ∂ₜu)` on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    u: TorusField,
    v: TorusField,
}

impl StateVector {
    pub fn new(u: TorusField, v: TorusField) -> Result<Self> {
        if u.grid() != v.grid() {
            return Err(Error::Shape(
                "state components live on different grids".into(),
            ));
        }
        Ok(Self { u, v })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            u: TorusField::zeros(grid, true),
            v: TorusField::zeros(grid, true),
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.u.grid()
    }

    pub fn u(&self) -> &TorusField {
        &self.u
    }

    pub fn v(&self) -> &TorusField {
        &self.v
    }

    pub(crate) fn v_mut(&mut self) -> &mut TorusField {
        &mut self.v
    }

    pub fn into_parts(self) -> (TorusField, TorusField) {
        (self.u, self.v)
    }

    pub fn is_real(&self) -> bool {
        self.u.is_real() && self.v.is_real()
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }

    /// `√(‖u‖²_{H¹} + ‖v‖²_{L²})`
    pub fn h1l2_norm(&self) -> f64 {
        self.product_sq(1.0).sqrt()
    }

    /// `√(‖u‖²_{L²} + ‖v‖²_{H⁻¹})`
    pub fn l2hm1_norm(&self) -> f64 {
        self.product_sq(0.0).sqrt()
    }

    fn product_sq(&self, a: f64) -> f64 {
        self.u.weighted_sq_sum(|k2| (1.0 + k2).powf(a))
            + self.v.weighted_sq_sum(|k2| (1.0 + k2).powf(a - 1.0))
    }

    pub fn product_norm(&self, kind: NormKind) -> Result<f64> {
        match kind {
            NormKind::ProductH1L2 => Ok(self.h1l2_norm()),
            NormKind::ProductL2Hm1 => Ok(self.l2hm1_norm()),
            other => Err(Error::Domain(format!("{other:?} is not a product norm"))),
        }
    }

    /// `self += a · other`
    pub fn axpy(&mut self, a: f64, other: &StateVector) {
        self.u.axpy(a, &other.u);
        self.v.axpy(a, &other.v);
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            u: self.u.scale(factor),
            v: self.v.scale(factor),
        }
    }

    pub fn project(&self, cutoff: f64) -> Self {
        Self {
            u: self.u.project(cutoff),
            v: self.v.project(cutoff),
        }
    }

    pub fn resize(&self, degree: usize) -> Result<Self> {
        Ok(Self {
            u: self.u.resize(degree)?,
            v: self.v.resize(degree)?,
        })
    }

    /// Applies a 2×2 multiplier `(û, v̂) ↦ M(k) (û, v̂)` mode by mode.
    fn map_pairs(
        &mut self,
        mut f: impl FnMut(usize, Complex64, Complex64) -> (Complex64, Complex64),
    ) {
        let v = self.v.coefficients_mut();
        for (i, (cu, cv)) in self
            .u
            .coefficients_mut()
            .iter_mut()
            .zip(v.iter_mut())
            .enumerate()
        {
            let (nu, nv) = f(i, *cu, *cv);
            *cu = nu;
            *cv = nv;
        }
    }
}

impl std::ops::Sub for &StateVector {
    type Output = StateVector;

    fn sub(self, rhs: &StateVector) -> StateVector {
        StateVector {
            u: &self.u - &rhs.u,
            v: &self.v - &rhs.v,
        }
    }
}

impl std::ops::Add for &StateVector {
    type Output = StateVector;

    fn add(self, rhs: &StateVector) -> StateVector {
        StateVector {
            u: &self.u + &rhs.u,
            v: &self.v + &rhs.v,
        }
    }
}

/// Integer `|k|²` of every stored mode.
fn mode_norms_sq(grid: GridSpec) -> Vec<usize> {
    (0..grid.len())
        .map(|i| {
            let k = grid.wavenumber(i);
            (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as usize
        })
        .collect()
}

/// `AU = (v, Δu)`.
pub fn apply_a(state: &StateVector) -> StateVector {
    let u = state.v.clone();
    let mut v = state.u.clone();
    v.map_modes(|k, c| c * -crate::spectral::norm_sq(k));
    StateVector { u, v }
}

/// Per-mode block of `e^{tA}`:
/// `[[cos(t|k|), sin(t|k|)/|k|], [-|k| sin(t|k|), cos(t|k|)]]`,
/// and `[[1, t], [0, 1]]` at `k = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupBlock {
    pub cos: f64,
    pub sin_over_k: f64,
    pub minus_k_sin: f64,
}

impl GroupBlock {
    pub fn new(k_norm_sq: f64, t: f64) -> Self {
        if k_norm_sq == 0.0 {
            return Self {
                cos: 1.0,
                sin_over_k: t,
                minus_k_sin: 0.0,
            };
        }
        let k = k_norm_sq.sqrt();
        let (sin, cos) = (t * k).sin_cos();
        Self {
            cos,
            sin_over_k: sin / k,
            minus_k_sin: -k * sin,
        }
    }
}

/// The exact linear flow `e^{tA}` on one grid for one fixed `t`.
///
/// The blocks depend on `|k|²` only, so they are tabulated once per distinct
/// value and looked up per mode.
#[derive(Debug, Clone)]
pub struct LinearFlow {
    grid: GridSpec,
    t: f64,
    mode_k2: Vec<usize>,
    blocks: Vec<GroupBlock>,
}

impl LinearFlow {
    pub fn new(grid: GridSpec, t: f64) -> Self {
        let mode_k2 = mode_norms_sq(grid);
        let max_k2 = grid.dim() * grid.degree() * grid.degree();
        let blocks = (0..=max_k2)
            .map(|k2| GroupBlock::new(k2 as f64, t))
            .collect();
        Self {
            grid,
            t,
            mode_k2,
            blocks,
        }
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn apply(&self, state: &StateVector) -> StateVector {
        let mut out = state.clone();
        self.apply_in_place(&mut out);
        out
    }

    pub fn apply_in_place(&self, state: &mut StateVector) {
        assert_eq!(
            state.grid(),
            self.grid,
            "linear flow applied on a foreign grid"
        );
        state.map_pairs(|i, cu, cv| {
            let b = &self.blocks[self.mode_k2[i]];
            (
                cu * b.cos + cv * b.sin_over_k,
                cu * b.minus_k_sin + cv * b.cos,
            )
        });
    }
}

/// `e^{tA} U`.
pub fn apply_group(state: &StateVector, t: f64) -> StateVector {
    LinearFlow::new(state.grid(), t).apply(state)
}

/// `Π_N U = (π_N u, π_N v)`.
pub fn apply_filter(state: &StateVector, cutoff: f64) -> StateVector {
    state.project(cutoff)
}

/// Integer cut-off `⌊1/τ⌋` of the filter `Π_{τ⁻¹}`.
pub fn filter_cutoff(tau: f64) -> f64 {
    (1.0 / tau).floor()
}

/// `m(x) = x sin x / (cos x − 1) = −x cot(x/2)`, with `m(0) = −2`.
pub fn psi_symbol(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        -2.0 + x * x / 6.0
    } else {
        -x / (x / 2.0).tan()
    }
}

fn check_psi_step(tau: f64) -> Result<()> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::Domain(format!("Ψ_τ needs 0 < τ ≤ 1, got τ = {tau}")));
    }
    Ok(())
}

/// Per-mode entries `[[p, q], [r, p]]` of `Ψ_τ` for `|k|² = k2` inside the filter.
fn psi_block(k2: f64, tau: f64) -> (f64, f64, f64) {
    let diag = -psi_symbol(tau * k2.sqrt()) / 2.0;
    (diag, -tau / 2.0, tau * k2 / 2.0)
}

/// Summation-by-parts multiplier `Ψ_τ`, defined by
/// `τ A Π_{τ⁻¹} = (e^{τA} − I) Ψ_τ`.
///
/// Inside the filter, with `x = τ|k|`, the block is
/// `[[−m(x)/2, −τ/2], [τ|k|²/2, −m(x)/2]]`; outside it is zero.
pub fn apply_psi(state: &StateVector, tau: f64) -> Result<StateVector> {
    check_psi_step(tau)?;
    let grid = state.grid();
    let cutoff = filter_cutoff(tau);
    let k2 = mode_norms_sq(grid);
    let mut out = state.clone();
    out.map_pairs(|i, cu, cv| {
        if norm_inf(&grid.wavenumber(i)) as f64 > cutoff {
            return (Complex64::default(), Complex64::default());
        }
        let (p, q, r) = psi_block(k2[i] as f64, tau);
        (cu * p + cv * q, cu * r + cv * p)
    });
    Ok(out)
}

/// Largest per-mode operator norm of `Ψ_τ` on `H^r × H^{r−1}` over a grid.
///
/// In the weighted coordinates `(⟨k⟩^r û, ⟨k⟩^{r−1} v̂)` the block becomes
/// `[[p, q⟨k⟩], [r/⟨k⟩, p]]`, which does not depend on `r`.
pub fn psi_operator_bound(grid: GridSpec, tau: f64) -> Result<f64> {
    check_psi_step(tau)?;
    let cutoff = filter_cutoff(tau);
    let mut worst: f64 = 0.0;
    for i in 0..grid.len() {
        let k = grid.wavenumber(i);
        if norm_inf(&k) as f64 > cutoff {
            continue;
        }
        let k2 = crate::spectral::norm_sq(&k);
        let (p, q, r) = psi_block(k2, tau);
        let bracket = (1.0 + k2).sqrt();
        worst = worst.max(spectral_norm_2x2(p, q * bracket, r / bracket, p));
    }
    Ok(worst)
}

/// Largest singular value of `[[a, b], [c, d]]`.
pub(crate) fn spectral_norm_2x2(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let frob = a * a + b * b + c * c + d * d;
    let det = a * d - b * c;
    let disc = (frob * frob - 4.0 * det * det).max(0.0).sqrt();
    ((frob + disc) / 2.0).sqrt()
}
