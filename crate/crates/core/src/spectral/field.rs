//! Band-limited fields on the torus in Fourier representation.
//!
//! A field stores the coefficients `f̂_k`, `|k|_∞ ≤ K`, of
//! `f(x) = (2π)^{-d/2} Σ_k f̂_k e^{ik·x}`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rustfft::FftDirection;
use serde::{Deserialize, Serialize};

use super::fft::transform;
use super::grid::{norm_inf, norm_sq, GridSpec, Wavenumber};
use crate::error::{Error, Result};

/// Norms on fields and on states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NormKind {
    /// `H^s` with weights `(1 + |k|²)^s`.
    Sobolev(f64),
    /// `L^q` by collocation quadrature, `q ∈ [1, ∞]`.
    Lebesgue(f64),
    /// `H¹ × L²`.
    ProductH1L2,
    /// `L² × H⁻¹`.
    ProductL2Hm1,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorusField {
    grid: GridSpec,
    coeff: Vec<Complex64>,
    real: bool,
}

/// `(2π)^{d/2}`
pub(crate) fn torus_scale(dim: usize) -> f64 {
    (2.0 * PI).powf(dim as f64 / 2.0)
}

impl TorusField {
    pub fn zeros(grid: GridSpec, real: bool) -> Self {
        Self {
            grid,
            coeff: vec![Complex64::default(); grid.len()],
            real,
        }
    }

    /// Wraps coefficients given in the grid's storage layout.
    pub fn from_coefficients(grid: GridSpec, coeff: Vec<Complex64>, real: bool) -> Result<Self> {
        if coeff.len() != grid.len() {
            return Err(Error::Shape(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeff.len()
            )));
        }
        if coeff.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Domain("non-finite coefficient".into()));
        }
        Ok(Self { grid, coeff, real })
    }

    /// Builds a field from a coefficient function of the wavenumber.
    ///
    /// The caller is responsible for Hermitian symmetry when `real` is set.
    pub fn from_fn(
        grid: GridSpec,
        real: bool,
        mut f: impl FnMut(&Wavenumber) -> Complex64,
    ) -> Self {
        let coeff = (0..grid.len()).map(|i| f(&grid.wavenumber(i))).collect();
        Self { grid, coeff, real }
    }

    /// The field that is identically `value`.
    pub fn constant(grid: GridSpec, value: f64) -> Self {
        let mut f = Self::zeros(grid, true);
        f.coeff[0] = Complex64::new(value * torus_scale(grid.dim()), 0.0);
        f
    }

    /// `amplitude · e^{ik·x}` (complex-valued unless `k = 0`).
    pub fn plane_wave(grid: GridSpec, k: &[i64], amplitude: Complex64) -> Result<Self> {
        let index = grid
            .index_of(k)
            .ok_or_else(|| Error::Domain(format!("wavenumber {k:?} not on grid")))?;
        let mut f = Self::zeros(grid, false);
        f.coeff[index] = amplitude * torus_scale(grid.dim());
        Ok(f)
    }

    /// `amplitude · cos(k·x)`.
    pub fn cosine(grid: GridSpec, k: &[i64], amplitude: f64) -> Result<Self> {
        let index = grid
            .index_of(k)
            .ok_or_else(|| Error::Domain(format!("wavenumber {k:?} not on grid")))?;
        let mut f = Self::zeros(grid, true);
        let c = amplitude * torus_scale(grid.dim());
        if index == 0 {
            f.coeff[0] = Complex64::new(c, 0.0);
        } else {
            f.coeff[index] = Complex64::new(c / 2.0, 0.0);
            f.coeff[grid.mirror_index(index)] = Complex64::new(c / 2.0, 0.0);
        }
        Ok(f)
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Coefficients in storage layout.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeff
    }

    pub(crate) fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeff
    }

    pub fn into_coefficients(self) -> Vec<Complex64> {
        self.coeff
    }

    /// `f̂_k`, zero if `k` lies outside the grid.
    pub fn coefficient(&self, k: &[i64]) -> Complex64 {
        self.grid
            .index_of(k)
            .map_or(Complex64::default(), |i| self.coeff[i])
    }

    pub fn is_finite(&self) -> bool {
        self.coeff
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest `|f̂_{-k} - conj(f̂_k)|` relative to the largest coefficient.
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.coeff.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let worst = (0..self.coeff.len())
            .map(|i| (self.coeff[self.grid.mirror_index(i)] - self.coeff[i].conj()).norm())
            .fold(0.0, f64::max);
        worst / scale
    }

    /// Replaces the coefficients by their Hermitian part, making the field
    /// exactly real.
    pub fn symmetrize(&mut self) {
        for i in 0..self.coeff.len() {
            let j = self.grid.mirror_index(i);
            if j < i {
                continue;
            }
            let avg = (self.coeff[i] + self.coeff[j].conj()) * 0.5;
            self.coeff[i] = avg;
            self.coeff[j] = avg.conj();
        }
        self.real = true;
    }

    /// Samples on the `M^d` collocation nodes, in storage layout.
    pub fn to_physical(&self) -> Vec<Complex64> {
        let mut data = self.coeff.clone();
        transform(&mut data, self.grid, FftDirection::Inverse);
        let scale = 1.0 / torus_scale(self.grid.dim());
        for value in &mut data {
            *value *= scale;
        }
        data
    }

    /// Real parts of the samples; meaningful for real fields.
    pub fn to_physical_real(&self) -> Vec<f64> {
        self.to_physical().into_iter().map(|z| z.re).collect()
    }

    /// Trigonometric interpolant `I_K` of the given samples.
    ///
    /// With `real` set the result is projected onto Hermitian-symmetric
    /// coefficients, which only removes round-off for real samples.
    pub fn from_physical(samples: &[Complex64], grid: GridSpec, real: bool) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::Shape(format!(
                "expected {} samples for {}-d grid of degree {}, got {}",
                grid.len(),
                grid.dim(),
                grid.degree(),
                samples.len()
            )));
        }
        let mut data = samples.to_vec();
        transform(&mut data, grid, FftDirection::Forward);
        let scale = torus_scale(grid.dim()) / grid.len() as f64;
        for value in &mut data {
            *value *= scale;
        }
        let mut field = Self {
            grid,
            coeff: data,
            real: false,
        };
        if real {
            field.symmetrize();
        }
        Ok(field)
    }

    pub fn from_real_samples(samples: &[f64], grid: GridSpec) -> Result<Self> {
        let complex: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_physical(&complex, grid, true)
    }

    /// Square frequency cut-off: keeps `|k|_∞ ≤ cutoff`.
    pub fn project(&self, cutoff: f64) -> Self {
        let mut out = self.clone();
        out.project_in_place(cutoff);
        out
    }

    pub fn project_in_place(&mut self, cutoff: f64) {
        if cutoff >= self.grid.degree() as f64 {
            return;
        }
        for (i, c) in self.coeff.iter_mut().enumerate() {
            if norm_inf(&self.grid.wavenumber(i)) as f64 > cutoff {
                *c = Complex64::default();
            }
        }
    }

    /// Re-embeds the field in a grid of another degree, truncating or
    /// zero-padding the spectrum.
    pub fn resize(&self, degree: usize) -> Result<Self> {
        let target = self.grid.with_degree(degree)?;
        if target == self.grid {
            return Ok(self.clone());
        }
        let mut out = Self::zeros(target, self.real);
        for (i, &c) in self.coeff.iter().enumerate() {
            let k = self.grid.wavenumber(i);
            if let Some(j) = target.index_of(&k[..self.grid.dim()]) {
                out.coeff[j] = c;
            }
        }
        Ok(out)
    }

    /// `(Σ_k (1 + |k|²)^s |f̂_k|²)^{1/2}` over the stored modes.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        self.weighted_sq_sum(|k2| (1.0 + k2).powf(s)).sqrt()
    }

    /// `Σ_k w(|k|²) |f̂_k|²` in storage order.
    pub(crate) fn weighted_sq_sum(&self, weight: impl Fn(f64) -> f64) -> f64 {
        self.coeff
            .iter()
            .enumerate()
            .map(|(i, c)| weight(norm_sq(&self.grid.wavenumber(i))) * c.norm_sqr())
            .sum()
    }

    /// Collocation quadrature of `‖f‖_{L^q}`; `q = ∞` gives the largest sample.
    pub fn lebesgue_norm(&self, q: f64) -> Result<f64> {
        if q.is_nan() || q < 1.0 {
            return Err(Error::Domain(format!(
                "Lebesgue exponent must lie in [1, ∞], got {q}"
            )));
        }
        let samples = self.to_physical();
        let modulus = |z: &Complex64| if self.real { z.re.abs() } else { z.norm() };
        if q.is_infinite() {
            return Ok(samples.iter().map(modulus).fold(0.0, f64::max));
        }
        let cell = (2.0 * PI).powi(self.grid.dim() as i32) / self.grid.len() as f64;
        let sum: f64 = samples.iter().map(|z| modulus(z).powf(q)).sum();
        Ok((cell * sum).powf(1.0 / q))
    }

    /// Field norm; product kinds are rejected.
    pub fn norm(&self, kind: NormKind) -> Result<f64> {
        match kind {
            NormKind::Sobolev(s) => Ok(self.sobolev_norm(s)),
            NormKind::Lebesgue(q) => self.lebesgue_norm(q),
            other => Err(Error::Domain(format!(
                "{other:?} is a norm on states, not fields"
            ))),
        }
    }

    /// Pointwise power `f^α` mapped back to degree `K`.
    ///
    /// Without dealiasing this is `I_K(f^α)`: sample, raise, interpolate, so
    /// modes above `K` alias onto the grid. With dealiasing the product is
    /// formed on a grid of degree `⌈(α+1)K/2⌉` and truncated, giving the exact
    /// projection `π_K(f^α)`.
    pub fn pointwise_power(&self, alpha: u32, dealias: bool) -> Self {
        if dealias {
            let padded_degree = ((alpha as usize + 1) * self.grid.degree()).div_ceil(2);
            let padded = self
                .resize(padded_degree)
                .expect("padded degree is positive");
            padded
                .power_on_grid(alpha)
                .resize(self.grid.degree())
                .expect("degree is positive")
        } else {
            self.power_on_grid(alpha)
        }
    }

    fn power_on_grid(&self, alpha: u32) -> Self {
        if self.real {
            let samples: Vec<f64> = self
                .to_physical_real()
                .into_iter()
                .map(|x| x.powi(alpha as i32))
                .collect();
            Self::from_real_samples(&samples, self.grid).expect("grid sized samples")
        } else {
            let samples: Vec<Complex64> = self
                .to_physical()
                .into_iter()
                .map(|z| z.powi(alpha as i32))
                .collect();
            Self::from_physical(&samples, self.grid, false).expect("grid sized samples")
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.scale_in_place(factor);
        out
    }

    pub fn scale_in_place(&mut self, factor: f64) {
        for c in &mut self.coeff {
            *c *= factor;
        }
    }

    /// `self += a · other`.
    pub fn axpy(&mut self, a: f64, other: &TorusField) {
        assert_eq!(self.grid, other.grid, "axpy on mismatched grids");
        for (c, o) in self.coeff.iter_mut().zip(&other.coeff) {
            *c += o * a;
        }
        self.real &= other.real;
    }

    /// Applies a per-mode multiplier `m(|k|², |k|_∞)`.
    pub(crate) fn map_modes(&mut self, mut f: impl FnMut(&Wavenumber, Complex64) -> Complex64) {
        for (i, c) in self.coeff.iter_mut().enumerate() {
            *c = f(&self.grid.wavenumber(i), *c);
        }
    }
}

impl Add for &TorusField {
    type Output = TorusField;

    fn add(self, rhs: &TorusField) -> TorusField {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub for &TorusField {
    type Output = TorusField;

    fn sub(self, rhs: &TorusField) -> TorusField {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl Mul<f64> for &TorusField {
    type Output = TorusField;

    fn mul(self, rhs: f64) -> TorusField {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(d: usize, k: usize) -> GridSpec {
        GridSpec::new(d, k).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn constant_field_samples_to_one() {
        for d in 1..=3 {
            let f = TorusField::constant(grid(d, 2), 1.0);
            for s in f.to_physical() {
                assert!(close(s, Complex64::new(1.0, 0.0), 1e-14));
            }
        }
    }

    #[test]
    fn single_mode_samples() {
        let g = grid(1, 1);
        let f = TorusField::plane_wave(g, &[1], Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(f.coefficient(&[1]), Complex64::new((2.0 * PI).sqrt(), 0.0));
        let samples = f.to_physical();
        // storage index i ↔ node 2πi/3; j ∈ {-1, 0, 1} sits at i ∈ {2, 0, 1}
        for (i, j) in [(2usize, -1i64), (0, 0), (1, 1)] {
            let x = 2.0 * PI * j as f64 / 3.0;
            assert!(close(samples[i], Complex64::from_polar(1.0, x), 1e-14));
        }
    }

    #[test]
    fn from_physical_exact_and_aliased() {
        let g = grid(1, 1);
        let nodes: Vec<f64> = (0..3).map(|i| 2.0 * PI * i as f64 / 3.0).collect();
        let e1: Vec<Complex64> = nodes
            .iter()
            .map(|&x| Complex64::from_polar(1.0, x))
            .collect();
        let f = TorusField::from_physical(&e1, g, false).unwrap();
        let root = (2.0 * PI).sqrt();
        assert!(close(f.coefficient(&[1]), Complex64::new(root, 0.0), 1e-14));
        assert!(close(f.coefficient(&[0]), Complex64::default(), 1e-14));
        assert!(close(f.coefficient(&[-1]), Complex64::default(), 1e-14));

        let e2: Vec<Complex64> = nodes
            .iter()
            .map(|&x| Complex64::from_polar(1.0, 2.0 * x))
            .collect();
        let f = TorusField::from_physical(&e2, g, false).unwrap();
        assert!(close(
            f.coefficient(&[-1]),
            Complex64::new(root, 0.0),
            1e-14
        ));
        assert!(close(f.coefficient(&[1]), Complex64::default(), 1e-14));
    }

    #[test]
    fn from_physical_rejects_wrong_length() {
        let err = TorusField::from_physical(&[Complex64::default(); 4], grid(1, 1), false);
        assert!(matches!(err, Err(Error::Shape(_))));
    }

    #[test]
    fn projection_examples() {
        let g = grid(3, 3);
        let f = TorusField::cosine(g, &[2, 0, 0], 1.0).unwrap();
        assert_eq!(f.project(3.0), f);
        assert!(f
            .project(1.0)
            .coefficients()
            .iter()
            .all(|c| c.norm() == 0.0));
        assert_eq!(f.project(2.5), f);
    }

    #[test]
    fn sobolev_norm_examples() {
        let g = grid(3, 2);
        let scale = (2.0 * PI).powf(1.5);
        let one = TorusField::constant(g, 1.0);
        for s in [-1.0, 0.0, 0.5, 1.0, 3.0] {
            assert!((one.sobolev_norm(s) - scale).abs() < 1e-12 * scale);
        }
        assert!((scale - 15.749609945722419).abs() < 1e-12);
        let wave = TorusField::plane_wave(g, &[1, 0, 0], Complex64::new(1.0, 0.0)).unwrap();
        assert!((wave.sobolev_norm(1.0) - 2f64.sqrt() * scale).abs() < 1e-12 * scale);
    }

    #[test]
    fn lebesgue_norm_examples() {
        for d in 1..=3 {
            let f = TorusField::constant(grid(d, 2), -1.5);
            for q in [1.0, 2.0, 3.5] {
                let expect = 1.5 * (2.0 * PI).powf(d as f64 / q);
                assert!((f.lebesgue_norm(q).unwrap() - expect).abs() < 1e-12 * expect);
            }
            assert!((f.lebesgue_norm(f64::INFINITY).unwrap() - 1.5).abs() < 1e-14);
        }
        let e = TorusField::plane_wave(grid(1, 3), &[1], Complex64::new(1.0, 0.0)).unwrap();
        assert!((e.lebesgue_norm(f64::INFINITY).unwrap() - 1.0).abs() < 1e-14);
        assert!(e.lebesgue_norm(0.5).is_err());
    }

    #[test]
    fn power_of_constant() {
        let g = grid(2, 3);
        let c = TorusField::constant(g, 1.3);
        for alpha in 2..=5 {
            for dealias in [false, true] {
                let p = c.pointwise_power(alpha, dealias);
                let expect = TorusField::constant(g, 1.3f64.powi(alpha as i32));
                for (a, b) in p.coefficients().iter().zip(expect.coefficients()) {
                    assert!((a - b).norm() < 1e-12 * expect.coefficients()[0].norm());
                }
            }
        }
    }

    #[test]
    fn cosine_squared_dealiased_and_aliased() {
        let g = grid(1, 1);
        let cos = TorusField::cosine(g, &[1], 1.0).unwrap();
        let root = (2.0 * PI).sqrt();

        // exact projection of (1 + cos 2x)/2 onto degree 1 is 1/2
        let exact = cos.pointwise_power(2, true);
        assert!(close(
            exact.coefficient(&[0]),
            Complex64::new(0.5 * root, 0.0),
            1e-14
        ));
        assert!(exact.coefficient(&[1]).norm() < 1e-14);

        // 3-point interpolation: cos² at nodes {0, 2π/3, -2π/3} is {1, 1/4, 1/4};
        // DFT gives mean 1/2 and the cos 2x mode folded onto k = ∓1 with weight 1/4
        let aliased = cos.pointwise_power(2, false);
        let samples = [1.0, 0.25, 0.25];
        let oracle = |k: i64| -> Complex64 {
            let s: Complex64 = (0..3)
                .map(|j| Complex64::from_polar(samples[j], -2.0 * PI * (k * j as i64) as f64 / 3.0))
                .sum();
            s * root / 3.0
        };
        for k in -1..=1 {
            assert!(close(aliased.coefficient(&[k]), oracle(k), 1e-14));
        }
        assert!(close(
            aliased.coefficient(&[1]),
            Complex64::new(0.25 * root, 0.0),
            1e-14
        ));
        assert!(close(
            aliased.coefficient(&[0]),
            Complex64::new(0.5 * root, 0.0),
            1e-14
        ));
    }

    #[test]
    fn symmetrize_makes_hermitian() {
        let g = grid(2, 2);
        let mut f =
            TorusField::from_fn(g, false, |k| Complex64::new(k[0] as f64, (k[1] + 1) as f64));
        assert!(f.hermitian_defect() > 0.1);
        f.symmetrize();
        assert!(f.hermitian_defect() < 1e-15);
        assert!(f.is_real());
    }

    #[test]
    fn resize_pads_and_truncates() {
        let g = grid(2, 2);
        let f = TorusField::cosine(g, &[2, -1], 1.0).unwrap();
        let big = f.resize(5).unwrap();
        assert_eq!(big.coefficient(&[2, -1]), f.coefficient(&[2, -1]));
        assert_eq!(big.resize(2).unwrap(), f);
        assert_eq!(f.resize(1).unwrap().sobolev_norm(0.0), 0.0);
    }
}
