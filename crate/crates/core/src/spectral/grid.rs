//! Collocation grids on the torus `[-π, π]^d`.
//!
//! A grid of spectral degree `K` carries `M = 2K + 1` points per axis and the
//! wavenumbers `k ∈ {-K, …, K}^d`. Coefficient and sample arrays share one
//! row-major layout (last axis fastest) in FFT-natural order: the array index
//! `i ∈ 0..M` on an axis stands for the wavenumber `i` when `i ≤ K` and `i - M`
//! otherwise. Samples use the same index for the node `x = 2πi/M`, which is the
//! node `2πj/M` with `j = i` or `j = i - M` modulo `2π`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Wavenumber padded to three components; unused axes are zero.
pub type Wavenumber = [i64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridSpec {
    dim: usize,
    degree: usize,
}

impl GridSpec {
    pub fn new(dim: usize, degree: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Config(format!(
                "dimension must be 1, 2 or 3, got {dim}"
            )));
        }
        if degree == 0 {
            return Err(Error::Config("spectral degree must be at least 1".into()));
        }
        Ok(Self { dim, degree })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Spectral degree `K`, the largest stored `|k|_∞`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `M = 2K + 1`.
    pub fn points_per_axis(&self) -> usize {
        2 * self.degree + 1
    }

    /// Total number of modes (and of collocation nodes), `M^d`.
    pub fn len(&self) -> usize {
        self.points_per_axis().pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Same dimension, different degree.
    pub fn with_degree(&self, degree: usize) -> Result<Self> {
        Self::new(self.dim, degree)
    }

    /// Distance between neighbouring nodes when the torus is identified with
    /// the unit cube, `h = 1/M`.
    pub fn unit_cube_spacing(&self) -> f64 {
        1.0 / self.points_per_axis() as f64
    }

    #[inline]
    pub(crate) fn axis_wavenumber(&self, i: usize) -> i64 {
        if i <= self.degree {
            i as i64
        } else {
            i as i64 - self.points_per_axis() as i64
        }
    }

    #[inline]
    pub(crate) fn axis_index(&self, k: i64) -> usize {
        if k >= 0 {
            k as usize
        } else {
            (k + self.points_per_axis() as i64) as usize
        }
    }

    /// Wavenumber stored at a flat array index.
    #[inline]
    pub fn wavenumber(&self, index: usize) -> Wavenumber {
        let m = self.points_per_axis();
        let mut k = [0i64; 3];
        let mut rest = index;
        for axis in (0..self.dim).rev() {
            k[axis] = self.axis_wavenumber(rest % m);
            rest /= m;
        }
        k
    }

    /// Flat array index of a wavenumber, or `None` if it is not stored.
    pub fn index_of(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.dim {
            return None;
        }
        let m = self.points_per_axis();
        let mut index = 0;
        for &ka in k {
            if ka.unsigned_abs() as usize > self.degree {
                return None;
            }
            index = index * m + self.axis_index(ka);
        }
        Some(index)
    }

    /// Flat index of `-k` for the mode stored at `index`.
    #[inline]
    pub(crate) fn mirror_index(&self, index: usize) -> usize {
        let m = self.points_per_axis();
        let mut out = 0;
        let mut scale = 1;
        let mut rest = index;
        for _ in 0..self.dim {
            let i = rest % m;
            rest /= m;
            let mirrored = if i == 0 { 0 } else { m - i };
            out += mirrored * scale;
            scale *= m;
        }
        out
    }

    /// Flat indices in k-lexicographic order: every axis runs from `-K` to
    /// `K`, last axis fastest.
    pub fn lexicographic_indices(&self) -> Vec<usize> {
        let m = self.points_per_axis();
        let k = self.degree as i64;
        let mut out = Vec::with_capacity(self.len());
        let mut current = vec![-k; self.dim];
        loop {
            let mut index = 0;
            for &ka in &current {
                index = index * m + self.axis_index(ka);
            }
            out.push(index);
            // odometer increment
            let mut axis = self.dim;
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                if current[axis] < k {
                    current[axis] += 1;
                    break;
                }
                current[axis] = -k;
            }
        }
    }
}

#[inline]
pub fn norm_sq(k: &Wavenumber) -> f64 {
    (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64
}

#[inline]
pub fn norm_inf(k: &Wavenumber) -> u64 {
    k.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
}

/// `true` if `-k` comes after `k` in lexicographic order, i.e. the first
/// non-zero component of `k` is positive.
#[inline]
pub(crate) fn is_positive_half(k: &Wavenumber) -> bool {
    k.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
}
