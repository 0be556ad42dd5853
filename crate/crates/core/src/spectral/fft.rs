//! Separable multi-dimensional FFT over odd-sized periodic grids.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use super::grid::GridSpec;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(len, direction))
}

/// Unnormalised transform along every axis in place.
///
/// `Forward` computes `Σ_j a_j e^{-2πi jk/M}`, `Inverse` the same sum with
/// `e^{+2πi jk/M}`.
pub(crate) fn transform(data: &mut [Complex64], grid: GridSpec, direction: FftDirection) {
    debug_assert_eq!(data.len(), grid.len());
    let m = grid.points_per_axis();
    let fft = plan(m, direction);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];

    // last axis: contiguous lines, batched
    fft.process_with_scratch(data, &mut scratch);

    let mut line = vec![Complex64::default(); m];
    for axis in (0..grid.dim() - 1).rev() {
        let stride = m.pow((grid.dim() - 1 - axis) as u32);
        let block = stride * m;
        for base_block in (0..data.len()).step_by(block) {
            for inner in 0..stride {
                let base = base_block + inner;
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + j * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, value) in line.iter().enumerate() {
                    data[base + j * stride] = *value;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn naive(data: &[Complex64], grid: GridSpec, sign: f64) -> Vec<Complex64> {
        let m = grid.points_per_axis();
        let mut out = vec![Complex64::default(); data.len()];
        for (o, slot) in out.iter_mut().enumerate() {
            let ko = grid.wavenumber(o);
            for (i, &a) in data.iter().enumerate() {
                let ki = grid.wavenumber(i);
                let phase: i64 = (0..3).map(|ax| ko[ax] * ki[ax]).sum();
                *slot += a * Complex64::from_polar(1.0, sign * 2.0 * PI * phase as f64 / m as f64);
            }
        }
        out
    }

    #[test]
    fn matches_direct_sum_in_three_dimensions() {
        let grid = GridSpec::new(3, 2).unwrap();
        let data: Vec<Complex64> = (0..grid.len())
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        for (dir, sign) in [(FftDirection::Forward, -1.0), (FftDirection::Inverse, 1.0)] {
            let mut fast = data.clone();
            transform(&mut fast, grid, dir);
            let slow = naive(&data, grid, sign);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
