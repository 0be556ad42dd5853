//! Least-squares order fits `log err ≈ c + p log τ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square of the log residuals.
    pub residual: f64,
    pub points: usize,
}

/// Fits a power law through the pairs with positive, finite error.
pub fn fit_power_law(taus: &[f64], errors: &[f64]) -> Result<OrderFit> {
    let points: Vec<(f64, f64)> = taus
        .iter()
        .zip(errors)
        .filter(|&(&t, &e)| t > 0.0 && e > 0.0 && e.is_finite())
        .map(|(&t, &e)| (t.ln(), e.ln()))
        .collect();
    let n = points.len();
    if n < 2 {
        return Err(Error::Fit(n));
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit(1));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Ok(OrderFit {
        slope,
        intercept,
        residual: (ss / nf).sqrt(),
        points: n,
    })
}

/// Fits over the `window` largest step sizes only.
pub fn fit_window(taus: &[f64], errors: &[f64], window: usize) -> Result<OrderFit> {
    let mut pairs: Vec<(f64, f64)> = taus.iter().copied().zip(errors.iter().copied()).collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    pairs.truncate(window);
    let (t, e): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    fit_power_law(&t, &e)
}
