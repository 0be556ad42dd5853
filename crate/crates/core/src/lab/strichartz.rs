//! Discrete Strichartz norms `‖π_N u‖_{ℓ^p_τ L^q}` of a trajectory.

use crate::error::{Error, Result};
use crate::integrators::Observer;
use crate::wave::StateVector;

const TOL: f64 = 1e-12;

/// Checks that `(p, q)` is admissible for the wave equation on the 3-torus
/// with one derivative of loss: `p ∈ (2, ∞]`, `q ∈ [2, ∞)`,
/// `1/p + 1/q ≤ 1/2` and `1/p + 3/q = 1/2`.
pub fn check_admissible(p: f64, q: f64) -> Result<()> {
    let bad = || Error::Admissibility { p, q };
    if p.is_nan() || q.is_nan() || !(p > 2.0) || !(q >= 2.0) || q.is_infinite() {
        return Err(bad());
    }
    let ip = 1.0 / p;
    let iq = 1.0 / q;
    if ip + iq > 0.5 + TOL || (ip + 3.0 * iq - 0.5).abs() > TOL {
        return Err(bad());
    }
    Ok(())
}

/// Streams `τ Σ_n ‖π_N u(t_n)‖^p_{L^q}` over observed states.
#[derive(Debug, Clone)]
pub struct StrichartzAccumulator {
    p: f64,
    q: f64,
    tau: f64,
    cutoff: f64,
    acc: f64,
    count: usize,
}

impl StrichartzAccumulator {
    pub fn new(p: f64, q: f64, tau: f64, cutoff: f64) -> Result<Self> {
        check_admissible(p, q)?;
        Ok(Self {
            p,
            q,
            tau,
            cutoff,
            acc: 0.0,
            count: 0,
        })
    }

    pub fn push(&mut self, state: &StateVector) {
        let norm = state
            .u()
            .project(self.cutoff)
            .lebesgue_norm(self.q)
            .expect("admissible q is at least 2");
        if self.p.is_infinite() {
            self.acc = self.acc.max(norm);
        } else {
            self.acc += self.tau * norm.powf(self.p);
        }
        self.count += 1;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn value(&self) -> f64 {
        if self.p.is_infinite() {
            self.acc
        } else {
            self.acc.powf(1.0 / self.p)
        }
    }
}

impl Observer for StrichartzAccumulator {
    fn observe(&mut self, _step: usize, _time: f64, state: &StateVector) {
        self.push(state);
    }
}

/// `(τ Σ_n ‖π_cutoff u(t_n)‖^p_{L^q})^{1/p}` over every state given; `p = ∞`
/// takes the maximum.
pub fn strichartz_norm(
    trajectory: &[StateVector],
    tau: f64,
    p: f64,
    q: f64,
    cutoff: f64,
) -> Result<f64> {
    let mut acc = StrichartzAccumulator::new(p, q, tau, cutoff)?;
    for state in trajectory {
        acc.push(state);
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{GridSpec, TorusField};

    #[test]
    fn admissibility() {
        assert!(check_admissible(6.0, 9.0).is_ok());
        assert!(check_admissible(f64::INFINITY, 6.0).is_ok());
        assert!(check_admissible(4.0, 12.0).is_ok());
        assert!(check_admissible(2.0, f64::INFINITY).is_err());
        assert!(check_admissible(6.0, 8.0).is_err());
        assert!(check_admissible(3.0, 9.0).is_err());
        assert!(check_admissible(2.5, 30.0).is_ok());
        assert!(check_admissible(f64::NAN, 9.0).is_err());
    }

    #[test]
    fn constant_trajectory() {
        let grid = GridSpec::new(3, 3).unwrap();
        let u = TorusField::cosine(grid, &[1, 2, 0], 0.4).unwrap();
        let u = &u + &TorusField::cosine(grid, &[3, 0, 0], 0.2).unwrap();
        let s = StateVector::new(u.clone(), TorusField::zeros(grid, true)).unwrap();
        let traj = vec![s; 5];
        let tau = 0.05;
        let got = strichartz_norm(&traj, tau, 6.0, 9.0, 2.0).unwrap();
        let expect = (tau * 5.0f64).powf(1.0 / 6.0) * u.project(2.0).lebesgue_norm(9.0).unwrap();
        assert!((got - expect).abs() < 1e-13 * expect);
        assert!(strichartz_norm(&traj, tau, 2.0, f64::INFINITY, 2.0).is_err());
    }
}
