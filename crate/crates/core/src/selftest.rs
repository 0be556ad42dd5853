//! Quick invariant checks run by `strang-nlw selftest`.

use num_complex::Complex64;

use crate::initial_data::random_rough;
use crate::integrators::{
    evolve, high_freq_shortcut, quadratic_energy, ProblemConfig, SchemeConfig, Stepper,
};
use crate::spectral::{GridSpec, TorusField};
use crate::wave::{apply_a, apply_filter, apply_group, apply_psi, psi_operator_bound, StateVector};

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn() -> Result<String, String>;

/// Field with `O(1)` random coefficients, real.
fn flat_random(grid: GridSpec, seed: u64) -> TorusField {
    random_rough(grid, -(grid.dim() as f64) / 2.0, 0.0, seed)
}

fn random_state(grid: GridSpec, seed: u64) -> StateVector {
    StateVector::new(flat_random(grid, 2 * seed), flat_random(grid, 2 * seed + 1))
        .expect("same grid")
}

fn max_diff(a: &StateVector, b: &StateVector) -> f64 {
    let d = a - b;
    d.u()
        .coefficients()
        .iter()
        .chain(d.v().coefficients())
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

fn max_abs(a: &StateVector) -> f64 {
    a.u()
        .coefficients()
        .iter()
        .chain(a.v().coefficients())
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

fn ensure(ok: bool, value: f64, bound: f64) -> Result<String, String> {
    let text = format!("{value:.3e} (bound {bound:.1e})");
    if ok {
        Ok(text)
    } else {
        Err(text)
    }
}

fn round_trip() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for d in 1..=3 {
        for k in [1, 4, 9] {
            let grid = GridSpec::new(d, k).unwrap();
            let f = flat_random(grid, (d * 100 + k) as u64);
            let back = TorusField::from_physical(&f.to_physical(), grid, true).unwrap();
            let scale = f
                .coefficients()
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
            for (a, b) in f.coefficients().iter().zip(back.coefficients()) {
                worst = worst.max((a - b).norm() / scale);
            }
        }
    }
    ensure(worst < 1e-13, worst, 1e-13)
}

fn parseval() -> Result<String, String> {
    let grid = GridSpec::new(3, 5).unwrap();
    let f = flat_random(grid, 3);
    let spectral = f.sobolev_norm(0.0);
    let physical = f.lebesgue_norm(2.0).unwrap();
    let rel = (spectral - physical).abs() / spectral;
    ensure(rel < 1e-12, rel, 1e-12)
}

fn aliasing() -> Result<String, String> {
    let grid = GridSpec::new(1, 1).unwrap();
    let samples: Vec<Complex64> = (0..3)
        .map(|i| Complex64::from_polar(1.0, 2.0 * 2.0 * std::f64::consts::PI * i as f64 / 3.0))
        .collect();
    let f = TorusField::from_physical(&samples, grid, false).unwrap();
    let root = (2.0 * std::f64::consts::PI).sqrt();
    let err = (f.coefficient(&[-1]) - root).norm()
        + f.coefficient(&[1]).norm()
        + f.coefficient(&[0]).norm();
    ensure(err < 1e-13, err, 1e-13)
}

fn projection_inequalities() -> Result<String, String> {
    let mut violations = 0;
    for seed in 0..10u64 {
        for k in [2, 4, 8] {
            let grid = GridSpec::new(3, k).unwrap();
            let f = flat_random(grid, seed * 31 + k as u64);
            for n in 1..k {
                let n = n as f64;
                for (gamma, r) in [(0.0, 1.0), (-1.0, 0.0), (-1.0, 1.0)] {
                    let tail = &f - &f.project(n);
                    if tail.sobolev_norm(gamma) > n.powf(gamma - r) * f.sobolev_norm(r) {
                        violations += 1;
                    }
                }
                for s in [0.5, 1.0] {
                    if f.project(n).sobolev_norm(s + 1.0) > (2.0 * n).powf(s) * f.sobolev_norm(1.0)
                    {
                        violations += 1;
                    }
                }
            }
        }
    }
    if violations == 0 {
        Ok("0 violations".into())
    } else {
        Err(format!("{violations} violations"))
    }
}

fn group_law() -> Result<String, String> {
    let grid = GridSpec::new(3, 6).unwrap();
    let u = random_state(grid, 9);
    let scale = max_abs(&u);
    let composed = apply_group(&apply_group(&u, 0.37), -0.81);
    let direct = apply_group(&u, 0.37 - 0.81);
    let back = apply_group(&apply_group(&u, 0.6), -0.6);
    let err = max_diff(&composed, &direct).max(max_diff(&back, &u)) / scale;
    ensure(err < 1e-12, err, 1e-12)
}

fn mode_energy() -> Result<String, String> {
    let grid = GridSpec::new(2, 8).unwrap();
    let u = random_state(grid, 5);
    let moved = apply_group(&u, 0.93);
    let mut worst: f64 = 0.0;
    for i in 1..grid.len() {
        let k2 = crate::spectral::norm_sq(&grid.wavenumber(i));
        let e0 = k2 * u.u().coefficients()[i].norm_sqr() + u.v().coefficients()[i].norm_sqr();
        let e1 =
            k2 * moved.u().coefficients()[i].norm_sqr() + moved.v().coefficients()[i].norm_sqr();
        if e0 > 0.0 {
            worst = worst.max((e1 - e0).abs() / e0);
        }
    }
    ensure(worst < 1e-12, worst, 1e-12)
}

fn cancellation_identity() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for (d, k) in [(1, 300), (3, 9)] {
        let grid = GridSpec::new(d, k).unwrap();
        for tau in [1.0f64 / 8.0, 1.0 / 37.0, 1.0 / 256.0] {
            let u = random_state(grid, (d * 1000 + (1.0 / tau) as usize) as u64);
            let lhs = apply_a(&apply_filter(&u, (1.0 / tau).floor())).scale(tau);
            let psi = apply_psi(&u, tau).unwrap();
            let rhs = &apply_group(&psi, tau) - &psi;
            let scale = max_abs(&lhs);
            if scale > 0.0 {
                worst = worst.max(max_diff(&lhs, &rhs) / scale);
            }
        }
    }
    ensure(worst < 1e-12, worst, 1e-12)
}

fn psi_bound() -> Result<String, String> {
    let grid = GridSpec::new(3, 16).unwrap();
    let worst = (3..=10)
        .map(|j| psi_operator_bound(grid, 2f64.powi(-j)).unwrap())
        .fold(0.0, f64::max);
    ensure(worst <= 3.0, worst, 3.0)
}

fn realness_and_shortcut() -> Result<String, String> {
    let p = ProblemConfig::new(3, 1, 1).unwrap();
    let cfg = SchemeConfig::new(0.125, 2.0, 32);
    let grid = GridSpec::new(1, 32).unwrap();
    let u0 = random_state(grid, 77).scale(0.5);
    let end = evolve(&u0, &p, &cfg, &mut []).map_err(|e| e.to_string())?;
    let band = high_freq_shortcut(&u0, 16, &p, &cfg).map_err(|e| e.to_string())?;
    let evolved_band = &end - &end.project(24.0);
    let rel = max_diff(&band, &evolved_band) / max_abs(&band);
    let herm = end.u().hermitian_defect().max(end.v().hermitian_defect());
    ensure(rel < 1e-11 && herm < 1e-12, rel.max(herm), 1e-11)
}

fn linear_energy() -> Result<String, String> {
    let p = ProblemConfig::new(3, 1, 2).unwrap();
    let cfg = SchemeConfig::new(0.01, 0.5, 8);
    let stepper = Stepper::new(p, cfg).unwrap().without_nonlinearity();
    let u = random_state(stepper.grid(), 4);
    let mut s = u.clone();
    for n in 0..50 {
        s = stepper.step(&s, n).unwrap();
    }
    let rel = (quadratic_energy(&s) - quadratic_energy(&u)).abs() / quadratic_energy(&u);
    ensure(rel < 1e-12, rel, 1e-12)
}

const CHECKS: [(&str, Check); 10] = [
    ("transform round trip", round_trip),
    ("Parseval", parseval),
    ("interpolation aliasing k=2 -> k=-1", aliasing),
    (
        "projection and Bernstein inequalities",
        projection_inequalities,
    ),
    ("group law and reversibility", group_law),
    ("per-mode linear energy", mode_energy),
    ("summation-by-parts identity", cancellation_identity),
    ("Psi uniform bound", psi_bound),
    (
        "realness and high-frequency shortcut",
        realness_and_shortcut,
    ),
    ("linear energy conservation", linear_energy),
];

pub fn run_selftest() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|&(name, check)| match check() {
            Ok(detail) => CheckOutcome {
                name,
                passed: true,
                detail,
            },
            Err(detail) => CheckOutcome {
                name,
                passed: false,
                detail,
            },
        })
        .collect()
}
