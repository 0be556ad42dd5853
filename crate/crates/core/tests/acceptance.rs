//! One line per acceptance criterion; exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::thread;

use num_complex::Complex64;
use strang_nlw::initial_data::{deterministic_rough, random_rough};
use strang_nlw::integrators::{evolve, high_freq_shortcut, strang_step};
use strang_nlw::lab::{fit_power_law, run_study, ConvergenceReport, ErrorNorm, StudyConfig};
use strang_nlw::spectral::norm_sq;
use strang_nlw::wave::{apply_a, apply_filter, apply_group, apply_psi, GroupBlock};
use strang_nlw::{
    make_initial_state, GridSpec, InitialDataSpec, ProblemConfig, SchemeConfig, StateVector,
    TorusField,
};

struct Outcome {
    id: usize,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn outcome(id: usize, title: &'static str, passed: bool, detail: String) -> Outcome {
    Outcome {
        id,
        title,
        passed,
        detail,
    }
}

fn flat(grid: GridSpec, seed: u64) -> TorusField {
    random_rough(grid, -(grid.dim() as f64) / 2.0, 0.0, seed)
}

fn random_state(grid: GridSpec, seed: u64) -> StateVector {
    StateVector::new(flat(grid, 2 * seed), flat(grid, 2 * seed + 1)).unwrap()
}

fn max_coeff(s: &StateVector) -> f64 {
    s.u()
        .coefficients()
        .iter()
        .chain(s.v().coefficients())
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

fn dyadic(from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|j| 0.5f64.powi(j)).collect()
}

fn order_study(alpha: u32, tau_ref: f64, taus: Vec<f64>) -> ConvergenceReport {
    let mut cfg = StudyConfig::new(ProblemConfig::new(alpha, 1, 3).unwrap(), vec![16], taus);
    cfg.tau_ref = tau_ref;
    cfg.horizon = 0.25;
    run_study(&cfg).expect("study runs")
}

fn slope(report: &ConvergenceReport, norm: ErrorNorm) -> f64 {
    report.fit_for(16, norm).map_or(f64::NAN, |f| f.slope)
}

fn within(x: f64, lo: f64, hi: f64) -> bool {
    (lo..=hi).contains(&x)
}

fn order_criterion(
    id: usize,
    title: &'static str,
    report: &ConvergenceReport,
    l2: (f64, f64),
    h1: Option<(f64, f64)>,
) -> Outcome {
    let a = slope(report, ErrorNorm::L2Hm1);
    let b = slope(report, ErrorNorm::H1L2);
    let mut passed = within(a, l2.0, l2.1);
    let mut detail = format!("L2xH-1 order {a:.3} (want [{}, {}])", l2.0, l2.1);
    if let Some((lo, hi)) = h1 {
        passed &= within(b, lo, hi);
        detail += &format!(", H1xL2 order {b:.3} (want [{lo}, {hi}])");
    } else {
        detail += &format!(", H1xL2 order {b:.3} (not asserted)");
    }
    outcome(id, title, passed, detail)
}

fn reference_convergence(coarse: &ConvergenceReport, fine: &ConvergenceReport) -> Outcome {
    let mut worst: f64 = 0.0;
    for (a, b) in coarse.rows.iter().zip(&fine.rows).take(3) {
        for (x, y) in [(a.err_l2_hm1, b.err_l2_hm1), (a.err_h1_l2, b.err_h1_l2)] {
            worst = worst.max((x - y).abs() / y);
        }
    }
    outcome(
        10,
        "halving tau_ref moves the three largest-tau rows by < 1%",
        worst < 0.01,
        format!("largest relative change {worst:.3e}"),
    )
}

fn magnitude() -> Outcome {
    let report = order_study(3, 0.5f64.powi(12), vec![0.125]);
    let err = report.rows[0].err_l2_hm1;
    let ratio = err / 1.08e-2;
    outcome(
        4,
        "alpha=3, K=16, tau=1/8: L2xH-1 error within a factor 3 of 1.08e-2",
        (1.0 / 3.0..=3.0).contains(&ratio),
        format!("error {err:.4e}, ratio {ratio:.3}"),
    )
}

fn cancellation() -> Outcome {
    let mut worst: f64 = 0.0;
    for (dim, degree) in [(1, 300), (3, 9)] {
        let grid = GridSpec::new(dim, degree).unwrap();
        for tau in [1.0 / 8.0, 1.0 / 37.0, 1.0 / 256.0] {
            for seed in 0..100 {
                let u = random_state(grid, seed);
                let lhs = apply_a(&apply_filter(&u, 1.0 / tau)).scale(tau);
                let psi = apply_psi(&u, tau).unwrap();
                let rhs = &apply_group(&psi, tau) - &psi;
                worst = worst.max(max_coeff(&(&lhs - &rhs)) / max_coeff(&lhs));
            }
        }
    }
    outcome(
        5,
        "summation-by-parts identity on 100 random states",
        worst < 1e-12,
        format!("worst relative defect {worst:.3e}"),
    )
}

fn expm2(m: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mul = |a: [[f64; 2]; 2], b: [[f64; 2]; 2]| {
        [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ]
    };
    let h = 0.5f64.powi(10);
    let a = [[m[0][0] * h, m[0][1] * h], [m[1][0] * h, m[1][1] * h]];
    let mut term = [[1.0, 0.0], [0.0, 1.0]];
    let mut sum = term;
    for n in 1..=20 {
        term = mul(term, a).map(|row| row.map(|x| x / n as f64));
        for i in 0..2 {
            for j in 0..2 {
                sum[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..10 {
        sum = mul(sum, sum);
    }
    sum
}

fn linear_flow() -> Outcome {
    let grid = GridSpec::new(3, 7).unwrap();
    let mut group: f64 = 0.0;
    let mut energy: f64 = 0.0;
    for seed in 0..5 {
        let u = random_state(grid, 300 + seed);
        let scale = max_coeff(&u);
        let composed = apply_group(&apply_group(&u, 0.37), -1.21);
        group = group.max(max_coeff(&(&composed - &apply_group(&u, 0.37 - 1.21))) / scale);
        let moved = apply_group(&u, 2.3);
        group = group.max(max_coeff(&(&apply_group(&moved, -2.3) - &u)) / scale);
        for i in 0..grid.len() {
            let k2 = norm_sq(&grid.wavenumber(i));
            if k2 == 0.0 {
                continue;
            }
            let e = |s: &StateVector| {
                k2 * s.u().coefficients()[i].norm_sqr() + s.v().coefficients()[i].norm_sqr()
            };
            energy = energy.max((e(&u) - e(&moved)).abs() / e(&u));
        }
    }
    let oracle = expm2([[0.0, 0.7], [-1.4, 0.0]]);
    let b = GroupBlock::new(2.0, 0.7);
    let entries = [[b.cos, b.sin_over_k], [b.minus_k_sin, b.cos]];
    let mut dense: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            dense = dense.max((entries[i][j] - oracle[i][j]).abs());
        }
    }
    outcome(
        6,
        "linear flow: group law, reversibility, per-mode energy, matrix exponential",
        group < 1e-12 && energy < 1e-12 && dense < 1e-12,
        format!("group {group:.2e}, energy {energy:.2e}, expm {dense:.2e}"),
    )
}

fn projection_bernstein() -> Outcome {
    let mut violations = 0;
    let mut checks = 0;
    for seed in 0..50u64 {
        for degree in [2usize, 4, 8, 16] {
            let f = flat(GridSpec::new(3, degree).unwrap(), 5000 + seed);
            for n in 1..=degree {
                let nf = n as f64;
                let low = f.project(nf);
                let tail = &f - &low;
                for (gamma, r) in [(0.0, 1.0), (-1.0, 0.0), (-1.0, 1.0)] {
                    checks += 1;
                    violations += usize::from(
                        tail.sobolev_norm(gamma) > nf.powf(gamma - r) * f.sobolev_norm(r),
                    );
                    for s in [0.5, 1.0] {
                        checks += 1;
                        violations += usize::from(
                            low.sobolev_norm(s + r) > (2.0 * nf).powf(s) * f.sobolev_norm(r),
                        );
                    }
                }
            }
        }
    }
    outcome(
        7,
        "projection and Bernstein inequalities",
        violations == 0,
        format!("{violations} violations in {checks} checks"),
    )
}

fn interpolation() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in 1..=3 {
        for k in [1, 3, 6] {
            let grid = GridSpec::new(d, k).unwrap();
            let f = flat(grid, (10 * d + k) as u64);
            let back = TorusField::from_real_samples(&f.to_physical_real(), grid).unwrap();
            worst = worst.max((&back - &f).sobolev_norm(0.0) / f.sobolev_norm(0.0));
        }
    }
    let grid = GridSpec::new(1, 1).unwrap();
    let samples: Vec<Complex64> = (0..3)
        .map(|j| Complex64::from_polar(1.0, 4.0 * PI * j as f64 / 3.0) / (2.0 * PI).sqrt())
        .collect();
    let f = TorusField::from_physical(&samples, grid, false).unwrap();
    let alias = (f.coefficient(&[-1]) - 1.0).norm()
        + f.coefficient(&[0]).norm()
        + f.coefficient(&[1]).norm();
    outcome(
        8,
        "interpolation exact on band-limited data; k=2 aliases to k=-1",
        worst < 1e-13 && alias < 1e-13,
        format!("round trip {worst:.2e}, aliasing defect {alias:.2e}"),
    )
}

fn shortcut() -> Outcome {
    let grid = GridSpec::new(3, 32).unwrap();
    let problem = ProblemConfig::new(3, 1, 3).unwrap();
    let start = make_initial_state(&InitialDataSpec::default(), grid).unwrap();
    let cfg = SchemeConfig::new(0.125, 2.0, 32);
    let full = evolve(&start, &problem, &cfg, &mut []).unwrap();
    let band = &full - &full.project(24.0);
    let linear = high_freq_shortcut(&start, 16, &problem, &cfg).unwrap();
    let err = (&band - &linear).h1l2_norm() / band.h1l2_norm();
    outcome(
        9,
        "high band (24, 32] after 16 steps follows the linear group",
        err < 1e-11,
        format!("relative difference {err:.2e}"),
    )
}

fn rough_data() -> Outcome {
    let eps = 1e-4;
    let u = deterministic_rough(GridSpec::new(3, 64).unwrap(), 1.0, eps);
    let ks = [4.0, 8.0, 16.0, 32.0, 64.0];
    let top: Vec<f64> = ks
        .iter()
        .map(|&k| u.project(k).sobolev_norm(1.0 + eps))
        .collect();
    let low: Vec<f64> = ks.iter().map(|&k| u.project(k).sobolev_norm(0.9)).collect();
    let increasing = top.windows(2).all(|w| w[1] > w[0]);
    let last_increment = low[4] - low[3];
    let u32_ = deterministic_rough(GridSpec::new(3, 32).unwrap(), 1.0, eps);
    let ns = [8.0, 16.0, 32.0];
    let l8: Vec<f64> = ns
        .iter()
        .map(|&n| u32_.project(n).lebesgue_norm(8.0).unwrap())
        .collect();
    let growth = fit_power_law(&ns, &l8).map_or(f64::NAN, |f| f.slope);
    outcome(
        11,
        "rough data: H^(1+eps) grows, H^0.9 increments < 1e-3 by K=64, L^8 grows",
        increasing && last_increment < 1e-3 && growth > 0.0,
        format!(
            "H^(1+eps) {top:.4?} (increasing: {increasing}), H^0.9 {low:.4?} (last increment {last_increment:.3e}), L^8 slope {growth:.3}"
        ),
    )
}

fn hand_step() -> Outcome {
    let grid = GridSpec::new(1, 1).unwrap();
    let problem = ProblemConfig::new(3, 1, 1).unwrap();
    let state = StateVector::new(
        TorusField::constant(grid, 1.0),
        TorusField::constant(grid, 0.0),
    )
    .unwrap();
    let out = strang_step(&state, &problem, &SchemeConfig::new(0.5, 0.5, 1)).unwrap();
    let mean = |f: &TorusField| f.coefficient(&[0]).re / (2.0 * PI).sqrt();
    let (u1, v1) = (mean(out.u()), mean(out.v()));
    let err = (u1 - 0.875).abs().max((v1 + 0.22998046875).abs());
    outcome(
        12,
        "Strang hand step (1, 0) -> (0.875, -0.22998046875)",
        err < 1e-14,
        format!("got ({u1}, {v1})"),
    )
}

fn main() -> ExitCode {
    let results: Vec<Outcome> = thread::scope(|scope| {
        let a3 = scope.spawn(|| order_study(3, 0.5f64.powi(10), dyadic(3, 7)));
        let a3_fine = scope.spawn(|| order_study(3, 0.5f64.powi(11), dyadic(3, 7)));
        let a4 = scope.spawn(|| order_study(4, 0.5f64.powi(10), dyadic(3, 7)));
        let a5 = scope.spawn(|| order_study(5, 0.5f64.powi(10), dyadic(3, 7)));
        let c4 = scope.spawn(magnitude);
        let c5 = scope.spawn(cancellation);
        let c7 = scope.spawn(projection_bernstein);
        let c9 = scope.spawn(shortcut);
        let c11 = scope.spawn(rough_data);

        let a3 = a3.join().unwrap();
        let a3_fine = a3_fine.join().unwrap();
        let a4 = a4.join().unwrap();
        let a5 = a5.join().unwrap();
        vec![
            order_criterion(
                1,
                "temporal order, alpha=3",
                &a3,
                (1.75, 2.25),
                Some((0.8, 1.4)),
            ),
            order_criterion(
                2,
                "temporal order, alpha=4",
                &a4,
                (1.3, 1.7),
                Some((0.35, 0.75)),
            ),
            order_criterion(3, "temporal order, alpha=5", &a5, (0.8, 1.2), None),
            c4.join().unwrap(),
            c5.join().unwrap(),
            linear_flow(),
            c7.join().unwrap(),
            interpolation(),
            c9.join().unwrap(),
            reference_convergence(&a3, &a3_fine),
            c11.join().unwrap(),
            hand_step(),
        ]
    });

    let mut failed = 0;
    for r in &results {
        println!(
            "{} [{:>2}] {}: {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.title,
            r.detail
        );
        failed += usize::from(!r.passed);
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
