//! Temporal convergence studies against a fine-step reference run.
//!
//! For each spectral degree the reference run at `τ_ref` and one coarse run per
//! step size advance in lockstep: after reference step `j`, every coarse run
//! with `τ = m·τ_ref` and `m | j` takes one step and is compared at the common
//! time `j·τ_ref`. Only the current states are kept.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::initial_data::{make_initial_state, InitialDataSpec};
use crate::integrators::{ProblemConfig, Propagator, Scheme, SchemeConfig, Stepper};
use crate::lab::fit::{fit_window, OrderFit};
use crate::spectral::{GridSpec, NormKind};
use crate::wave::StateVector;

/// The fixed 20-point preset step grid, as multiples of `2^-12`.
const PRESET_MULTIPLES: [u32; 20] = [
    512, 411, 330, 266, 213, 171, 138, 111, 89, 71, 57, 46, 37, 30, 24, 19, 15, 12, 10, 8,
];

/// The 20-point near-geometric grid from `1/8` down to `1/512` (all multiples
/// of `2^-12`).
pub fn preset_tau_grid() -> Vec<f64> {
    PRESET_MULTIPLES
        .iter()
        .map(|&m| m as f64 * 2f64.powi(-12))
        .collect()
}

/// Geometric step sizes from `tau_max` down to `tau_min`, each rounded to the
/// nearest positive multiple of `tau_ref`, duplicates removed.
pub fn plan_tau_grid(tau_max: f64, tau_min: f64, ratio: f64, tau_ref: f64) -> Result<Vec<f64>> {
    if !(tau_min > 0.0 && tau_min < tau_max && tau_max <= 1.0) {
        return Err(Error::Config(format!(
            "need 0 < tau_min < tau_max <= 1, got tau_min = {tau_min}, tau_max = {tau_max}"
        )));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Config(format!(
            "ratio must lie in (0, 1), got {ratio}"
        )));
    }
    if !(tau_ref > 0.0) {
        return Err(Error::Config(format!(
            "tau_ref must be positive, got {tau_ref}"
        )));
    }
    let mut out: Vec<f64> = Vec::new();
    let mut t = tau_max;
    while t >= tau_min * (1.0 - 1e-12) {
        let m = (t / tau_ref).round().max(1.0);
        let value = m * tau_ref;
        if out.last() != Some(&value) {
            out.push(value);
        }
        t *= ratio;
    }
    if out.is_empty() {
        return Err(Error::Config("empty step-size grid".into()));
    }
    Ok(out)
}

/// `‖A − B‖` in a product norm.
pub fn error_norm(a: &StateVector, b: &StateVector, kind: NormKind) -> Result<f64> {
    if a.grid() != b.grid() {
        return Err(Error::Shape("states live on different grids".into()));
    }
    (a - b).product_norm(kind)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub problem: ProblemConfig,
    pub degrees: Vec<usize>,
    pub taus: Vec<f64>,
    pub tau_ref: f64,
    pub horizon: f64,
    pub data: InitialDataSpec,
    /// Number of largest step sizes entering the order fit.
    pub fit_window: usize,
    pub scheme: Scheme,
    pub dealias: bool,
}

impl StudyConfig {
    pub fn new(problem: ProblemConfig, degrees: Vec<usize>, taus: Vec<f64>) -> Self {
        Self {
            problem,
            degrees,
            taus,
            tau_ref: 2f64.powi(-12),
            horizon: 0.25,
            data: InitialDataSpec::default(),
            fit_window: 8,
            scheme: Scheme::Strang,
            dealias: false,
        }
    }

    /// `τ/τ_ref` for every step size, and `T/τ_ref`.
    pub fn multiples(&self) -> Result<(Vec<usize>, usize)> {
        self.problem.validate()?;
        self.data.validate()?;
        let exact = |x: f64, what: &str| -> Result<usize> {
            let m = (x / self.tau_ref).round();
            if m < 1.0 || m * self.tau_ref != x {
                return Err(Error::Config(format!(
                    "{what} = {x} is not a multiple of tau_ref = {}",
                    self.tau_ref
                )));
            }
            Ok(m as usize)
        };
        if !(self.tau_ref > 0.0 && self.tau_ref <= 1.0) {
            return Err(Error::Config(format!(
                "tau_ref must lie in (0, 1], got {}",
                self.tau_ref
            )));
        }
        let total = exact(self.horizon, "horizon")?;
        let multiples = self
            .taus
            .iter()
            .map(|&t| {
                if !(t > 0.0 && t <= self.horizon && t <= 1.0) {
                    return Err(Error::Config(format!(
                        "step size {t} outside (0, min(1, T)]"
                    )));
                }
                exact(t, "step size")
            })
            .collect::<Result<Vec<_>>>()?;
        if self.degrees.contains(&0) {
            return Err(Error::Config("spectral degrees must be positive".into()));
        }
        if self.fit_window < 2 {
            return Err(Error::Config(
                "fit window must cover at least 2 step sizes".into(),
            ));
        }
        Ok((multiples, total))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub alpha: u32,
    pub mu: i32,
    pub d: usize,
    #[serde(rename = "K")]
    pub degree: usize,
    pub tau: f64,
    pub err_l2_hm1: f64,
    pub err_h1_l2: f64,
    pub steps: usize,
    pub walltime_s: f64,
    /// Empty for a clean run, otherwise what went wrong.
    pub flag: String,
}

impl ErrorRow {
    pub fn is_flagged(&self) -> bool {
        !self.flag.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorNorm {
    L2Hm1,
    H1L2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    #[serde(rename = "K")]
    pub degree: usize,
    pub norm: ErrorNorm,
    pub window: usize,
    pub fit: Option<OrderFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub version: String,
    pub config: StudyConfig,
    pub rows: Vec<ErrorRow>,
    pub fits: Vec<FitRecord>,
    pub metadata: ReportMetadata,
}

/// Conventions that affect absolute error values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub torus: String,
    pub product_norm: String,
    pub eps: f64,
    pub random_mean_mode: String,
    pub rng: String,
    pub os: String,
    pub arch: String,
}

impl ReportMetadata {
    fn new(data: &InitialDataSpec) -> Self {
        Self {
            torus: "[-pi,pi]^d, integer wavenumbers".into(),
            product_norm: "euclidean".into(),
            eps: data.eps,
            random_mean_mode: "real part kept".into(),
            rng: "ChaCha8 (seed_from_u64), stream 0 for u, 1 for v".into(),
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
        }
    }
}

impl ConvergenceReport {
    /// Rows of one degree, sorted by descending step size.
    pub fn rows_for(&self, degree: usize) -> Vec<&ErrorRow> {
        self.rows.iter().filter(|r| r.degree == degree).collect()
    }

    pub fn fit_for(&self, degree: usize, norm: ErrorNorm) -> Option<OrderFit> {
        self.fits
            .iter()
            .find(|f| f.degree == degree && f.norm == norm)
            .and_then(|f| f.fit)
    }
}

/// Order fit over the `window` largest step sizes of unflagged rows.
pub fn fit_order(rows: &[&ErrorRow], norm: ErrorNorm, window: usize) -> Result<OrderFit> {
    let clean: Vec<&&ErrorRow> = rows.iter().filter(|r| !r.is_flagged()).collect();
    let taus: Vec<f64> = clean.iter().map(|r| r.tau).collect();
    let errs: Vec<f64> = clean
        .iter()
        .map(|r| match norm {
            ErrorNorm::L2Hm1 => r.err_l2_hm1,
            ErrorNorm::H1L2 => r.err_h1_l2,
        })
        .collect();
    fit_window(&taus, &errs, window)
}

struct CoarseRun {
    run: Option<Propagator>,
    multiple: usize,
    max_steps: usize,
    err_l2_hm1: f64,
    err_h1_l2: f64,
    seconds: f64,
    flag: String,
}

/// Runs the study for every degree and fits orders per degree and norm.
pub fn run_study(cfg: &StudyConfig) -> Result<ConvergenceReport> {
    let (multiples, total) = cfg.multiples()?;
    let mut rows = Vec::new();
    for &degree in &cfg.degrees {
        rows.extend(study_degree(cfg, degree, &multiples, total)?);
    }
    rows.sort_by(|a, b| a.degree.cmp(&b.degree).then(b.tau.total_cmp(&a.tau)));

    let mut degrees = cfg.degrees.clone();
    degrees.sort_unstable();
    degrees.dedup();
    let mut fits = Vec::new();
    for &degree in &degrees {
        let of_degree: Vec<&ErrorRow> = rows.iter().filter(|r| r.degree == degree).collect();
        for norm in [ErrorNorm::L2Hm1, ErrorNorm::H1L2] {
            fits.push(FitRecord {
                degree,
                norm,
                window: cfg.fit_window,
                fit: fit_order(&of_degree, norm, cfg.fit_window).ok(),
            });
        }
    }
    Ok(ConvergenceReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        rows,
        fits,
        metadata: ReportMetadata::new(&cfg.data),
    })
}

fn scheme_config(cfg: &StudyConfig, tau: f64, degree: usize) -> SchemeConfig {
    SchemeConfig::new(tau, cfg.horizon, degree)
        .with_scheme(cfg.scheme)
        .with_dealias(cfg.dealias)
}

fn study_degree(
    cfg: &StudyConfig,
    degree: usize,
    multiples: &[usize],
    total: usize,
) -> Result<Vec<ErrorRow>> {
    let grid = GridSpec::new(cfg.problem.dim, degree)?;
    let initial = make_initial_state(&cfg.data, grid)?;
    let reference_stepper = Stepper::new(cfg.problem, scheme_config(cfg, cfg.tau_ref, degree))?;
    let mut reference = Propagator::new(reference_stepper, &initial)?;

    let mut runs = Vec::with_capacity(multiples.len());
    for (&tau, &multiple) in cfg.taus.iter().zip(multiples) {
        let stepper = Stepper::new(cfg.problem, scheme_config(cfg, tau, degree))?;
        runs.push(CoarseRun {
            run: Some(Propagator::new(stepper, &initial)?),
            multiple,
            max_steps: total / multiple,
            err_l2_hm1: 0.0,
            err_h1_l2: 0.0,
            seconds: 0.0,
            flag: String::new(),
        });
    }

    log::info!(
        "K = {degree}: {total} reference steps, {} coarse runs",
        runs.len()
    );
    let report_every = (total / 8).max(1);
    let mut reference_failure = None;
    for j in 1..=total {
        if j % report_every == 0 {
            log::info!("K = {degree}: reference step {j}/{total}");
        }
        if let Err(e) = reference.advance() {
            reference_failure = Some(match e {
                Error::BlowUp { step } => format!("reference blow-up at step {step}"),
                other => format!("reference failed: {other}"),
            });
            break;
        }
        for coarse in runs.iter_mut() {
            if j % coarse.multiple != 0 || j / coarse.multiple > coarse.max_steps {
                continue;
            }
            let Some(run) = coarse.run.as_mut() else {
                continue;
            };
            let started = Instant::now();
            match run.advance() {
                Ok(()) => {
                    let diff = reference.state() - run.state();
                    coarse.err_l2_hm1 = coarse.err_l2_hm1.max(diff.l2hm1_norm());
                    coarse.err_h1_l2 = coarse.err_h1_l2.max(diff.h1l2_norm());
                }
                Err(Error::BlowUp { step }) => {
                    log::warn!(
                        "K = {degree}, tau = {}: blow-up at step {step}",
                        coarse.multiple as f64 * cfg.tau_ref
                    );
                    coarse.flag = format!("blow-up at step {step}");
                    coarse.run = None;
                }
                Err(other) => return Err(other),
            }
            coarse.seconds += started.elapsed().as_secs_f64();
        }
    }

    Ok(cfg
        .taus
        .iter()
        .zip(runs)
        .map(|(&tau, coarse)| {
            let flag = reference_failure.clone().unwrap_or(coarse.flag);
            ErrorRow {
                alpha: cfg.problem.alpha,
                mu: cfg.problem.mu,
                d: cfg.problem.dim,
                degree,
                tau,
                err_l2_hm1: coarse.err_l2_hm1,
                err_h1_l2: coarse.err_h1_l2,
                steps: coarse.max_steps,
                walltime_s: coarse.seconds,
                flag,
            }
        })
        .collect())
}
