//! Convergence experiments: lockstep reference runs, error tables, order
//! fits, Strichartz diagnostics and report files.

pub mod fit;
pub mod report;
pub mod strichartz;
pub mod study;

pub use fit::{fit_power_law, fit_window, OrderFit};
pub use report::{read_json, write_csv, write_json, write_report, CSV_HEADER};
pub use strichartz::{check_admissible, strichartz_norm, StrichartzAccumulator};
pub use study::{
    error_norm, fit_order, plan_tau_grid, preset_tau_grid, run_study, ConvergenceReport, ErrorNorm,
    ErrorRow, FitRecord, StudyConfig,
};
