use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use strang_nlw::initial_data::{deterministic_rough, random_rough};
use strang_nlw::integrators::{EnergyObserver, Observer};
use strang_nlw::lab::{self, ErrorNorm, StudyConfig};
use strang_nlw::spectral::snapshot::write_snapshot;
use strang_nlw::{
    evolve, make_initial_state, DataMode, Error, GridSpec, InitialDataSpec, ProblemConfig, Scheme,
    SchemeConfig, StateVector,
};

#[derive(Parser)]
#[command(
    name = "strang-nlw",
    version,
    about = "Filtered Strang splitting for the semilinear wave equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Temporal convergence study against a fine-step reference run
    Convergence(ConvergenceArgs),
    /// Single run, optionally writing field snapshots
    Evolve(EvolveArgs),
    /// Run the built-in invariant checks
    Selftest,
    /// Initial-data spectra and norm diagnostics
    Data(DataArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Strang,
    Lie,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Strang => Scheme::Strang,
            SchemeArg::Lie => Scheme::Lie,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DataArg {
    Det,
    Random,
}

/// Accepts `0.125`, `1/8` or `2^-3`.
fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Some((base, exp)) = s.split_once('^') {
        let b: f64 = base.parse().map_err(|_| format!("bad number '{s}'"))?;
        let e: i32 = exp.parse().map_err(|_| format!("bad exponent in '{s}'"))?;
        return Ok(b.powi(e));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: f64 = num.parse().map_err(|_| format!("bad number '{s}'"))?;
        let d: f64 = den.parse().map_err(|_| format!("bad number '{s}'"))?;
        return Ok(n / d);
    }
    s.parse().map_err(|_| format!("bad number '{s}'"))
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..=5))]
    alpha: u32,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    mu: i32,
    #[arg(long, default_value_t = 3)]
    dim: usize,
}

#[derive(Args)]
struct DataSpecArgs {
    #[arg(long, value_enum, default_value = "det")]
    data: DataArg,
    #[arg(long, default_value_t = 1e-4)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Target ‖u⁰‖ in H¹
    #[arg(long, default_value_t = 3.0)]
    norm_u: f64,
    /// Target ‖v⁰‖ in L²
    #[arg(long, default_value_t = 3.0)]
    norm_v: f64,
}

impl DataSpecArgs {
    fn spec(&self) -> InitialDataSpec {
        InitialDataSpec {
            mode: match self.data {
                DataArg::Det => DataMode::Deterministic,
                DataArg::Random => DataMode::Random,
            },
            eps: self.eps,
            seed: self.seed,
            target_u: self.norm_u,
            target_v: self.norm_v,
        }
    }
}

#[derive(Args)]
struct ConvergenceArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Spectral degrees, comma separated
    #[arg(long = "K", value_delimiter = ',', default_value = "16")]
    degrees: Vec<usize>,
    #[arg(long, default_value = "1/8", value_parser = parse_real)]
    tau_max: f64,
    #[arg(long, default_value = "2^-9", value_parser = parse_real)]
    tau_min: f64,
    #[arg(long, default_value_t = 0.8)]
    tau_ratio: f64,
    #[arg(long, default_value = "2^-12", value_parser = parse_real)]
    tau_ref: f64,
    /// Explicit step sizes, comma separated (overrides the geometric grid)
    #[arg(long, value_delimiter = ',', value_parser = parse_real)]
    tau_list: Option<Vec<f64>>,
    /// Use the fixed 20-point grid 0.125, 0.100341796875, …, 2^-9
    #[arg(long, conflicts_with = "tau_list")]
    tau_preset: bool,
    #[arg(long = "T", default_value = "0.25", value_parser = parse_real)]
    horizon: f64,
    #[arg(long, value_enum, default_value = "strang")]
    scheme: SchemeArg,
    #[command(flatten)]
    data: DataSpecArgs,
    #[arg(long)]
    dealias: bool,
    #[arg(long, default_value_t = 8)]
    fit_window: usize,
    #[arg(long, default_value = "convergence.csv")]
    out: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long = "K", default_value_t = 16)]
    degree: usize,
    #[arg(long, default_value = "2^-6", value_parser = parse_real)]
    tau: f64,
    #[arg(long = "T", default_value = "0.25", value_parser = parse_real)]
    horizon: f64,
    #[arg(long, value_enum, default_value = "strang")]
    scheme: SchemeArg,
    #[command(flatten)]
    data: DataSpecArgs,
    #[arg(long)]
    dealias: bool,
    #[arg(long)]
    shortcut: bool,
    /// Times at which to write snapshots, comma separated multiples of tau
    #[arg(long, value_delimiter = ',', value_parser = parse_real)]
    snapshots: Vec<f64>,
    #[arg(long, default_value = "snapshots")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct DataArgs {
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long = "K", default_value_t = 32)]
    degree: usize,
    #[command(flatten)]
    data: DataSpecArgs,
    /// Write u0 and v0 snapshots with this path stem
    #[arg(long)]
    snapshot: Option<PathBuf>,
}

fn exit_code(err: &Error) -> ExitCode {
    match err {
        Error::BlowUp { .. } => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Convergence(args) => convergence(args),
        Command::Evolve(args) => run_evolve(args),
        Command::Data(args) => data(args),
        Command::Selftest => return selftest(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn convergence(args: ConvergenceArgs) -> Result<(), Error> {
    let problem = ProblemConfig::new(args.problem.alpha, args.problem.mu, args.problem.dim)?;
    let taus = match (args.tau_list, args.tau_preset) {
        (Some(list), _) => list,
        (None, true) => lab::preset_tau_grid(),
        (None, false) => {
            lab::plan_tau_grid(args.tau_max, args.tau_min, args.tau_ratio, args.tau_ref)?
        }
    };
    let mut cfg = StudyConfig::new(problem, args.degrees, taus);
    cfg.tau_ref = args.tau_ref;
    cfg.horizon = args.horizon;
    cfg.data = args.data.spec();
    cfg.fit_window = args.fit_window;
    cfg.scheme = args.scheme.into();
    cfg.dealias = args.dealias;

    let report = lab::run_study(&cfg)?;
    lab::write_report(&report, &args.out, args.json.as_deref())?;

    println!(
        "{:>4} {:>16} {:>14} {:>14} {:>6}  flag",
        "K", "tau", "err_L2xH-1", "err_H1xL2", "steps"
    );
    for r in &report.rows {
        println!(
            "{:>4} {:>16} {:>14.6e} {:>14.6e} {:>6}  {}",
            r.degree, r.tau, r.err_l2_hm1, r.err_h1_l2, r.steps, r.flag
        );
    }
    for k in &cfg.degrees {
        let h = GridSpec::new(problem.dim, *k)?.unit_cube_spacing();
        let show = |n| {
            report.fit_for(*k, n).map_or("n/a".to_string(), |f| {
                format!("{:.3} (residual {:.2e})", f.slope, f.residual)
            })
        };
        println!(
            "K = {k} (h = {h:.5} on the unit cube): order L2xH-1 {}, H1xL2 {}",
            show(ErrorNorm::L2Hm1),
            show(ErrorNorm::H1L2)
        );
    }
    Ok(())
}

struct SnapshotWriter {
    steps: BTreeSet<usize>,
    dir: PathBuf,
    error: Option<Error>,
}

impl Observer for SnapshotWriter {
    fn wants(&self, step: usize) -> bool {
        self.steps.contains(&step)
    }

    fn observe(&mut self, step: usize, _time: f64, state: &StateVector) {
        if self.error.is_some() {
            return;
        }
        for (name, field) in [("u", state.u()), ("v", state.v())] {
            let stem = self.dir.join(format!("{name}_step{step:06}"));
            if let Err(e) = write_snapshot(field, &stem, name) {
                self.error = Some(e);
                return;
            }
        }
    }
}

fn run_evolve(args: EvolveArgs) -> Result<(), Error> {
    let problem = ProblemConfig::new(args.problem.alpha, args.problem.mu, args.problem.dim)?;
    let cfg = SchemeConfig::new(args.tau, args.horizon, args.degree)
        .with_scheme(args.scheme.into())
        .with_dealias(args.dealias)
        .with_shortcut(args.shortcut);
    cfg.validate()?;
    let grid = GridSpec::new(problem.dim, args.degree)?;
    let initial = make_initial_state(&args.data.spec(), grid)?;

    let mut steps = BTreeSet::new();
    for &t in &args.snapshots {
        let n = (t / args.tau).round();
        if (n * args.tau - t).abs() > 1e-12 * t.abs().max(1.0) || n < 0.0 {
            return Err(Error::Config(format!(
                "snapshot time {t} is not a multiple of tau"
            )));
        }
        steps.insert(n as usize);
    }
    if !steps.is_empty() {
        std::fs::create_dir_all(&args.out_dir).map_err(|e| Error::Io {
            path: args.out_dir.clone(),
            source: e,
        })?;
    }
    let mut writer = SnapshotWriter {
        steps,
        dir: args.out_dir.clone(),
        error: None,
    };
    let mut energy = EnergyObserver::new(problem);
    let end = evolve(&initial, &problem, &cfg, &mut [&mut writer, &mut energy])?;
    if let Some(e) = writer.error {
        return Err(e);
    }
    println!("steps            {}", cfg.step_count()?);
    println!("|U(T)| H1xL2     {:.10e}", end.h1l2_norm());
    println!("|U(T)| L2xH-1    {:.10e}", end.l2hm1_norm());
    println!("energy drift     {:.3e}", energy.relative_drift());
    Ok(())
}

fn selftest() -> ExitCode {
    let outcomes = strang_nlw::selftest::run_selftest();
    let mut ok = true;
    for o in &outcomes {
        println!(
            "[{}] {}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
        ok &= o.passed;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}

fn data(args: DataArgs) -> Result<(), Error> {
    let spec = args.data.spec();
    spec.validate()?;
    let grid = GridSpec::new(args.dim, args.degree)?;
    let (u, v) = match spec.mode {
        DataMode::Deterministic => (
            deterministic_rough(grid, 1.0, spec.eps),
            deterministic_rough(grid, 0.0, spec.eps),
        ),
        DataMode::Random => (
            random_rough(grid, 1.0, spec.eps, spec.seed),
            random_rough(grid, 0.0, spec.eps, spec.seed ^ 1),
        ),
    };
    println!("unscaled spectra, d = {}, eps = {}", args.dim, spec.eps);
    println!(
        "{:>4} {:>14} {:>14} {:>14} {:>14} {:>14}",
        "N", "u H^(1+eps)", "u H^0.9", "u L^8", "v L^2", "v H^-0.1"
    );
    let mut n = 1;
    while n <= args.degree {
        let un = u.project(n as f64);
        let vn = v.project(n as f64);
        println!(
            "{:>4} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}",
            n,
            un.sobolev_norm(spec.s_u()),
            un.sobolev_norm(0.9),
            un.lebesgue_norm(8.0)?,
            vn.sobolev_norm(0.0),
            vn.sobolev_norm(-0.1)
        );
        n *= 2;
    }
    let state = make_initial_state(&spec, grid)?;
    println!(
        "scaled: |u0|_H1 = {:.12}, |v0|_L2 = {:.12}",
        state.u().sobolev_norm(1.0),
        state.v().sobolev_norm(0.0)
    );
    if let Some(stem) = args.snapshot {
        let name = stem
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        write_snapshot(state.u(), &stem.with_file_name(format!("{name}_u")), "u")?;
        write_snapshot(state.v(), &stem.with_file_name(format!("{name}_v")), "v")?;
    }
    Ok(())
}
