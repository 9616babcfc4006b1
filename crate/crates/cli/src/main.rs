//! Command-line driver: simulation runs, snapshot analysis, linear spectra
//! and fractional-heat decay experiments, each writing CSV.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ealign::besov::{NormTrace, Summation};
use ealign::io::{self, Snapshot};
use ealign::linear::{spectrum_row, LinearParams};
use ealign::simulation::{
    decay_fit, heat_decay, output_column_names, run, state_diagnostics, static_column_names,
    HeatDecaySpec, NamedNorm, RunStatus, COMPOSITE_COLUMNS, HEAT_COLUMNS,
};
use ealign::spectral::Grid;
use ealign::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_VACUUM: u8 = 3;

#[derive(Parser)]
#[command(name = "ealign", version, about = "Euler-alignment spectral toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a configured run and write its trace.
    Run(RunArgs),
    /// Recompute the trace columns on stored snapshots.
    Analyze(AnalyzeArgs),
    /// Tabulate the eigenvalues of the linearized system.
    Linear(LinearArgs),
    /// Measure decay exponents of the fractional heat flow.
    HeatDecay(HeatArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Configuration file.
    config: PathBuf,
    /// Trace CSV.
    #[arg(long)]
    out: PathBuf,
    /// CSV of the composite columns; defaults to `<out stem>.composite.csv`.
    #[arg(long)]
    composite: Option<PathBuf>,
    /// Directory for snapshots when `output.snapshot_every` is set;
    /// defaults to the directory of `--out`.
    #[arg(long)]
    snapshot_dir: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Snapshot files, analysed in time order.
    #[arg(required = true)]
    snapshots: Vec<PathBuf>,
    /// Configuration supplying the extra norms and the split index.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LinearArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    mu: f64,
    /// Explicit frequencies; repeat or separate with commas.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["xi_min", "xi_max"])]
    xi: Vec<f64>,
    /// Lower end of a log-spaced sweep.
    #[arg(long, default_value_t = 2f64.powi(-6))]
    xi_min: f64,
    #[arg(long, default_value_t = 2f64.powi(10))]
    xi_max: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SumArg {
    #[value(name = "1")]
    One,
    Inf,
}

#[derive(Args)]
struct HeatArgs {
    #[arg(long, default_value_t = 1.5)]
    alpha: f64,
    #[arg(long, default_value_t = 0.1)]
    mu: f64,
    /// Gaussian width of the data envelope.
    #[arg(long, default_value_t = 0.5)]
    width: f64,
    #[arg(long, default_value_t = 8192)]
    n: usize,
    /// Box length; defaults to 512π.
    #[arg(long)]
    length: Option<f64>,
    /// Data regularity: `f̂0 ~ |ξ|^{s0-1/2}`; 0.5 gives a Gaussian.
    #[arg(long, default_value_t = 0.5)]
    s0: f64,
    #[arg(long, default_value_t = 0.0)]
    s1: f64,
    /// Split index of the low-frequency norm.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    j0: i32,
    /// Block summation of the low-frequency norm.
    #[arg(long, value_enum, default_value = "inf")]
    summation: SumArg,
    #[arg(long, default_value_t = 20.0)]
    t_a: f64,
    #[arg(long, default_value_t = 200.0)]
    t_b: f64,
    /// Log-spaced sample times in `[t_a, t_b]`.
    #[arg(long, default_value_t = 60)]
    samples: usize,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Linear(a) => cmd_linear(a),
        Command::HeatDecay(a) => cmd_heat(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config { .. }
                | Error::Parameter(_)
                | Error::Shape(_)
                | Error::Unsupported(_) => EXIT_INVALID,
                Error::Vacuum { .. } => EXIT_VACUUM,
                _ => EXIT_FAILURE,
            })
        }
    }
}

fn read_config(path: &Path) -> Result<ealign::simulation::SimConfig, Error> {
    io::parse_config(&std::fs::read_to_string(path)?)
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn select(trace: &NormTrace, names: &[String]) -> Result<NormTrace, Error> {
    trace
        .select(names)
        .ok_or_else(|| Error::Internal("trace is missing a column".into()))
}

fn cmd_run(a: RunArgs) -> Result<u8, Error> {
    let config = read_config(&a.config)?;
    let p = &config.params;
    println!(
        "run: dim={} n={} L={} alpha={} kappa={} gamma={} lambda={} mu={} j0={} representation={}",
        config.grid.dim(),
        config.grid.n(),
        config.grid.length(),
        p.alpha(),
        p.kappa(),
        p.gamma(),
        p.lambda(),
        p.mu(),
        config.split_index(),
        config.representation.name(),
    );
    let out = run(&config)?;
    println!("steps={} dt={:e}", out.steps, out.dt);

    let dim = config.grid.dim();
    io::write_trace(
        &a.out,
        &select(&out.trace, &output_column_names(dim, &config.norms))?,
    )?;
    let composite = a
        .composite
        .unwrap_or_else(|| sibling(&a.out, ".composite.csv"));
    io::write_trace(
        &composite,
        &select(&out.trace, &COMPOSITE_COLUMNS.map(String::from))?,
    )?;

    if !out.snapshots.is_empty() {
        let dir = match a.snapshot_dir {
            Some(d) => d,
            None => a.out.parent().map(Path::to_path_buf).unwrap_or_default(),
        };
        std::fs::create_dir_all(&dir)?;
        for (i, state) in out.snapshots.iter().enumerate() {
            let snap = Snapshot {
                state: state.clone(),
                params: config.params,
            };
            io::write_snapshot(&dir.join(format!("snap_{i:05}.bin")), &snap)?;
        }
    }

    match out.status {
        RunStatus::Completed => {
            match out.amplification() {
                Some(r) => println!(
                    "X0={:e} X(T)={:e} amplification={r:.6}",
                    out.x0,
                    out.x_final()
                ),
                None => println!("X0=0"),
            }
            if let Some(window) = config.fit_window {
                report_fit(&out.trace, window, config.decay.map(|d| d.exponent()))?;
            }
            Ok(0)
        }
        RunStatus::Vacuum { t, min_rho } => {
            eprintln!(
                "vacuum: min rho {min_rho:e} at t={t}; trace written up to the previous step"
            );
            Ok(EXIT_VACUUM)
        }
    }
}

/// Fit the decay of `‖(σ, u)‖_{L²}` over `window` and print it next to the
/// whole-space prediction, if one is configured.
fn report_fit(trace: &NormTrace, window: (f64, f64), predicted: Option<f64>) -> Result<(), Error> {
    let sigma = trace.column("l2_sigma").expect("built-in column");
    let u = trace.column("l2_u").expect("built-in column");
    let pair: Vec<f64> = sigma.iter().zip(&u).map(|(a, b)| a.hypot(*b)).collect();
    let fit = decay_fit(trace.times(), &pair, window)?;
    match predicted {
        Some(p) => println!(
            "l2_pair: exponent {:.6} (whole-space prediction {p:.6}; periodic box, late times decay exponentially), r2 {:.6}",
            fit.exponent, fit.r2
        ),
        None => println!("l2_pair: exponent {:.6}, r2 {:.6}", fit.exponent, fit.r2),
    }
    Ok(())
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<u8, Error> {
    let mut snaps = a
        .snapshots
        .iter()
        .map(|p| io::read_snapshot(p))
        .collect::<Result<Vec<_>, _>>()?;
    snaps.sort_by(|x, y| x.state.time().total_cmp(&y.state.time()));
    let first = snaps.first().expect("clap requires a snapshot");
    let grid: Grid = *first.state.grid();
    let (norms, j0): (Vec<NamedNorm>, Option<i32>) = match &a.config {
        Some(path) => {
            let c = read_config(path)?;
            c.grid.ensure_same(&grid)?;
            let j0 = c.split_index();
            (c.norms, Some(j0))
        }
        None => (Vec::new(), None),
    };
    let names = static_column_names(grid.dim(), &norms);
    let mut trace = NormTrace::new(names);
    for s in &snaps {
        s.state.grid().ensure_same(&grid)?;
        let j0 = j0.unwrap_or_else(|| s.params.j0());
        let d = state_diagnostics(&s.state, &s.params, j0, &norms)?;
        trace.push(s.state.time(), d.values)?;
    }
    io::write_trace(
        &a.out,
        &select(&trace, &output_column_names(grid.dim(), &norms))?,
    )?;
    println!("analyzed {} snapshots", snaps.len());
    Ok(0)
}

fn cmd_linear(a: LinearArgs) -> Result<u8, Error> {
    let lp = LinearParams::new(a.alpha, a.lambda, a.mu)?;
    let xis: Vec<f64> = if a.xi.is_empty() {
        if !(a.xi_min > 0.0 && a.xi_max > a.xi_min && a.points >= 2) {
            return Err(Error::Parameter(
                "sweep needs 0 < xi_min < xi_max and at least 2 points".into(),
            ));
        }
        let ratio = (a.xi_max / a.xi_min).ln();
        (0..a.points)
            .map(|i| a.xi_min * (ratio * i as f64 / (a.points - 1) as f64).exp())
            .collect()
    } else {
        a.xi
    };
    let rows = xis
        .iter()
        .map(|&xi| spectrum_row(xi, &lp))
        .collect::<Result<Vec<_>, _>>()?;
    io::write_spectrum(&a.out, &rows)?;
    println!(
        "linear: {} rows, regime boundary |xi| = 2^{:.6}",
        rows.len(),
        lp.j0_real()
    );
    Ok(0)
}

fn cmd_heat(a: HeatArgs) -> Result<u8, Error> {
    let length = a.length.unwrap_or(512.0 * std::f64::consts::PI);
    if !(a.t_a > 0.0 && a.t_b > a.t_a && a.samples >= 2) {
        return Err(Error::Parameter(
            "need 0 < t_a < t_b and at least 2 samples".into(),
        ));
    }
    let ratio = (a.t_b / a.t_a).ln();
    let times: Vec<f64> = (0..a.samples)
        .map(|i| a.t_a * (ratio * i as f64 / (a.samples - 1) as f64).exp())
        .collect();
    let spec = HeatDecaySpec {
        grid: Grid::new(1, a.n, length)?,
        alpha: a.alpha,
        mu: a.mu,
        width: a.width,
        s0: a.s0,
        s1: a.s1,
        j0: a.j0,
        summation: match a.summation {
            SumArg::One => Summation::Sum,
            SumArg::Inf => Summation::Sup,
        },
        times,
    };
    let trace = heat_decay(&spec)?;
    io::write_trace(&a.out, &trace)?;
    let predicted = [-a.s0 / a.alpha, -(a.s0 + a.s1) / a.alpha];
    for (name, target) in HEAT_COLUMNS.iter().zip(predicted) {
        let values = trace.column(name).expect("heat trace column");
        let fit = decay_fit(trace.times(), &values, (a.t_a, a.t_b))?;
        println!(
            "{name}: exponent {:.6} (predicted {target:.6}), r2 {:.6}",
            fit.exponent, fit.r2
        );
    }
    Ok(0)
}
