//! `delaynet`: estimate phase-space embedding parameters from the converged
//! input relevances of a forgetting network.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use delaynet::config::{DataSelector, FileConfig, NoiseSpec, RunConfig};
use delaynet::report::{write_json, ForecastRunResult};
use delaynet::{io, pipeline, snapshot, svg, OUT_DIR_ENV};
use delaynet_core::embed::build_sev;
use delaynet_core::series::{generate, normalize, smooth_resample, SystemKind};

#[derive(Parser)]
#[command(
    name = "delaynet",
    version,
    about = "Embedding dimension and time delay estimation via a forgetting network"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark series and write it as CSV plus metadata.
    Generate(GenerateArgs),
    /// Run the full estimation pipeline and report (m, tau).
    Estimate(RunArgs),
    /// Train (or reload) a network and forecast held-out observations.
    Forecast(ForecastArgs),
    /// Export phase states for a given embedding.
    #[command(name = "phase-space")]
    PhaseSpace(PhaseSpaceArgs),
    /// Estimate across a grid of search spaces.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// System name: logistic, henon, lorenz, rossler, gaussian.
    system: String,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Seed for random draws (gaussian system).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Integration step for flow systems.
    #[arg(long)]
    ts: Option<f64>,
    /// Integration steps discarded before sampling (flow systems).
    #[arg(long)]
    transient: Option<usize>,
    /// Observed state coordinate.
    #[arg(long)]
    coord: Option<usize>,
    /// Initial state, comma-separated.
    #[arg(long)]
    init: Option<String>,
    /// System parameter override, e.g. --param r=3.9 (repeatable).
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

/// Flags shared by estimate, forecast, and sweep. Values fall back to the
/// config file, then to the built-in defaults.
#[derive(Args)]
struct RunArgs {
    /// Key=value config file underneath these flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Builtin system name or CSV path.
    #[arg(long)]
    data: Option<String>,
    /// Zero-based CSV column.
    #[arg(long)]
    column: Option<usize>,
    /// Observation count for builtin generators.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m_max: Option<usize>,
    #[arg(long)]
    tau_max: Option<usize>,
    #[arg(long)]
    eps_max: Option<f64>,
    #[arg(long)]
    eps_min: Option<f64>,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    train_fraction: Option<f64>,
    /// Master seed; fold seeds derive as seed + fold index.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    noise_mu: Option<f64>,
    #[arg(long)]
    noise_sigma: Option<f64>,
    /// Gradient step size.
    #[arg(long)]
    eta: Option<f64>,
    /// Momentum rate.
    #[arg(long)]
    alpha: Option<f64>,
    /// Forgetting (L1) strength.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
    /// Early-stop cost tolerance.
    #[arg(long)]
    c_max: Option<f64>,
    /// Hidden width override.
    #[arg(long)]
    hidden: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ForecastArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Held-out steps to forecast.
    #[arg(long)]
    horizon: usize,
    /// Reuse a saved network instead of training.
    #[arg(long)]
    snapshot: Option<PathBuf>,
}

#[derive(Args)]
struct PhaseSpaceArgs {
    /// Builtin system name or CSV path.
    #[arg(long)]
    data: String,
    #[arg(long, default_value_t = 0)]
    column: usize,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    tau: usize,
    /// Rescale the series to [0, 1] before embedding.
    #[arg(long)]
    normalize: bool,
    /// Smooth the series to this many equally spaced points first (cubic
    /// resampling); declutters attractor plots of noisy data.
    #[arg(long, value_name = "K")]
    smooth: Option<usize>,
    /// Output file (default: <out-dir>/phase_space.csv).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated m_max values.
    #[arg(long, value_name = "LIST")]
    m_max_list: String,
    /// Comma-separated tau_max values.
    #[arg(long, value_name = "LIST")]
    tau_max_list: String,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let defaults = RunConfig::default();
        let mut cfg = defaults.clone();

        if let Some(data) = self.data.clone().or(file.data) {
            let column = self.column.or(file.column).unwrap_or(0);
            cfg.data = DataSelector::parse(&data, column);
        }
        cfg.n = self.n.or(file.n).unwrap_or(defaults.n);
        cfg.m_max = self.m_max.or(file.m_max).unwrap_or(defaults.m_max);
        cfg.tau_max = self.tau_max.or(file.tau_max).unwrap_or(defaults.tau_max);
        cfg.eps_max = self.eps_max.or(file.eps_max).unwrap_or(defaults.eps_max);
        cfg.eps_min = self.eps_min.or(file.eps_min).unwrap_or(defaults.eps_min);
        cfg.folds = self.folds.or(file.folds).unwrap_or(defaults.folds);
        cfg.train_fraction = self
            .train_fraction
            .or(file.train_fraction)
            .unwrap_or(defaults.train_fraction);
        cfg.seed = self.seed.or(file.seed).unwrap_or(defaults.seed);

        let sigma = self.noise_sigma.or(file.noise_sigma);
        let mu = self.noise_mu.or(file.noise_mu);
        cfg.noise = sigma.map(|sigma| NoiseSpec {
            mu: mu.unwrap_or(0.0),
            sigma,
        });
        if cfg.noise.is_none() && mu.is_some() {
            bail!("--noise-mu given without --noise-sigma");
        }

        cfg.net.learning_rate = self
            .eta
            .or(file.learning_rate)
            .unwrap_or(defaults.net.learning_rate);
        cfg.net.momentum = self.alpha.or(file.momentum).unwrap_or(defaults.net.momentum);
        cfg.net.forgetting = self
            .lambda
            .or(file.forgetting)
            .unwrap_or(defaults.net.forgetting);
        cfg.net.epochs = self.epochs.or(file.epochs).unwrap_or(defaults.net.epochs);
        cfg.net.cost_tolerance = self
            .c_max
            .or(file.cost_tolerance)
            .unwrap_or(defaults.net.cost_tolerance);
        cfg.net.hidden = self.hidden.or(file.hidden);
        cfg.net.init_range = file.init_range.unwrap_or(defaults.net.init_range);
        cfg.out_dir = resolve_out_dir(self.out_dir.clone().or(file.out_dir));
        Ok(cfg)
    }
}

fn resolve_out_dir(explicit: Option<PathBuf>) -> PathBuf {
    explicit
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            classify(&err)
        }
    }
}

/// 2 for configuration and usage problems, 4 for numerical failures.
fn classify(err: &anyhow::Error) -> ExitCode {
    use delaynet_core::Error as CoreError;
    for cause in err.chain() {
        if let Some(core) = cause.downcast_ref::<CoreError>() {
            return match core {
                CoreError::TrainingDiverged { .. }
                | CoreError::UnboundedOrbit { .. }
                | CoreError::IntegrationBlowUp { .. }
                | CoreError::DegenerateSeries
                | CoreError::NoSignal
                | CoreError::NrmseUndefined => ExitCode::from(4),
                _ => ExitCode::from(2),
            };
        }
    }
    ExitCode::from(2)
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Generate(args) => cmd_generate(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Forecast(args) => cmd_forecast(args),
        Command::PhaseSpace(args) => cmd_phase_space(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode> {
    let mut spec = pipeline::builtin_spec(&args.system, args.n, args.seed)?;
    if let Some(ts) = args.ts {
        spec.sampling_time = ts;
    }
    if let Some(transient) = args.transient {
        spec.transient = transient;
    }
    if let Some(coord) = args.coord {
        spec.observed_coordinate = coord;
    }
    if let Some(init) = &args.init {
        spec.initial_state = init
            .split(',')
            .map(|v| v.trim().parse::<f64>().context("parsing --init"))
            .collect::<Result<Vec<f64>>>()?;
    }
    for param in &args.params {
        let Some((key, value)) = param.split_once('=') else {
            bail!("--param expects KEY=VALUE, got {param:?}");
        };
        let value: f64 = value
            .trim()
            .parse()
            .with_context(|| format!("parsing --param {param:?}"))?;
        apply_param(&mut spec.kind, key.trim(), value)?;
    }

    let series = generate(&spec).context("generate stage")?;
    let out_dir = resolve_out_dir(args.out_dir);
    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let csv_path = out_dir.join(format!("{}.csv", args.system));
    io::write_series_csv(&csv_path, &series)?;
    let meta_path = out_dir.join(format!("{}.meta.json", args.system));
    write_json(&meta_path, &spec)?;
    println!("wrote {} ({} observations)", csv_path.display(), series.len());
    println!("wrote {}", meta_path.display());
    Ok(ExitCode::SUCCESS)
}

fn apply_param(kind: &mut SystemKind, key: &str, value: f64) -> Result<()> {
    let system = kind.name();
    let slot = match (kind, key) {
        (SystemKind::Logistic { r }, "r") => r,
        (SystemKind::Henon { a, .. }, "a") => a,
        (SystemKind::Henon { b, .. }, "b") => b,
        (SystemKind::Lorenz { sigma, .. }, "sigma") => sigma,
        (SystemKind::Lorenz { rho, .. }, "rho") => rho,
        (SystemKind::Lorenz { beta, .. }, "beta") => beta,
        (SystemKind::Rossler { a, .. }, "a") => a,
        (SystemKind::Rossler { b, .. }, "b") => b,
        (SystemKind::Rossler { c, .. }, "c") => c,
        (SystemKind::Gaussian { mu, .. }, "mu") => mu,
        (SystemKind::Gaussian { sigma, .. }, "sigma") => sigma,
        _ => bail!("system {system} has no parameter {key:?}"),
    };
    *slot = value;
    Ok(())
}

fn cmd_estimate(args: RunArgs) -> Result<ExitCode> {
    let cfg = args.resolve()?;
    let run = pipeline::run_estimate(&cfg)?;
    let paths = pipeline::write_estimate_outputs(&cfg.out_dir, &run.result)?;
    let est = &run.result.estimate;
    println!(
        "m = {}, tau = {} (peak dimension {}, stochasticity {:.3}{})",
        est.m,
        est.tau,
        est.peak,
        est.score,
        if est.stochastic { ", flagged" } else { "" }
    );
    for path in paths {
        println!("wrote {}", path.display());
    }
    if est.stochastic {
        eprintln!("warning: relevance profile is fold-unstable; the estimate is not trustworthy");
        Ok(ExitCode::from(3))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn cmd_forecast(args: ForecastArgs) -> Result<ExitCode> {
    let cfg = args.run.resolve()?;
    let outcome = pipeline::run_forecast(&cfg, args.horizon, args.snapshot.as_deref())?;
    std::fs::create_dir_all(&cfg.out_dir)
        .with_context(|| format!("creating output directory {}", cfg.out_dir.display()))?;

    let csv_path = cfg.out_dir.join("overlay.csv");
    io::write_overlay_csv(&csv_path, &outcome.report)?;
    let svg_path = cfg.out_dir.join("overlay.svg");
    std::fs::write(&svg_path, svg::overlay_chart(&outcome.report))
        .with_context(|| format!("writing {}", svg_path.display()))?;
    let json_path = cfg.out_dir.join("forecast.json");
    write_json(
        &json_path,
        &ForecastRunResult {
            report: outcome.report.clone(),
            estimate: outcome.estimate.clone(),
            provenance: outcome.provenance.clone(),
        },
    )?;
    let mut paths = vec![csv_path, svg_path, json_path];
    if args.snapshot.is_none() {
        let snap_path = cfg.out_dir.join("snapshot.json");
        snapshot::save(&snap_path, &outcome.snapshot)?;
        paths.push(snap_path);
    }

    println!(
        "forecast over {} steps: mse = {:.6e}, nrmse = {:.4}",
        outcome.report.horizon, outcome.report.mse, outcome.report.nrmse
    );
    for path in paths {
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_phase_space(args: PhaseSpaceArgs) -> Result<ExitCode> {
    let selector = DataSelector::parse(&args.data, args.column);
    let mut series = match &selector {
        DataSelector::Builtin { system } => {
            let spec = pipeline::builtin_spec(system, args.n, args.seed)?;
            generate(&spec).context("generate stage")?
        }
        DataSelector::Csv { path, column } => io::load_csv(path, *column).context("ingest stage")?,
    };
    if let Some(k) = args.smooth {
        series = smooth_resample(&series, k).context("smooth stage")?;
    }
    if args.normalize {
        series = normalize(&series).context("normalize stage")?;
    }
    let states = build_sev(&series, args.m, args.tau).context("embed stage")?;
    let out_path = match args.out {
        Some(path) => path,
        None => {
            let dir = resolve_out_dir(args.out_dir);
            std::fs::create_dir_all(&dir)
                .with_context(|| format!("creating output directory {}", dir.display()))?;
            dir.join("phase_space.csv")
        }
    };
    io::write_states_csv(&out_path, &states)?;
    println!(
        "wrote {} ({} states of dimension {})",
        out_path.display(),
        states.len(),
        args.m
    );
    Ok(ExitCode::SUCCESS)
}

fn parse_list(list: &str, what: &str) -> Result<Vec<usize>> {
    list.split(',')
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .with_context(|| format!("parsing {what} entry {v:?}"))
        })
        .collect()
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode> {
    let cfg = args.run.resolve()?;
    let m_maxes = parse_list(&args.m_max_list, "--m-max-list")?;
    let tau_maxes = parse_list(&args.tau_max_list, "--tau-max-list")?;
    let rows = pipeline::run_sweep(&cfg, &m_maxes, &tau_maxes)?;
    let paths = pipeline::write_sweep_outputs(&cfg.out_dir, &rows)?;
    println!("m_max tau_max ->  m tau  (score)");
    for r in &rows {
        println!(
            "{:5} {:7} -> {:2} {:3}  ({:.3}{})",
            r.m_max,
            r.tau_max,
            r.m,
            r.tau,
            r.score,
            if r.stochastic { ", flagged" } else { "" }
        );
    }
    for path in paths {
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}
