//! Run orchestration: series resolution, fold training, aggregation, and
//! the artifacts each subcommand writes.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use delaynet_core::embed::{build_pev, make_resampling, PevDataset, ResamplingPlan, SearchSpace};
use delaynet_core::estimate::{aggregate, relevance, select_embedding, EmbeddingEstimate};
use delaynet_core::forecast::{forecast_eval, ForecastReport};
use delaynet_core::net::{train, Network, TrainReport};
use delaynet_core::series::{add_noise, generate, normalize, SystemSpec, TimeSeries};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{DataSelector, RunConfig};
use crate::io;
use crate::report::{write_json, Provenance, RunResult};
use crate::snapshot::{self, Snapshot};
use crate::svg;

/// Default spec for a builtin system name.
pub fn builtin_spec(system: &str, n: usize, seed: u64) -> Result<SystemSpec> {
    Ok(match system {
        "logistic" => SystemSpec::logistic(n),
        "henon" => SystemSpec::henon(n),
        "lorenz" => SystemSpec::lorenz(n),
        "rossler" => SystemSpec::rossler(n),
        "gaussian" => SystemSpec::gaussian(n, seed),
        other => bail!(
            "unknown system {other:?} (expected logistic, henon, lorenz, rossler, or gaussian)"
        ),
    })
}

/// Generates or ingests the configured series (raw, before noise and
/// normalization).
pub fn resolve_series(cfg: &RunConfig) -> Result<TimeSeries> {
    match &cfg.data {
        DataSelector::Builtin { system } => {
            let spec = builtin_spec(system, cfg.n, cfg.seed)?;
            generate(&spec).context("generate stage")
        }
        DataSelector::Csv { path, column } => {
            io::load_csv(path, *column).context("ingest stage")
        }
    }
}

/// Resolved series with optional noise injection, normalized to [0, 1].
pub fn prepared_series(cfg: &RunConfig) -> Result<TimeSeries> {
    let mut series = resolve_series(cfg)?;
    if let Some(noise) = cfg.noise {
        series = add_noise(&series, noise.mu, noise.sigma, cfg.seed).context("noise stage")?;
    }
    normalize(&series).context("normalize stage")
}

/// One trained fold: the network, its training record, and its relevances.
struct FoldOutcome {
    network: Network,
    report: TrainReport,
    relevances: Vec<f64>,
}

fn train_folds(
    cfg: &RunConfig,
    data: &PevDataset,
    plan: &ResamplingPlan,
    inputs: usize,
) -> Result<Vec<FoldOutcome>> {
    plan.folds
        .par_iter()
        .enumerate()
        .map(|(index, fold)| {
            let net_cfg = cfg.net_config(inputs, index);
            let (network, report) = train(data, &fold.train, &net_cfg)
                .with_context(|| format!("train stage (fold {index})"))?;
            let relevances = relevance(&network);
            Ok(FoldOutcome {
                network,
                report,
                relevances,
            })
        })
        .collect()
}

/// A finished estimation run plus the in-memory pieces later stages reuse.
pub struct EstimateRun {
    pub result: RunResult,
    pub networks: Vec<Network>,
    pub plan: ResamplingPlan,
    pub data: PevDataset,
}

/// The full pipeline: series, embedding dataset, one network per fold,
/// aggregated relevances, and the selected embedding.
pub fn run_estimate(cfg: &RunConfig) -> Result<EstimateRun> {
    let start = Instant::now();
    let series = prepared_series(cfg)?;
    let space = SearchSpace::new(cfg.m_max, cfg.tau_max).context("embed stage")?;
    let data = build_pev(&series, &space).context("embed stage")?;
    let plan = make_resampling(data.count(), cfg.folds, cfg.train_fraction, cfg.seed)
        .context("resample stage")?;
    let outcomes = train_folds(cfg, &data, &plan, space.input_width())?;

    let profiles: Vec<Vec<f64>> = outcomes.iter().map(|o| o.relevances.clone()).collect();
    let profile = aggregate(&profiles).context("aggregate stage")?;
    let estimate = select_embedding(&profile, cfg.eps_max, cfg.eps_min).context("select stage")?;

    let result = RunResult {
        estimate,
        profile,
        train_reports: outcomes.iter().map(|o| o.report.clone()).collect(),
        forecast: None,
        provenance: Provenance {
            config: cfg.clone(),
            fold_seeds: (0..cfg.folds).map(|i| cfg.seed + i as u64).collect(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_ms: start.elapsed().as_millis(),
        },
    };
    Ok(EstimateRun {
        result,
        networks: outcomes.into_iter().map(|o| o.network).collect(),
        plan,
        data,
    })
}

/// Writes estimate.json, relevance.csv, and relevance.svg into `out_dir`.
pub fn write_estimate_outputs(out_dir: &Path, result: &RunResult) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let json_path = out_dir.join("estimate.json");
    write_json(&json_path, result)?;
    let csv_path = out_dir.join("relevance.csv");
    io::write_relevance_csv(&csv_path, &result.profile)?;
    let svg_path = out_dir.join("relevance.svg");
    std::fs::write(&svg_path, svg::relevance_chart(&result.profile, &result.estimate))
        .with_context(|| format!("writing {}", svg_path.display()))?;
    Ok(vec![json_path, csv_path, svg_path])
}

/// A forecast evaluation and everything behind it.
pub struct ForecastOutcome {
    pub report: ForecastReport,
    /// Present when the run trained its own folds (not snapshot-driven).
    pub estimate: Option<EmbeddingEstimate>,
    pub snapshot: Snapshot,
    pub provenance: Provenance,
}

/// Trains (or reloads) a network and forecasts `horizon` held-out steps of
/// the last fold, single-step, always from true observations.
pub fn run_forecast(
    cfg: &RunConfig,
    horizon: usize,
    snapshot_path: Option<&Path>,
) -> Result<ForecastOutcome> {
    let start = Instant::now();
    let series = prepared_series(cfg)?;
    let space = SearchSpace::new(cfg.m_max, cfg.tau_max).context("embed stage")?;
    let data = build_pev(&series, &space).context("embed stage")?;
    let plan = make_resampling(data.count(), cfg.folds, cfg.train_fraction, cfg.seed)
        .context("resample stage")?;
    let last_fold = plan.folds.len() - 1;

    let (network, net_cfg, estimate) = match snapshot_path {
        Some(path) => {
            let snapshot = snapshot::load(path)?;
            if snapshot.network.inputs() != space.input_width() {
                bail!(
                    "snapshot expects {} inputs but the search space yields {}",
                    snapshot.network.inputs(),
                    space.input_width()
                );
            }
            (snapshot.network, snapshot.config, None)
        }
        None => {
            let outcomes = train_folds(cfg, &data, &plan, space.input_width())?;
            let profiles: Vec<Vec<f64>> = outcomes.iter().map(|o| o.relevances.clone()).collect();
            let profile = aggregate(&profiles).context("aggregate stage")?;
            let estimate =
                select_embedding(&profile, cfg.eps_max, cfg.eps_min).context("select stage")?;
            let network = outcomes.into_iter().last().expect("at least one fold").network;
            (network, cfg.net_config(space.input_width(), last_fold), Some(estimate))
        }
    };

    let report = forecast_eval(&network, &data, &plan.folds[last_fold].test, horizon)
        .context("forecast stage")?;
    Ok(ForecastOutcome {
        report,
        estimate,
        snapshot: Snapshot {
            config: net_cfg,
            network,
        },
        provenance: Provenance {
            config: cfg.clone(),
            fold_seeds: (0..cfg.folds).map(|i| cfg.seed + i as u64).collect(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_ms: start.elapsed().as_millis(),
        },
    })
}

/// One grid point of a search-space sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub m_max: usize,
    pub tau_max: usize,
    pub inputs: usize,
    pub m: usize,
    pub tau: usize,
    pub peak: usize,
    pub score: f64,
    pub stochastic: bool,
}

/// Runs the estimation pipeline over a grid of search spaces.
pub fn run_sweep(cfg: &RunConfig, m_maxes: &[usize], tau_maxes: &[usize]) -> Result<Vec<SweepRow>> {
    let grid: Vec<(usize, usize)> = m_maxes
        .iter()
        .flat_map(|&m| tau_maxes.iter().map(move |&t| (m, t)))
        .collect();
    grid.par_iter()
        .map(|&(m_max, tau_max)| {
            let mut point = cfg.clone();
            point.m_max = m_max;
            point.tau_max = tau_max;
            let run = run_estimate(&point)
                .with_context(|| format!("sweep point ({m_max}, {tau_max})"))?;
            let est = &run.result.estimate;
            Ok(SweepRow {
                m_max,
                tau_max,
                inputs: (m_max - 1) * tau_max,
                m: est.m,
                tau: est.tau,
                peak: est.peak,
                score: est.score,
                stochastic: est.stochastic,
            })
        })
        .collect()
}

/// Writes sweep.csv and sweep.json into `out_dir`.
pub fn write_sweep_outputs(out_dir: &Path, rows: &[SweepRow]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let csv_path = out_dir.join("sweep.csv");
    let mut out = String::from("m_max,tau_max,inputs,m,tau,peak,score,stochastic\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{:.6},{}\n",
            r.m_max, r.tau_max, r.inputs, r.m, r.tau, r.peak, r.score, r.stochastic
        ));
    }
    std::fs::write(&csv_path, out).with_context(|| format!("writing {}", csv_path.display()))?;
    let json_path = out_dir.join("sweep.json");
    write_json(&json_path, &rows)?;
    Ok(vec![csv_path, json_path])
}
