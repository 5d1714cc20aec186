//! Run configuration: dataset selection, search space, thresholds, and
//! network overrides, with a flat key=value file format underneath the
//! command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use delaynet_core::net::NetConfig;
use serde::{Deserialize, Serialize};

/// Where the input series comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataSelector {
    /// One of the builtin systems: logistic, henon, lorenz, rossler,
    /// gaussian.
    Builtin { system: String },
    /// A CSV file and the zero-based column to read.
    Csv { path: PathBuf, column: usize },
}

impl DataSelector {
    pub fn parse(value: &str, column: usize) -> Self {
        match value {
            "logistic" | "henon" | "lorenz" | "rossler" | "gaussian" => DataSelector::Builtin {
                system: value.to_string(),
            },
            path => DataSelector::Csv {
                path: PathBuf::from(path),
                column,
            },
        }
    }
}

/// Gaussian noise injected before normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub mu: f64,
    pub sigma: f64,
}

/// Training hyperparameter overrides; defaults are the reference settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetOverrides {
    pub learning_rate: f64,
    pub momentum: f64,
    pub forgetting: f64,
    pub epochs: usize,
    pub cost_tolerance: f64,
    pub hidden: Option<usize>,
    pub init_range: (f64, f64),
}

impl Default for NetOverrides {
    fn default() -> Self {
        let reference = NetConfig::for_inputs(1, 0);
        NetOverrides {
            learning_rate: reference.learning_rate,
            momentum: reference.momentum,
            forgetting: reference.forgetting,
            epochs: reference.epochs,
            cost_tolerance: reference.cost_tolerance,
            hidden: None,
            init_range: reference.init_range,
        }
    }
}

/// Everything one estimation run depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub data: DataSelector,
    /// Observation count for builtin generators.
    pub n: usize,
    pub m_max: usize,
    pub tau_max: usize,
    pub eps_max: f64,
    pub eps_min: f64,
    pub folds: usize,
    pub train_fraction: f64,
    /// Master seed; fold seeds derive as seed + fold index.
    pub seed: u64,
    pub noise: Option<NoiseSpec>,
    pub net: NetOverrides,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            data: DataSelector::Builtin {
                system: "logistic".to_string(),
            },
            n: 1000,
            m_max: 5,
            tau_max: 3,
            eps_max: 0.80,
            eps_min: 0.10,
            folds: 5,
            train_fraction: 0.75,
            seed: 1,
            noise: None,
            net: NetOverrides::default(),
            out_dir: PathBuf::from("."),
        }
    }
}

impl RunConfig {
    /// Concrete network settings for an input width, seeded for one fold.
    pub fn net_config(&self, inputs: usize, fold: usize) -> NetConfig {
        NetConfig {
            inputs,
            hidden: self.net.hidden,
            learning_rate: self.net.learning_rate,
            momentum: self.net.momentum,
            forgetting: self.net.forgetting,
            epochs: self.net.epochs,
            cost_tolerance: self.net.cost_tolerance,
            init_range: self.net.init_range,
            seed: self.seed + fold as u64,
        }
    }
}

/// Optional values read from a key=value config file; command-line flags
/// override these, and built-in defaults fill the rest.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig {
    pub data: Option<String>,
    pub column: Option<usize>,
    pub n: Option<usize>,
    pub m_max: Option<usize>,
    pub tau_max: Option<usize>,
    pub eps_max: Option<f64>,
    pub eps_min: Option<f64>,
    pub folds: Option<usize>,
    pub train_fraction: Option<f64>,
    pub seed: Option<u64>,
    pub noise_mu: Option<f64>,
    pub noise_sigma: Option<f64>,
    pub learning_rate: Option<f64>,
    pub momentum: Option<f64>,
    pub forgetting: Option<f64>,
    pub epochs: Option<usize>,
    pub cost_tolerance: Option<f64>,
    pub hidden: Option<usize>,
    pub init_range: Option<(f64, f64)>,
    pub out_dir: Option<PathBuf>,
}

impl FileConfig {
    /// Parses a flat key=value file. Blank lines and `#` comments are
    /// ignored; unknown keys are errors.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing config file {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key=value, got {line:?}", lineno + 1);
            };
            if pairs.insert(key.trim().to_string(), value.trim().to_string()).is_some() {
                bail!("line {}: duplicate key {:?}", lineno + 1, key.trim());
            }
        }

        let mut cfg = FileConfig::default();
        for (key, value) in pairs {
            match key.as_str() {
                "data" => cfg.data = Some(value),
                "column" => cfg.column = Some(parse(&key, &value)?),
                "n" => cfg.n = Some(parse(&key, &value)?),
                "m_max" => cfg.m_max = Some(parse(&key, &value)?),
                "tau_max" => cfg.tau_max = Some(parse(&key, &value)?),
                "eps_max" => cfg.eps_max = Some(parse(&key, &value)?),
                "eps_min" => cfg.eps_min = Some(parse(&key, &value)?),
                "folds" => cfg.folds = Some(parse(&key, &value)?),
                "train_fraction" => cfg.train_fraction = Some(parse(&key, &value)?),
                "seed" => cfg.seed = Some(parse(&key, &value)?),
                "noise_mu" => cfg.noise_mu = Some(parse(&key, &value)?),
                "noise_sigma" => cfg.noise_sigma = Some(parse(&key, &value)?),
                "eta" | "learning_rate" => cfg.learning_rate = Some(parse(&key, &value)?),
                "alpha" | "momentum" => cfg.momentum = Some(parse(&key, &value)?),
                "lambda" | "forgetting" => cfg.forgetting = Some(parse(&key, &value)?),
                "epochs" => cfg.epochs = Some(parse(&key, &value)?),
                "c_max" | "cost_tolerance" => cfg.cost_tolerance = Some(parse(&key, &value)?),
                "hidden" => cfg.hidden = Some(parse(&key, &value)?),
                "init_range" => {
                    let Some((lo, hi)) = value.split_once(',') else {
                        bail!("init_range expects two comma-separated numbers, got {value:?}");
                    };
                    cfg.init_range = Some((parse("init_range", lo.trim())?, parse("init_range", hi.trim())?));
                }
                "out_dir" => cfg.out_dir = Some(PathBuf::from(value)),
                other => bail!("unknown config key {other:?}"),
            }
        }
        Ok(cfg)
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    value
        .parse()
        .with_context(|| format!("config key {key}: invalid value {value:?}"))
}
