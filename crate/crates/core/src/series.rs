//! Benchmark time-series generators and series-level transforms.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)] // method fallbacks for the no_std build
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::ode::rk4_step;

/// Orbit magnitude beyond which a map iteration is reported as divergent.
const ORBIT_BOUND: f64 = 1e6;

/// Ordered real observations with provenance metadata.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TimeSeries {
    pub values: Vec<f64>,
    pub name: String,
    /// Seconds per step; set only by flow generators.
    pub sampling_time: Option<f64>,
    /// RNG seed when the values involve random draws.
    pub seed: Option<u64>,
}

impl TimeSeries {
    /// Wraps raw observations, checking the type invariants (length >= 2,
    /// all values finite).
    pub fn new(values: Vec<f64>, name: impl Into<String>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InsufficientData {
                required: 2,
                actual: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite observation at index {pos}"
            )));
        }
        Ok(TimeSeries {
            values,
            name: name.into(),
            sampling_time: None,
            seed: None,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// The dynamical system behind a generated series, with its parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SystemKind {
    Logistic { r: f64 },
    Henon { a: f64, b: f64 },
    Lorenz { sigma: f64, rho: f64, beta: f64 },
    Rossler { a: f64, b: f64, c: f64 },
    Gaussian { mu: f64, sigma: f64 },
}

impl SystemKind {
    pub fn name(&self) -> &'static str {
        match self {
            SystemKind::Logistic { .. } => "logistic",
            SystemKind::Henon { .. } => "henon",
            SystemKind::Lorenz { .. } => "lorenz",
            SystemKind::Rossler { .. } => "rossler",
            SystemKind::Gaussian { .. } => "gaussian",
        }
    }

    /// Degrees of freedom of the generating rule.
    pub fn dimension(&self) -> usize {
        match self {
            SystemKind::Logistic { .. } | SystemKind::Gaussian { .. } => 1,
            SystemKind::Henon { .. } => 2,
            SystemKind::Lorenz { .. } | SystemKind::Rossler { .. } => 3,
        }
    }

    pub fn is_map(&self) -> bool {
        matches!(self, SystemKind::Logistic { .. } | SystemKind::Henon { .. })
    }

    pub fn is_flow(&self) -> bool {
        matches!(self, SystemKind::Lorenz { .. } | SystemKind::Rossler { .. })
    }
}

/// Documented expected embedding ranges for benchmark systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroundTruth {
    /// Inclusive range of accepted embedding dimensions.
    pub m: (usize, usize),
    /// Inclusive range of accepted time delays.
    pub tau: (usize, usize),
}

/// Full recipe for one generated series.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SystemSpec {
    pub kind: SystemKind,
    pub initial_state: Vec<f64>,
    /// Which state coordinate is emitted as the univariate series.
    pub observed_coordinate: usize,
    /// Number of emitted observations.
    pub n: usize,
    /// Integration step for flow systems.
    pub sampling_time: f64,
    /// Integration steps discarded before sampling (flow systems only), so
    /// the trajectory has settled onto the attractor.
    pub transient: usize,
    /// Seed for random draws (Gaussian kind only).
    pub seed: u64,
    pub ground_truth: Option<GroundTruth>,
}

impl SystemSpec {
    /// Logistic map with the standard chaotic growth rate r = 3.8.
    pub fn logistic(n: usize) -> Self {
        SystemSpec {
            kind: SystemKind::Logistic { r: 3.8 },
            initial_state: alloc::vec![0.5],
            observed_coordinate: 0,
            n,
            sampling_time: 1.0,
            transient: 0,
            seed: 0,
            ground_truth: Some(GroundTruth { m: (2, 3), tau: (1, 1) }),
        }
    }

    /// Henon map with the classic (a, b) = (1.4, 0.3).
    pub fn henon(n: usize) -> Self {
        SystemSpec {
            kind: SystemKind::Henon { a: 1.4, b: 0.3 },
            initial_state: alloc::vec![0.0, 0.0],
            observed_coordinate: 0,
            n,
            sampling_time: 1.0,
            transient: 0,
            seed: 0,
            ground_truth: Some(GroundTruth { m: (2, 4), tau: (1, 1) }),
        }
    }

    /// Lorenz system with (sigma, rho, beta) = (10, 28, 8/3).
    pub fn lorenz(n: usize) -> Self {
        SystemSpec {
            kind: SystemKind::Lorenz {
                sigma: 10.0,
                rho: 28.0,
                beta: 8.0 / 3.0,
            },
            initial_state: alloc::vec![1.0, 1.0, 1.0],
            observed_coordinate: 0,
            n,
            sampling_time: 0.01,
            transient: 1000,
            seed: 0,
            ground_truth: Some(GroundTruth { m: (2, 3), tau: (5, 12) }),
        }
    }

    /// Rossler system with (a, b, c) = (0.2, 0.2, 5.7).
    pub fn rossler(n: usize) -> Self {
        SystemSpec {
            kind: SystemKind::Rossler { a: 0.2, b: 0.2, c: 5.7 },
            initial_state: alloc::vec![1.0, 1.0, 1.0],
            observed_coordinate: 0,
            n,
            sampling_time: 0.01,
            transient: 1000,
            seed: 0,
            ground_truth: Some(GroundTruth { m: (3, 3), tau: (5, 12) }),
        }
    }

    /// Standard normal i.i.d. noise series.
    pub fn gaussian(n: usize, seed: u64) -> Self {
        SystemSpec {
            kind: SystemKind::Gaussian { mu: 0.0, sigma: 1.0 },
            initial_state: Vec::new(),
            observed_coordinate: 0,
            n,
            sampling_time: 1.0,
            transient: 0,
            seed,
            ground_truth: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!(
                "observation count must be at least 2, got {}",
                self.n
            )));
        }
        let dim = self.kind.dimension();
        if !matches!(self.kind, SystemKind::Gaussian { .. }) {
            if self.initial_state.len() != dim {
                return Err(Error::InvalidParameter(format!(
                    "{} needs a {dim}-dimensional initial state, got {}",
                    self.kind.name(),
                    self.initial_state.len()
                )));
            }
            if self.initial_state.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(
                    "initial state must be finite".into(),
                ));
            }
        }
        if self.observed_coordinate >= dim {
            return Err(Error::InvalidParameter(format!(
                "observed coordinate {} out of range for a {dim}-dimensional system",
                self.observed_coordinate
            )));
        }
        if self.kind.is_flow() && (self.sampling_time.is_nan() || self.sampling_time <= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sampling time must be positive, got {}",
                self.sampling_time
            )));
        }
        match self.kind {
            SystemKind::Logistic { .. } => {
                let x0 = self.initial_state[0];
                if x0 <= 0.0 || x0 >= 1.0 {
                    return Err(Error::InvalidParameter(format!(
                        "logistic initial state must lie in (0, 1), got {x0}"
                    )));
                }
            }
            SystemKind::Gaussian { sigma, .. } if sigma.is_nan() || sigma < 0.0 => {
                return Err(Error::InvalidParameter(format!(
                    "gaussian sigma must be non-negative, got {sigma}"
                )));
            }
            _ => {}
        }
        Ok(())
    }
}

/// Runs the generator matching `spec.kind`.
pub fn generate(spec: &SystemSpec) -> Result<TimeSeries> {
    match spec.kind {
        SystemKind::Logistic { .. } | SystemKind::Henon { .. } => generate_map(spec),
        SystemKind::Lorenz { .. } | SystemKind::Rossler { .. } => generate_flow(spec),
        SystemKind::Gaussian { .. } => generate_gaussian(spec),
    }
}

/// Iterates a discrete map exactly, starting from the spec's initial state.
pub fn generate_map(spec: &SystemSpec) -> Result<TimeSeries> {
    spec.validate()?;
    let mut values = Vec::with_capacity(spec.n);
    match spec.kind {
        SystemKind::Logistic { r } => {
            let mut x = spec.initial_state[0];
            values.push(x);
            for step in 1..spec.n {
                x = r * x * (1.0 - x);
                if !x.is_finite() || x.abs() > ORBIT_BOUND {
                    return Err(Error::UnboundedOrbit { step });
                }
                values.push(x);
            }
        }
        SystemKind::Henon { a, b } => {
            let (mut x, mut y) = (spec.initial_state[0], spec.initial_state[1]);
            values.push(if spec.observed_coordinate == 0 { x } else { y });
            for step in 1..spec.n {
                let next_x = 1.0 - a * x * x + y;
                let next_y = b * x;
                x = next_x;
                y = next_y;
                if !(x.is_finite() && y.is_finite()) || x.abs().max(y.abs()) > ORBIT_BOUND {
                    return Err(Error::UnboundedOrbit { step });
                }
                values.push(if spec.observed_coordinate == 0 { x } else { y });
            }
        }
        _ => {
            return Err(Error::InvalidParameter(format!(
                "{} is not a map system",
                spec.kind.name()
            )))
        }
    }
    Ok(TimeSeries {
        values,
        name: spec.kind.name().into(),
        sampling_time: None,
        seed: None,
    })
}

/// Integrates a flow with fixed-step RK4, discards the transient, and samples
/// the observed coordinate once per step.
pub fn generate_flow(spec: &SystemSpec) -> Result<TimeSeries> {
    spec.validate()?;
    type Field = alloc::boxed::Box<dyn Fn(&[f64; 3]) -> [f64; 3]>;
    let field: Field = match spec.kind {
        SystemKind::Lorenz { sigma, rho, beta } => alloc::boxed::Box::new(move |s| {
            [
                sigma * (s[1] - s[0]),
                s[0] * (rho - s[2]) - s[1],
                s[0] * s[1] - beta * s[2],
            ]
        }),
        SystemKind::Rossler { a, b, c } => alloc::boxed::Box::new(move |s| {
            [-s[1] - s[2], s[0] + a * s[1], b + s[2] * (s[0] - c)]
        }),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "{} is not a flow system",
                spec.kind.name()
            )))
        }
    };

    let h = spec.sampling_time;
    let mut state = [
        spec.initial_state[0],
        spec.initial_state[1],
        spec.initial_state[2],
    ];
    for step in 0..spec.transient {
        state = rk4_step(&field, &state, h);
        if state.iter().any(|v| !v.is_finite()) {
            return Err(Error::IntegrationBlowUp { step });
        }
    }
    let mut values = Vec::with_capacity(spec.n);
    values.push(state[spec.observed_coordinate]);
    for step in 1..spec.n {
        state = rk4_step(&field, &state, h);
        if state.iter().any(|v| !v.is_finite()) {
            return Err(Error::IntegrationBlowUp {
                step: spec.transient + step,
            });
        }
        values.push(state[spec.observed_coordinate]);
    }
    Ok(TimeSeries {
        values,
        name: spec.kind.name().into(),
        sampling_time: Some(h),
        seed: None,
    })
}

/// Draws `n` i.i.d. normal observations, reproducible per seed.
pub fn generate_gaussian(spec: &SystemSpec) -> Result<TimeSeries> {
    spec.validate()?;
    let SystemKind::Gaussian { mu, sigma } = spec.kind else {
        return Err(Error::InvalidParameter(format!(
            "{} is not the gaussian system",
            spec.kind.name()
        )));
    };
    let normal = Normal::new(mu, sigma)
        .map_err(|e| Error::InvalidParameter(format!("gaussian parameters: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let values = (0..spec.n).map(|_| normal.sample(&mut rng)).collect();
    Ok(TimeSeries {
        values,
        name: "gaussian".into(),
        sampling_time: None,
        seed: Some(spec.seed),
    })
}

/// Adds i.i.d. Gaussian draws element-wise; meant to run before
/// normalization.
pub fn add_noise(series: &TimeSeries, mu: f64, sigma: f64, seed: u64) -> Result<TimeSeries> {
    if series.is_empty() {
        return Err(Error::InsufficientData { required: 1, actual: 0 });
    }
    let normal = Normal::new(mu, sigma)
        .map_err(|e| Error::InvalidParameter(format!("noise parameters: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = series
        .values
        .iter()
        .map(|&v| v + normal.sample(&mut rng))
        .collect();
    Ok(TimeSeries {
        values,
        name: series.name.clone(),
        sampling_time: series.sampling_time,
        seed: Some(seed),
    })
}

/// Rescales the series to [0, 1]: (x - min) / (max - min).
pub fn normalize(series: &TimeSeries) -> Result<TimeSeries> {
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in &series.values {
        min = min.min(v);
        max = max.max(v);
    }
    if max <= min {
        return Err(Error::DegenerateSeries);
    }
    let range = max - min;
    let values = series.values.iter().map(|&v| (v - min) / range).collect();
    Ok(TimeSeries {
        values,
        name: series.name.clone(),
        sampling_time: series.sampling_time,
        seed: series.seed,
    })
}

/// Resamples the series to `k` equally spaced points by piecewise-cubic
/// (Catmull-Rom) interpolation.
pub fn smooth_resample(series: &TimeSeries, k: usize) -> Result<TimeSeries> {
    let n = series.len();
    if n < 2 {
        return Err(Error::InsufficientData { required: 2, actual: n });
    }
    if k < 2 || k > n {
        return Err(Error::InvalidParameter(format!(
            "resample count must lie in [2, {n}], got {k}"
        )));
    }
    let v = &series.values;
    let mut values = Vec::with_capacity(k);
    for i in 0..k {
        // Exact integer product first, so grid-aligned positions (and in
        // particular k = n) reproduce samples bit-for-bit.
        let t = (i * (n - 1)) as f64 / (k - 1) as f64;
        let base = t.floor();
        let u = t - base;
        let seg = base as usize;
        if u == 0.0 {
            values.push(v[seg]);
            continue;
        }
        // Clamped endpoints: the first and last samples stand in for the
        // missing outer neighbors.
        let p0 = v[seg.saturating_sub(1)];
        let p1 = v[seg];
        let p2 = v[seg + 1];
        let p3 = v[(seg + 2).min(n - 1)];
        values.push(catmull_rom(p0, p1, p2, p3, u));
    }
    Ok(TimeSeries {
        values,
        name: series.name.clone(),
        sampling_time: series.sampling_time,
        seed: series.seed,
    })
}

fn catmull_rom(p0: f64, p1: f64, p2: f64, p3: f64, u: f64) -> f64 {
    0.5 * (2.0 * p1
        + (p2 - p0) * u
        + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * u * u
        + (3.0 * (p1 - p2) + p3 - p0) * u * u * u)
}
