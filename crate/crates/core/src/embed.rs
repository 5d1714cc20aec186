//! Embedding-vector datasets and train/test resampling plans.
//!
//! A provisional embedding vector (PEV) is the dense window
//! `(x_t, x_{t+1}, ..., x_{t+W-1})` whose first `W - 1` observations feed the
//! network and whose last observation is the forecast target. A standard
//! embedding vector (SEV) is the sparse phase state
//! `(x_t, x_{t+tau}, ..., x_{t+(m-1)tau})` used once `(m, tau)` are known.

use alloc::vec::Vec;
#[allow(unused_imports)] // method fallbacks for the no_std build
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Maximum embedding bounds; they fix the PEV length and the input width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchSpace {
    pub m_max: usize,
    pub tau_max: usize,
}

impl SearchSpace {
    pub fn new(m_max: usize, tau_max: usize) -> Result<Self> {
        if m_max < 2 || tau_max < 1 {
            return Err(Error::InvalidParameter(alloc::format!(
                "search space needs m_max >= 2 and tau_max >= 1, got ({m_max}, {tau_max})"
            )));
        }
        let space = SearchSpace { m_max, tau_max };
        if space.pev_len() < 3 {
            return Err(Error::InvalidParameter(alloc::format!(
                "search space ({m_max}, {tau_max}) yields a window of {} observations; \
                 at least 3 are required",
                space.pev_len()
            )));
        }
        Ok(space)
    }

    /// Window length (m_max - 1) * tau_max + 1.
    pub fn pev_len(&self) -> usize {
        (self.m_max - 1) * self.tau_max + 1
    }

    /// Network input width: one less than the window, the last observation
    /// being the target.
    pub fn input_width(&self) -> usize {
        self.pev_len() - 1
    }
}

/// Supervised one-step-forecasting pairs cut from a series.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PevDataset {
    inputs: Vec<f64>,
    targets: Vec<f64>,
    source_indices: Vec<usize>,
    width: usize,
}

impl PevDataset {
    /// Assembles a dataset from explicit rows; every input row must share
    /// one width.
    pub fn from_rows(rows: Vec<Vec<f64>>, targets: Vec<f64>) -> Result<Self> {
        if rows.is_empty() || rows.len() != targets.len() {
            return Err(Error::LengthMismatch {
                expected: rows.len(),
                actual: targets.len(),
            });
        }
        let width = rows[0].len();
        if width == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidParameter(
                "input rows must share one nonzero width".into(),
            ));
        }
        let count = rows.len();
        let mut inputs = Vec::with_capacity(count * width);
        for row in rows {
            inputs.extend_from_slice(&row);
        }
        Ok(PevDataset {
            inputs,
            targets,
            source_indices: (0..count).collect(),
            width,
        })
    }

    pub fn count(&self) -> usize {
        self.targets.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn input(&self, row: usize) -> &[f64] {
        &self.inputs[row * self.width..(row + 1) * self.width]
    }

    pub fn target(&self, row: usize) -> f64 {
        self.targets[row]
    }

    /// Series index of the window's first observation.
    pub fn source_index(&self, row: usize) -> usize {
        self.source_indices[row]
    }
}

/// Cuts every contiguous window of `space.pev_len()` observations into an
/// input row plus target.
pub fn build_pev(series: &TimeSeries, space: &SearchSpace) -> Result<PevDataset> {
    let n = series.len();
    let width = space.input_width();
    if n <= space.pev_len() {
        return Err(Error::InsufficientData {
            required: space.pev_len() + 1,
            actual: n,
        });
    }
    let count = n - width;
    let mut inputs = Vec::with_capacity(count * width);
    let mut targets = Vec::with_capacity(count);
    for t in 0..count {
        inputs.extend_from_slice(&series.values[t..t + width]);
        targets.push(series.values[t + width]);
    }
    Ok(PevDataset {
        inputs,
        targets,
        source_indices: (0..count).collect(),
        width,
    })
}

/// Builds the phase states `(x_t, x_{t+tau}, ..., x_{t+(m-1)tau})`.
pub fn build_sev(series: &TimeSeries, m: usize, tau: usize) -> Result<Vec<Vec<f64>>> {
    if m < 1 || tau < 1 {
        return Err(Error::InvalidParameter(alloc::format!(
            "embedding needs m >= 1 and tau >= 1, got ({m}, {tau})"
        )));
    }
    let n = series.len();
    let span = (m - 1) * tau;
    if n <= span {
        return Err(Error::InsufficientData {
            required: span + 1,
            actual: n,
        });
    }
    let rows = n - span;
    let mut states = Vec::with_capacity(rows);
    for t in 0..rows {
        states.push((0..m).map(|c| series.values[t + c * tau]).collect());
    }
    Ok(states)
}

/// One train/test split over dataset rows.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// A reproducible collection of independent train/test splits.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResamplingPlan {
    pub folds: Vec<Fold>,
    pub train_fraction: f64,
    pub seed: u64,
}

/// Draws `folds` independent uniform shuffles of `0..count`, each split at
/// `round(train_fraction * count)`.
pub fn make_resampling(
    count: usize,
    folds: usize,
    train_fraction: f64,
    seed: u64,
) -> Result<ResamplingPlan> {
    if folds < 1 || count < folds {
        return Err(Error::InvalidParameter(alloc::format!(
            "need count >= folds >= 1, got count {count}, folds {folds}"
        )));
    }
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let train_len = (train_fraction * count as f64).round() as usize;
    if train_len == 0 || train_len >= count {
        return Err(Error::DegenerateSplit { count, train: train_len });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut plan = Vec::with_capacity(folds);
    for _ in 0..folds {
        let mut order: Vec<usize> = (0..count).collect();
        order.shuffle(&mut rng);
        let mut train = order[..train_len].to_vec();
        let mut test = order[train_len..].to_vec();
        // Epoch shuffling reorders training rows anyway; sorted indices keep
        // the plan canonical.
        train.sort_unstable();
        test.sort_unstable();
        plan.push(Fold { train, test });
    }
    Ok(ResamplingPlan {
        folds: plan,
        train_fraction,
        seed,
    })
}
