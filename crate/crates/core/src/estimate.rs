//! Relevance profiles and embedding-parameter selection.
//!
//! After training, each input dimension's relevance is the summed magnitude
//! of its input-to-hidden weights. Profiles from several resamplings are
//! aggregated, and `(m, tau)` are read off the mean profile with two
//! thresholds: an upper one deciding how many dimensions count as relevant
//! (m), and a lower one qualifying local minima for the delay scan (tau).

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::net::Network;

/// Five-number summary of one dimension's relevance across resamplings.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Per-fold relevances with their column means and box-plot summaries.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RelevanceProfile {
    pub per_fold: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    pub summaries: Vec<FiveNumber>,
}

impl RelevanceProfile {
    pub fn dims(&self) -> usize {
        self.mean.len()
    }

    pub fn fold_count(&self) -> usize {
        self.per_fold.len()
    }
}

/// The selected embedding parameters with their selection diagnostics.
/// `peak` and `trough` are 1-based dimension indices into the profile.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EmbeddingEstimate {
    pub m: usize,
    pub tau: usize,
    /// Most relevant dimension (ties break toward the smallest index).
    pub peak: usize,
    /// Qualifying local minimum the delay was read from, when one exists.
    pub trough: Option<usize>,
    pub eps_max: f64,
    pub eps_min: f64,
    /// Fold-to-fold variability score; see [`stochasticity_diagnostic`].
    pub score: f64,
    /// True when the profile is too fold-variable to trust the estimate.
    pub stochastic: bool,
}

/// Relevance of each input dimension: the summed magnitudes of its
/// input-to-hidden weights.
pub fn relevance(net: &Network) -> Vec<f64> {
    let l = net.hidden();
    (0..net.inputs())
        .map(|i| (0..l).map(|j| net.input_weight(i, j).abs()).sum())
        .collect()
}

/// Combines per-fold relevance vectors into means and box-plot summaries.
pub fn aggregate(profiles: &[Vec<f64>]) -> Result<RelevanceProfile> {
    let Some(first) = profiles.first() else {
        return Err(Error::InvalidParameter("aggregate needs at least one profile".into()));
    };
    let dims = first.len();
    for p in profiles {
        if p.len() != dims {
            return Err(Error::LengthMismatch {
                expected: dims,
                actual: p.len(),
            });
        }
    }
    let folds = profiles.len() as f64;
    let mean = (0..dims)
        .map(|i| profiles.iter().map(|p| p[i]).sum::<f64>() / folds)
        .collect();
    let summaries = (0..dims)
        .map(|i| {
            let mut column: Vec<f64> = profiles.iter().map(|p| p[i]).collect();
            column.sort_unstable_by(f64::total_cmp);
            FiveNumber {
                min: column[0],
                q1: quantile_sorted(&column, 0.25),
                median: quantile_sorted(&column, 0.5),
                q3: quantile_sorted(&column, 0.75),
                max: column[column.len() - 1],
            }
        })
        .collect();
    Ok(RelevanceProfile {
        per_fold: profiles.to_vec(),
        mean,
        summaries,
    })
}

/// Linear-interpolation empirical quantile (the common statistical default:
/// rank `h = (n - 1) * level` interpolated between order statistics).
/// `sorted` must be ascending and nonempty.
pub fn quantile_sorted(sorted: &[f64], level: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let h = (sorted.len() - 1) as f64 * level.clamp(0.0, 1.0);
    let lo = h as usize;
    let frac = h - lo as f64;
    if frac == 0.0 || lo + 1 == sorted.len() {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

/// Reads `(m, tau)` off the mean relevance vector.
///
/// Dimensions below `eps_min` of the peak relevance count as forgotten and
/// take no part in the selection. m is the number of dimensions reaching
/// both the `eps_max` quantile of the profile and that relevance floor (at
/// least two; the two largest stand in if fewer qualify). tau comes from the
/// first interior local minimum of the surviving dimensions, scanning from
/// the last toward the first; without one the delay falls back to 1.
pub fn select_embedding(
    profile: &RelevanceProfile,
    eps_max: f64,
    eps_min: f64,
) -> Result<EmbeddingEstimate> {
    let mean = &profile.mean;
    let dims = mean.len();
    if dims < 2 {
        return Err(Error::InvalidParameter(alloc::format!(
            "selection needs at least 2 dimensions, got {dims}"
        )));
    }
    if eps_min.is_nan() || eps_max.is_nan() || eps_min <= 0.0 || eps_min >= eps_max || eps_max > 1.0 {
        return Err(Error::InvalidParameter(alloc::format!(
            "thresholds must satisfy 0 < eps_min < eps_max <= 1, got ({eps_max}, {eps_min})"
        )));
    }
    if mean.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidParameter("relevances must be finite and non-negative".into()));
    }
    if mean.iter().all(|&v| v == 0.0) {
        return Err(Error::NoSignal);
    }

    let (score, stochastic) = if profile.fold_count() >= 2 {
        stochasticity_diagnostic(profile, eps_min)?
    } else {
        (0.0, false)
    };

    // Degenerate flat profile: nothing distinguishes the dimensions, so the
    // minimal embedding is reported.
    let peak_index = argmax(mean);
    if mean.iter().all(|&v| v == mean[0]) {
        return Ok(EmbeddingEstimate {
            m: 2,
            tau: 1,
            peak: peak_index + 1,
            trough: None,
            eps_max,
            eps_min,
            score,
            stochastic,
        });
    }

    let (quantile_level, floor) = selection_levels(mean, eps_max, eps_min);
    let threshold = quantile_level.max(floor);
    let m = mean.iter().filter(|&&v| v >= threshold).count().max(2);
    let trough = find_trough(mean, peak_index, floor);
    let tau = trough.map_or(1, |t| peak_index.abs_diff(t) + 1);

    Ok(EmbeddingEstimate {
        m,
        tau,
        peak: peak_index + 1,
        trough: trough.map(|t| t + 1),
        eps_max,
        eps_min,
        score,
        stochastic,
    })
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// The two levels behind the selection rules: the `eps_max` quantile of the
/// relevances, and the `eps_min` fraction of the peak relevance below which
/// a dimension counts as forgotten. m counts dimensions reaching both; the
/// delay scan runs over dimensions clearing the floor.
pub fn selection_levels(mean: &[f64], eps_max: f64, eps_min: f64) -> (f64, f64) {
    let mut sorted = mean.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let quantile = quantile_sorted(&sorted, eps_max);
    (quantile, eps_min * mean[argmax(mean)])
}

/// First interior local minimum among the dimensions at or above `floor`,
/// scanning from the last dimension toward the first. Minima are judged
/// against the surviving neighbors (plateaus qualify via non-strict
/// comparisons); the boundaries of the surviving run and the peak itself
/// never count.
fn find_trough(mean: &[f64], peak_index: usize, floor: f64) -> Option<usize> {
    let alive: Vec<usize> = (0..mean.len()).filter(|&i| mean[i] >= floor).collect();
    for p in (1..alive.len().saturating_sub(1)).rev() {
        let i = alive[p];
        if i == peak_index {
            continue;
        }
        if mean[i] <= mean[alive[p - 1]] && mean[i] <= mean[alive[p + 1]] {
            return Some(i);
        }
    }
    None
}

/// Fold-to-fold instability of the relevance profile.
///
/// Two symptoms mark a profile as untrustworthy: the box plots of the
/// dimensions that matter (those at or above `eps_min` of the peak mean
/// relevance) are wide relative to their means, and the resamplings cannot
/// even agree on which dimension dominates. The score adds the median
/// (interquartile range / mean relevance) over surviving dimensions to the
/// fraction of folds whose own peak differs from the mean profile's peak;
/// scores above 0.5 raise the stochastic flag.
pub fn stochasticity_diagnostic(profile: &RelevanceProfile, eps_min: f64) -> Result<(f64, bool)> {
    if profile.fold_count() < 2 {
        return Err(Error::InvalidParameter(alloc::format!(
            "stochasticity diagnostic needs at least 2 folds, got {}",
            profile.fold_count()
        )));
    }
    let peak_index = argmax(&profile.mean);
    let floor = eps_min * profile.mean[peak_index];
    let mut ratios: Vec<f64> = profile
        .summaries
        .iter()
        .zip(&profile.mean)
        .filter(|(_, &mean)| mean >= floor)
        .map(|(s, &mean)| {
            let iqr = s.q3 - s.q1;
            if iqr == 0.0 {
                0.0
            } else {
                iqr / mean
            }
        })
        .collect();
    ratios.sort_unstable_by(f64::total_cmp);
    let spread = if ratios.is_empty() {
        0.0
    } else {
        quantile_sorted(&ratios, 0.5)
    };
    let disagreeing = profile
        .per_fold
        .iter()
        .filter(|fold| argmax(fold) != peak_index)
        .count();
    let disagreement = disagreeing as f64 / profile.fold_count() as f64;
    let score = spread + disagreement;
    Ok((score, score > 0.5))
}
