//! Single-step forecasting evaluation of trained networks on held-out rows.

use alloc::vec::Vec;
#[allow(unused_imports)] // method fallbacks for the no_std build
use num_traits::Float;

use crate::embed::PevDataset;
use crate::error::{Error, Result};
use crate::net::Network;

/// Predictions against targets over a forecast horizon, with error metrics.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ForecastReport {
    pub predictions: Vec<f64>,
    pub targets: Vec<f64>,
    pub mse: f64,
    /// RMSE divided by the target range.
    pub nrmse: f64,
    pub horizon: usize,
}

/// Predicts the first `horizon` of the given rows in series order, always
/// feeding true observations (never its own outputs).
pub fn forecast_eval(
    net: &Network,
    data: &PevDataset,
    rows: &[usize],
    horizon: usize,
) -> Result<ForecastReport> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("forecast horizon must be positive".into()));
    }
    if horizon > rows.len() {
        return Err(Error::InvalidParameter(alloc::format!(
            "horizon {horizon} exceeds the {} available rows",
            rows.len()
        )));
    }
    if let Some(&bad) = rows.iter().find(|&&r| r >= data.count()) {
        return Err(Error::InvalidParameter(alloc::format!(
            "row index {bad} out of range for {} rows",
            data.count()
        )));
    }
    let mut ordered = rows.to_vec();
    ordered.sort_unstable();
    ordered.truncate(horizon);

    let mut predictions = Vec::with_capacity(horizon);
    let mut targets = Vec::with_capacity(horizon);
    for &row in &ordered {
        predictions.push(net.forward(data.input(row)).0);
        targets.push(data.target(row));
    }
    let (mse, nrmse) = metrics(&predictions, &targets)?;
    Ok(ForecastReport {
        predictions,
        targets,
        mse,
        nrmse,
        horizon,
    })
}

/// Mean squared error and range-normalized RMSE of predictions vs targets.
pub fn metrics(predictions: &[f64], targets: &[f64]) -> Result<(f64, f64)> {
    if predictions.is_empty() {
        return Err(Error::InvalidParameter("metrics need at least one pair".into()));
    }
    if predictions.len() != targets.len() {
        return Err(Error::LengthMismatch {
            expected: targets.len(),
            actual: predictions.len(),
        });
    }
    let n = predictions.len() as f64;
    let mse = predictions
        .iter()
        .zip(targets)
        .map(|(p, t)| (p - t) * (p - t))
        .sum::<f64>()
        / n;
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &t in targets {
        min = min.min(t);
        max = max.max(t);
    }
    if max <= min {
        return Err(Error::NrmseUndefined);
    }
    Ok((mse, mse.sqrt() / (max - min)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{build_pev, SearchSpace};
    use crate::net::Network;
    use crate::series::TimeSeries;

    fn constant_predictor(width: usize, value: f64) -> Network {
        Network::from_parts(width, 1, alloc::vec![0.0; width], alloc::vec![0.0], alloc::vec![0.0], value)
            .unwrap()
    }

    #[test]
    fn perfect_predictions_have_zero_error() {
        let (mse, nrmse) = metrics(&[0.25, 0.75, 0.25], &[0.25, 0.75, 0.25]).unwrap();
        assert_eq!(mse, 0.0);
        assert_eq!(nrmse, 0.0);
    }

    #[test]
    fn report_covers_the_requested_horizon() {
        let values: Vec<f64> = (0..20).map(|i| if i % 2 == 0 { 0.25 } else { 0.75 }).collect();
        let series = TimeSeries::new(values, "alt").unwrap();
        let data = build_pev(&series, &SearchSpace::new(2, 2).unwrap()).unwrap();
        let rows: Vec<usize> = (0..data.count()).collect();
        let report = forecast_eval(&constant_predictor(2, 0.25), &data, &rows, 4).unwrap();
        assert_eq!(report.horizon, 4);
        assert_eq!(report.predictions.len(), 4);
        assert_eq!(report.targets.len(), 4);
    }

    #[test]
    fn constant_zero_predictor_nrmse_is_target_rms() {
        let targets = [0.0, 1.0, 0.5, 0.25];
        let predictions = [0.0; 4];
        let (mse, nrmse) = metrics(&predictions, &targets).unwrap();
        let rms = (targets.iter().map(|t| t * t).sum::<f64>() / 4.0).sqrt();
        assert!((mse - rms * rms).abs() < 1e-15);
        assert!((nrmse - rms).abs() < 1e-15);
    }

    #[test]
    fn shifted_predictions() {
        let targets = [0.0, 1.0, 0.5];
        let predictions = [0.1, 1.1, 0.6];
        let (mse, nrmse) = metrics(&predictions, &targets).unwrap();
        assert!((mse - 0.01).abs() < 1e-15);
        assert!((nrmse - 0.1).abs() < 1e-12);
    }

    #[test]
    fn metrics_match_two_pass_recomputation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(10);
        let predictions: Vec<f64> = (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let targets: Vec<f64> = (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (mse, nrmse) = metrics(&predictions, &targets).unwrap();

        let mut sum = 0.0;
        for i in 0..64 {
            sum += (predictions[i] - targets[i]).powi(2);
        }
        let expected_mse = sum / 64.0;
        let mut sorted = targets.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        let range = sorted[63] - sorted[0];
        assert!((mse - expected_mse).abs() < 1e-15);
        assert!((nrmse - expected_mse.sqrt() / range).abs() < 1e-15);
    }

    #[test]
    fn mse_is_symmetric_and_definite() {
        let a = [0.4, 0.2, 0.9];
        let b = [0.1, 0.3, 0.8];
        let (ab, _) = metrics(&a, &b).unwrap();
        let (ba, _) = metrics(&b, &a).unwrap();
        assert_eq!(ab, ba);
        assert!(ab > 0.0);
    }

    #[test]
    fn constant_targets_make_nrmse_undefined() {
        assert_eq!(metrics(&[0.1, 0.2], &[0.5, 0.5]), Err(Error::NrmseUndefined));
    }

    #[test]
    fn horizon_validation() {
        let values: Vec<f64> = (0..12).map(|i| i as f64 / 12.0).collect();
        let series = TimeSeries::new(values, "ramp").unwrap();
        let data = build_pev(&series, &SearchSpace::new(2, 2).unwrap()).unwrap();
        let rows: Vec<usize> = (0..data.count()).collect();
        let net = constant_predictor(2, 0.5);
        assert!(forecast_eval(&net, &data, &rows, 0).is_err());
        assert!(forecast_eval(&net, &data, &rows, rows.len() + 1).is_err());
    }

    #[test]
    fn evaluation_is_in_series_order_and_pure() {
        let values: Vec<f64> = (0..14).map(|i| i as f64 / 14.0).collect();
        let series = TimeSeries::new(values.clone(), "ramp").unwrap();
        let data = build_pev(&series, &SearchSpace::new(2, 2).unwrap()).unwrap();
        let net = constant_predictor(2, 0.5);
        let before = net.clone();
        let report = forecast_eval(&net, &data, &[7, 3, 5, 1], 3).unwrap();
        // Rows 1, 3, 5 in series order: targets follow the ramp.
        assert_eq!(report.targets, alloc::vec![values[3], values[5], values[7]]);
        assert_eq!(net, before);
    }
}
