//! Property tests over the pipeline's algebraic invariants.

use delaynet_core::embed::{build_pev, make_resampling, SearchSpace};
use delaynet_core::estimate::{aggregate, select_embedding};
use delaynet_core::forecast::metrics;
use delaynet_core::net::{init_network, NetConfig};
use delaynet_core::series::{add_noise, normalize, TimeSeries};
use proptest::prelude::*;

fn finite_series(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1e6..1e6f64, len)
}

fn varied_series(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    finite_series(len).prop_filter("needs a nonzero range", |v| {
        let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        max > min
    })
}

fn profile_vec() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..10.0f64, 2..24).prop_filter("not all zero", |v| {
        v.iter().any(|&x| x > 0.0)
    })
}

proptest! {
    #[test]
    fn normalize_is_idempotent_and_order_preserving(values in varied_series(2..64)) {
        let series = TimeSeries::new(values.clone(), "prop").unwrap();
        let once = normalize(&series).unwrap();
        let twice = normalize(&once).unwrap();
        prop_assert_eq!(&once.values, &twice.values);

        let min = once.values.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = once.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(min, 0.0);
        prop_assert_eq!(max, 1.0);

        for i in 0..values.len() {
            for j in 0..values.len() {
                prop_assert_eq!(
                    values[i] < values[j],
                    once.values[i] < once.values[j],
                    "order flipped at ({}, {})", i, j
                );
            }
        }
    }

    #[test]
    fn zero_noise_is_identity(values in finite_series(1..64), seed in any::<u64>()) {
        let series = TimeSeries { values, name: "prop".into(), sampling_time: None, seed: None };
        let noisy = add_noise(&series, 0.0, 0.0, seed).unwrap();
        prop_assert_eq!(noisy.values, series.values);
    }

    #[test]
    fn pev_rows_reconstruct_the_series(
        values in finite_series(12..80),
        m_max in 2usize..5,
        tau_max in 1usize..4,
    ) {
        let Ok(space) = SearchSpace::new(m_max, tau_max) else { return Ok(()) };
        let series = TimeSeries::new(values.clone(), "prop").unwrap();
        let Ok(data) = build_pev(&series, &space) else { return Ok(()) };
        prop_assert_eq!(data.count(), values.len() - space.input_width());
        for row in 0..data.count() {
            let t = data.source_index(row);
            let mut window = data.input(row).to_vec();
            window.push(data.target(row));
            prop_assert_eq!(&window[..], &values[t..t + space.pev_len()]);
        }
    }

    #[test]
    fn folds_are_disjoint_and_exhaustive(
        count in 8usize..200,
        folds in 1usize..6,
        seed in any::<u64>(),
    ) {
        let plan = make_resampling(count, folds, 0.75, seed).unwrap();
        prop_assert_eq!(plan.folds.len(), folds);
        for fold in &plan.folds {
            let mut seen = vec![false; count];
            for &row in fold.train.iter().chain(&fold.test) {
                prop_assert!(!seen[row], "row {} appears twice", row);
                seen[row] = true;
            }
            prop_assert!(seen.into_iter().all(|s| s));
            prop_assert_eq!(fold.train.len(), (0.75 * count as f64).round() as usize);
        }
    }

    #[test]
    fn forward_is_shape_stable(
        seed in any::<u64>(),
        input in prop::collection::vec(-1e3..1e3f64, 6),
    ) {
        let net = init_network(&NetConfig::for_inputs(6, seed)).unwrap();
        let (prediction, hidden) = net.forward(&input);
        prop_assert!(prediction.is_finite());
        prop_assert!(hidden.iter().all(|h| h.is_finite() && h.abs() <= 1.0));
    }

    #[test]
    fn selection_is_scale_invariant(profile in profile_vec(), scale in 1e-3..1e3f64) {
        let base = aggregate(std::slice::from_ref(&profile)).unwrap();
        let scaled = aggregate(&[profile.iter().map(|v| v * scale).collect()]).unwrap();
        let a = select_embedding(&base, 0.8, 0.1).unwrap();
        let b = select_embedding(&scaled, 0.8, 0.1).unwrap();
        prop_assert_eq!(a.m, b.m);
        prop_assert_eq!(a.tau, b.tau);
        prop_assert_eq!(a.peak, b.peak);
        prop_assert_eq!(a.trough, b.trough);
    }

    #[test]
    fn selection_respects_bounds(profile in profile_vec()) {
        let n = profile.len();
        let agg = aggregate(&[profile]).unwrap();
        let est = select_embedding(&agg, 0.8, 0.1).unwrap();
        prop_assert!(est.m >= 2);
        prop_assert!(est.tau >= 1 && est.tau <= n);
        prop_assert!(est.peak >= 1 && est.peak <= n);
    }

    #[test]
    fn mse_is_symmetric_and_identity_detecting(
        pair in prop::collection::vec((-1e3..1e3f64, -1e3..1e3f64), 2..64),
    ) {
        let a: Vec<f64> = pair.iter().map(|p| p.0).collect();
        let b: Vec<f64> = pair.iter().map(|p| p.1).collect();
        if let (Ok((ab, _)), Ok((ba, _))) = (metrics(&a, &b), metrics(&b, &a)) {
            prop_assert_eq!(ab, ba);
            prop_assert_eq!(ab == 0.0, a == b);
        }
    }
}
