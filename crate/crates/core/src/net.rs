//! Three-layer feedforward regressor trained by online backpropagation with
//! momentum, plus a forgetting (L1) penalty on the input-to-hidden weights.
//!
//! The penalty drives weights on uninformative inputs toward zero, so the
//! converged input-weight magnitudes double as a per-dimension relevance
//! measure (see [`crate::estimate`]).

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // method fallbacks for the no_std build
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embed::PevDataset;
use crate::error::{Error, Result};

/// Training hyperparameters. Defaults follow the reference settings: step
/// size 0.1, momentum 0.2, forgetting 1e-3, 500 epochs, cost tolerance 1e-3,
/// weights drawn from [-0.1, 0.1].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NetConfig {
    /// Input width N.
    pub inputs: usize,
    /// Hidden width override; `None` derives `ceil(ln N) + 1`.
    pub hidden: Option<usize>,
    /// Gradient step size.
    pub learning_rate: f64,
    /// Momentum rate on all weight updates.
    pub momentum: f64,
    /// L1 penalty strength on input-to-hidden weights.
    pub forgetting: f64,
    /// Maximum number of training epochs.
    pub epochs: usize,
    /// Stop early once the epoch cost falls to this level.
    pub cost_tolerance: f64,
    /// Uniform initialization range for weights and biases.
    pub init_range: (f64, f64),
    /// Seeds both weight initialization and per-epoch row shuffling.
    pub seed: u64,
}

impl NetConfig {
    pub fn for_inputs(inputs: usize, seed: u64) -> Self {
        NetConfig {
            inputs,
            hidden: None,
            learning_rate: 0.1,
            momentum: 0.2,
            forgetting: 1e-3,
            epochs: 500,
            cost_tolerance: 1e-3,
            init_range: (-0.1, 0.1),
            seed,
        }
    }

    /// Hidden width: the override, or `ceil(ln N) + 1`.
    pub fn hidden_units(&self) -> usize {
        self.hidden
            .unwrap_or_else(|| (self.inputs as f64).ln().ceil() as usize + 1)
    }

    fn validate(&self) -> Result<()> {
        if self.inputs == 0 {
            return Err(Error::InvalidParameter("network needs at least one input".into()));
        }
        if self.hidden_units() == 0 {
            return Err(Error::InvalidParameter("network needs at least one hidden unit".into()));
        }
        for (value, name) in [
            (self.learning_rate, "learning rate"),
            (self.momentum, "momentum"),
            (self.forgetting, "forgetting"),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParameter(alloc::format!(
                    "{name} must be finite and non-negative, got {value}"
                )));
            }
        }
        let (lo, hi) = self.init_range;
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::InvalidParameter(alloc::format!(
                "init range must be a finite interval, got [{lo}, {hi}]"
            )));
        }
        Ok(())
    }
}

/// Weights, biases, and the momentum buffers of the previous update.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Network {
    inputs: usize,
    hidden: usize,
    /// Input-to-hidden weights, input-major: entry `i * hidden + j`.
    input_weights: Vec<f64>,
    hidden_bias: Vec<f64>,
    output_weights: Vec<f64>,
    output_bias: f64,
    prev_input: Vec<f64>,
    prev_hidden_bias: Vec<f64>,
    prev_output: Vec<f64>,
    prev_output_bias: f64,
}

impl Network {
    /// Assembles a network from explicit weights (momentum buffers zeroed).
    pub fn from_parts(
        inputs: usize,
        hidden: usize,
        input_weights: Vec<f64>,
        hidden_bias: Vec<f64>,
        output_weights: Vec<f64>,
        output_bias: f64,
    ) -> Result<Self> {
        if input_weights.len() != inputs * hidden
            || hidden_bias.len() != hidden
            || output_weights.len() != hidden
        {
            return Err(Error::InvalidParameter("weight shapes do not match the layer sizes".into()));
        }
        let finite = input_weights
            .iter()
            .chain(&hidden_bias)
            .chain(&output_weights)
            .all(|w| w.is_finite())
            && output_bias.is_finite();
        if !finite {
            return Err(Error::InvalidParameter("weights must be finite".into()));
        }
        Ok(Network {
            inputs,
            hidden,
            prev_input: vec![0.0; inputs * hidden],
            prev_hidden_bias: vec![0.0; hidden],
            prev_output: vec![0.0; hidden],
            prev_output_bias: 0.0,
            input_weights,
            hidden_bias,
            output_weights,
            output_bias,
        })
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    /// Input-to-hidden weights, input-major (`i * hidden() + j`).
    pub fn input_weights(&self) -> &[f64] {
        &self.input_weights
    }

    pub fn input_weight(&self, input: usize, hidden: usize) -> f64 {
        self.input_weights[input * self.hidden + hidden]
    }

    pub fn hidden_bias(&self) -> &[f64] {
        &self.hidden_bias
    }

    pub fn output_weights(&self) -> &[f64] {
        &self.output_weights
    }

    pub fn output_bias(&self) -> f64 {
        self.output_bias
    }

    /// Runs the forward pass: sigmoid hidden layer, sigmoid output unit, so
    /// predictions live in (0, 1) like the normalized targets.
    ///
    /// Returns the prediction and the hidden activations. Panics if the input
    /// length does not match the network.
    pub fn forward(&self, input: &[f64]) -> (f64, Vec<f64>) {
        let mut activations = vec![0.0; self.hidden];
        let prediction = self.forward_into(input, &mut activations);
        (prediction, activations)
    }

    fn forward_into(&self, input: &[f64], activations: &mut [f64]) -> f64 {
        assert_eq!(input.len(), self.inputs, "input width mismatch");
        for j in 0..self.hidden {
            let mut z = self.hidden_bias[j];
            for (i, &x) in input.iter().enumerate() {
                z += self.input_weights[i * self.hidden + j] * x;
            }
            activations[j] = sigmoid(z);
        }
        let mut out = self.output_bias;
        for j in 0..self.hidden {
            out += self.output_weights[j] * activations[j];
        }
        sigmoid(out)
    }

    /// Sum of |w| over all input-to-hidden weights.
    fn penalty_mass(&self) -> f64 {
        self.input_weights.iter().map(|w| w.abs()).sum()
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn sign(w: f64) -> f64 {
    if w > 0.0 {
        1.0
    } else if w < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Draws all weights and biases i.i.d. uniform from the config's init range.
pub fn init_network(config: &NetConfig) -> Result<Network> {
    config.validate()?;
    let (n, l) = (config.inputs, config.hidden_units());
    let (lo, hi) = config.init_range;
    // Stream 0 of the seed initializes weights; stream 1 shuffles epochs.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let input_weights = (0..n * l).map(|_| rng.gen_range(lo..=hi)).collect();
    let hidden_bias = (0..l).map(|_| rng.gen_range(lo..=hi)).collect();
    let output_weights = (0..l).map(|_| rng.gen_range(lo..=hi)).collect();
    let output_bias = rng.gen_range(lo..=hi);
    Network::from_parts(n, l, input_weights, hidden_bias, output_weights, output_bias)
}

/// Cost over `rows`: summed squared-error halves plus the forgetting penalty
/// on the current input-to-hidden weights.
pub fn evaluate_cost(net: &Network, data: &PevDataset, rows: &[usize], forgetting: f64) -> f64 {
    let mut activations = vec![0.0; net.hidden];
    let mut error_sum = 0.0;
    for &row in rows {
        let prediction = net.forward_into(data.input(row), &mut activations);
        let residual = prediction - data.target(row);
        error_sum += 0.5 * residual * residual;
    }
    error_sum + forgetting * net.penalty_mass()
}

/// Runs one training pass over `rows` in the given order, updating the
/// network per sample, and returns the epoch cost evaluated after the pass.
pub fn epoch(
    net: &mut Network,
    data: &PevDataset,
    rows: &[usize],
    config: &NetConfig,
) -> Result<f64> {
    epoch_inner(net, data, rows, config, 0)
}

fn epoch_inner(
    net: &mut Network,
    data: &PevDataset,
    rows: &[usize],
    config: &NetConfig,
    epoch_index: usize,
) -> Result<f64> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter("epoch needs at least one row".into()));
    }
    if let Some(&bad) = rows.iter().find(|&&r| r >= data.count()) {
        return Err(Error::InvalidParameter(alloc::format!(
            "row index {bad} out of range for {} rows",
            data.count()
        )));
    }
    if data.width() != net.inputs {
        return Err(Error::LengthMismatch {
            expected: net.inputs,
            actual: data.width(),
        });
    }

    let eta = config.learning_rate;
    let alpha = config.momentum;
    let lambda = config.forgetting;
    // The epoch cost carries one penalty term against a whole sum of
    // per-sample errors, so its per-sample stochastic gradient weighs the
    // penalty by 1/T.
    let lambda_step = lambda / rows.len() as f64;
    let l = net.hidden;
    let mut activations = vec![0.0; l];
    let mut hidden_delta = vec![0.0; l];

    for &row in rows {
        let input = data.input(row);
        let prediction = net.forward_into(input, &mut activations);
        let output_delta = (prediction - data.target(row)) * prediction * (1.0 - prediction);

        for j in 0..l {
            hidden_delta[j] =
                output_delta * net.output_weights[j] * activations[j] * (1.0 - activations[j]);

            let grad_out = output_delta * activations[j];
            let step = -eta * grad_out + alpha * net.prev_output[j];
            net.output_weights[j] += step;
            net.prev_output[j] = step;

            let step = -eta * hidden_delta[j] + alpha * net.prev_hidden_bias[j];
            net.hidden_bias[j] += step;
            net.prev_hidden_bias[j] = step;
        }

        let step = -eta * output_delta + alpha * net.prev_output_bias;
        net.output_bias += step;
        net.prev_output_bias = step;

        // Only the input-to-hidden edges carry the forgetting penalty. A
        // penalized weight that would cross zero is clamped there instead,
        // so inhibited connections sit at exactly zero rather than
        // oscillating around it; the error gradient can still revive them.
        for (i, &x) in input.iter().enumerate() {
            for j in 0..l {
                let idx = i * l + j;
                let old = net.input_weights[idx];
                let grad = hidden_delta[j] * x + lambda_step * sign(old);
                let step = -eta * grad + alpha * net.prev_input[idx];
                let mut new = old + step;
                if old != 0.0 && new * old < 0.0 {
                    new = 0.0;
                }
                net.input_weights[idx] = new;
                net.prev_input[idx] = new - old;
            }
        }
    }

    let cost = evaluate_cost(net, data, rows, lambda);
    if !cost.is_finite() {
        return Err(Error::TrainingDiverged { epoch: epoch_index });
    }
    Ok(cost)
}

/// Why a training run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum StopReason {
    CostReached,
    EpochLimit,
}

/// Per-run training record.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrainReport {
    pub epochs_run: usize,
    pub cost_history: Vec<f64>,
    /// Last entry of the history; NaN when no epoch ran.
    pub final_cost: f64,
    pub stop_reason: StopReason,
}

/// Initializes a network from the config and trains it on `rows` until the
/// cost tolerance or the epoch limit is reached. Rows are revisited in a
/// fresh shuffled order each epoch.
pub fn train(data: &PevDataset, rows: &[usize], config: &NetConfig) -> Result<(Network, TrainReport)> {
    let mut net = init_network(config)?;
    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(config.seed);
    shuffle_rng.set_stream(1);

    let mut order = rows.to_vec();
    let mut cost_history = Vec::with_capacity(config.epochs);
    let mut stop_reason = StopReason::EpochLimit;
    for index in 0..config.epochs {
        order.shuffle(&mut shuffle_rng);
        let cost = epoch_inner(&mut net, data, &order, config, index)?;
        cost_history.push(cost);
        if cost <= config.cost_tolerance {
            stop_reason = StopReason::CostReached;
            break;
        }
    }
    let report = TrainReport {
        epochs_run: cost_history.len(),
        final_cost: cost_history.last().copied().unwrap_or(f64::NAN),
        cost_history,
        stop_reason,
    };
    Ok((net, report))
}

/// Compares analytic gradients of the per-sample cost (squared error plus
/// forgetting penalty) against central finite differences over every
/// parameter and returns the worst relative error.
///
/// The comparison floors the denominator at 1e-4 so near-zero gradients are
/// judged in absolute terms; call it with weights away from zero, where the
/// penalty is differentiable.
pub fn gradient_check(net: &Network, input: &[f64], target: f64, forgetting: f64) -> f64 {
    const FD_STEP: f64 = 1e-6;
    let analytic = analytic_gradients(net, input, target, forgetting);
    let mut probe = net.clone();
    let mut worst: f64 = 0.0;
    for (idx, &grad) in analytic.iter().enumerate() {
        let original = *param_mut(&mut probe, idx);
        *param_mut(&mut probe, idx) = original + FD_STEP;
        let plus = sample_cost(&probe, input, target, forgetting);
        *param_mut(&mut probe, idx) = original - FD_STEP;
        let minus = sample_cost(&probe, input, target, forgetting);
        *param_mut(&mut probe, idx) = original;
        let numeric = (plus - minus) / (2.0 * FD_STEP);
        let rel = (grad - numeric).abs() / grad.abs().max(numeric.abs()).max(1e-4);
        worst = worst.max(rel);
    }
    worst
}

fn sample_cost(net: &Network, input: &[f64], target: f64, forgetting: f64) -> f64 {
    let (prediction, _) = net.forward(input);
    let residual = prediction - target;
    0.5 * residual * residual + forgetting * net.penalty_mass()
}

/// Gradient of the per-sample cost in parameter order: input weights
/// (input-major), hidden biases, output weights, output bias.
fn analytic_gradients(net: &Network, input: &[f64], target: f64, forgetting: f64) -> Vec<f64> {
    let l = net.hidden;
    let (prediction, activations) = net.forward(input);
    let output_delta = (prediction - target) * prediction * (1.0 - prediction);
    let mut grads = Vec::with_capacity(net.inputs * l + 2 * l + 1);
    for i in 0..net.inputs {
        for j in 0..l {
            let hidden_delta =
                output_delta * net.output_weights[j] * activations[j] * (1.0 - activations[j]);
            grads.push(hidden_delta * input[i] + forgetting * sign(net.input_weights[i * l + j]));
        }
    }
    for j in 0..l {
        let hidden_delta =
            output_delta * net.output_weights[j] * activations[j] * (1.0 - activations[j]);
        grads.push(hidden_delta);
    }
    for j in 0..l {
        grads.push(output_delta * activations[j]);
    }
    grads.push(output_delta);
    grads
}

fn param_mut(net: &mut Network, idx: usize) -> &mut f64 {
    let nw = net.inputs * net.hidden;
    let l = net.hidden;
    if idx < nw {
        &mut net.input_weights[idx]
    } else if idx < nw + l {
        &mut net.hidden_bias[idx - nw]
    } else if idx < nw + 2 * l {
        &mut net.output_weights[idx - nw - l]
    } else {
        &mut net.output_bias
    }
}
