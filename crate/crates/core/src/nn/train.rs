use ndarray::{Array2, Axis};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::nadam::{NadamConfig, NadamState};
use super::vae::VaeModel;
use super::NnError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub batch_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            batch_size: 64,
            epochs: 500,
            learning_rate: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainReport {
    /// Mean minibatch loss per epoch.
    pub epoch_losses: Vec<f64>,
    pub steps: u64,
}

pub fn standard_normal<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Array2<f64> {
    Array2::from_shape_simple_fn((rows, cols), || rng.sample(StandardNormal))
}

/// Minibatch Nadam training on the rows of `data`.
///
/// Each epoch visits the rows in a fresh random order, in consecutive batches
/// of `batch_size`; the final short batch is kept unless it has a single row,
/// for which batch statistics are undefined. Returns with the model ready for
/// inference-mode use, along with the optimizer state.
pub fn train<R: Rng + ?Sized>(
    model: &mut VaeModel,
    data: &Array2<f64>,
    config: &TrainConfig,
    rng: &mut R,
) -> Result<(TrainReport, NadamState), NnError> {
    if config.batch_size == 0 || config.epochs == 0 || config.learning_rate <= 0.0 {
        return Err(NnError::InvalidConfig(format!("{config:?}")));
    }
    let shape = model.shape();
    if data.ncols() != shape.input {
        return Err(NnError::ShapeMismatch {
            what: "training data columns",
            expected: shape.input,
            got: data.ncols(),
        });
    }
    let mut optimizer = NadamState::new(
        NadamConfig {
            alpha: config.learning_rate,
            ..NadamConfig::default()
        },
        model.parameter_lengths(),
    );
    let mut report = TrainReport::default();
    let mut order: Vec<usize> = (0..data.nrows()).collect();
    for _ in 0..config.epochs {
        order.shuffle(rng);
        let mut loss_sum = 0.0;
        let mut batches = 0usize;
        for chunk in order.chunks(config.batch_size) {
            if chunk.len() < 2 {
                continue;
            }
            let batch = data.select(Axis(0), chunk);
            let noise = standard_normal(chunk.len(), shape.latent, rng);
            let pass = model.backward(&batch, &noise)?;
            model.update_running_stats(&pass, chunk.len());
            let grads = pass.gradients.tensors();
            optimizer.step(&mut model.parameters_mut(), &grads);
            loss_sum += pass.loss.total;
            batches += 1;
            report.steps += 1;
        }
        if batches > 0 {
            report.epoch_losses.push(loss_sum / batches as f64);
        }
    }
    Ok((report, optimizer))
}
