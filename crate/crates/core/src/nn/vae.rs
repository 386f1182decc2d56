//! Variational autoencoder over binary vectors.
//!
//! ```text
//! encoder:  x -> Dense(n, h) -> BatchNorm -> ReLU -> { Dense(h, d) = mu, Dense(h, d) = logvar }
//! sample:   z = mu + exp(logvar / 2) * noise
//! decoder:  z -> Dense(d, h) -> BatchNorm -> ReLU -> Dense(h, n) -> sigmoid
//! ```
//!
//! Loss is summed binary cross-entropy plus the KL divergence to a standard
//! normal prior, both averaged over the batch rows. Gradients are derived by
//! hand in [`VaeModel::backward`].

use ndarray::{Array2, Zip};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::batchnorm::{BatchNormLayer, Mode, NormCache, NormGrad};
use super::dense::{DenseGrad, DenseLayer};
use super::NnError;

/// Probabilities are clamped to `[PROB_CLAMP, 1 - PROB_CLAMP]` inside the
/// cross-entropy.
pub const PROB_CLAMP: f64 = 1e-7;
pub const LOGVAR_MIN: f64 = -10.0;
pub const LOGVAR_MAX: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VaeShape {
    pub input: usize,
    pub hidden: usize,
    pub latent: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VaeModel {
    pub encoder: DenseLayer,
    pub encoder_norm: BatchNormLayer,
    pub mu_head: DenseLayer,
    pub logvar_head: DenseLayer,
    pub decoder: DenseLayer,
    pub decoder_norm: BatchNormLayer,
    pub output: DenseLayer,
}

#[derive(Debug, Clone)]
pub struct VaeOutput {
    pub reconstruction: Array2<f64>,
    pub mu: Array2<f64>,
    /// Clamped to `[LOGVAR_MIN, LOGVAR_MAX]`.
    pub logvar: Array2<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossParts {
    pub total: f64,
    pub bce: f64,
    pub kl: f64,
}

/// Parameter gradients, laid out like [`VaeModel`].
#[derive(Debug, Clone)]
pub struct VaeGradients {
    pub encoder: DenseGrad,
    pub encoder_norm: NormGrad,
    pub mu_head: DenseGrad,
    pub logvar_head: DenseGrad,
    pub decoder: DenseGrad,
    pub decoder_norm: NormGrad,
    pub output: DenseGrad,
}

/// Result of a training-mode forward/backward pass.
#[derive(Debug, Clone)]
pub struct Backprop {
    pub gradients: VaeGradients,
    pub loss: LossParts,
    encoder_stats: NormCache,
    decoder_stats: NormCache,
}

struct Trace {
    h1_norm: Array2<f64>,
    enc_cache: NormCache,
    a1: Array2<f64>,
    mu: Array2<f64>,
    logvar_raw: Array2<f64>,
    logvar: Array2<f64>,
    std: Array2<f64>,
    z: Array2<f64>,
    h2_norm: Array2<f64>,
    dec_cache: NormCache,
    a2: Array2<f64>,
    probs: Array2<f64>,
}

fn relu(x: &Array2<f64>) -> Array2<f64> {
    x.mapv(|v| v.max(0.0))
}

fn sigmoid(v: f64) -> f64 {
    if v >= 0.0 {
        1.0 / (1.0 + (-v).exp())
    } else {
        let e = v.exp();
        e / (1.0 + e)
    }
}

fn relu_backward(upstream: Array2<f64>, pre: &Array2<f64>) -> Array2<f64> {
    let mut d = upstream;
    Zip::from(&mut d).and(pre).for_each(|d, &p| {
        if p <= 0.0 {
            *d = 0.0;
        }
    });
    d
}

/// Batch-averaged BCE + KL. Probabilities are clamped away from 0 and 1.
pub fn loss(
    reconstruction: &Array2<f64>,
    batch: &Array2<f64>,
    mu: &Array2<f64>,
    logvar: &Array2<f64>,
) -> LossParts {
    let rows = batch.nrows() as f64;
    let mut bce = 0.0;
    Zip::from(reconstruction).and(batch).for_each(|&p, &x| {
        let p = p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
        bce -= x * p.ln() + (1.0 - x) * (1.0 - p).ln();
    });
    let mut kl = 0.0;
    Zip::from(mu).and(logvar).for_each(|&m, &lv| {
        kl += -0.5 * (1.0 + lv - m * m - lv.exp());
    });
    let bce = bce / rows;
    let kl = kl / rows;
    LossParts {
        total: bce + kl,
        bce,
        kl,
    }
}

impl VaeModel {
    /// Glorot-initialized model with fresh batch-norm layers.
    pub fn new<R: Rng + ?Sized>(shape: VaeShape, rng: &mut R) -> Self {
        let VaeShape {
            input,
            hidden,
            latent,
        } = shape;
        Self {
            encoder: DenseLayer::glorot(input, hidden, rng),
            encoder_norm: BatchNormLayer::new(hidden),
            mu_head: DenseLayer::glorot(hidden, latent, rng),
            logvar_head: DenseLayer::glorot(hidden, latent, rng),
            decoder: DenseLayer::glorot(latent, hidden, rng),
            decoder_norm: BatchNormLayer::new(hidden),
            output: DenseLayer::glorot(hidden, input, rng),
        }
    }

    pub fn shape(&self) -> VaeShape {
        VaeShape {
            input: self.encoder.inputs(),
            hidden: self.encoder.outputs(),
            latent: self.mu_head.outputs(),
        }
    }

    fn check_batch(&self, batch: &Array2<f64>) -> Result<(), NnError> {
        let shape = self.shape();
        if batch.ncols() != shape.input {
            return Err(NnError::ShapeMismatch {
                what: "batch columns",
                expected: shape.input,
                got: batch.ncols(),
            });
        }
        if batch.nrows() == 0 {
            return Err(NnError::EmptyBatch);
        }
        Ok(())
    }

    fn check_noise(&self, batch: &Array2<f64>, noise: &Array2<f64>) -> Result<(), NnError> {
        let shape = self.shape();
        if noise.nrows() != batch.nrows() {
            return Err(NnError::ShapeMismatch {
                what: "noise rows",
                expected: batch.nrows(),
                got: noise.nrows(),
            });
        }
        if noise.ncols() != shape.latent {
            return Err(NnError::ShapeMismatch {
                what: "noise columns",
                expected: shape.latent,
                got: noise.ncols(),
            });
        }
        Ok(())
    }

    /// Encoder pass returning `(mu, clamped logvar)`.
    pub fn encode(
        &self,
        batch: &Array2<f64>,
        mode: Mode,
    ) -> Result<(Array2<f64>, Array2<f64>), NnError> {
        self.check_batch(batch)?;
        let h = self
            .encoder_norm
            .forward(&self.encoder.forward(batch), mode);
        let a = relu(&h);
        let logvar = self
            .logvar_head
            .forward(&a)
            .mapv(|v| v.clamp(LOGVAR_MIN, LOGVAR_MAX));
        Ok((self.mu_head.forward(&a), logvar))
    }

    /// Decoder pass returning per-coordinate probabilities.
    pub fn decode(&self, z: &Array2<f64>, mode: Mode) -> Result<Array2<f64>, NnError> {
        let latent = self.shape().latent;
        if z.ncols() != latent {
            return Err(NnError::ShapeMismatch {
                what: "latent columns",
                expected: latent,
                got: z.ncols(),
            });
        }
        let h = self.decoder_norm.forward(&self.decoder.forward(z), mode);
        Ok(self.output.forward(&relu(&h)).mapv(sigmoid))
    }

    /// Full pass with the reparameterization `z = mu + exp(logvar/2) * noise`.
    pub fn forward(
        &self,
        batch: &Array2<f64>,
        mode: Mode,
        noise: &Array2<f64>,
    ) -> Result<VaeOutput, NnError> {
        self.check_batch(batch)?;
        self.check_noise(batch, noise)?;
        let (mu, logvar) = self.encode(batch, mode)?;
        let z = &mu + &(logvar.mapv(|v| (0.5 * v).exp()) * noise);
        let reconstruction = self.decode(&z, mode)?;
        Ok(VaeOutput {
            reconstruction,
            mu,
            logvar,
        })
    }

    fn trace(&self, batch: &Array2<f64>, noise: &Array2<f64>) -> Trace {
        let (h1_norm, enc_cache) = self
            .encoder_norm
            .forward_train(&self.encoder.forward(batch));
        let a1 = relu(&h1_norm);
        let mu = self.mu_head.forward(&a1);
        let logvar_raw = self.logvar_head.forward(&a1);
        let logvar = logvar_raw.mapv(|v| v.clamp(LOGVAR_MIN, LOGVAR_MAX));
        let std = logvar.mapv(|v| (0.5 * v).exp());
        let z = &mu + &(&std * noise);
        let (h2_norm, dec_cache) = self.decoder_norm.forward_train(&self.decoder.forward(&z));
        let a2 = relu(&h2_norm);
        let probs = self.output.forward(&a2).mapv(sigmoid);
        Trace {
            h1_norm,
            enc_cache,
            a1,
            mu,
            logvar_raw,
            logvar,
            std,
            z,
            h2_norm,
            dec_cache,
            a2,
            probs,
        }
    }

    /// Training-mode forward pass followed by exact backpropagation of
    /// [`loss`]`.total` to every parameter.
    pub fn backward(&self, batch: &Array2<f64>, noise: &Array2<f64>) -> Result<Backprop, NnError> {
        self.check_batch(batch)?;
        self.check_noise(batch, noise)?;
        let t = self.trace(batch, noise);
        let loss = loss(&t.probs, batch, &t.mu, &t.logvar);
        let rows = batch.nrows() as f64;

        // sigmoid + BCE: d/dlogit = (p - x) / B, zero where the clamp is active
        let mut d_logits = &t.probs - batch;
        Zip::from(&mut d_logits).and(&t.probs).for_each(|d, &p| {
            *d = if (PROB_CLAMP..=1.0 - PROB_CLAMP).contains(&p) {
                *d / rows
            } else {
                0.0
            };
        });
        let (g_output, d_a2) = self.output.backward(&t.a2, &d_logits);
        let d_h2_norm = relu_backward(d_a2, &t.h2_norm);
        let (g_dec_norm, d_h2) = self.decoder_norm.backward(&t.dec_cache, &d_h2_norm);
        let (g_decoder, d_z) = self.decoder.backward(&t.z, &d_h2);

        let d_mu = &d_z + &(&t.mu / rows);
        let mut d_logvar =
            &d_z * noise * &t.std * 0.5 + &(t.logvar.mapv(|lv| 0.5 * (lv.exp() - 1.0)) / rows);
        Zip::from(&mut d_logvar)
            .and(&t.logvar_raw)
            .for_each(|d, &raw| {
                if !(LOGVAR_MIN..=LOGVAR_MAX).contains(&raw) {
                    *d = 0.0;
                }
            });

        let (g_mu, d_a1_mu) = self.mu_head.backward(&t.a1, &d_mu);
        let (g_logvar, d_a1_lv) = self.logvar_head.backward(&t.a1, &d_logvar);
        let d_h1_norm = relu_backward(d_a1_mu + d_a1_lv, &t.h1_norm);
        let (g_enc_norm, d_h1) = self.encoder_norm.backward(&t.enc_cache, &d_h1_norm);
        let g_encoder = self.encoder.parameter_grad(batch, &d_h1);

        Ok(Backprop {
            gradients: VaeGradients {
                encoder: g_encoder,
                encoder_norm: g_enc_norm,
                mu_head: g_mu,
                logvar_head: g_logvar,
                decoder: g_decoder,
                decoder_norm: g_dec_norm,
                output: g_output,
            },
            loss,
            encoder_stats: t.enc_cache,
            decoder_stats: t.dec_cache,
        })
    }

    /// Loss of a training-mode pass, without gradients.
    pub fn training_loss(
        &self,
        batch: &Array2<f64>,
        noise: &Array2<f64>,
    ) -> Result<LossParts, NnError> {
        self.check_batch(batch)?;
        self.check_noise(batch, noise)?;
        let t = self.trace(batch, noise);
        Ok(loss(&t.probs, batch, &t.mu, &t.logvar))
    }

    /// Folds the batch statistics of a pass into the running statistics.
    pub fn update_running_stats(&mut self, pass: &Backprop, batch_size: usize) {
        self.encoder_norm
            .update_running(&pass.encoder_stats, batch_size);
        self.decoder_norm
            .update_running(&pass.decoder_stats, batch_size);
    }

    /// Mutable views of every trainable tensor, in [`PARAMETER_NAMES`] order.
    pub fn parameters_mut(&mut self) -> Vec<&mut [f64]> {
        fn s<D: ndarray::Dimension>(a: &mut ndarray::Array<f64, D>) -> &mut [f64] {
            a.as_slice_mut().expect("standard layout")
        }
        vec![
            s(&mut self.encoder.weights),
            s(&mut self.encoder.biases),
            s(&mut self.encoder_norm.gamma),
            s(&mut self.encoder_norm.beta),
            s(&mut self.mu_head.weights),
            s(&mut self.mu_head.biases),
            s(&mut self.logvar_head.weights),
            s(&mut self.logvar_head.biases),
            s(&mut self.decoder.weights),
            s(&mut self.decoder.biases),
            s(&mut self.decoder_norm.gamma),
            s(&mut self.decoder_norm.beta),
            s(&mut self.output.weights),
            s(&mut self.output.biases),
        ]
    }

    pub fn parameter_lengths(&self) -> Vec<usize> {
        self.parameters().iter().map(|p| p.len()).collect()
    }

    /// Read-only views of every trainable tensor, in [`PARAMETER_NAMES`] order.
    pub fn parameters(&self) -> Vec<&[f64]> {
        fn s<D: ndarray::Dimension>(a: &ndarray::Array<f64, D>) -> &[f64] {
            a.as_slice().expect("standard layout")
        }
        vec![
            s(&self.encoder.weights),
            s(&self.encoder.biases),
            s(&self.encoder_norm.gamma),
            s(&self.encoder_norm.beta),
            s(&self.mu_head.weights),
            s(&self.mu_head.biases),
            s(&self.logvar_head.weights),
            s(&self.logvar_head.biases),
            s(&self.decoder.weights),
            s(&self.decoder.biases),
            s(&self.decoder_norm.gamma),
            s(&self.decoder_norm.beta),
            s(&self.output.weights),
            s(&self.output.biases),
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.parameters()
            .iter()
            .all(|p| p.iter().all(|v| v.is_finite()))
    }
}

pub const PARAMETER_NAMES: [&str; 14] = [
    "encoder.weights",
    "encoder.biases",
    "encoder_norm.gamma",
    "encoder_norm.beta",
    "mu_head.weights",
    "mu_head.biases",
    "logvar_head.weights",
    "logvar_head.biases",
    "decoder.weights",
    "decoder.biases",
    "decoder_norm.gamma",
    "decoder_norm.beta",
    "output.weights",
    "output.biases",
];

impl VaeGradients {
    /// Gradient tensors in [`PARAMETER_NAMES`] order.
    pub fn tensors(&self) -> Vec<&[f64]> {
        fn s<D: ndarray::Dimension>(a: &ndarray::Array<f64, D>) -> &[f64] {
            a.as_slice().expect("standard layout")
        }
        vec![
            s(&self.encoder.weights),
            s(&self.encoder.biases),
            s(&self.encoder_norm.gamma),
            s(&self.encoder_norm.beta),
            s(&self.mu_head.weights),
            s(&self.mu_head.biases),
            s(&self.logvar_head.weights),
            s(&self.logvar_head.biases),
            s(&self.decoder.weights),
            s(&self.decoder.biases),
            s(&self.decoder_norm.gamma),
            s(&self.decoder_norm.beta),
            s(&self.output.weights),
            s(&self.output.biases),
        ]
    }
}

/// Mean over rows of the fraction of coordinates where thresholding the
/// reconstruction at 0.5 recovers the input bit.
pub fn bit_accuracy(reconstruction: &Array2<f64>, batch: &Array2<f64>) -> f64 {
    let mut hits = 0usize;
    Zip::from(reconstruction).and(batch).for_each(|&p, &x| {
        if (p >= 0.5) == (x >= 0.5) {
            hits += 1;
        }
    });
    hits as f64 / batch.len() as f64
}
