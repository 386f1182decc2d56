use ndarray::{Array1, Array2, Axis, Zip};
use serde::{Deserialize, Serialize};

pub const DEFAULT_MOMENTUM: f64 = 0.1;
pub const DEFAULT_EPSILON: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// Normalize with batch statistics.
    Training,
    /// Normalize with running statistics.
    Inference,
}

/// Per-feature batch normalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchNormLayer {
    pub gamma: Array1<f64>,
    pub beta: Array1<f64>,
    pub running_mean: Array1<f64>,
    pub running_var: Array1<f64>,
    pub momentum: f64,
    pub epsilon: f64,
}

/// What the backward pass needs from a training-mode forward pass.
#[derive(Debug, Clone)]
pub struct NormCache {
    pub normalized: Array2<f64>,
    pub inv_std: Array1<f64>,
    pub batch_mean: Array1<f64>,
    pub batch_var: Array1<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormGrad {
    pub gamma: Array1<f64>,
    pub beta: Array1<f64>,
}

impl BatchNormLayer {
    pub fn new(features: usize) -> Self {
        Self {
            gamma: Array1::ones(features),
            beta: Array1::zeros(features),
            running_mean: Array1::zeros(features),
            running_var: Array1::ones(features),
            momentum: DEFAULT_MOMENTUM,
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn features(&self) -> usize {
        self.gamma.len()
    }

    /// Training-mode forward with biased batch variance. Running statistics
    /// are not touched; see [`BatchNormLayer::update_running`].
    pub fn forward_train(&self, x: &Array2<f64>) -> (Array2<f64>, NormCache) {
        let mean = x.mean_axis(Axis(0)).expect("non-empty batch");
        let mut normalized = x - &mean;
        let mut var = Array1::zeros(mean.len());
        for row in normalized.rows() {
            Zip::from(&mut var).and(row).for_each(|s, &c| *s += c * c);
        }
        var /= x.nrows() as f64;
        let inv_std = var.mapv(|v| 1.0 / (v + self.epsilon).sqrt());
        let mut y = Array2::zeros(x.raw_dim());
        Zip::from(normalized.rows_mut())
            .and(y.rows_mut())
            .for_each(|mut n, mut out| {
                Zip::from(&mut n)
                    .and(&mut out)
                    .and(&inv_std)
                    .and(&self.gamma)
                    .and(&self.beta)
                    .for_each(|n, o, &s, &g, &b| {
                        *n *= s;
                        *o = *n * g + b;
                    });
            });
        (
            y,
            NormCache {
                normalized,
                inv_std,
                batch_mean: mean,
                batch_var: var,
            },
        )
    }

    pub fn forward_inference(&self, x: &Array2<f64>) -> Array2<f64> {
        let scale = &self.gamma / &self.running_var.mapv(|v| (v + self.epsilon).sqrt());
        (x - &self.running_mean) * &scale + &self.beta
    }

    pub fn forward(&self, x: &Array2<f64>, mode: Mode) -> Array2<f64> {
        match mode {
            Mode::Training => self.forward_train(x).0,
            Mode::Inference => self.forward_inference(x),
        }
    }

    /// Exponential moving average toward the batch statistics; the variance
    /// uses the unbiased estimate.
    pub fn update_running(&mut self, cache: &NormCache, batch_size: usize) {
        let m = self.momentum;
        let correction = if batch_size > 1 {
            batch_size as f64 / (batch_size - 1) as f64
        } else {
            1.0
        };
        self.running_mean = &self.running_mean * (1.0 - m) + &cache.batch_mean * m;
        self.running_var = &self.running_var * (1.0 - m) + &cache.batch_var * (m * correction);
    }

    /// Backward through a training-mode forward pass.
    pub fn backward(&self, cache: &NormCache, dy: &Array2<f64>) -> (NormGrad, Array2<f64>) {
        let b = dy.nrows() as f64;
        let features = self.features();
        let mut sum_dy = Array1::zeros(features);
        let mut sum_dy_xhat = Array1::zeros(features);
        for (g, n) in dy.rows().into_iter().zip(cache.normalized.rows()) {
            Zip::from(&mut sum_dy)
                .and(&mut sum_dy_xhat)
                .and(g)
                .and(n)
                .for_each(|s, t, &g, &n| {
                    *s += g;
                    *t += g * n;
                });
        }
        let scale = &self.gamma * &cache.inv_std / b;
        let mut dx = Array2::zeros(dy.raw_dim());
        Zip::from(dx.rows_mut())
            .and(dy.rows())
            .and(cache.normalized.rows())
            .for_each(|mut out, g, n| {
                Zip::from(&mut out)
                    .and(g)
                    .and(n)
                    .and(&scale)
                    .and(&sum_dy)
                    .and(&sum_dy_xhat)
                    .for_each(|o, &g, &n, &c, &s, &t| *o = c * (b * g - s - n * t));
            });
        let grad = NormGrad {
            gamma: sum_dy_xhat,
            beta: sum_dy,
        };
        (grad, dx)
    }
}
