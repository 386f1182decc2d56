//! Nadam: Adam with a Nesterov look-ahead on the first moment.
//!
//! This follows Dozat's formulation with the momentum schedule
//! `mu_t = beta1 * (1 - 0.5 * 0.96^(t * momentum_decay))`, which is also what
//! `torch.optim.NAdam` implements:
//!
//! ```text
//! m_t = beta1 m + (1 - beta1) g
//! v_t = beta2 v + (1 - beta2) g^2
//! d   = sqrt(v_t / (1 - beta2^t)) + eps
//! p  -= alpha (1 - mu_t) / (1 - prod_{i<=t} mu_i) * g / d
//! p  -= alpha mu_{t+1} / (1 - prod_{i<=t+1} mu_i) * m_t / d
//! ```

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NadamConfig {
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub momentum_decay: f64,
}

impl Default for NadamConfig {
    fn default() -> Self {
        Self {
            alpha: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            momentum_decay: 4e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NadamState {
    pub config: NadamConfig,
    pub first_moment: Vec<Vec<f64>>,
    pub second_moment: Vec<Vec<f64>>,
    pub step_count: u64,
    pub mu_product: f64,
}

impl NadamState {
    /// Fresh state for parameter tensors of the given lengths.
    pub fn new(config: NadamConfig, shapes: impl IntoIterator<Item = usize>) -> Self {
        let lens: Vec<usize> = shapes.into_iter().collect();
        Self {
            config,
            first_moment: lens.iter().map(|&l| vec![0.0; l]).collect(),
            second_moment: lens.iter().map(|&l| vec![0.0; l]).collect(),
            step_count: 0,
            mu_product: 1.0,
        }
    }

    fn mu(&self, t: u64) -> f64 {
        let c = &self.config;
        c.beta1 * (1.0 - 0.5 * 0.96f64.powf(t as f64 * c.momentum_decay))
    }

    /// One update of every tensor in `params` from the matching `grads`.
    ///
    /// Panics if the tensor count or any tensor length differs from the
    /// shapes the state was built for.
    pub fn step(&mut self, params: &mut [&mut [f64]], grads: &[&[f64]]) {
        assert_eq!(params.len(), self.first_moment.len(), "tensor count");
        assert_eq!(grads.len(), self.first_moment.len(), "tensor count");
        self.step_count += 1;
        let t = self.step_count;
        let NadamConfig {
            alpha,
            beta1,
            beta2,
            epsilon,
            ..
        } = self.config;
        let mu_t = self.mu(t);
        let mu_next = self.mu(t + 1);
        self.mu_product *= mu_t;
        let grad_coef = alpha * (1.0 - mu_t) / (1.0 - self.mu_product);
        let moment_coef = alpha * mu_next / (1.0 - self.mu_product * mu_next);
        let bias2 = 1.0 - beta2.powi(t as i32);

        for (((p, g), m), v) in params
            .iter_mut()
            .zip(grads)
            .zip(&mut self.first_moment)
            .zip(&mut self.second_moment)
        {
            assert_eq!(p.len(), g.len(), "parameter/gradient length");
            assert_eq!(p.len(), m.len(), "parameter/state length");
            for (((p, &g), m), v) in p
                .iter_mut()
                .zip(g.iter())
                .zip(m.iter_mut())
                .zip(v.iter_mut())
            {
                *m = beta1 * *m + (1.0 - beta1) * g;
                *v = beta2 * *v + (1.0 - beta2) * g * g;
                let denom = (*v / bias2).sqrt() + epsilon;
                *p -= grad_coef * g / denom + moment_coef * *m / denom;
            }
        }
    }
}
