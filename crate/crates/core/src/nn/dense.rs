use ndarray::{Array1, Array2, Axis};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Fully connected layer, `y = x W^T + b` with `W` stored `out x in`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseLayer {
    pub weights: Array2<f64>,
    pub biases: Array1<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseGrad {
    pub weights: Array2<f64>,
    pub biases: Array1<f64>,
}

impl DenseLayer {
    /// Glorot-uniform weights in `±sqrt(6 / (fan_in + fan_out))`, zero biases.
    pub fn glorot<R: Rng + ?Sized>(inputs: usize, outputs: usize, rng: &mut R) -> Self {
        let limit = (6.0 / (inputs + outputs) as f64).sqrt();
        let weights =
            Array2::from_shape_fn((outputs, inputs), |_| rng.random_range(-limit..=limit));
        Self {
            weights,
            biases: Array1::zeros(outputs),
        }
    }

    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Self {
            weights: Array2::zeros((outputs, inputs)),
            biases: Array1::zeros(outputs),
        }
    }

    pub fn inputs(&self) -> usize {
        self.weights.ncols()
    }

    pub fn outputs(&self) -> usize {
        self.weights.nrows()
    }

    pub fn forward(&self, x: &Array2<f64>) -> Array2<f64> {
        x.dot(&self.weights.t()) + &self.biases
    }

    /// Returns the parameter gradients and the gradient w.r.t. the input.
    pub fn backward(&self, x: &Array2<f64>, dy: &Array2<f64>) -> (DenseGrad, Array2<f64>) {
        (self.parameter_grad(x, dy), dy.dot(&self.weights))
    }

    pub fn parameter_grad(&self, x: &Array2<f64>, dy: &Array2<f64>) -> DenseGrad {
        DenseGrad {
            weights: dy.t().dot(x),
            biases: dy.sum_axis(Axis(0)),
        }
    }
}
