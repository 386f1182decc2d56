//! Dense network pieces for the offspring model, with hand-derived gradients.

pub mod batchnorm;
pub mod dense;
pub mod nadam;
pub mod train;
pub mod vae;

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use batchnorm::{BatchNormLayer, Mode};
pub use dense::DenseLayer;
pub use nadam::{NadamConfig, NadamState};
pub use train::{standard_normal, train, TrainConfig, TrainReport};
pub use vae::{
    bit_accuracy, loss, Backprop, LossParts, VaeGradients, VaeModel, VaeOutput, VaeShape,
};

#[derive(Debug, Error)]
pub enum NnError {
    #[error("{what}: expected {expected}, got {got}")]
    ShapeMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("batch has no rows")]
    EmptyBatch,
    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
    #[error("checkpoint i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("checkpoint encoding: {0}")]
    Encoding(#[from] serde_json::Error),
}

/// Debug dump of a model and its optimizer state, stored as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub model: VaeModel,
    pub optimizer: Option<NadamState>,
}

impl Checkpoint {
    pub fn save(&self, path: &Path) -> Result<(), NnError> {
        let file = std::io::BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer(file, self)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, NnError> {
        let file = std::io::BufReader::new(std::fs::File::open(path)?);
        Ok(serde_json::from_reader(file)?)
    }
}
