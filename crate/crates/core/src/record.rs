//! Per-trial run records.
//!
//! Records are stored as JSON Lines: one JSON object per line, one line per
//! trial. Field names are those of [`RunRecord`]; floats round-trip exactly.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::landscape::{Genome, Milestone, NkInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRef {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
}

impl From<&NkInstance> for InstanceRef {
    fn from(inst: &NkInstance) -> Self {
        Self {
            n: inst.n(),
            k: inst.k(),
            seed: inst.seed(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The evaluation budget ran out; the normal ending.
    BudgetExhausted,
    /// The budget ran out before the initial population was complete.
    ExhaustedDuringInit,
    /// Consecutive generations produced nothing new to evaluate.
    Stalled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationSummary {
    pub size: usize,
    pub best: f64,
    pub mean: f64,
    pub worst: f64,
}

impl PopulationSummary {
    pub fn from_fitness(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let values: Vec<f64> = values.into_iter().collect();
        if values.is_empty() {
            return None;
        }
        Some(Self {
            size: values.len(),
            best: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean: values.iter().sum::<f64>() / values.len() as f64,
            worst: values.iter().copied().fold(f64::INFINITY, f64::min),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub trial: u32,
    pub seed: u64,
    pub instance: InstanceRef,
    pub budget_max: u64,
    pub evaluations_used: u64,
    pub best_fitness: Option<f64>,
    pub best_genome: Option<Genome>,
    /// Best fitness so far at geometric evaluation checkpoints, closing with
    /// the final evaluation count.
    pub milestones: Vec<Milestone>,
    pub generations: u64,
    pub local_searches: u64,
    pub termination: Termination,
    pub final_population: Option<PopulationSummary>,
    pub history_size: usize,
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Decode {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

pub fn write_records<'a, W: Write>(
    records: impl IntoIterator<Item = &'a RunRecord>,
    mut out: W,
) -> Result<(), RecordError> {
    for r in records {
        serde_json::to_writer(&mut out, r)
            .map_err(|e| RecordError::Decode { line: 0, source: e })?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records<R: BufRead>(reader: R) -> Result<Vec<RunRecord>, RecordError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|e| RecordError::Decode {
            line: i + 1,
            source: e,
        })?;
        out.push(rec);
    }
    Ok(out)
}
