use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Returned when an evaluation is requested after the budget ran out. This is
/// the normal termination signal for a run, not a failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("evaluation budget exhausted")]
pub struct BudgetExhausted;

/// Best fitness seen after `evaluations` objective queries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Milestone {
    pub evaluations: u64,
    pub best: f64,
}

/// Growth factor between recorded checkpoints (ten per decade).
const MILESTONE_RATIO: f64 = 1.258_925_411_794_167_2;

/// Counter of objective evaluations for a single run.
///
/// Besides enforcing the limit, the budget watches every value it is charged
/// for, so it knows the best fitness seen so far and can keep a compact trace
/// of it at geometric checkpoints.
#[derive(Debug, Clone)]
pub struct EvaluationBudget {
    used: u64,
    max: u64,
    best: Option<f64>,
    next_milestone: u64,
    trace: Vec<Milestone>,
}

impl EvaluationBudget {
    pub fn new(max: u64) -> Self {
        Self {
            used: 0,
            max,
            best: None,
            next_milestone: 1,
            trace: Vec::new(),
        }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn max(&self) -> u64 {
        self.max
    }

    pub fn remaining(&self) -> u64 {
        self.max - self.used
    }

    pub fn is_exhausted(&self) -> bool {
        self.used >= self.max
    }

    /// Best objective value observed so far, if any evaluation happened.
    pub fn best(&self) -> Option<f64> {
        self.best
    }

    pub(crate) fn charge(&mut self) -> Result<(), BudgetExhausted> {
        if self.used >= self.max {
            return Err(BudgetExhausted);
        }
        self.used += 1;
        Ok(())
    }

    pub(crate) fn observe(&mut self, fitness: f64) {
        if self.best.is_none_or(|b| fitness > b) {
            self.best = Some(fitness);
        }
        if self.used == self.next_milestone {
            self.push_milestone();
            let grown = (self.next_milestone as f64 * MILESTONE_RATIO).round() as u64;
            self.next_milestone = grown.max(self.next_milestone + 1);
        }
    }

    fn push_milestone(&mut self) {
        if let Some(best) = self.best {
            if self.trace.last().map(|m| m.evaluations) != Some(self.used) {
                self.trace.push(Milestone {
                    evaluations: self.used,
                    best,
                });
            }
        }
    }

    /// Checkpoint trace so far, without the closing entry.
    pub fn trace(&self) -> &[Milestone] {
        &self.trace
    }

    /// Trace with a final checkpoint at the current evaluation count.
    pub fn finish_trace(&mut self) -> Vec<Milestone> {
        self.push_milestone();
        self.trace.clone()
    }
}
