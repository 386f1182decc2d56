//! First-improvement hill climbing over single-bit flips.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::landscape::{BudgetExhausted, EvaluationBudget, Genome, NkInstance};

/// When the scan order over bit positions is drawn.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShuffleMode {
    /// One random order per call, reused by every sweep.
    #[default]
    Once,
    /// A fresh random order at the start of every sweep.
    PerSweep,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FihcOptions {
    #[serde(default)]
    pub shuffle: ShuffleMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FihcResult {
    pub genome: Genome,
    pub fitness: f64,
    pub evaluations_used: u64,
    /// Whether any flip was accepted.
    pub improved: bool,
    /// The budget ran out before local optimality was confirmed.
    pub exhausted: bool,
}

/// Climbs from `start` until no single flip strictly improves fitness.
///
/// A position is skipped in a sweep when no flip has been accepted since it
/// was last tried; the climb stops after a sweep that accepts nothing. If the
/// budget runs out mid-climb the best genome so far is returned with
/// `exhausted` set. `Err` is returned only when not even `start` could be
/// evaluated.
pub fn fihc<R: Rng + ?Sized>(
    instance: &NkInstance,
    start: Genome,
    options: FihcOptions,
    rng: &mut R,
    budget: &mut EvaluationBudget,
) -> Result<FihcResult, BudgetExhausted> {
    let n = instance.n();
    let used_before = budget.used();
    let mut fitness = instance.evaluate(&start, budget)?;
    let mut genome = start;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    // accepted-flip count at each position's last trial
    let mut tried_at: Vec<Option<u64>> = vec![None; n];
    let mut accepted = 0u64;
    let mut first_sweep = true;
    let mut exhausted = false;

    'climb: loop {
        if options.shuffle == ShuffleMode::PerSweep && !first_sweep {
            order.shuffle(rng);
        }
        first_sweep = false;
        let mut any = false;
        for &var in &order {
            if tried_at[var] == Some(accepted) {
                continue;
            }
            match instance.evaluate_flip(&genome, fitness, var, budget) {
                Ok((flipped, gain)) => {
                    if gain > 0.0 {
                        genome.flip(var);
                        fitness = flipped;
                        accepted += 1;
                        any = true;
                    }
                    tried_at[var] = Some(accepted);
                }
                Err(BudgetExhausted) => {
                    exhausted = true;
                    break 'climb;
                }
            }
        }
        if !any {
            break;
        }
    }

    Ok(FihcResult {
        genome,
        fitness,
        evaluations_used: budget.used() - used_before,
        improved: accepted > 0,
        exhausted,
    })
}

/// True if no single flip of `genome` strictly improves fitness. Uses full
/// evaluations outside of any budget.
pub fn is_local_optimum(instance: &NkInstance, genome: &Genome) -> bool {
    let f = instance.fitness_unbudgeted(genome).expect("genome length");
    let mut probe = genome.clone();
    (0..genome.len()).all(|j| {
        probe.flip(j);
        let g = instance.fitness_unbudgeted(&probe).expect("genome length");
        probe.flip(j);
        g <= f
    })
}
