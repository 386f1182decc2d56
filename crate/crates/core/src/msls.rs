//! Multi-start local search: hill climbing from fresh uniform genomes until
//! the budget runs out.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::landscape::{EvaluationBudget, Genome, NkInstance};
use crate::local_search::{fihc, FihcOptions};
use crate::record::{InstanceRef, RunRecord, Termination};

pub fn run(instance: &NkInstance, options: FihcOptions, budget_max: u64, seed: u64) -> RunRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut budget = EvaluationBudget::new(budget_max);
    let mut best: Option<(Genome, f64)> = None;
    let mut local_searches = 0u64;
    loop {
        let start = Genome::random(instance.n(), &mut rng);
        let Ok(r) = fihc(instance, start, options, &mut rng, &mut budget) else {
            break;
        };
        local_searches += 1;
        // a climb cut short still counts toward the best
        if best.as_ref().is_none_or(|(_, f)| r.fitness > *f) {
            best = Some((r.genome, r.fitness));
        }
        if r.exhausted {
            break;
        }
    }
    RunRecord {
        algorithm: "msls".into(),
        trial: 0,
        seed,
        instance: InstanceRef::from(instance),
        budget_max,
        evaluations_used: budget.used(),
        best_fitness: best.as_ref().map(|b| b.1),
        best_genome: best.map(|b| b.0),
        milestones: budget.finish_trace(),
        generations: 0,
        local_searches,
        termination: Termination::BudgetExhausted,
        final_population: None,
        history_size: 0,
    }
}
