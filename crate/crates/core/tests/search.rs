mod common;

use common::{record_violations, InvariantObserver};
use nk_memetic::landscape::BudgetExhausted;
use nk_memetic::local_search::is_local_optimum;
use nk_memetic::memetic::{self, survival_selection, Member, MemeticConfig, ModelPolicy};
use nk_memetic::nn::TrainConfig;
use nk_memetic::record::Termination;
use nk_memetic::{
    brute_force_optimum, fihc, msls, EvaluationBudget, FihcOptions, Genome, NkInstance, ShuffleMode,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tiny_config(lambda: usize) -> MemeticConfig {
    MemeticConfig {
        lambda: Some(lambda),
        hidden: 32,
        latent: 4,
        train: TrainConfig {
            epochs: 20,
            ..TrainConfig::default()
        },
        ..MemeticConfig::default()
    }
}

#[test]
fn fihc_results_are_local_optima_in_both_shuffle_modes() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (i, shuffle) in [ShuffleMode::Once, ShuffleMode::PerSweep]
        .into_iter()
        .enumerate()
    {
        for s in 0..25 {
            let inst = NkInstance::generate(30, 1 + s % 5, 100 * i as u64 + s as u64).unwrap();
            let mut budget = EvaluationBudget::unlimited();
            let r = fihc(
                &inst,
                Genome::random(30, &mut rng),
                FihcOptions { shuffle },
                &mut rng,
                &mut budget,
            )
            .unwrap();
            assert!(!r.exhausted);
            assert!(is_local_optimum(&inst, &r.genome));
            assert_eq!(r.evaluations_used, budget.used());
            assert!((inst.fitness_unbudgeted(&r.genome).unwrap() - r.fitness).abs() < 1e-12);
        }
    }
}

#[test]
fn fihc_on_empty_budget_fails() {
    let inst = NkInstance::generate(10, 2, 1).unwrap();
    let mut budget = EvaluationBudget::new(0);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert_eq!(
        fihc(
            &inst,
            Genome::zeros(10),
            FihcOptions::default(),
            &mut rng,
            &mut budget
        )
        .unwrap_err(),
        BudgetExhausted
    );
}

#[test]
fn initial_population_is_locally_optimal() {
    let inst = NkInstance::generate(30, 3, 12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut budget = EvaluationBudget::unlimited();
    let init = memetic::initialize(&inst, 30, FihcOptions::default(), &mut rng, &mut budget);
    assert_eq!(init.population.len(), 30);
    assert!(!init.exhausted);
    assert!(init
        .population
        .iter()
        .all(|m| is_local_optimum(&inst, &m.genome)));
    let mut again = ChaCha8Rng::seed_from_u64(3);
    let init2 = memetic::initialize(
        &inst,
        30,
        FihcOptions::default(),
        &mut again,
        &mut EvaluationBudget::unlimited(),
    );
    assert_eq!(init.population, init2.population);
}

#[test]
fn memetic_run_keeps_invariants() {
    for policy in [ModelPolicy::Fresh, ModelPolicy::Warm] {
        let inst = NkInstance::generate(20, 3, 5).unwrap();
        let cfg = MemeticConfig {
            model_policy: policy,
            ..tiny_config(10)
        };
        let mut obs = InvariantObserver::new(&inst, 10);
        let rec = memetic::run_observed(&inst, &cfg, 20_000, 9, &mut obs);
        assert!(obs.violations.is_empty(), "{:?}", obs.violations);
        assert!(record_violations(&rec, &inst).is_empty());
        assert!(obs.generations >= 2, "only {} generations", obs.generations);
        assert_eq!(rec.generations, obs.generations);
        assert_eq!(rec.final_population.unwrap().size, 10);
        assert!(matches!(
            rec.termination,
            Termination::BudgetExhausted | Termination::Stalled
        ));
    }
}

#[test]
fn memetic_run_without_raw_filter() {
    let inst = NkInstance::generate(16, 2, 8).unwrap();
    let cfg = MemeticConfig {
        filter_raw: false,
        ..tiny_config(8)
    };
    let mut obs = InvariantObserver::new(&inst, 8);
    let rec = memetic::run_observed(&inst, &cfg, 8_000, 2, &mut obs);
    assert!(obs.violations.is_empty(), "{:?}", obs.violations);
    assert!(record_violations(&rec, &inst).is_empty());
}

#[test]
fn memetic_run_is_reproducible() {
    let inst = NkInstance::generate(20, 2, 1).unwrap();
    let cfg = tiny_config(8);
    let a = memetic::run(&inst, &cfg, 10_000, 77);
    let b = memetic::run(&inst, &cfg, 10_000, 77);
    assert_eq!(a, b);
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    let c = memetic::run(&inst, &cfg, 10_000, 78);
    assert_ne!(a.milestones, c.milestones);
}

#[test]
fn memetic_monotone_best_on_n30() {
    let inst = NkInstance::generate(30, 2, 4).unwrap();
    let cfg = tiny_config(30);
    let mut obs = InvariantObserver::new(&inst, 30);
    let rec = memetic::run_observed(&inst, &cfg, 200_000, 6, &mut obs);
    assert!(obs.violations.is_empty(), "{:?}", obs.violations);
    let first = rec.milestones.first().unwrap().best;
    assert!(rec.best_fitness.unwrap() >= first);
    assert!(record_violations(&rec, &inst).is_empty());
}

#[test]
fn tiny_budget_ends_in_initialization() {
    let inst = NkInstance::generate(20, 3, 2).unwrap();
    let rec = memetic::run(&inst, &tiny_config(20), 50, 1);
    assert_eq!(rec.termination, Termination::ExhaustedDuringInit);
    assert_eq!(rec.generations, 0);
    assert_eq!(rec.evaluations_used, 50);
    assert!(record_violations(&rec, &inst).is_empty());
}

#[test]
fn msls_keeps_invariants() {
    let inst = NkInstance::generate(25, 4, 3).unwrap();
    let rec = msls::run(&inst, FihcOptions::default(), 30_000, 4);
    assert!(record_violations(&rec, &inst).is_empty());
    assert_eq!(rec.evaluations_used, 30_000);
    assert!(rec.local_searches > 10);
}

#[test]
fn memetic_finds_small_optimum() {
    let inst = NkInstance::generate(12, 2, 31).unwrap();
    let (_, opt) = brute_force_optimum(&inst).unwrap();
    let rec = memetic::run(&inst, &tiny_config(12), 20_000, 3);
    assert!((rec.best_fitness.unwrap() - opt).abs() < 1e-12);
}

fn arb_members(max: usize) -> impl Strategy<Value = Vec<Member>> {
    prop::collection::vec((prop::collection::vec(0u8..2, 6), 0u8..6), 0..max).prop_map(|v| {
        v.into_iter()
            .map(|(bits, f)| Member {
                genome: Genome::from_bits(bits),
                fitness: f as f64 / 8.0,
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn selection_matches_full_sort(parents in arb_members(12), offspring in arb_members(12), lambda in 1usize..12) {
        let chosen = survival_selection(&parents, &offspring, lambda);
        let mut all: Vec<(f64, u8, Genome)> = offspring
            .iter()
            .map(|m| (m.fitness, 0u8, m.genome.clone()))
            .chain(parents.iter().map(|m| (m.fitness, 1u8, m.genome.clone())))
            .collect();
        all.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let want: Vec<(f64, Genome)> = all.into_iter().take(lambda).map(|(f, _, g)| (f, g)).collect();
        let got: Vec<(f64, Genome)> = chosen.into_iter().map(|m| (m.fitness, m.genome)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn selection_never_lowers_the_worst(parents in arb_members(10), offspring in arb_members(10)) {
        prop_assume!(!parents.is_empty());
        let next = survival_selection(&parents, &offspring, parents.len());
        prop_assert_eq!(next.len(), parents.len());
        let min = |v: &[Member]| v.iter().map(|m| m.fitness).fold(f64::INFINITY, f64::min);
        prop_assert!(min(&next) >= min(&parents));
    }
}
