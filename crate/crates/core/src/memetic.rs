//! The VAE-guided memetic algorithm.
//!
//! 1. Sample `lambda` uniform genomes and refine each with hill climbing.
//! 2. Train a VAE on the population.
//! 3. Encode each parent and decode `n_vae` posterior samples, thresholding
//!    at 0.5. Samples already in the run history are dropped.
//! 4. Hill-climb every sample.
//! 5. Keep one copy of each refined genome not seen earlier in the run.
//! 6. Truncation-select `lambda` survivors from parents plus offspring, and
//!    go back to 2 until the budget runs out.

use std::cmp::Ordering;
use std::collections::HashSet;

use ndarray::{Array2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::landscape::{EvaluationBudget, Genome, NkInstance};
use crate::local_search::{fihc, FihcOptions, FihcResult};
use crate::nn::{self, Mode, TrainConfig, VaeModel, VaeShape};
use crate::record::{InstanceRef, PopulationSummary, RunRecord, Termination};

/// Every genome produced by sampling or local search during a run.
pub type HistorySet = HashSet<Genome>;

#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub genome: Genome,
    pub fitness: f64,
}

impl From<FihcResult> for Member {
    fn from(r: FihcResult) -> Self {
        Self {
            genome: r.genome,
            fitness: r.fitness,
        }
    }
}

/// Whether each generation starts from a freshly initialized VAE.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelPolicy {
    #[default]
    Fresh,
    /// Keep training the previous generation's weights.
    Warm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MemeticConfig {
    /// Population size; `None` means the problem size `n`.
    pub lambda: Option<usize>,
    pub n_vae: usize,
    pub hidden: usize,
    pub latent: usize,
    #[serde(flatten)]
    pub train: TrainConfig,
    pub fihc: FihcOptions,
    /// Drop raw VAE samples that are already in the history.
    pub filter_raw: bool,
    pub model_policy: ModelPolicy,
    /// End the run after this many consecutive generations that spend no
    /// evaluations.
    pub max_stalled_generations: u32,
}

impl Default for MemeticConfig {
    fn default() -> Self {
        Self {
            lambda: None,
            n_vae: 10,
            hidden: 4096,
            latent: 32,
            train: TrainConfig::default(),
            fihc: FihcOptions::default(),
            filter_raw: true,
            model_policy: ModelPolicy::Fresh,
            max_stalled_generations: 20,
        }
    }
}

impl MemeticConfig {
    /// Reduced network for desk-scale experiments.
    pub fn reduced() -> Self {
        Self {
            hidden: 256,
            latent: 8,
            train: TrainConfig {
                epochs: 100,
                ..TrainConfig::default()
            },
            ..Self::default()
        }
    }

    pub fn lambda_for(&self, n: usize) -> usize {
        self.lambda.unwrap_or(n)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.lambda == Some(0) {
            return Err("lambda must be at least 1".into());
        }
        if self.n_vae == 0 {
            return Err("n_vae must be at least 1".into());
        }
        if self.hidden == 0 || self.latent == 0 {
            return Err("hidden and latent sizes must be positive".into());
        }
        if self.train.batch_size == 0 || self.train.epochs == 0 || self.train.learning_rate <= 0.0 {
            return Err("batch_size, epochs and learning_rate must be positive".into());
        }
        Ok(())
    }
}

/// Anything that can map parents to a latent posterior and latents back to
/// bit probabilities.
pub trait OffspringModel {
    fn latent_dim(&self) -> usize;
    /// Returns `(mu, logvar)` for each row of `parents`.
    fn encode(&self, parents: &Array2<f64>) -> (Array2<f64>, Array2<f64>);
    /// Per-coordinate probabilities of a one bit.
    fn decode(&self, latents: &Array2<f64>) -> Array2<f64>;
}

impl OffspringModel for VaeModel {
    fn latent_dim(&self) -> usize {
        self.shape().latent
    }

    fn encode(&self, parents: &Array2<f64>) -> (Array2<f64>, Array2<f64>) {
        VaeModel::encode(self, parents, Mode::Inference).expect("parent width matches model")
    }

    fn decode(&self, latents: &Array2<f64>) -> Array2<f64> {
        VaeModel::decode(self, latents, Mode::Inference).expect("latent width matches model")
    }
}

pub fn population_matrix<'a>(
    genomes: impl ExactSizeIterator<Item = &'a Genome>,
    n: usize,
) -> Array2<f64> {
    let rows = genomes.len();
    let mut m = Array2::zeros((rows, n));
    for (mut row, g) in m.axis_iter_mut(Axis(0)).zip(genomes) {
        for (v, &b) in row.iter_mut().zip(g.bits()) {
            *v = b as f64;
        }
    }
    m
}

/// Samples `n_vae` offspring per parent from the posterior of `model`.
///
/// A coordinate becomes one when its probability is at least 0.5. With
/// `filter_raw`, samples already in `history` or already drawn this call are
/// dropped, so the result may hold fewer than `parents * n_vae` genomes.
pub fn generate_offspring<M: OffspringModel + ?Sized, R: Rng + ?Sized>(
    model: &M,
    parents: &[Member],
    n_vae: usize,
    filter_raw: bool,
    history: &HistorySet,
    rng: &mut R,
) -> Vec<Genome> {
    if parents.is_empty() || n_vae == 0 {
        return Vec::new();
    }
    let n = parents[0].genome.len();
    let x = population_matrix(parents.iter().map(|m| &m.genome), n);
    let (mu, logvar) = model.encode(&x);
    let d = model.latent_dim();
    let rows = parents.len() * n_vae;
    let mut z = Array2::zeros((rows, d));
    for (r, mut row) in z.axis_iter_mut(Axis(0)).enumerate() {
        let p = r / n_vae;
        for j in 0..d {
            let sigma =
                (0.5 * logvar[[p, j]].clamp(nn::vae::LOGVAR_MIN, nn::vae::LOGVAR_MAX)).exp();
            let eps: f64 = rng.sample(rand_distr::StandardNormal);
            row[j] = mu[[p, j]] + sigma * eps;
        }
    }
    let probs = model.decode(&z);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(rows);
    for row in probs.axis_iter(Axis(0)) {
        let g = Genome::from_bools(row.iter().map(|&p| p >= 0.5));
        if filter_raw && (history.contains(&g) || !seen.insert(g.clone())) {
            continue;
        }
        out.push(g);
    }
    out
}

#[derive(Debug, Clone, Default)]
pub struct RefineOutcome {
    /// Every completed hill-climbing result, in input order (`C'`).
    pub refined: Vec<Genome>,
    /// Unique refined genomes not in the history beforehand (`C''`).
    pub unique: Vec<Member>,
    /// Best result seen, including a climb cut short by the budget.
    pub best: Option<Member>,
    pub local_searches: u64,
    pub exhausted: bool,
}

/// Hill-climbs each raw offspring, then keeps the refined genomes that are
/// new to the run. All raw and refined genomes are added to `history`.
pub fn refine_and_dedup<R: Rng + ?Sized>(
    raw: &[Genome],
    instance: &NkInstance,
    options: FihcOptions,
    rng: &mut R,
    budget: &mut EvaluationBudget,
    history: &mut HistorySet,
) -> RefineOutcome {
    let mut out = RefineOutcome::default();
    let mut processed = 0;
    let mut fresh = HashSet::new();
    for g in raw {
        let Ok(result) = fihc(instance, g.clone(), options, rng, budget) else {
            out.exhausted = true;
            break;
        };
        processed += 1;
        out.local_searches += 1;
        if out.best.as_ref().is_none_or(|b| result.fitness > b.fitness) {
            out.best = Some(Member {
                genome: result.genome.clone(),
                fitness: result.fitness,
            });
        }
        if result.exhausted {
            out.exhausted = true;
            history.insert(result.genome);
            break;
        }
        out.refined.push(result.genome.clone());
        if !history.contains(&result.genome) && fresh.insert(result.genome.clone()) {
            out.unique.push(result.into());
        }
    }
    history.extend(raw[..processed].iter().cloned());
    history.extend(out.refined.iter().cloned());
    out
}

/// Orders by fitness (descending), then offspring before parents, then by
/// genome (ascending).
fn survivor_order(a: &(bool, &Member), b: &(bool, &Member)) -> Ordering {
    b.1.fitness
        .total_cmp(&a.1.fitness)
        .then(a.0.cmp(&b.0))
        .then_with(|| a.1.genome.cmp(&b.1.genome))
}

/// The `lambda` best of `parents` and `offspring`.
pub fn survival_selection(parents: &[Member], offspring: &[Member], lambda: usize) -> Vec<Member> {
    let mut pool: Vec<(bool, &Member)> = offspring
        .iter()
        .map(|m| (false, m))
        .chain(parents.iter().map(|m| (true, m)))
        .collect();
    pool.sort_by(survivor_order);
    pool.into_iter()
        .take(lambda)
        .map(|(_, m)| m.clone())
        .collect()
}

pub struct InitEvent<'a> {
    pub starts: &'a [Genome],
    pub population: &'a [Member],
    pub history: &'a HistorySet,
    pub exhausted: bool,
}

pub struct GenerationEvent<'a> {
    pub generation: u64,
    pub raw: &'a [Genome],
    pub refined: &'a [Genome],
    pub unique: &'a [Member],
    pub previous: &'a [Member],
    pub population: &'a [Member],
    pub history: &'a HistorySet,
    pub evaluations: u64,
    pub best_so_far: f64,
}

/// Hooks for watching a run; the default methods do nothing.
pub trait RunObserver {
    fn on_initialized(&mut self, _event: &InitEvent<'_>) {}
    fn on_generation(&mut self, _event: &GenerationEvent<'_>) {}
}

impl RunObserver for () {}

pub struct Initialized {
    pub population: Vec<Member>,
    pub history: HistorySet,
    pub starts: Vec<Genome>,
    pub best: Option<Member>,
    pub exhausted: bool,
}

/// `lambda` uniform genomes, each refined by hill climbing.
pub fn initialize<R: Rng + ?Sized>(
    instance: &NkInstance,
    lambda: usize,
    options: FihcOptions,
    rng: &mut R,
    budget: &mut EvaluationBudget,
) -> Initialized {
    let n = instance.n();
    let mut init = Initialized {
        population: Vec::with_capacity(lambda),
        history: HistorySet::new(),
        starts: Vec::with_capacity(lambda),
        best: None,
        exhausted: false,
    };
    for _ in 0..lambda {
        let start = Genome::random(n, rng);
        init.starts.push(start.clone());
        init.history.insert(start.clone());
        let Ok(r) = fihc(instance, start, options, rng, budget) else {
            init.exhausted = true;
            break;
        };
        init.history.insert(r.genome.clone());
        if init.best.as_ref().is_none_or(|b| r.fitness > b.fitness) {
            init.best = Some(Member {
                genome: r.genome.clone(),
                fitness: r.fitness,
            });
        }
        if r.exhausted {
            init.exhausted = true;
            break;
        }
        init.population.push(r.into());
    }
    init
}

pub fn run(instance: &NkInstance, config: &MemeticConfig, budget_max: u64, seed: u64) -> RunRecord {
    run_observed(instance, config, budget_max, seed, &mut ())
}

pub fn run_observed<O: RunObserver + ?Sized>(
    instance: &NkInstance,
    config: &MemeticConfig,
    budget_max: u64,
    seed: u64,
    observer: &mut O,
) -> RunRecord {
    let n = instance.n();
    let lambda = config.lambda_for(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut budget = EvaluationBudget::new(budget_max);

    let init = initialize(instance, lambda, config.fihc, &mut rng, &mut budget);
    observer.on_initialized(&InitEvent {
        starts: &init.starts,
        population: &init.population,
        history: &init.history,
        exhausted: init.exhausted,
    });
    let Initialized {
        mut population,
        mut history,
        mut best,
        exhausted,
        ..
    } = init;
    let mut local_searches = population.len() as u64 + u64::from(exhausted);
    let mut generations = 0u64;
    let mut termination = if exhausted {
        Termination::ExhaustedDuringInit
    } else {
        Termination::BudgetExhausted
    };

    let shape = VaeShape {
        input: n,
        hidden: config.hidden,
        latent: config.latent,
    };
    let mut model: Option<VaeModel> = None;
    let mut stalled = 0u32;

    while !exhausted && !budget.is_exhausted() {
        let mut vae = match (config.model_policy, model.take()) {
            (ModelPolicy::Warm, Some(m)) => m,
            _ => VaeModel::new(shape, &mut rng),
        };
        let data = population_matrix(population.iter().map(|m| &m.genome), n);
        nn::train(&mut vae, &data, &config.train, &mut rng).expect("validated training config");

        let raw = generate_offspring(
            &vae,
            &population,
            config.n_vae,
            config.filter_raw,
            &history,
            &mut rng,
        );
        let used_before = budget.used();
        let outcome = refine_and_dedup(
            &raw,
            instance,
            config.fihc,
            &mut rng,
            &mut budget,
            &mut history,
        );
        local_searches += outcome.local_searches;
        if let Some(b) = &outcome.best {
            if best.as_ref().is_none_or(|cur| b.fitness > cur.fitness) {
                best = Some(b.clone());
            }
        }
        let next = survival_selection(&population, &outcome.unique, lambda);
        generations += 1;
        observer.on_generation(&GenerationEvent {
            generation: generations,
            raw: &raw,
            refined: &outcome.refined,
            unique: &outcome.unique,
            previous: &population,
            population: &next,
            history: &history,
            evaluations: budget.used(),
            best_so_far: budget.best().unwrap_or(f64::NEG_INFINITY),
        });
        population = next;
        if config.model_policy == ModelPolicy::Warm {
            model = Some(vae);
        }
        if outcome.exhausted {
            break;
        }
        if budget.used() == used_before {
            stalled += 1;
            if stalled >= config.max_stalled_generations {
                termination = Termination::Stalled;
                break;
            }
        } else {
            stalled = 0;
        }
    }

    RunRecord {
        algorithm: "memetic".into(),
        trial: 0,
        seed,
        instance: InstanceRef::from(instance),
        budget_max,
        evaluations_used: budget.used(),
        best_fitness: best.as_ref().map(|b| b.fitness),
        best_genome: best.map(|b| b.genome),
        milestones: budget.finish_trace(),
        generations,
        local_searches,
        termination,
        final_population: PopulationSummary::from_fitness(population.iter().map(|m| m.fitness)),
        history_size: history.len(),
    }
}
