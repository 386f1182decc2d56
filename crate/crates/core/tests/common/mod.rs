#![allow(dead_code)]

pub mod reference;

use ndarray::{array, Array1, Array2};
use nk_memetic::nn::vae::PARAMETER_NAMES;
use nk_memetic::nn::{BatchNormLayer, DenseLayer, VaeModel};

fn pattern(rows: usize, cols: usize, c: usize) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |(r, j)| {
        (((r * 7 + j * 3 + c) % 11) as f64 - 5.0) / 10.0
    })
}

fn norm(features: usize) -> BatchNormLayer {
    let mut bn = BatchNormLayer::new(features);
    bn.gamma = Array1::from_shape_fn(features, |j| 1.0 + 0.1 * (j % 3) as f64);
    bn.beta = Array1::from_shape_fn(features, |j| 0.05 * (j % 4) as f64 - 0.05);
    bn.running_mean = Array1::from_shape_fn(features, |j| j as f64 * 0.1 - 0.3);
    bn.running_var = Array1::from_shape_fn(features, |j| 0.5 + 0.25 * j as f64);
    bn
}

/// Input 6, hidden 8, latent 2, every parameter set by a fixed formula.
pub fn hand_set_model() -> VaeModel {
    let (n, h, d) = (6, 8, 2);
    VaeModel {
        encoder: DenseLayer {
            weights: pattern(h, n, 1),
            biases: Array1::from_shape_fn(h, |j| (((j * 5 + 2) % 7) as f64 - 3.0) / 20.0),
        },
        encoder_norm: norm(h),
        mu_head: DenseLayer {
            weights: pattern(d, h, 2),
            biases: Array1::from_shape_fn(d, |j| 0.01 * (j + 1) as f64),
        },
        logvar_head: DenseLayer {
            weights: pattern(d, h, 3),
            biases: Array1::from_shape_fn(d, |j| -0.02 * (j + 1) as f64),
        },
        decoder: DenseLayer {
            weights: pattern(h, d, 4),
            biases: Array1::from_shape_fn(h, |j| (((j * 5 + 3) % 7) as f64 - 3.0) / 20.0),
        },
        decoder_norm: norm(h),
        output: DenseLayer {
            weights: pattern(n, h, 5),
            biases: Array1::from_shape_fn(n, |j| 0.03 * j as f64 - 0.05),
        },
    }
}

pub fn fixture_batch() -> Array2<f64> {
    array![
        [1., 0., 1., 1., 0., 0.],
        [0., 1., 1., 0., 1., 0.],
        [1., 1., 0., 0., 0., 1.],
        [0., 0., 0., 1., 1., 1.]
    ]
}

pub fn fixture_noise() -> Array2<f64> {
    array![[0.5, -1.0], [1.5, 0.25], [-0.75, 0.0], [0.3, -0.6]]
}

pub fn assert_close(got: &[f64], want: &[f64], tol: f64, what: &str) {
    assert_eq!(got.len(), want.len(), "{what}: length");
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        assert!((g - w).abs() <= tol, "{what}[{i}]: got {g}, want {w}");
    }
}

/// Outcome of comparing one parameter tensor's analytic gradient with
/// central differences.
#[derive(Debug)]
pub struct TensorCheck {
    pub name: &'static str,
    /// `|a - fd|_2 / max(|a|_2, |fd|_2)`, or 0 when both norms are tiny.
    pub relative_error: f64,
    pub max_abs_error: f64,
    pub analytic_norm: f64,
}

impl TensorCheck {
    /// Tensors with a vanishing gradient (biases feeding batch norm) have no
    /// meaningful relative error; those are judged by absolute error.
    pub fn passes(&self, rel_tol: f64, abs_tol: f64) -> bool {
        if self.analytic_norm < abs_tol {
            self.max_abs_error <= abs_tol
        } else {
            self.relative_error <= rel_tol
        }
    }
}

pub fn gradient_check(
    model: &VaeModel,
    batch: &Array2<f64>,
    noise: &Array2<f64>,
    step: f64,
) -> Vec<TensorCheck> {
    let pass = model.backward(batch, noise).unwrap();
    let analytic: Vec<Vec<f64>> = pass
        .gradients
        .tensors()
        .iter()
        .map(|t| t.to_vec())
        .collect();
    let mut probe = model.clone();
    let mut out = Vec::new();
    for (ti, name) in PARAMETER_NAMES.iter().enumerate() {
        let len = analytic[ti].len();
        let mut numeric = vec![0.0; len];
        for (i, slot) in numeric.iter_mut().enumerate() {
            let orig = probe.parameters()[ti][i];
            probe.parameters_mut()[ti][i] = orig + step;
            let up = probe.training_loss(batch, noise).unwrap().total;
            probe.parameters_mut()[ti][i] = orig - step;
            let down = probe.training_loss(batch, noise).unwrap().total;
            probe.parameters_mut()[ti][i] = orig;
            *slot = (up - down) / (2.0 * step);
        }
        let a = &analytic[ti];
        let l2 = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let diff: Vec<f64> = a.iter().zip(&numeric).map(|(x, y)| x - y).collect();
        let scale = l2(a).max(l2(&numeric));
        out.push(TensorCheck {
            name,
            relative_error: if scale < 1e-300 {
                0.0
            } else {
                l2(&diff) / scale
            },
            max_abs_error: diff.iter().fold(0.0f64, |m, d| m.max(d.abs())),
            analytic_norm: l2(a),
        });
    }
    out
}

/// Records every violation of the memetic loop's invariants seen during a run.
pub struct InvariantObserver<'a> {
    pub instance: &'a nk_memetic::NkInstance,
    pub lambda: usize,
    pub violations: Vec<String>,
    pub generations: u64,
    history: nk_memetic::memetic::HistorySet,
    best: f64,
    evaluations: u64,
}

impl<'a> InvariantObserver<'a> {
    pub fn new(instance: &'a nk_memetic::NkInstance, lambda: usize) -> Self {
        Self {
            instance,
            lambda,
            violations: Vec::new(),
            generations: 0,
            history: Default::default(),
            best: f64::NEG_INFINITY,
            evaluations: 0,
        }
    }

    fn check_members(&mut self, when: &str, members: &[nk_memetic::memetic::Member]) {
        for m in members {
            let f = self.instance.fitness_unbudgeted(&m.genome).unwrap();
            if (f - m.fitness).abs() > 1e-12 {
                self.violations
                    .push(format!("{when}: stored fitness {} != {f}", m.fitness));
            }
            if !nk_memetic::local_search::is_local_optimum(self.instance, &m.genome) {
                self.violations
                    .push(format!("{when}: {} is not locally optimal", m.genome));
            }
        }
    }
}

impl nk_memetic::memetic::RunObserver for InvariantObserver<'_> {
    fn on_initialized(&mut self, e: &nk_memetic::memetic::InitEvent<'_>) {
        if !e.exhausted && e.population.len() != self.lambda {
            self.violations.push(format!(
                "initial population has {} members",
                e.population.len()
            ));
        }
        self.check_members("init", e.population);
        self.history = e.history.clone();
    }

    fn on_generation(&mut self, e: &nk_memetic::memetic::GenerationEvent<'_>) {
        let g = e.generation;
        self.generations = g;
        if e.population.len() != self.lambda {
            self.violations.push(format!(
                "gen {g}: population has {} members",
                e.population.len()
            ));
        }
        let old_min = e
            .previous
            .iter()
            .map(|m| m.fitness)
            .fold(f64::INFINITY, f64::min);
        let new_min = e
            .population
            .iter()
            .map(|m| m.fitness)
            .fold(f64::INFINITY, f64::min);
        if new_min < old_min {
            self.violations.push(format!(
                "gen {g}: worst fitness fell from {old_min} to {new_min}"
            ));
        }
        let mut seen = std::collections::HashSet::new();
        for m in e.unique {
            if self.history.contains(&m.genome) {
                self.violations
                    .push(format!("gen {g}: {} was already in the history", m.genome));
            }
            if !seen.insert(&m.genome) {
                self.violations
                    .push(format!("gen {g}: {} duplicated in C''", m.genome));
            }
            if !e.refined.contains(&m.genome) {
                self.violations.push(format!(
                    "gen {g}: {} not among the refined genomes",
                    m.genome
                ));
            }
        }
        self.check_members(&format!("gen {g}"), e.population);
        if e.history.len() < self.history.len()
            || !self.history.iter().all(|x| e.history.contains(x))
        {
            self.violations
                .push(format!("gen {g}: history lost entries"));
        }
        if e.best_so_far < self.best {
            self.violations.push(format!("gen {g}: best-so-far fell"));
        }
        if e.evaluations < self.evaluations {
            self.violations
                .push(format!("gen {g}: evaluation count fell"));
        }
        self.best = e.best_so_far;
        self.evaluations = e.evaluations;
        self.history = e.history.clone();
    }
}

/// Violations of record-level invariants.
pub fn record_violations(
    rec: &nk_memetic::RunRecord,
    instance: &nk_memetic::NkInstance,
) -> Vec<String> {
    let mut out = Vec::new();
    if rec.evaluations_used > rec.budget_max {
        out.push(format!(
            "used {} of {}",
            rec.evaluations_used, rec.budget_max
        ));
    }
    for w in rec.milestones.windows(2) {
        if w[1].best < w[0].best || w[1].evaluations <= w[0].evaluations {
            out.push(format!("milestones not monotone at {:?}", w));
        }
    }
    match (&rec.best_genome, rec.best_fitness) {
        (Some(g), Some(f)) => {
            if (instance.fitness_unbudgeted(g).unwrap() - f).abs() > 1e-12 {
                out.push("best genome does not have the best fitness".into());
            }
            if rec.milestones.last().map(|m| m.best) != Some(f) {
                out.push("final milestone differs from best fitness".into());
            }
        }
        (None, None) => {}
        _ => out.push("best genome and fitness disagree".into()),
    }
    out
}
