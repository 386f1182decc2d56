//! Experiment orchestration: trials, seeds, persistence and the result table.
//!
//! An experiment directory holds:
//!
//! * `spec.toml`: the experiment spec, echoed back.
//! * `records.jsonl`: one [`RunRecord`] per completed trial.
//! * `failures.tsv`: `algorithm`, `trial`, `message` for trials that panicked
//!   (only written when there are any).
//! * `results.tsv`: per-algorithm summary, columns
//!   `algorithm trials mean std diff p_adjusted stars`.
//! * `pairs.tsv`: every compared pair, columns
//!   `a b diff z p_raw p_adjusted stars`.
//! * `results.txt`: the aligned human-readable table.

use std::fmt::Write as _;
use std::io::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::landscape::{load_instance, InstanceFormatError, LandscapeError, NkInstance};
use crate::local_search::FihcOptions;
use crate::memetic::{self, MemeticConfig};
use crate::msls;
use crate::record::{read_records, write_records, RecordError, RunRecord};
use crate::rng::derive_seed;
use crate::stats::{self, Comparison, KruskalWallis};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment spec: {0}")]
    Spec(String),
    #[error("cannot parse spec: {0}")]
    SpecParse(#[from] toml::de::Error),
    #[error("instance: {0}")]
    Instance(#[from] LandscapeError),
    #[error("instance file: {0}")]
    InstanceFile(#[from] InstanceFormatError),
    #[error("records: {0}")]
    Records(#[from] RecordError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// True for errors caused by the spec itself rather than the environment.
    pub fn is_spec_error(&self) -> bool {
        matches!(
            self,
            HarnessError::Spec(_)
                | HarnessError::SpecParse(_)
                | HarnessError::Instance(_)
                | HarnessError::InstanceFile(_)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSource {
    Generate { n: usize, k: usize, seed: u64 },
    File { path: PathBuf },
}

impl InstanceSource {
    pub fn load(&self) -> Result<NkInstance, HarnessError> {
        Ok(match self {
            InstanceSource::Generate { n, k, seed } => NkInstance::generate(*n, *k, *seed)?,
            InstanceSource::File { path } => load_instance(path)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AlgorithmKind {
    Memetic(MemeticConfig),
    Msls {
        #[serde(default)]
        fihc: FihcOptions,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: AlgorithmKind,
}

impl AlgorithmSpec {
    pub fn run(&self, instance: &NkInstance, budget: u64, seed: u64) -> RunRecord {
        let mut rec = match &self.kind {
            AlgorithmKind::Memetic(cfg) => memetic::run(instance, cfg, budget, seed),
            AlgorithmKind::Msls { fihc } => msls::run(instance, *fihc, budget, seed),
        };
        rec.algorithm = self.name.clone();
        rec
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparisonMode {
    /// Reference algorithm against each of the others.
    #[default]
    Reference,
    AllPairs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub instance: InstanceSource,
    #[serde(rename = "algorithm")]
    pub algorithms: Vec<AlgorithmSpec>,
    pub trials: u32,
    pub budget: u64,
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Algorithm the Diff column is measured against; defaults to the first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    #[serde(default)]
    pub comparison: ComparisonMode,
    /// Worker threads for trials; defaults to all cores.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let spec: Self = toml::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec is serializable")
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::Spec("trials must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(HarnessError::Spec("no algorithms listed".into()));
        }
        for (i, a) in self.algorithms.iter().enumerate() {
            if a.name.is_empty() || a.name.contains(char::is_whitespace) {
                return Err(HarnessError::Spec(format!(
                    "bad algorithm name {:?}",
                    a.name
                )));
            }
            if self.algorithms[..i].iter().any(|b| b.name == a.name) {
                return Err(HarnessError::Spec(format!(
                    "duplicate algorithm name {:?}",
                    a.name
                )));
            }
            if let AlgorithmKind::Memetic(cfg) = &a.kind {
                cfg.validate()
                    .map_err(|e| HarnessError::Spec(format!("{}: {e}", a.name)))?;
            }
        }
        if let Some(r) = &self.reference {
            if !self.algorithms.iter().any(|a| &a.name == r) {
                return Err(HarnessError::Spec(format!(
                    "reference {r:?} is not a listed algorithm"
                )));
            }
        }
        Ok(())
    }

    pub fn reference_name(&self) -> &str {
        self.reference
            .as_deref()
            .unwrap_or(&self.algorithms[0].name)
    }

    pub fn algorithm_names(&self) -> Vec<String> {
        self.algorithms.iter().map(|a| a.name.clone()).collect()
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Seed of trial `trial` of algorithm `algorithm`; a pure function of its
/// arguments.
pub fn trial_seed(master: u64, algorithm: &str, trial: u32) -> u64 {
    derive_seed(
        derive_seed(master, fnv1a(algorithm.as_bytes())),
        trial as u64,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialFailure {
    pub algorithm: String,
    pub trial: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmRow {
    pub algorithm: String,
    pub trials: usize,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    pub a: String,
    pub b: String,
    /// `mean(a) - mean(b)`, from unrounded means.
    pub diff: f64,
    pub z: Option<f64>,
    pub p_raw: Option<f64>,
    pub p_adjusted: Option<f64>,
}

impl PairRow {
    pub fn stars(&self) -> &'static str {
        self.p_adjusted.map(stats::stars).unwrap_or("")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub title: String,
    pub reference: String,
    pub rows: Vec<AlgorithmRow>,
    pub pairs: Vec<PairRow>,
    pub kruskal_wallis: Option<KruskalWallis>,
    /// Why p-values are missing, when they are.
    pub note: Option<String>,
}

/// Summarizes final best fitness per algorithm, in `order`.
pub fn build_table(
    records: &[RunRecord],
    order: &[String],
    reference: &str,
    mode: ComparisonMode,
) -> ResultTable {
    let samples: Vec<Vec<f64>> = order
        .iter()
        .map(|name| {
            let mut recs: Vec<&RunRecord> =
                records.iter().filter(|r| &r.algorithm == name).collect();
            recs.sort_by_key(|r| r.trial);
            recs.iter().filter_map(|r| r.best_fitness).collect()
        })
        .collect();
    let rows: Vec<AlgorithmRow> = order
        .iter()
        .zip(&samples)
        .map(|(name, s)| AlgorithmRow {
            algorithm: name.clone(),
            trials: s.len(),
            mean: if s.is_empty() {
                f64::NAN
            } else {
                stats::mean(s)
            },
            std: stats::std_dev(s),
        })
        .collect();
    let ref_idx = order.iter().position(|n| n == reference).unwrap_or(0);

    let index_pairs: Vec<(usize, usize)> = match mode {
        ComparisonMode::Reference => (0..order.len())
            .filter(|&j| j != ref_idx)
            .map(|j| (ref_idx, j))
            .collect(),
        ComparisonMode::AllPairs => (0..order.len())
            .flat_map(|a| (a + 1..order.len()).map(move |b| (a, b)))
            .collect(),
    };
    let comparison = match mode {
        ComparisonMode::Reference => Comparison::Reference(ref_idx),
        ComparisonMode::AllPairs => Comparison::AllPairs,
    };
    let (tests, note) = if order.len() < 2 {
        (None, None)
    } else {
        match stats::dunn_holm(&samples, comparison) {
            Ok(t) => (Some(t), None),
            Err(e) => (None, Some(format!("no p-values: {e}"))),
        }
    };
    let pairs = index_pairs
        .iter()
        .map(|&(a, b)| {
            let t = tests
                .as_ref()
                .and_then(|ts| ts.iter().find(|t| t.a == a && t.b == b));
            PairRow {
                a: order[a].clone(),
                b: order[b].clone(),
                diff: rows[a].mean - rows[b].mean,
                z: t.map(|t| t.z),
                p_raw: t.map(|t| t.p_raw),
                p_adjusted: t.map(|t| t.p_adjusted),
            }
        })
        .collect();
    let kruskal_wallis = if order.len() >= 2 {
        stats::kruskal_wallis(&samples).ok()
    } else {
        None
    };

    let title = records
        .first()
        .map(|r| {
            format!(
                "n={} k={} instance_seed={} budget={}",
                r.instance.n, r.instance.k, r.instance.seed, r.budget_max
            )
        })
        .unwrap_or_default();
    ResultTable {
        title,
        reference: order[ref_idx].clone(),
        rows,
        pairs,
        kruskal_wallis,
        note,
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

impl ResultTable {
    pub fn results_tsv(&self) -> String {
        let mut out = String::from("algorithm\ttrials\tmean\tstd\tdiff\tp_adjusted\tstars\n");
        for row in &self.rows {
            let pair = self
                .pairs
                .iter()
                .find(|p| p.a == self.reference && p.b == row.algorithm);
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                row.algorithm,
                row.trials,
                row.mean,
                row.std,
                pair.map(|p| p.diff.to_string()).unwrap_or_default(),
                fmt_opt(pair.and_then(|p| p.p_adjusted)),
                pair.map(|p| p.stars()).unwrap_or(""),
            );
        }
        out
    }

    pub fn pairs_tsv(&self) -> String {
        let mut out = String::from("a\tb\tdiff\tz\tp_raw\tp_adjusted\tstars\n");
        for p in &self.pairs {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                p.a,
                p.b,
                p.diff,
                p.z.map(|z| z.to_string()).unwrap_or_default(),
                fmt_opt(p.p_raw),
                fmt_opt(p.p_adjusted),
                p.stars()
            );
        }
        out
    }

    /// Aligned text table. Each non-reference row shows
    /// `mean(reference) - mean(row)` to four decimals with significance stars.
    pub fn render_text(&self) -> String {
        let show_diff = self.rows.len() > 1;
        let name_w = self
            .rows
            .iter()
            .map(|r| r.algorithm.len())
            .max()
            .unwrap_or(9)
            .max(9);
        let mut out = String::new();
        if !self.title.is_empty() {
            let _ = writeln!(out, "{}", self.title);
        }
        let _ = write!(
            out,
            "{:<name_w$}  {:>6}  {:<17}",
            "algorithm", "trials", "mean ± std"
        );
        if show_diff {
            let _ = write!(out, "  diff vs {}", self.reference);
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(
                out,
                "{:<name_w$}  {:>6}  {:<17}",
                row.algorithm,
                row.trials,
                format!("{:.4} ± {:.4}", row.mean, row.std)
            );
            if show_diff {
                if let Some(p) = self
                    .pairs
                    .iter()
                    .find(|p| p.a == self.reference && p.b == row.algorithm)
                {
                    let _ = write!(out, "  {}", format_diff(p.diff, p.p_adjusted));
                }
            }
            out.push('\n');
        }
        let others: Vec<&PairRow> = self
            .pairs
            .iter()
            .filter(|p| p.a != self.reference)
            .collect();
        if !others.is_empty() {
            out.push_str("other pairs:\n");
            for p in others {
                let _ = writeln!(
                    out,
                    "  {} - {}: {}",
                    p.a,
                    p.b,
                    format_diff(p.diff, p.p_adjusted)
                );
            }
        }
        if let Some(kw) = &self.kruskal_wallis {
            let _ = writeln!(
                out,
                "Kruskal-Wallis H = {:.4} (df {}), p = {:.4e}",
                kw.h, kw.df, kw.p
            );
        }
        if let Some(note) = &self.note {
            let _ = writeln!(out, "{note}");
        }
        out
    }

    pub fn write_to(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::write(dir.join("results.tsv"), self.results_tsv())?;
        std::fs::write(dir.join("pairs.tsv"), self.pairs_tsv())?;
        std::fs::write(dir.join("results.txt"), self.render_text())
    }
}

/// `+0.0206***`: signed difference to four decimals plus stars for the
/// adjusted p-value.
pub fn format_diff(diff: f64, p_adjusted: Option<f64>) -> String {
    format!("{diff:+.4}{}", p_adjusted.map(stats::stars).unwrap_or(""))
}

pub struct ExperimentOutcome {
    pub records: Vec<RunRecord>,
    pub failures: Vec<TrialFailure>,
    pub table: ResultTable,
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "trial panicked".into()
    }
}

/// Runs every trial of every algorithm on one instance.
pub fn run_trials(
    spec: &ExperimentSpec,
    instance: &NkInstance,
) -> (Vec<RunRecord>, Vec<TrialFailure>) {
    let jobs: Vec<(&AlgorithmSpec, u32)> = spec
        .algorithms
        .iter()
        .flat_map(|a| (0..spec.trials).map(move |t| (a, t)))
        .collect();
    let work = || {
        jobs.par_iter()
            .map(|&(alg, trial)| {
                let seed = trial_seed(spec.master_seed, &alg.name, trial);
                catch_unwind(AssertUnwindSafe(|| {
                    let mut rec = alg.run(instance, spec.budget, seed);
                    rec.trial = trial;
                    rec
                }))
                .map_err(|p| TrialFailure {
                    algorithm: alg.name.clone(),
                    trial,
                    message: panic_message(p),
                })
            })
            .collect::<Vec<_>>()
    };
    let results = match spec.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .expect("thread pool")
            .install(work),
        None => work(),
    };
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(f) => failures.push(f),
        }
    }
    (records, failures)
}

/// Runs the experiment and, when `out_dir` is given, persists everything
/// listed in the module docs.
pub fn run_experiment(
    spec: &ExperimentSpec,
    out_dir: Option<&Path>,
) -> Result<ExperimentOutcome, HarnessError> {
    spec.validate()?;
    let instance = spec.instance.load()?;
    let (records, failures) = run_trials(spec, &instance);
    let table = build_table(
        &records,
        &spec.algorithm_names(),
        spec.reference_name(),
        spec.comparison,
    );
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("spec.toml"), spec.to_toml())?;
        let file = std::io::BufWriter::new(std::fs::File::create(dir.join("records.jsonl"))?);
        write_records(&records, file)?;
        if !failures.is_empty() {
            let mut f = std::fs::File::create(dir.join("failures.tsv"))?;
            writeln!(f, "algorithm\ttrial\tmessage")?;
            for fail in &failures {
                writeln!(
                    f,
                    "{}\t{}\t{}",
                    fail.algorithm,
                    fail.trial,
                    fail.message.replace(['\t', '\n'], " ")
                )?;
            }
        }
        table.write_to(dir)?;
    }
    Ok(ExperimentOutcome {
        records,
        failures,
        table,
    })
}

/// Rebuilds the result table of a finished experiment directory from its
/// records. Algorithm order and the reference come from `spec.toml` when it is
/// present, otherwise from first appearance in the records.
pub fn table_from_dir(dir: &Path) -> Result<ResultTable, HarnessError> {
    let file = std::io::BufReader::new(std::fs::File::open(dir.join("records.jsonl"))?);
    let records = read_records(file)?;
    let spec_path = dir.join("spec.toml");
    let (order, reference, mode) = if spec_path.exists() {
        let spec = ExperimentSpec::from_toml(&std::fs::read_to_string(spec_path)?)?;
        (
            spec.algorithm_names(),
            spec.reference_name().to_string(),
            spec.comparison,
        )
    } else {
        let mut order: Vec<String> = Vec::new();
        for r in &records {
            if !order.contains(&r.algorithm) {
                order.push(r.algorithm.clone());
            }
        }
        if order.is_empty() {
            return Err(HarnessError::Spec("no records found".into()));
        }
        let reference = order[0].clone();
        (order, reference, ComparisonMode::Reference)
    };
    Ok(build_table(&records, &order, &reference, mode))
}
