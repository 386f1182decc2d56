//! VAE-guided memetic search for NK landscapes.
//!
//! * [`landscape`]: instances, budgeted full and incremental evaluation,
//!   exhaustive optimum for small `n`, instance files.
//! * [`local_search`]: first-improvement hill climbing.
//! * [`nn`]: the variational autoencoder and its Nadam training loop.
//! * [`memetic`]: the population loop that samples offspring from the VAE and
//!   refines them with local search.
//! * [`msls`]: multi-start local search baseline.
//! * [`stats`] and [`harness`]: trial orchestration and the result table.

pub mod harness;
pub mod landscape;
pub mod local_search;
pub mod memetic;
pub mod msls;
pub mod nn;
pub mod record;
pub mod rng;
pub mod stats;

pub use landscape::{brute_force_optimum, BudgetExhausted, EvaluationBudget, Genome, NkInstance};
pub use local_search::{fihc, FihcOptions, FihcResult, ShuffleMode};
pub use record::RunRecord;
