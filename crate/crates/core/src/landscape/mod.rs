//! NK-landscape benchmark.
//!
//! Each variable `i` owns a subfunction over itself and `k` randomly chosen
//! other variables. The subfunction is a lookup table of `2^(k+1)` payoffs
//! drawn from `U[0, 1)`; the objective is the mean payoff over all `n`
//! subfunctions.
//!
//! Table index convention: the pattern `(x_i, x_{i_1}, ..., x_{i_k})` is read
//! as a binary number with `x_i` as the most significant bit and `x_{i_k}` as
//! the least significant bit.

mod budget;
mod io;

pub use budget::{BudgetExhausted, EvaluationBudget, Milestone};
pub use io::{
    load_instance, read_instance, save_instance, write_instance, InstanceFormatError,
    FORMAT_VERSION,
};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::PortableRng;

/// Largest `n` accepted by [`brute_force_optimum`].
pub const BRUTE_FORCE_MAX_N: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LandscapeError {
    #[error("problem size must be at least 1")]
    EmptyProblem,
    #[error("epistasis k = {k} needs k < n = {n}")]
    EpistasisTooLarge { n: usize, k: usize },
    #[error("k = {0} gives tables too large to allocate")]
    TableTooLarge(usize),
    #[error("genome length {got} does not match instance size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("brute force enumeration supports n <= {BRUTE_FORCE_MAX_N}, got {0}")]
    TooLargeToEnumerate(usize),
    #[error("invalid instance: {0}")]
    Invalid(String),
}

/// A point of the search space `{0,1}^n`, one byte per bit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Genome(Vec<u8>);

impl Genome {
    pub fn zeros(n: usize) -> Self {
        Genome(vec![0; n])
    }

    /// Builds a genome from 0/1 bytes. Any non-zero byte is read as 1.
    pub fn from_bits(bits: impl IntoIterator<Item = u8>) -> Self {
        Genome(bits.into_iter().map(|b| u8::from(b != 0)).collect())
    }

    pub fn from_bools(bits: impl IntoIterator<Item = bool>) -> Self {
        Genome(bits.into_iter().map(u8::from).collect())
    }

    /// Genome whose bits are the binary digits of `value`, bit 0 being the
    /// most significant.
    pub fn from_index(value: u64, n: usize) -> Self {
        Genome((0..n).map(|i| ((value >> (n - 1 - i)) & 1) as u8).collect())
    }

    pub fn random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Genome((0..n).map(|_| u8::from(rng.random::<bool>())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.0[i] ^= 1;
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().map(|&b| b as usize).sum()
    }

    pub fn hamming(&self, other: &Genome) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl fmt::Display for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Genome({self})")
    }
}

impl std::str::FromStr for Genome {
    type Err = LandscapeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(LandscapeError::Invalid(format!(
                    "genome character {other:?} is not 0 or 1"
                ))),
            })
            .collect::<Result<Vec<u8>, _>>()
            .map(Genome)
    }
}

impl TryFrom<String> for Genome {
    type Error = LandscapeError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Genome> for String {
    fn from(g: Genome) -> String {
        g.to_string()
    }
}

/// An NK-landscape instance. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct NkInstance {
    n: usize,
    k: usize,
    seed: u64,
    neighbors: Vec<Vec<usize>>,
    tables: Vec<Vec<f64>>,
    /// For variable `j`: every subfunction that reads `j`, paired with the
    /// mask of the bit `j` occupies in that subfunction's table index.
    inverse: Vec<Vec<(usize, usize)>>,
}

impl NkInstance {
    /// Generates the instance determined by `(n, k, seed)`.
    ///
    /// Draw order, per variable `i` in ascending order: `k` neighbor draws
    /// (partial Fisher-Yates over the other `n - 1` indices), then the
    /// `2^(k+1)` table payoffs in index order.
    pub fn generate(n: usize, k: usize, seed: u64) -> Result<Self, LandscapeError> {
        if n == 0 {
            return Err(LandscapeError::EmptyProblem);
        }
        if k >= n {
            return Err(LandscapeError::EpistasisTooLarge { n, k });
        }
        if k >= 30 {
            return Err(LandscapeError::TableTooLarge(k));
        }
        let mut rng = PortableRng::from_seed(seed);
        let table_len = 1usize << (k + 1);
        let mut neighbors = Vec::with_capacity(n);
        let mut tables = Vec::with_capacity(n);
        for i in 0..n {
            let mut pool: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            for pos in 0..k {
                let pick = pos + rng.below((pool.len() - pos) as u64) as usize;
                pool.swap(pos, pick);
            }
            pool.truncate(k);
            neighbors.push(pool);
            tables.push((0..table_len).map(|_| rng.unit_f64()).collect());
        }
        Self::from_parts(n, k, seed, neighbors, tables)
    }

    /// Builds an instance from explicit neighbor lists and tables, checking
    /// every structural invariant.
    pub fn from_parts(
        n: usize,
        k: usize,
        seed: u64,
        neighbors: Vec<Vec<usize>>,
        tables: Vec<Vec<f64>>,
    ) -> Result<Self, LandscapeError> {
        if n == 0 {
            return Err(LandscapeError::EmptyProblem);
        }
        if k >= n {
            return Err(LandscapeError::EpistasisTooLarge { n, k });
        }
        if k >= 30 {
            return Err(LandscapeError::TableTooLarge(k));
        }
        if neighbors.len() != n || tables.len() != n {
            return Err(LandscapeError::Invalid(format!(
                "expected {n} neighbor lists and tables, got {} and {}",
                neighbors.len(),
                tables.len()
            )));
        }
        let table_len = 1usize << (k + 1);
        for (i, (nb, table)) in neighbors.iter().zip(&tables).enumerate() {
            if nb.len() != k {
                return Err(LandscapeError::Invalid(format!(
                    "variable {i} has {} neighbors, expected {k}",
                    nb.len()
                )));
            }
            for (a, &j) in nb.iter().enumerate() {
                if j >= n || j == i || nb[..a].contains(&j) {
                    return Err(LandscapeError::Invalid(format!(
                        "variable {i} has invalid neighbor {j}"
                    )));
                }
            }
            if table.len() != table_len {
                return Err(LandscapeError::Invalid(format!(
                    "table {i} has {} entries, expected {table_len}",
                    table.len()
                )));
            }
            if let Some(v) = table.iter().find(|v| !(0.0..1.0).contains(*v)) {
                return Err(LandscapeError::Invalid(format!(
                    "table {i} has payoff {v} outside [0, 1)"
                )));
            }
        }
        let mut inverse = vec![Vec::new(); n];
        for (i, nb) in neighbors.iter().enumerate() {
            inverse[i].push((i, 1usize << k));
            for (pos, &j) in nb.iter().enumerate() {
                inverse[j].push((i, 1usize << (k - 1 - pos)));
            }
        }
        for list in &mut inverse {
            list.sort_unstable();
        }
        Ok(Self {
            n,
            k,
            seed,
            neighbors,
            tables,
            inverse,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn neighbors(&self) -> &[Vec<usize>] {
        &self.neighbors
    }

    pub fn tables(&self) -> &[Vec<f64>] {
        &self.tables
    }

    /// Subfunctions whose argument set contains `var`, including `var` itself.
    pub fn dependents(&self, var: usize) -> impl Iterator<Item = usize> + '_ {
        self.inverse[var].iter().map(|&(i, _)| i)
    }

    fn check_len(&self, genome: &Genome) -> Result<(), LandscapeError> {
        if genome.len() != self.n {
            return Err(LandscapeError::LengthMismatch {
                expected: self.n,
                got: genome.len(),
            });
        }
        Ok(())
    }

    #[inline]
    fn table_index(&self, i: usize, genome: &Genome) -> usize {
        let mut idx = genome.get(i) as usize;
        for &j in &self.neighbors[i] {
            idx = (idx << 1) | genome.get(j) as usize;
        }
        idx
    }

    /// Sum of subfunction payoffs. Does not touch any budget.
    fn payoff_sum(&self, genome: &Genome) -> f64 {
        (0..self.n)
            .map(|i| self.tables[i][self.table_index(i, genome)])
            .sum()
    }

    /// Change of the payoff sum caused by flipping `var`. Does not touch any
    /// budget.
    #[inline]
    pub(crate) fn flip_gain(&self, genome: &Genome, var: usize) -> f64 {
        self.inverse[var]
            .iter()
            .map(|&(i, mask)| {
                let idx = self.table_index(i, genome);
                self.tables[i][idx ^ mask] - self.tables[i][idx]
            })
            .sum()
    }

    /// Objective value outside of any budget. Meant for oracles, tests and
    /// reporting; search code goes through [`NkInstance::evaluate`].
    pub fn fitness_unbudgeted(&self, genome: &Genome) -> Result<f64, LandscapeError> {
        self.check_len(genome)?;
        Ok(self.payoff_sum(genome) / self.n as f64)
    }

    /// Full evaluation, charging one evaluation to `budget`.
    ///
    /// Panics if the genome length does not match `n`.
    pub fn evaluate(
        &self,
        genome: &Genome,
        budget: &mut EvaluationBudget,
    ) -> Result<f64, BudgetExhausted> {
        assert_eq!(genome.len(), self.n, "genome length must equal n");
        budget.charge()?;
        let f = self.payoff_sum(genome) / self.n as f64;
        budget.observe(f);
        Ok(f)
    }

    /// Fitness of `genome` with bit `var` flipped, given `current_fitness`
    /// of `genome` itself. Only the subfunctions reading `var` are
    /// recomputed. Charges one evaluation.
    pub fn evaluate_delta(
        &self,
        genome: &Genome,
        current_fitness: f64,
        var: usize,
        budget: &mut EvaluationBudget,
    ) -> Result<f64, BudgetExhausted> {
        self.evaluate_flip(genome, current_fitness, var, budget)
            .map(|(f, _)| f)
    }

    /// Like [`evaluate_delta`](Self::evaluate_delta) but also returns the raw
    /// payoff-sum gain, whose sign is exact (free of accumulated rounding in
    /// `current_fitness`).
    pub(crate) fn evaluate_flip(
        &self,
        genome: &Genome,
        current_fitness: f64,
        var: usize,
        budget: &mut EvaluationBudget,
    ) -> Result<(f64, f64), BudgetExhausted> {
        assert_eq!(genome.len(), self.n, "genome length must equal n");
        assert!(var < self.n, "flip index {var} out of range");
        budget.charge()?;
        let gain = self.flip_gain(genome, var);
        let f = current_fitness + gain / self.n as f64;
        budget.observe(f);
        Ok((f, gain))
    }
}

/// Exhaustive global maximizer for instances with `n <= 24`.
///
/// Ties are broken toward the genome with the lowest binary value (bit 0 most
/// significant). No budget is involved.
pub fn brute_force_optimum(instance: &NkInstance) -> Result<(Genome, f64), LandscapeError> {
    let n = instance.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(LandscapeError::TooLargeToEnumerate(n));
    }
    // Gray-code walk: one flip per step keeps this O(2^n * k).
    let mut genome = Genome::zeros(n);
    let mut sum = instance.payoff_sum(&genome);
    let mut best = (0u64, sum);
    let mut value = 0u64;
    for step in 1u64..(1u64 << n) {
        let bit = step.trailing_zeros() as usize;
        let var = n - 1 - bit;
        sum += instance.flip_gain(&genome, var);
        genome.flip(var);
        value ^= 1 << bit;
        if sum > best.1 || (sum == best.1 && value < best.0) {
            best = (value, sum);
        }
    }
    let winner = Genome::from_index(best.0, n);
    // Recompute from scratch so the returned value carries no walk drift.
    let fitness = instance.payoff_sum(&winner) / n as f64;
    Ok((winner, fitness))
}
