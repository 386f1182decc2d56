//! Rank-based comparison of final fitness samples: Kruskal-Wallis omnibus
//! test, Dunn's pairwise z-tests with tie correction, Holm step-down
//! adjustment.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::erf::erfc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("need at least two groups, got {0}")]
    TooFewGroups(usize),
    #[error("group {group} has {size} samples; at least two are needed")]
    TooFewSamples { group: usize, size: usize },
    #[error("reference group {0} does not exist")]
    BadReference(usize),
}

/// Which pairs Dunn's test compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// Reference group against each other group.
    Reference(usize),
    AllPairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairTest {
    pub a: usize,
    pub b: usize,
    /// Positive when group `a` has the higher mean rank.
    pub z: f64,
    pub p_raw: f64,
    pub p_adjusted: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KruskalWallis {
    pub h: f64,
    pub df: usize,
    pub p: f64,
}

/// Mid-ranks (1-based) of `values`, and the tie term `sum(t^3 - t)` over
/// groups of tied values.
pub fn midranks(values: &[f64]) -> (Vec<f64>, f64) {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = 0.0;
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && values[idx[end]] == values[idx[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &idx[start..end] {
            ranks[i] = rank;
        }
        let t = (end - start) as f64;
        ties += t * t * t - t;
        start = end;
    }
    (ranks, ties)
}

fn check_groups(groups: &[Vec<f64>]) -> Result<(), StatsError> {
    if groups.len() < 2 {
        return Err(StatsError::TooFewGroups(groups.len()));
    }
    if let Some((group, g)) = groups.iter().enumerate().find(|(_, g)| g.len() < 2) {
        return Err(StatsError::TooFewSamples {
            group,
            size: g.len(),
        });
    }
    Ok(())
}

struct Pooled {
    mean_ranks: Vec<f64>,
    sizes: Vec<f64>,
    total: f64,
    ties: f64,
    rank_sums: Vec<f64>,
}

fn pool(groups: &[Vec<f64>]) -> Pooled {
    let all: Vec<f64> = groups.iter().flatten().copied().collect();
    let (ranks, ties) = midranks(&all);
    let mut offset = 0;
    let mut rank_sums = Vec::with_capacity(groups.len());
    for g in groups {
        rank_sums.push(ranks[offset..offset + g.len()].iter().sum::<f64>());
        offset += g.len();
    }
    let sizes: Vec<f64> = groups.iter().map(|g| g.len() as f64).collect();
    Pooled {
        mean_ranks: rank_sums.iter().zip(&sizes).map(|(r, n)| r / n).collect(),
        sizes,
        total: all.len() as f64,
        ties,
        rank_sums,
    }
}

pub fn kruskal_wallis(groups: &[Vec<f64>]) -> Result<KruskalWallis, StatsError> {
    check_groups(groups)?;
    let pooled = pool(groups);
    let n = pooled.total;
    let df = groups.len() - 1;
    let correction = 1.0 - pooled.ties / (n * n * n - n);
    if correction <= 0.0 {
        return Ok(KruskalWallis { h: 0.0, df, p: 1.0 });
    }
    let sum: f64 = pooled
        .rank_sums
        .iter()
        .zip(&pooled.sizes)
        .map(|(r, s)| r * r / s)
        .sum();
    let h = (12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0)) / correction;
    let chi = ChiSquared::new(df as f64).expect("df >= 1");
    Ok(KruskalWallis {
        h,
        df,
        p: (1.0 - chi.cdf(h.max(0.0))).clamp(0.0, 1.0),
    })
}

/// Holm step-down adjustment. The output is in the input order.
pub fn holm(p: &[f64]) -> Vec<f64> {
    let m = p.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p[a].total_cmp(&p[b]));
    let mut adjusted = vec![0.0; m];
    let mut running = 0.0f64;
    for (rank, &i) in order.iter().enumerate() {
        running = running.max(((m - rank) as f64 * p[i]).min(1.0));
        adjusted[i] = running;
    }
    adjusted
}

/// Dunn's test on pooled mid-ranks with the tie-corrected variance, two-sided
/// normal p-values, Holm-adjusted over the compared pairs.
pub fn dunn_holm(groups: &[Vec<f64>], comparison: Comparison) -> Result<Vec<PairTest>, StatsError> {
    check_groups(groups)?;
    let pairs: Vec<(usize, usize)> = match comparison {
        Comparison::Reference(r) => {
            if r >= groups.len() {
                return Err(StatsError::BadReference(r));
            }
            (0..groups.len())
                .filter(|&j| j != r)
                .map(|j| (r, j))
                .collect()
        }
        Comparison::AllPairs => (0..groups.len())
            .flat_map(|a| (a + 1..groups.len()).map(move |b| (a, b)))
            .collect(),
    };
    let pooled = pool(groups);
    let n = pooled.total;
    let base_var = n * (n + 1.0) / 12.0 - pooled.ties / (12.0 * (n - 1.0));
    let mut tests: Vec<PairTest> = pairs
        .into_iter()
        .map(|(a, b)| {
            let se = (base_var * (1.0 / pooled.sizes[a] + 1.0 / pooled.sizes[b])).sqrt();
            let diff = pooled.mean_ranks[a] - pooled.mean_ranks[b];
            let (z, p) = if base_var <= 1e-12 * n * n || !se.is_finite() {
                (0.0, 1.0)
            } else {
                let z = diff / se;
                (z, erfc(z.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0))
            };
            PairTest {
                a,
                b,
                z,
                p_raw: p,
                p_adjusted: p,
            }
        })
        .collect();
    let raw: Vec<f64> = tests.iter().map(|t| t.p_raw).collect();
    for (t, adj) in tests.iter_mut().zip(holm(&raw)) {
        t.p_adjusted = adj;
    }
    Ok(tests)
}

/// `*`, `**`, `***` for adjusted p below 0.05, 0.01, 0.001.
pub fn stars(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n - 1 denominator); zero for fewer than two
/// values.
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}
