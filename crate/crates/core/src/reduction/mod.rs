//! Pair-ordering theorems: certified orders that hold in every (or some)
//! median, the iterated variants that feed earlier certificates back in,
//! consensus levels and the search-space reduction bound.

mod bounds;
mod three_wise;
mod two_wise;

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distance::Rule;
use crate::error::{input, Error, Result};
use crate::model::ConstraintSet;
use crate::stats::OrderStatistics;

pub use bounds::{consensus_levels, reduction_rate_bound};
pub use three_wise::{
    always_3wise, consecutive_pair_check, mot3_certify_pair, mot3_equality, mot3_iterated,
};
pub use two_wise::{mot2_certify_pair, mot2_iterated_classic, mot2_iterated_improved};

/// Which medians a certified order is guaranteed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GuaranteeTag {
    EveryMedian,
    SomeMedian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "3AT")]
    At3,
    #[serde(rename = "3MOT")]
    Mot3,
    #[serde(rename = "3MOTe")]
    Mot3e,
    #[serde(rename = "Iterated3MOT")]
    Iterated3Mot,
    #[serde(rename = "MOT")]
    Mot,
    #[serde(rename = "IteratedMOT")]
    IteratedMot,
    #[serde(rename = "ImprovedIteratedMOT")]
    ImprovedIteratedMot,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::At3,
        Method::Mot3,
        Method::Mot3e,
        Method::Iterated3Mot,
        Method::Mot,
        Method::IteratedMot,
        Method::ImprovedIteratedMot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::At3 => "3AT",
            Method::Mot3 => "3MOT",
            Method::Mot3e => "3MOTe",
            Method::Iterated3Mot => "Iterated3MOT",
            Method::Mot => "MOT",
            Method::IteratedMot => "IteratedMOT",
            Method::ImprovedIteratedMot => "ImprovedIteratedMOT",
        }
    }

    pub fn rule(self) -> Rule {
        match self {
            Method::At3 | Method::Mot3 | Method::Mot3e | Method::Iterated3Mot => Rule::ThreeWise,
            _ => Rule::TwoWise,
        }
    }

    pub fn guarantee(self) -> GuaranteeTag {
        match self {
            Method::Mot3e => GuaranteeTag::SomeMedian,
            _ => GuaranteeTag::EveryMedian,
        }
    }

    pub fn is_iterated(self) -> bool {
        matches!(
            self,
            Method::Iterated3Mot | Method::IteratedMot | Method::ImprovedIteratedMot
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Input(format!("unknown method {s:?}")))
    }
}

/// Where a pair order in a report came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairProvenance {
    pub x: usize,
    pub y: usize,
    /// Round that first produced the order; `None` for seed constraints.
    pub iteration: Option<usize>,
    /// False when the order only follows by transitivity.
    pub direct: bool,
}

#[derive(Debug, Clone)]
pub struct ReductionReport {
    pub method: Method,
    pub num_alternatives: usize,
    /// Closed certified orders. Always empty for `SOME_MEDIAN` methods,
    /// whose orders are individually valid but need not be jointly consistent.
    pub constraints: ConstraintSet,
    /// Every order the method asserts, with provenance.
    pub provenance: Vec<PairProvenance>,
    /// Raw certified pair sets per round (`U_0, U_1, ...`); one round for
    /// single-pass methods.
    pub rounds: Vec<Vec<(usize, usize)>>,
    /// Rounds that added information; 0 when nothing was certified.
    pub iterations_used: usize,
}

impl ReductionReport {
    pub fn rule(&self) -> Rule {
        self.method.rule()
    }

    pub fn guarantee(&self) -> GuaranteeTag {
        self.method.guarantee()
    }

    fn total_pairs(&self) -> usize {
        self.num_alternatives * self.num_alternatives.saturating_sub(1) / 2
    }

    /// Union of the raw certified pairs over all rounds, sorted.
    pub fn certified_pairs(&self) -> Vec<(usize, usize)> {
        let mut all: Vec<(usize, usize)> = self.rounds.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    fn unordered_count(pairs: impl IntoIterator<Item = (usize, usize)>) -> usize {
        let mut keys: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(x, y)| (x.min(y), x.max(y)))
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys.len()
    }

    /// Unordered pairs certified directly by the theorem, over all pairs.
    pub fn raw_fraction(&self) -> Ratio<u64> {
        let total = self.total_pairs() as u64;
        if total == 0 {
            return Ratio::from_integer(0);
        }
        Ratio::new(Self::unordered_count(self.certified_pairs()) as u64, total)
    }

    /// Unordered pairs whose order is fixed, including transitive
    /// consequences for `EVERY_MEDIAN` methods.
    pub fn solved_fraction(&self) -> Ratio<u64> {
        let total = self.total_pairs() as u64;
        if total == 0 {
            return Ratio::from_integer(0);
        }
        let count = match self.guarantee() {
            GuaranteeTag::EveryMedian => self.constraints.edge_count(),
            GuaranteeTag::SomeMedian => Self::unordered_count(self.certified_pairs()),
        };
        Ratio::new(count as u64, total)
    }

    /// Pairs certified with both orientations (only possible for `SOME_MEDIAN`).
    pub fn order_flexible_pairs(&self) -> Vec<(usize, usize)> {
        let pairs = self.certified_pairs();
        pairs
            .iter()
            .copied()
            .filter(|&(x, y)| x < y && pairs.binary_search(&(y, x)).is_ok())
            .collect()
    }
}

/// Runs a single-pass pair test over every ordered pair.
pub(crate) fn single_pass<F>(
    stats: &OrderStatistics,
    method: Method,
    test: F,
) -> Result<ReductionReport>
where
    F: Fn(usize, usize) -> bool + Sync,
{
    let n = stats.num_alternatives();
    let pairs: Vec<(usize, usize)> = ordered_pairs(n)
        .into_par_iter()
        .filter(|&(x, y)| test(x, y))
        .collect();
    let mut constraints = ConstraintSet::new(n);
    if method.guarantee() == GuaranteeTag::EveryMedian {
        for &(x, y) in &pairs {
            constraints.insert(x, y)?;
        }
    }
    let mut provenance: Vec<PairProvenance> = pairs
        .iter()
        .map(|&(x, y)| PairProvenance {
            x,
            y,
            iteration: Some(0),
            direct: true,
        })
        .collect();
    if method.guarantee() == GuaranteeTag::EveryMedian {
        for (x, y) in constraints.edges() {
            if pairs.binary_search(&(x, y)).is_err() {
                provenance.push(PairProvenance {
                    x,
                    y,
                    iteration: Some(0),
                    direct: false,
                });
            }
        }
        provenance.sort_by_key(|p| (p.x, p.y));
    }
    Ok(ReductionReport {
        method,
        num_alternatives: n,
        constraints,
        provenance,
        iterations_used: usize::from(!pairs.is_empty()),
        rounds: vec![pairs],
    })
}

/// Fixpoint driver shared by the iterated theorems.
///
/// Round `k` tests every ordered pair with positive `delta` against the
/// closure of `seed ∪ U_{k-1}` (with `U_{-1} = ∅`). Pairs certified in a
/// round only take effect in the next one. Stops when the closure stops
/// growing or after `max_iterations` rounds.
pub(crate) fn iterate<F>(
    stats: &OrderStatistics,
    method: Method,
    seed: &ConstraintSet,
    max_iterations: Option<usize>,
    test: F,
) -> Result<ReductionReport>
where
    F: Fn(usize, usize, &ConstraintSet) -> bool + Sync,
{
    let n = stats.num_alternatives();
    if seed.num_alternatives() != n {
        return input(format!(
            "seed constraints cover {} alternatives, profile has {n}",
            seed.num_alternatives()
        ));
    }
    let candidates: Vec<(usize, usize)> = ordered_pairs(n)
        .into_iter()
        .filter(|&(x, y)| stats.delta(x, y) > 0)
        .collect();
    let limit = max_iterations.unwrap_or(usize::MAX).max(1);

    let mut first_seen: Vec<Option<Option<usize>>> = vec![None; n * n];
    for (x, y) in seed.edges() {
        first_seen[x * n + y] = Some(None);
    }
    let mut direct = vec![false; n * n];
    let mut current = seed.clone();
    let mut rounds: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut iterations_used = 0;

    for k in 0..limit {
        let u_k: Vec<(usize, usize)> = candidates
            .par_iter()
            .copied()
            .filter(|&(x, y)| test(x, y, &current))
            .collect();
        let mut next = seed.clone();
        for &(x, y) in &u_k {
            next.insert(x, y)?;
            direct[x * n + y] = true;
        }
        // The closure of seed ∪ U_k always contains the previous closure when
        // U_{k-1} ⊆ U_k; merge anyway so a non-monotone test cannot shrink it.
        next.extend_from(&current)?;
        let grew = next.edge_count() > current.edge_count();
        for (x, y) in next.edges() {
            first_seen[x * n + y].get_or_insert(Some(k));
        }
        rounds.push(u_k);
        current = next;
        if !grew {
            break;
        }
        iterations_used = k + 1;
    }

    let provenance = current
        .edges()
        .map(|(x, y)| PairProvenance {
            x,
            y,
            iteration: first_seen[x * n + y].flatten(),
            direct: direct[x * n + y],
        })
        .collect();
    Ok(ReductionReport {
        method,
        num_alternatives: n,
        constraints: current,
        provenance,
        rounds,
        iterations_used,
    })
}

fn ordered_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect()
}

/// Runs one method with an empty seed and default limits.
pub fn run_method(stats: &OrderStatistics, method: Method) -> Result<ReductionReport> {
    let empty = ConstraintSet::new(stats.num_alternatives());
    run_method_with(stats, method, &empty, None)
}

/// Runs one method; `seed` and `max_iterations` only affect iterated methods.
pub fn run_method_with(
    stats: &OrderStatistics,
    method: Method,
    seed: &ConstraintSet,
    max_iterations: Option<usize>,
) -> Result<ReductionReport> {
    match method {
        Method::At3 => single_pass(stats, method, |x, y| always_3wise(stats, x, y)),
        Method::Mot3 => single_pass(stats, method, |x, y| mot3_certify_pair(stats, x, y)),
        Method::Mot3e => single_pass(stats, method, |x, y| mot3_equality(stats, x, y)),
        Method::Mot => single_pass(stats, method, |x, y| mot2_certify_pair(stats, x, y)),
        Method::Iterated3Mot => mot3_iterated(stats, seed, max_iterations),
        Method::IteratedMot => mot2_iterated_classic(stats, seed, max_iterations),
        Method::ImprovedIteratedMot => mot2_iterated_improved(stats, seed, max_iterations),
    }
}
