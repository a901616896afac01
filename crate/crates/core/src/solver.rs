//! Exact k-wise medians.
//!
//! Both searches score rankings with precomputed tables: placing `a` ahead
//! of every still-unplaced alternative fixes the disagreements of all pairs
//! `{a, b}` and all triples `{a, b, c}` whose top in the ranking is `a`.

use serde::Serialize;

use crate::distance::Rule;
use crate::error::{input, Error, Result};
use crate::model::{ConstraintSet, Profile, Ranking};
use crate::reduction::consecutive_pair_check;
use crate::stats::OrderStatistics;

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 8;
pub const DEFAULT_CONSTRAINED_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MedianResult {
    pub rule: Rule,
    pub optimal_value: u64,
    /// All optimal rankings, sorted lexicographically by index sequence.
    pub medians: Vec<Ranking>,
    /// Complete rankings whose cost was evaluated.
    pub nodes_explored: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub cap: usize,
    /// Abandon a prefix once its fixed cost exceeds the best complete cost.
    pub prune: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_CONSTRAINED_CAP,
            prune: false,
        }
    }
}

/// Disagreement costs keyed by which alternative a ranking puts first.
struct ScoreTable {
    n: usize,
    rule: Rule,
    // pair[a*n+b]: votes putting b strictly before a.
    pair: Vec<u64>,
    // triple[(a*n+b)*n+c]: votes whose top of {a,b,c} is defined and is not a.
    triple: Vec<u64>,
}

impl ScoreTable {
    fn new(profile: &Profile, rule: Rule) -> Self {
        let n = profile.num_alternatives();
        let mut pair = vec![0u64; n * n];
        let mut triple = match rule {
            Rule::ThreeWise => vec![0u64; n * n * n],
            Rule::TwoWise => Vec::new(),
        };
        for (vote, w) in profile.canonical_entries() {
            let pos = vote.positions();
            let unranked = vote.ranked().len();
            for a in 0..n {
                for b in 0..n {
                    if a != b && pos[b] < pos[a] {
                        pair[a * n + b] += w;
                    }
                }
            }
            if rule == Rule::ThreeWise {
                for a in 0..n {
                    for b in 0..n {
                        for c in b + 1..n {
                            if a == b || a == c {
                                continue;
                            }
                            let all_tied =
                                pos[a] == unranked && pos[b] == unranked && pos[c] == unranked;
                            let a_leads = pos[a] < pos[b] && pos[a] < pos[c];
                            if !all_tied && !a_leads {
                                triple[(a * n + b) * n + c] += w;
                                triple[(a * n + c) * n + b] += w;
                            }
                        }
                    }
                }
            }
        }
        Self {
            n,
            rule,
            pair,
            triple,
        }
    }

    /// Cost fixed by placing `a` before every alternative in `rest`.
    fn placement_cost(&self, a: usize, rest: &[usize]) -> u64 {
        let n = self.n;
        let mut cost: u64 = rest.iter().map(|&b| self.pair[a * n + b]).sum();
        if self.rule == Rule::ThreeWise {
            for (i, &b) in rest.iter().enumerate() {
                let row = (a * n + b) * n;
                for &c in &rest[i + 1..] {
                    cost += self.triple[row + c];
                }
            }
        }
        cost
    }

    fn ranking_cost(&self, order: &[usize]) -> u64 {
        (0..order.len())
            .map(|i| self.placement_cost(order[i], &order[i + 1..]))
            .sum()
    }
}

/// Total k-wise distance of `ranking` to the profile via the score tables.
pub fn scored_distance(profile: &Profile, ranking: &Ranking, rule: Rule) -> Result<u64> {
    if ranking.len() != profile.num_alternatives() {
        return input("ranking and profile have different alternative counts");
    }
    Ok(ScoreTable::new(profile, rule).ranking_cost(ranking.order()))
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded {
            alternatives: n,
            cap,
        });
    }
    Ok(())
}

fn finish(rule: Rule, best: u64, mut medians: Vec<Vec<usize>>, nodes: u64) -> Result<MedianResult> {
    medians.sort();
    Ok(MedianResult {
        rule,
        optimal_value: best,
        medians: medians
            .into_iter()
            .map(Ranking::new)
            .collect::<Result<_>>()?,
        nodes_explored: nodes,
    })
}

/// Scores every permutation in lexicographic order.
pub fn brute_force_medians(profile: &Profile, rule: Rule, cap: usize) -> Result<MedianResult> {
    let n = profile.num_alternatives();
    check_cap(n, cap)?;
    let table = ScoreTable::new(profile, rule);
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    let mut medians = Vec::new();
    let mut nodes = 0u64;
    loop {
        nodes += 1;
        let cost = table.ranking_cost(&order);
        if cost < best {
            best = cost;
            medians.clear();
        }
        if cost == best {
            medians.push(order.clone());
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    finish(rule, best, medians, nodes)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

struct Search<'a> {
    table: &'a ScoreTable,
    constraints: &'a ConstraintSet,
    prune: bool,
    prefix: Vec<usize>,
    placed: Vec<bool>,
    best: u64,
    medians: Vec<Vec<usize>>,
    nodes: u64,
}

impl Search<'_> {
    fn run(&mut self, partial: u64) {
        let n = self.table.n;
        if self.prune && partial > self.best {
            return;
        }
        if self.prefix.len() == n {
            self.nodes += 1;
            if partial < self.best {
                self.best = partial;
                self.medians.clear();
            }
            if partial == self.best {
                self.medians.push(self.prefix.clone());
            }
            return;
        }
        for a in 0..n {
            if self.placed[a] {
                continue;
            }
            let blocked =
                (0..n).any(|b| !self.placed[b] && b != a && self.constraints.contains(b, a));
            if blocked {
                continue;
            }
            let rest: Vec<usize> = (0..n).filter(|&b| !self.placed[b] && b != a).collect();
            let cost = partial + self.table.placement_cost(a, &rest);
            self.placed[a] = true;
            self.prefix.push(a);
            self.run(cost);
            self.prefix.pop();
            self.placed[a] = false;
        }
    }
}

/// Enumerates the linear extensions of `constraints` only.
pub fn constrained_medians(
    profile: &Profile,
    rule: Rule,
    constraints: &ConstraintSet,
    options: SearchOptions,
) -> Result<MedianResult> {
    let n = profile.num_alternatives();
    check_cap(n, options.cap)?;
    if constraints.num_alternatives() != n {
        return input(format!(
            "constraints cover {} alternatives, profile has {n}",
            constraints.num_alternatives()
        ));
    }
    if (0..n).any(|a| constraints.contains(a, a)) {
        return input("constraints contain a cycle");
    }
    let table = ScoreTable::new(profile, rule);
    let mut search = Search {
        table: &table,
        constraints,
        prune: options.prune,
        prefix: Vec::with_capacity(n),
        placed: vec![false; n],
        best: u64::MAX,
        medians: Vec::new(),
        nodes: 0,
    };
    search.run(0);
    finish(rule, search.best, search.medians, search.nodes)
}

/// Number of linear extensions of a partial order, by dynamic programming
/// over subsets of placed alternatives.
pub fn count_linear_extensions(constraints: &ConstraintSet) -> Result<u128> {
    let n = constraints.num_alternatives();
    if n > 24 {
        return input("linear extension counting supports at most 24 alternatives");
    }
    let preds: Vec<u32> = (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| constraints.contains(b, a))
                .fold(0u32, |mask, b| mask | (1 << b))
        })
        .collect();
    let mut ways = vec![0u128; 1 << n];
    ways[0] = 1;
    for mask in 0..(1usize << n) {
        let w = ways[mask];
        if w == 0 {
            continue;
        }
        for (a, &p) in preds.iter().enumerate() {
            if mask & (1 << a) == 0 && (p as usize) & !mask == 0 {
                ways[mask | (1 << a)] += w;
            }
        }
    }
    Ok(ways[(1 << n) - 1])
}

/// An adjacent pair `(pi[position], pi[position + 1])` whose swap strictly
/// lowers the 3-wise distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub position: usize,
    pub first: usize,
    pub second: usize,
}

/// Necessary condition for `pi` to be a 3-wise median: no violations.
pub fn validate_median_candidate(profile: &Profile, pi: &Ranking) -> Result<Vec<Violation>> {
    let stats = OrderStatistics::compute(profile);
    let n = profile.num_alternatives();
    let mut out = Vec::new();
    for i in 0..n.saturating_sub(1) {
        if consecutive_pair_check(&stats, pi, i)? {
            out.push(Violation {
                position: i,
                first: pi.order()[i],
                second: pi.order()[i + 1],
            });
        }
    }
    Ok(out)
}
