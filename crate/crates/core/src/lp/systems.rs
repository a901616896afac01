use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{rational, LinearProgram, LpOutcome, LpStatus, Rational, Relation};
use crate::distance::{ranking_distance, Rule};
use crate::error::{input, Result};
use crate::model::{Profile, Ranking};

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;
const T: usize = 3;

/// All rankings of `0..n` in lexicographic order of their index sequences.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n)
            .rev()
            .find(|&j| cur[j] > cur[i - 1])
            .expect("pivot exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

fn positions(order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (p, &a) in order.iter().enumerate() {
        pos[a] = p;
    }
    pos
}

/// `a` strictly before each of `others` in `order`.
fn leads(pos: &[usize], a: usize, others: &[usize]) -> bool {
    others.iter().all(|&o| pos[a] < pos[o])
}

fn indicator(rankings: &[Vec<usize>], pred: impl Fn(&[usize]) -> bool) -> Vec<Rational> {
    rankings
        .iter()
        .map(|r| {
            if pred(&positions(r)) {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

fn majority_row(lp: &mut LinearProgram, rankings: &[Vec<usize>], winner: usize, loser: usize) {
    let row = indicator(rankings, |pos| pos[winner] < pos[loser]);
    lp.add(row, Relation::Ge, rational(3, 4));
}

fn lemma_lp1(with_majorities: bool) -> LinearProgram {
    let rankings = permutations(4);
    let mut lp = LinearProgram::new(rankings.len());
    let objective = rankings
        .iter()
        .map(|r| {
            let pos = positions(r);
            let score = i64::from(leads(&pos, Y, &[X, T])) - i64::from(leads(&pos, X, &[Y, T]))
                + i64::from(leads(&pos, Y, &[Z, T]))
                - i64::from(leads(&pos, Z, &[Y, T]));
            rational(score, 1)
        })
        .collect();
    lp.maximize(objective).add_simplex_row();
    if with_majorities {
        majority_row(&mut lp, &rankings, Z, X);
        majority_row(&mut lp, &rankings, X, Y);
        majority_row(&mut lp, &rankings, X, T);
    }
    lp
}

/// Worst-case contribution of the subsets `{x,y,t}` and `{y,z,t}` over
/// distributions on the 24 rankings of `x, y, z, t` (indices 0..4) with
/// `z >=3/4 x`, `x >=3/4 y`, `x >=3/4 t`.
pub fn build_lemma_lp1() -> LinearProgram {
    lemma_lp1(true)
}

/// The same objective with only the distribution row.
pub fn build_lemma_lp1_without_majorities() -> LinearProgram {
    lemma_lp1(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SecondBestSubset {
    /// `{x,y,t}` together with `{y,z,t}`.
    PairOfTriples,
    /// `{x,z,t}`: maximize `P(x tops it) - P(z tops it)`.
    Xzt,
    /// `{y,z,t}`: maximize `P(y tops it) - P(z tops it)`.
    Yzt,
}

/// One of the three bound LPs over the rankings of `x, y, z, t`.
pub fn build_second_best_lp(subset: SecondBestSubset) -> LinearProgram {
    if subset == SecondBestSubset::PairOfTriples {
        return build_lemma_lp1();
    }
    let rankings = permutations(4);
    let mut lp = LinearProgram::new(rankings.len());
    let (lead, triple): (usize, [usize; 3]) = match subset {
        SecondBestSubset::Xzt => (X, [X, Z, T]),
        _ => (Y, [Y, Z, T]),
    };
    let others = |a: usize| -> Vec<usize> { triple.iter().copied().filter(|&b| b != a).collect() };
    let objective = rankings
        .iter()
        .map(|r| {
            let pos = positions(r);
            rational(
                i64::from(leads(&pos, lead, &others(lead))) - i64::from(leads(&pos, Z, &others(Z))),
                1,
            )
        })
        .collect();
    lp.maximize(objective).add_simplex_row();
    majority_row(&mut lp, &rankings, Z, X);
    majority_row(&mut lp, &rankings, X, T);
    if subset == SecondBestSubset::Yzt {
        majority_row(&mut lp, &rankings, X, Y);
    }
    lp
}

#[derive(Debug, Clone, Serialize)]
pub struct SecondBestReport {
    pub pair_of_triples_optimum: String,
    pub xzt_optimum: String,
    pub yzt_optimum: String,
    pub pass: bool,
}

/// Solves the three bound LPs and checks the optima `0`, `<= -1/4`, `<= 1/4`.
pub fn verify_second_best_bounds() -> Result<SecondBestReport> {
    let solve = |s| -> Result<Rational> {
        let out = build_second_best_lp(s).solve()?;
        out.optimum
            .ok_or_else(|| crate::error::Error::Validation(format!("{s:?} LP has no optimum")))
    };
    let pair = solve(SecondBestSubset::PairOfTriples)?;
    let xzt = solve(SecondBestSubset::Xzt)?;
    let yzt = solve(SecondBestSubset::Yzt)?;
    let pass = pair.is_zero() && xzt <= rational(-1, 4) && yzt <= rational(1, 4);
    Ok(SecondBestReport {
        pair_of_triples_optimum: pair.to_string(),
        xzt_optimum: xzt.to_string(),
        yzt_optimum: yzt.to_string(),
        pass,
    })
}

/// Whether `order` respects every majority around pivot `k`: alternatives
/// with a smaller index come before `k`, larger ones after.
fn is_good(order: &[usize], k: usize) -> bool {
    let pos = positions(order);
    (0..order.len()).all(|i| i == k || (i < k) == (pos[i] < pos[k]))
}

pub fn good_rankings(n: usize, k: usize) -> Vec<Vec<usize>> {
    permutations(n)
        .into_iter()
        .filter(|o| is_good(o, k))
        .collect()
}

pub fn bad_rankings(n: usize, k: usize) -> Vec<Vec<usize>> {
    permutations(n)
        .into_iter()
        .filter(|o| !is_good(o, k))
        .collect()
}

/// Rankings, their 3-wise distance matrix and an index lookup.
struct StarContext {
    n: usize,
    rankings: Vec<Vec<usize>>,
    dist: Vec<Vec<i64>>,
}

impl StarContext {
    fn new(n: usize) -> Result<Self> {
        let rankings = permutations(n);
        let as_rankings: Vec<Ranking> = rankings
            .iter()
            .cloned()
            .map(Ranking::new)
            .collect::<Result<_>>()?;
        let dist = as_rankings
            .par_iter()
            .map(|p| {
                as_rankings
                    .iter()
                    .map(|r| ranking_distance(p, r, Rule::ThreeWise).map(|d| d as i64))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, rankings, dist })
    }

    fn index_of(&self, order: &[usize]) -> usize {
        self.rankings
            .binary_search_by(|r| r.as_slice().cmp(order))
            .expect("a permutation")
    }

    fn build(&self, k: usize, p: &[usize]) -> Result<LinearProgram> {
        let n = self.n;
        if k >= n {
            return input(format!("pivot {k} out of range for {n} alternatives"));
        }
        if p.len() != n {
            return input(format!(
                "ranking has {} alternatives, expected {n}",
                p.len()
            ));
        }
        if is_good(p, k) {
            return input("the compared ranking respects every majority around the pivot");
        }
        let mut lp = LinearProgram::new(self.rankings.len());
        lp.add_simplex_row();
        for i in (0..n).filter(|&i| i != k) {
            let row = indicator(&self.rankings, |pos| (i < k) == (pos[i] < pos[k]));
            lp.add(row, Relation::Ge, rational(3, 4));
        }
        let pi = self.index_of(p);
        for (qi, q) in self.rankings.iter().enumerate() {
            if !is_good(q, k) {
                continue;
            }
            let row = (0..self.rankings.len())
                .map(|r| rational(self.dist[pi][r] - self.dist[qi][r], 1))
                .collect();
            lp.add(row, Relation::Le, Rational::zero());
        }
        Ok(lp)
    }
}

/// System (⋆) for `n` alternatives `a_0..a_{n-1}`, pivot `a_k` (0-based;
/// every `a_i` with `i < k` beats `a_k` by 3/4 and `a_k` beats every later
/// one by 3/4) and a ranking `p` violating one of those orders: is there a
/// distribution of votes under which `p` is at least as close as every
/// ranking respecting them?
pub fn build_system_star(n: usize, k: usize, p: &Ranking) -> Result<LinearProgram> {
    if !(2..=6).contains(&n) {
        return input(format!(
            "system (⋆) is built for 2 to 6 alternatives, got {n}"
        ));
    }
    StarContext::new(n)?.build(k, p.order())
}

pub fn system_star_feasible(n: usize, k: usize, p: &Ranking) -> Result<LpOutcome> {
    build_system_star(n, k, p)?.solve()
}

/// A complete profile as a point of the variable space of (⋆): the share
/// of votes on each ranking, in [`permutations`] order.
pub fn profile_distribution(profile: &Profile) -> Result<Vec<Rational>> {
    if !profile.is_complete() {
        return input("only complete profiles are distributions over rankings");
    }
    let rankings = permutations(profile.num_alternatives());
    let total = profile.num_voters() as i64;
    let mut x = vec![Rational::zero(); rankings.len()];
    for (vote, count) in profile.entries() {
        let i = rankings
            .binary_search_by(|r| r.as_slice().cmp(vote.ranked()))
            .expect("a complete vote is a permutation");
        x[i] += rational(*count as i64, total);
    }
    Ok(x)
}

#[derive(Debug, Clone, Serialize)]
pub struct StarCase {
    pub n: usize,
    pub k: usize,
    pub p: Vec<usize>,
    pub status: LpStatus,
    /// Positive phase-1 optimum: the infeasibility witness.
    pub phase_one_optimum: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct StarSweepReport {
    pub n: usize,
    pub cases: Vec<StarCase>,
    pub all_infeasible: bool,
}

fn run_cases(ctx: &StarContext, jobs: Vec<(usize, Vec<usize>)>) -> Result<Vec<StarCase>> {
    jobs.into_par_iter()
        .map(|(k, p)| {
            let out = ctx.build(k, &p)?.solve()?;
            Ok(StarCase {
                n: ctx.n,
                k,
                p,
                status: out.status,
                phase_one_optimum: out.phase_one_optimum.to_string(),
            })
        })
        .collect()
}

fn all_infeasible(cases: &[StarCase]) -> bool {
    cases.iter().all(|c| {
        c.status == LpStatus::Infeasible
            && c.phase_one_optimum
                .parse::<Rational>()
                .is_ok_and(|v| v.is_positive())
    })
}

/// Every pivot and every bad ranking for `n` alternatives.
pub fn star_sweep(n: usize) -> Result<StarSweepReport> {
    if !(2..=5).contains(&n) {
        return input(format!(
            "the full sweep covers 2 to 5 alternatives, got {n}"
        ));
    }
    let ctx = StarContext::new(n)?;
    let jobs: Vec<(usize, Vec<usize>)> = (0..n)
        .flat_map(|k| bad_rankings(n, k).into_iter().map(move |p| (k, p)))
        .collect();
    let cases = run_cases(&ctx, jobs)?;
    Ok(StarSweepReport {
        n,
        all_infeasible: all_infeasible(&cases),
        cases,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SixCandidateReport {
    /// `|A|`: the pivot is `a_{|A|}`.
    pub a_size: usize,
    /// Bad rankings covered, counting every member of each orbit.
    pub bad_rankings: usize,
    /// Systems actually solved, one per orbit.
    pub systems_solved: usize,
    pub cases: Vec<StarCase>,
    pub all_infeasible: bool,
}

/// Six alternatives split as `A ∪ {x} ∪ B` with `|A| <= 2`: every (⋆)
/// system is infeasible.
///
/// Relabeling inside `A` or inside `B` maps each system onto an equivalent
/// one (permuted variables, same rows), so one bad ranking per orbit of
/// `S_|A| × S_|B|` suffices: the one listing the members of `A`, and of
/// `B`, in increasing index order.
pub fn verify_six_candidate_rule(a_size: usize) -> Result<SixCandidateReport> {
    const N: usize = 6;
    if a_size > 2 {
        return input(format!(
            "the six-candidate rule needs |A| <= 2, got {a_size}; with |A| = 3 it fails"
        ));
    }
    let k = a_size;
    let bad = bad_rankings(N, k);
    let canonical = |p: &Vec<usize>| -> bool {
        let pos = positions(p);
        (1..k).all(|i| pos[i - 1] < pos[i]) && (k + 2..N).all(|i| pos[i - 1] < pos[i])
    };
    let jobs: Vec<(usize, Vec<usize>)> = bad
        .iter()
        .filter(|p| canonical(p))
        .map(|p| (k, p.clone()))
        .collect();
    let ctx = StarContext::new(N)?;
    let cases = run_cases(&ctx, jobs)?;
    Ok(SixCandidateReport {
        a_size,
        bad_rankings: bad.len(),
        systems_solved: cases.len(),
        all_infeasible: all_infeasible(&cases),
        cases,
    })
}
