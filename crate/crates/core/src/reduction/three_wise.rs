use crate::error::{input, Result};
use crate::model::{ConstraintSet, Ranking};
use crate::stats::OrderStatistics;

use super::{iterate, Method, ReductionReport};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Strictness {
    Strict,
    Weak,
}

/// Conditions (i) and (ii) with the candidate sets restricted by `known`.
///
/// With an empty `known` set this is the single-pass test; otherwise
/// condition (i) ranges over `C \ (L_y ∪ {x,y})`, the outer sum of (ii) over
/// `X = C \ (L_y ∪ R_x ∪ {x,y})` and the inner sum over `Y \ {z}` with
/// `Y = C \ (L_y ∪ {x,y})`.
fn conditions_hold(
    stats: &OrderStatistics,
    x: usize,
    y: usize,
    known: Option<&ConstraintSet>,
    strictness: Strictness,
) -> bool {
    let n = stats.num_alternatives();
    if x == y || x >= n || y >= n {
        return false;
    }
    let delta = stats.delta(x, y);
    match strictness {
        Strictness::Strict if delta <= 0 => return false,
        Strictness::Weak if delta < 0 => return false,
        _ => {}
    }
    let before_y = |z: usize| known.is_some_and(|cs| cs.contains(z, y));
    let after_x = |z: usize| known.is_some_and(|cs| cs.contains(x, z));

    let ys: Vec<usize> = (0..n)
        .filter(|&z| z != x && z != y && !before_y(z))
        .collect();
    if ys.iter().any(|&z| stats.q(x, y, z) < 0) {
        return false;
    }
    let budget = 2 * delta;
    let mut total = 0i64;
    for &z in ys.iter().filter(|&&z| !after_x(z)) {
        let inner: i64 = ys
            .iter()
            .filter(|&&t| t != z)
            .map(|&t| stats.s(y, x, z, t).max(0))
            .sum();
        total += (inner - stats.p(x, y, z)).max(0);
        if total > budget || (strictness == Strictness::Strict && total == budget) {
            return false;
        }
    }
    match strictness {
        Strictness::Strict => budget > total,
        Strictness::Weak => budget >= total,
    }
}

/// Single-pass test: `x` precedes `y` in every 3-wise median.
pub fn mot3_certify_pair(stats: &OrderStatistics, x: usize, y: usize) -> bool {
    conditions_hold(stats, x, y, None, Strictness::Strict)
}

/// Non-strict variant: `x` precedes `y` in some 3-wise median.
pub fn mot3_equality(stats: &OrderStatistics, x: usize, y: usize) -> bool {
    conditions_hold(stats, x, y, None, Strictness::Weak)
}

/// Supermajority test: certifies `(x, y)` when
/// `n_xy / m > 1 - 1/(n^2 - 3n + 4)`, compared exactly.
pub fn always_3wise(stats: &OrderStatistics, x: usize, y: usize) -> bool {
    let n = stats.num_alternatives() as i128;
    if x == y || n < 2 {
        return false;
    }
    let a = n * n - 3 * n + 4;
    let n_xy = stats.pair_count(x, y) as i128;
    let m = stats.num_voters() as i128;
    n_xy * a > m * (a - 1)
}

/// Iterated test seeded with trusted constraints (possibly empty).
pub fn mot3_iterated(
    stats: &OrderStatistics,
    seed: &ConstraintSet,
    max_iterations: Option<usize>,
) -> Result<ReductionReport> {
    iterate(
        stats,
        Method::Iterated3Mot,
        seed,
        max_iterations,
        |x, y, cs| conditions_hold(stats, x, y, Some(cs), Strictness::Strict),
    )
}

/// Whether swapping `pi[i]` and `pi[i + 1]` strictly lowers the 3-wise
/// distance, which rules `pi` out as a median.
///
/// With `y = pi[i]` and `x = pi[i + 1]`, flags when
/// `delta_xy > sum_{z != x,y} max(0, Q_{y,x,z})`.
pub fn consecutive_pair_check(stats: &OrderStatistics, pi: &Ranking, i: usize) -> Result<bool> {
    let n = stats.num_alternatives();
    if pi.len() != n {
        return input(format!(
            "ranking has {} alternatives, profile has {n}",
            pi.len()
        ));
    }
    if i + 1 >= n {
        return input(format!("position {i} has no successor in a ranking of {n}"));
    }
    let (y, x) = (pi.order()[i], pi.order()[i + 1]);
    let slack: i64 = (0..n)
        .filter(|&z| z != x && z != y)
        .map(|z| stats.q(y, x, z).max(0))
        .sum();
    Ok(stats.delta(x, y) > slack)
}
