use crate::error::Result;
use crate::model::ConstraintSet;
use crate::stats::OrderStatistics;

use super::{iterate, Method, ReductionReport};

/// `2 delta_xy > sum_{z in zs} max(0, delta_yz + delta_zx)`, which also forces `delta_xy > 0`.
fn condition(stats: &OrderStatistics, x: usize, y: usize, zs: impl Iterator<Item = usize>) -> bool {
    let delta = stats.delta(x, y);
    if delta <= 0 {
        return false;
    }
    let slack: i64 = zs
        .map(|z| (stats.delta(y, z) + stats.delta(z, x)).max(0))
        .sum();
    2 * delta > slack
}

/// Single-pass test: `x` precedes `y` in every 2-wise median.
pub fn mot2_certify_pair(stats: &OrderStatistics, x: usize, y: usize) -> bool {
    let n = stats.num_alternatives();
    x != y && condition(stats, x, y, (0..n).filter(|&z| z != x && z != y))
}

/// Iterated test excluding alternatives known to be before `y` or after `x`.
pub fn mot2_iterated_improved(
    stats: &OrderStatistics,
    seed: &ConstraintSet,
    max_iterations: Option<usize>,
) -> Result<ReductionReport> {
    let n = stats.num_alternatives();
    iterate(
        stats,
        Method::ImprovedIteratedMot,
        seed,
        max_iterations,
        |x, y, cs| {
            condition(
                stats,
                x,
                y,
                (0..n).filter(|&z| z != x && z != y && !cs.contains(z, y) && !cs.contains(x, z)),
            )
        },
    )
}

/// The classic iteration: only alternatives known to be before both or after
/// both of `x` and `y` are excluded.
pub fn mot2_iterated_classic(
    stats: &OrderStatistics,
    seed: &ConstraintSet,
    max_iterations: Option<usize>,
) -> Result<ReductionReport> {
    let n = stats.num_alternatives();
    iterate(
        stats,
        Method::IteratedMot,
        seed,
        max_iterations,
        |x, y, cs| {
            condition(
                stats,
                x,
                y,
                (0..n).filter(|&z| {
                    z != x
                        && z != y
                        && !(cs.contains(z, x) && cs.contains(z, y))
                        && !(cs.contains(x, z) && cs.contains(y, z))
                }),
            )
        },
    )
}
