use num_rational::Ratio;

use crate::error::{input, Result};

use super::{Method, ReductionReport};

/// Consensus levels `(L, L*)`: the fraction of all pairs certified by the
/// single-pass 3-wise test (`base`) and by the union of all rounds of the
/// iterated test (`report`).
pub fn consensus_levels(
    report: &ReductionReport,
    base: &ReductionReport,
) -> Result<(Ratio<u64>, Ratio<u64>)> {
    if base.method != Method::Mot3 || report.method != Method::Iterated3Mot {
        return input(format!(
            "consensus levels need a 3MOT base and an Iterated3MOT report, got {} and {}",
            base.method, report.method
        ));
    }
    if base.num_alternatives != report.num_alternatives {
        return input("reports were computed on different profiles");
    }
    let n = base.num_alternatives as u64;
    let total = n * n.saturating_sub(1) / 2;
    if total == 0 {
        return Ok((Ratio::from_integer(0), Ratio::from_integer(0)));
    }
    let m = base.certified_pairs().len() as u64;
    let m_star = report.certified_pairs().len() as u64;
    Ok((Ratio::new(m, total), Ratio::new(m_star, total)))
}

/// Lower bound on the factor by which fixing a fraction `p` of pair orders
/// shrinks the `n!` search space:
/// `max(n! (1 + n(1-p)/2)^(-n), exp(p^2 n / 32))`, evaluated in log space.
pub fn reduction_rate_bound(n: usize, p: f64) -> Result<f64> {
    if n == 0 {
        return input("the reduction bound needs at least one alternative");
    }
    if !(0.0..1.0).contains(&p) {
        return input(format!("solved fraction must lie in [0, 1), got {p}"));
    }
    let nf = n as f64;
    let ln_factorial: f64 = (2..=n).map(|i| (i as f64).ln()).sum();
    let first = ln_factorial - nf * (1.0 + 0.5 * nf * (1.0 - p)).ln();
    let second = p * p * nf / 32.0;
    Ok(first.max(second).exp())
}
