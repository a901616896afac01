//! Pair and ordered-triple counts of a profile and the derived quantities
//! `delta`, `Q`, `P`, `R`, `S` used by every pair-ordering theorem.
//!
//! Notation: `n_{abc}` is the (multiplicity-weighted) number of votes in
//! which `a`, `b`, `c` appear strictly in that order. In incomplete votes the
//! unranked tail is tied, so a chain only counts when every step is strict.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{input, Result};
use crate::model::Profile;

/// Pairwise counts; `delta(x, y) = n_xy - n_yx`.
#[derive(Debug, Clone)]
pub struct DeltaMatrix {
    n: usize,
    counts: Vec<i64>,
}

impl DeltaMatrix {
    #[inline]
    pub fn count(&self, x: usize, y: usize) -> i64 {
        self.counts[x * self.n + y]
    }

    #[inline]
    pub fn delta(&self, x: usize, y: usize) -> i64 {
        self.count(x, y) - self.count(y, x)
    }
}

/// Ordered-triple counts `n_{abc}`.
#[derive(Debug, Clone)]
pub struct TripleTensor {
    n: usize,
    counts: Vec<i64>,
}

impl TripleTensor {
    #[inline]
    pub fn count(&self, a: usize, b: usize, c: usize) -> i64 {
        self.counts[(a * self.n + b) * self.n + c]
    }
}

/// Everything about one directed pair `(x, y)`, for reporting.
#[derive(Debug, Clone, Serialize)]
pub struct PairStatistics {
    pub x: usize,
    pub y: usize,
    pub delta: i64,
    /// `z -> Q_{x,y,z}`
    pub q_values: BTreeMap<usize, i64>,
    /// `z -> P_{x,y,z}`
    pub p_values: BTreeMap<usize, i64>,
    /// `(z, t) -> S_{y,x,z,t}`
    pub s_values: BTreeMap<(usize, usize), i64>,
}

#[derive(Debug, Clone)]
pub struct OrderStatistics {
    n: usize,
    m: i64,
    complete: bool,
    delta: DeltaMatrix,
    triples: TripleTensor,
    // Distinct votes as position vectors (unranked = prefix length).
    votes: Vec<(Vec<usize>, i64)>,
}

impl OrderStatistics {
    /// Single pass over the distinct votes; `O(n^3)` per vote.
    pub fn compute(profile: &Profile) -> Self {
        let n = profile.num_alternatives();
        let mut pairs = vec![0i64; n * n];
        let mut triples = vec![0i64; n * n * n];
        let mut votes = Vec::new();
        for (vote, count) in profile.canonical_entries() {
            let w = count as i64;
            let ranked = vote.ranked();
            let len = ranked.len();
            // Full sequence: ranked prefix then the tied tail in any order.
            let mut seq = ranked.to_vec();
            seq.extend((0..n).filter(|a| !vote.is_ranked(*a)));
            for i in 0..len {
                let a = seq[i];
                for j in i + 1..n {
                    let b = seq[j];
                    pairs[a * n + b] += w;
                    if j >= len {
                        continue;
                    }
                    let row = (a * n + b) * n;
                    for &c in &seq[j + 1..] {
                        triples[row + c] += w;
                    }
                }
            }
            votes.push((vote.positions(), w));
        }
        Self {
            n,
            m: profile.num_voters() as i64,
            complete: profile.is_complete(),
            delta: DeltaMatrix { n, counts: pairs },
            triples: TripleTensor { n, counts: triples },
            votes,
        }
    }

    pub fn num_alternatives(&self) -> usize {
        self.n
    }

    pub fn num_voters(&self) -> i64 {
        self.m
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn delta_matrix(&self) -> &DeltaMatrix {
        &self.delta
    }

    pub fn triple_tensor(&self) -> &TripleTensor {
        &self.triples
    }

    #[inline]
    pub fn delta(&self, x: usize, y: usize) -> i64 {
        self.delta.delta(x, y)
    }

    /// `n_xy`
    #[inline]
    pub fn pair_count(&self, x: usize, y: usize) -> i64 {
        self.delta.count(x, y)
    }

    /// `n_abc`
    #[inline]
    pub fn triple_count(&self, a: usize, b: usize, c: usize) -> i64 {
        self.triples.count(a, b, c)
    }

    /// Weighted number of votes in which `chain` appears strictly in order,
    /// counted directly from the votes.
    pub fn chain_count(&self, chain: &[usize]) -> i64 {
        self.votes
            .iter()
            .filter(|(pos, _)| chain.windows(2).all(|w| pos[w[0]] < pos[w[1]]))
            .map(|(_, w)| w)
            .sum()
    }

    /// Weighted number of votes in which `x` strictly precedes every member of `others`.
    pub fn leads_count(&self, x: usize, others: &[usize]) -> i64 {
        self.votes
            .iter()
            .filter(|(pos, _)| others.iter().all(|&o| pos[x] < pos[o]))
            .map(|(_, w)| w)
            .sum()
    }

    fn check_distinct(&self, args: &[usize]) -> Result<()> {
        for (i, &a) in args.iter().enumerate() {
            if a >= self.n {
                return input(format!(
                    "alternative {a} out of range for {} alternatives",
                    self.n
                ));
            }
            if args[..i].contains(&a) {
                return input(format!("arguments {args:?} must be distinct alternatives"));
            }
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn q(&self, x: usize, y: usize, z: usize) -> i64 {
        let t = &self.triples;
        t.count(x, y, z) + t.count(x, z, y) - t.count(y, x, z) - t.count(y, z, x)
    }

    #[inline]
    pub(crate) fn p(&self, x: usize, y: usize, z: usize) -> i64 {
        let t = &self.triples;
        3 * t.count(x, z, y) + t.count(x, y, z) + t.count(z, x, y) + t.count(z, y, x)
            - 4 * t.count(y, z, x)
            - 2 * t.count(y, x, z)
    }

    /// `Q_{x,y,z} = n_xyz + n_xzy - n_yxz - n_yzx`
    pub fn q_value(&self, x: usize, y: usize, z: usize) -> Result<i64> {
        self.check_distinct(&[x, y, z])?;
        Ok(self.q(x, y, z))
    }

    /// `P_{x,y,z} = 3n_xzy + n_xyz + n_zxy + n_zyx - 4n_yzx - 2n_yxz`
    pub fn p_value(&self, x: usize, y: usize, z: usize) -> Result<i64> {
        self.check_distinct(&[x, y, z])?;
        Ok(self.p(x, y, z))
    }

    /// `R_{y,x,z,t} = 2n_yztx + 2n_yzxt + n_ytzx + n_ytxz`, counted from votes.
    pub fn r_value(&self, y: usize, x: usize, z: usize, t: usize) -> Result<i64> {
        self.check_distinct(&[y, x, z, t])?;
        Ok(self.r_direct(y, x, z, t))
    }

    fn r_direct(&self, y: usize, x: usize, z: usize, t: usize) -> i64 {
        // y leads the four; weight 2 when z is second, 1 when t is second.
        self.votes
            .iter()
            .map(|(pos, w)| {
                let (py, px, pz, pt) = (pos[y], pos[x], pos[z], pos[t]);
                let strict = py < pz.min(pt).min(px) && pz != pt && pz != px && pt != px;
                if !strict {
                    return 0;
                }
                let second = pz.min(pt).min(px);
                if second == pz {
                    2 * w
                } else if second == pt {
                    *w
                } else {
                    0
                }
            })
            .sum()
    }

    #[inline]
    pub(crate) fn s_identity(&self, y: usize, x: usize, z: usize, t: usize) -> i64 {
        -(self.q(z, y, t) + self.q(x, z, t))
    }

    pub(crate) fn s_direct(&self, y: usize, x: usize, z: usize, t: usize) -> i64 {
        self.r_direct(y, x, z, t) - self.r_direct(x, y, z, t)
    }

    /// `S_{y,x,z,t} = R_{y,x,z,t} - R_{x,y,z,t}` evaluated from the pattern
    /// definition.
    pub fn s_value_direct(&self, y: usize, x: usize, z: usize, t: usize) -> Result<i64> {
        self.check_distinct(&[y, x, z, t])?;
        Ok(self.s_direct(y, x, z, t))
    }

    /// `S_{y,x,z,t}` through `-(Q_{z,y,t} + Q_{x,z,t})`; exact only when every
    /// vote is complete.
    pub fn s_value_identity(&self, y: usize, x: usize, z: usize, t: usize) -> Result<i64> {
        self.check_distinct(&[y, x, z, t])?;
        Ok(self.s_identity(y, x, z, t))
    }

    /// `S_{y,x,z,t}` by the identity on complete profiles, and by direct
    /// pattern counts otherwise.
    pub fn s_value(&self, y: usize, x: usize, z: usize, t: usize) -> Result<i64> {
        self.check_distinct(&[y, x, z, t])?;
        Ok(self.s(y, x, z, t))
    }

    #[inline]
    pub(crate) fn s(&self, y: usize, x: usize, z: usize, t: usize) -> i64 {
        if self.complete {
            self.s_identity(y, x, z, t)
        } else {
            self.s_direct(y, x, z, t)
        }
    }

    /// The right-hand side of the swap identity for rankings
    /// `pi = L y Z x R`, `sigma1 = L Z x y R`, `sigma2 = L x y Z R`:
    ///
    /// `2 sum_{t in R} Q_{x,y,t} + 2 delta_xy + sum_{z in Z} P_{x,y,z}
    ///  - sum_{z in Z, t in Z u R, z before t} S_{y,x,z,t}`
    ///
    /// On complete profiles this equals
    /// `(d(pi) - d(sigma1)) + (d(pi) - d(sigma2))` under the 3-wise distance.
    pub fn delta_sum(&self, x: usize, y: usize, between: &[usize], after: &[usize]) -> Result<i64> {
        let mut all = vec![x, y];
        all.extend_from_slice(between);
        all.extend_from_slice(after);
        self.check_distinct(&all)?;
        let mut total = 2 * self.delta(x, y);
        total += 2 * after.iter().map(|&t| self.q(x, y, t)).sum::<i64>();
        for (i, &z) in between.iter().enumerate() {
            total += self.p(x, y, z);
            for &t in between[i + 1..].iter().chain(after) {
                total -= self.s(y, x, z, t);
            }
        }
        Ok(total)
    }

    pub fn pair_statistics(&self, x: usize, y: usize) -> Result<PairStatistics> {
        self.check_distinct(&[x, y])?;
        let others: Vec<usize> = (0..self.n).filter(|&z| z != x && z != y).collect();
        let mut stats = PairStatistics {
            x,
            y,
            delta: self.delta(x, y),
            q_values: BTreeMap::new(),
            p_values: BTreeMap::new(),
            s_values: BTreeMap::new(),
        };
        for &z in &others {
            stats.q_values.insert(z, self.q(x, y, z));
            stats.p_values.insert(z, self.p(x, y, z));
            for &t in &others {
                if t != z {
                    stats.s_values.insert((z, t), self.s(y, x, z, t));
                }
            }
        }
        Ok(stats)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const X: usize = 0;
    const Y: usize = 1;
    const Z: usize = 2;
    const T: usize = 3;

    #[test]
    fn fixture_a_reference_values() {
        let s = OrderStatistics::compute(&fixtures::fixture_a());
        assert_eq!(s.delta(T, Z), 1);
        assert_eq!(s.q_value(T, Z, X).unwrap(), -1);
        assert_eq!(s.q_value(T, Z, Y).unwrap(), -3);
        assert_eq!(s.p_value(T, Z, X).unwrap(), 4);
        assert_eq!(s.p_value(T, Z, Y).unwrap(), 0);
    }

    #[test]
    fn fixture_a_triple_counts() {
        let s = OrderStatistics::compute(&fixtures::fixture_a());
        let abc = [T, X, Y];
        let mut nonzero = Vec::new();
        for &a in &abc {
            for &b in &abc {
                for &c in &abc {
                    if a != b && b != c && a != c && s.triple_count(a, b, c) != 0 {
                        nonzero.push(((a, b, c), s.triple_count(a, b, c)));
                    }
                }
            }
        }
        nonzero.sort();
        let mut expected = vec![((T, X, Y), 7), ((Y, T, X), 2), ((X, Y, T), 2)];
        expected.sort();
        assert_eq!(nonzero, expected);
    }

    #[test]
    fn fixture_a_s_values_agree_on_both_paths() {
        let s = OrderStatistics::compute(&fixtures::fixture_a());
        assert_eq!(s.r_value(Z, T, Y, X).unwrap(), 0);
        assert_eq!(s.r_value(T, Z, Y, X).unwrap(), 2);
        assert_eq!(s.s_value_direct(Z, T, Y, X).unwrap(), -2);
        assert_eq!(s.s_value_identity(Z, T, Y, X).unwrap(), -2);
        assert_eq!(s.s_value_direct(Z, T, X, Y).unwrap(), -4);
        assert_eq!(s.s_value_identity(Z, T, X, Y).unwrap(), -4);
    }

    #[test]
    fn single_vote_counts() {
        let p = Profile::from_labeled(&["a", "b", "c"], &[("a>b>c", 1)]).unwrap();
        let s = OrderStatistics::compute(&p);
        assert_eq!(s.triple_count(0, 1, 2), 1);
        let others = [(0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)];
        for (a, b, c) in others {
            assert_eq!(s.triple_count(a, b, c), 0);
        }
    }

    #[test]
    fn p_single_vote_xzy() {
        let p = Profile::from_labeled(&["x", "y", "z"], &[("x>z>y", 1)]).unwrap();
        let s = OrderStatistics::compute(&p);
        assert_eq!(s.p_value(0, 1, 2).unwrap(), 3);
    }

    #[test]
    fn s_single_vote_yztx() {
        let p = Profile::from_labeled(&["x", "y", "z", "t"], &[("y>z>t>x", 1)]).unwrap();
        let s = OrderStatistics::compute(&p);
        assert_eq!(s.s_value(Y, X, Z, T).unwrap(), 2);
        assert_eq!(s.r_value(Y, X, Z, T).unwrap(), 2);
    }

    #[test]
    fn non_distinct_arguments_are_rejected() {
        let s = OrderStatistics::compute(&fixtures::fixture_a());
        assert!(s.q_value(X, X, Y).is_err());
        assert!(s.p_value(X, Y, Y).is_err());
        assert!(s.s_value(X, Y, Z, X).is_err());
        assert!(s.delta_sum(X, Y, &[Z], &[Z]).is_err());
    }

    #[test]
    fn delta_sum_empty_sets() {
        let s = OrderStatistics::compute(&fixtures::fixture_a());
        assert_eq!(s.delta_sum(X, Y, &[], &[]).unwrap(), 2 * s.delta(X, Y));
        let collapsed = 2 * s.delta(X, Y) + 2 * (s.q(X, Y, Z) + s.q(X, Y, T));
        assert_eq!(s.delta_sum(X, Y, &[], &[Z, T]).unwrap(), collapsed);
    }

    #[test]
    fn incomplete_vote_chains_need_strict_steps() {
        // a ranked, b and c tied at the bottom.
        let p = Profile::from_labeled(&["a", "b", "c"], &[("a", 1)]).unwrap();
        let s = OrderStatistics::compute(&p);
        assert_eq!(s.pair_count(0, 1), 1);
        assert_eq!(s.pair_count(1, 2), 0);
        assert_eq!(s.pair_count(2, 1), 0);
        assert_eq!(s.triple_count(0, 1, 2), 0);
        assert_eq!(s.delta(1, 2), 0);
    }
}
