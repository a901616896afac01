//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's distance, statistics or search code.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use setwise_kemeny::{AlternativeRegistry, Profile, Vote};

/// All permutations of `0..n`, lexicographic.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for a in 0..used.len() {
            if !used[a] {
                used[a] = true;
                prefix.push(a);
                rec(prefix, used, out);
                prefix.pop();
                used[a] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Subsets of `0..n` with between 2 and `k` members.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|mask| (2..=k as u32).contains(&mask.count_ones()))
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
        .collect()
}

/// The earliest member of `subset` in the ranked prefix, if any member is ranked.
pub fn top(prefix: &[usize], subset: &[usize]) -> Option<usize> {
    prefix.iter().copied().find(|a| subset.contains(a))
}

/// Subsets of size 2..=k whose tops differ; subsets with no ranked member
/// in the vote are skipped.
pub fn oracle_distance(ranking: &[usize], vote_prefix: &[usize], k: usize) -> u64 {
    subsets(ranking.len(), k)
        .iter()
        .filter(|s| match top(vote_prefix, s) {
            None => false,
            Some(t) => top(ranking, s) != Some(t),
        })
        .count() as u64
}

pub fn oracle_profile_distance(ranking: &[usize], profile: &Profile, k: usize) -> u64 {
    profile
        .entries()
        .iter()
        .map(|(v, c)| c * oracle_distance(ranking, v.ranked(), k))
        .sum()
}

/// Classical inversion count between two complete rankings.
pub fn inversions(a: &[usize], b: &[usize]) -> u64 {
    let mut pos = vec![0; b.len()];
    for (i, &x) in b.iter().enumerate() {
        pos[x] = i;
    }
    let mut count = 0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if pos[a[i]] > pos[a[j]] {
                count += 1;
            }
        }
    }
    count
}

/// Optimum and sorted optimal rankings by exhaustive enumeration.
pub fn oracle_medians(profile: &Profile, k: usize) -> (u64, Vec<Vec<usize>>) {
    let mut best = u64::MAX;
    let mut medians = Vec::new();
    for p in permutations(profile.num_alternatives()) {
        let d = oracle_profile_distance(&p, profile, k);
        if d < best {
            best = d;
            medians.clear();
        }
        if d == best {
            medians.push(p);
        }
    }
    (best, medians)
}

/// `m` uniform complete votes over `n` alternatives.
pub fn random_complete_profile<R: Rng>(rng: &mut R, n: usize, m: usize) -> Profile {
    let votes = (0..m)
        .map(|_| {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            (
                Vote::complete(order).unwrap(),
                1 + rng.random_range(0..3u64),
            )
        })
        .collect();
    Profile::new(AlternativeRegistry::with_count(n).unwrap(), votes).unwrap()
}

/// Like [`random_complete_profile`] but each vote keeps a random prefix.
pub fn random_incomplete_profile<R: Rng>(rng: &mut R, n: usize, m: usize) -> Profile {
    let votes = (0..m)
        .map(|_| {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            let keep = rng.random_range(0..=n);
            order.truncate(keep);
            (Vote::new(order, n).unwrap(), 1 + rng.random_range(0..3u64))
        })
        .collect();
    Profile::new(AlternativeRegistry::with_count(n).unwrap(), votes).unwrap()
}

/// Weighted count of votes in which the alternatives of `chain` appear in
/// that order, each strictly before the next.
pub fn oracle_chain(profile: &Profile, chain: &[usize]) -> i64 {
    profile
        .entries()
        .iter()
        .filter(|(v, _)| {
            let pos = v.positions();
            chain.windows(2).all(|w| pos[w[0]] < pos[w[1]])
        })
        .map(|(_, c)| *c as i64)
        .sum()
}
