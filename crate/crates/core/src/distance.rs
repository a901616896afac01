//! k-wise Kendall-tau distances (k = 2, 3): the number of subsets of at most
//! k alternatives whose winner differs between two rankings.

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::model::{Profile, Ranking, Vote};

/// Which set-wise Kemeny scheme is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// Classical Kemeny: subsets of size 2.
    #[serde(rename = "2")]
    TwoWise,
    /// Subsets of size 2 and 3.
    #[serde(rename = "3")]
    ThreeWise,
}

impl Rule {
    pub fn k(self) -> usize {
        match self {
            Rule::TwoWise => 2,
            Rule::ThreeWise => 3,
        }
    }
}

impl TryFrom<usize> for Rule {
    type Error = Error;

    fn try_from(k: usize) -> Result<Self> {
        match k {
            2 => Ok(Rule::TwoWise),
            3 => Ok(Rule::ThreeWise),
            _ => input(format!(
                "only 2-wise and 3-wise distances are supported, got k={k}"
            )),
        }
    }
}

/// The winner of a subset in a vote. `Ambiguous` when no member is ranked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetTop {
    Top(usize),
    Ambiguous,
}

pub fn top_of_subset(vote: &Vote, subset: &[usize]) -> Result<SubsetTop> {
    if !(2..=3).contains(&subset.len()) {
        return input("subsets must have 2 or 3 members");
    }
    let n = vote.num_alternatives();
    for (i, &a) in subset.iter().enumerate() {
        if a >= n {
            return input(format!("alternative {a} out of range for {n} alternatives"));
        }
        if subset[..i].contains(&a) {
            return input("subset members must be distinct");
        }
    }
    Ok(vote
        .ranked()
        .iter()
        .find(|a| subset.contains(a))
        .map_or(SubsetTop::Ambiguous, |&a| SubsetTop::Top(a)))
}

/// Reference implementation: enumerates every pair (and triple when k = 3).
///
/// A subset whose members are all unranked in `vote` never disagrees.
pub fn kwise_distance(ranking: &Ranking, vote: &Vote, rule: Rule) -> Result<u64> {
    let n = ranking.len();
    if vote.num_alternatives() != n {
        return input(format!(
            "ranking over {n} alternatives compared with a vote over {}",
            vote.num_alternatives()
        ));
    }
    let rpos = ranking.positions();
    let vpos = vote.positions();
    let unranked = vote.ranked().len();
    let top = |pos: &[usize], s: &[usize]| -> usize {
        *s.iter().min_by_key(|&&a| pos[a]).expect("nonempty subset")
    };
    let disagrees = |s: &[usize]| -> bool {
        if s.iter().all(|&a| vpos[a] == unranked) {
            return false;
        }
        top(&rpos, s) != top(&vpos, s)
    };
    let mut count = 0u64;
    for a in 0..n {
        for b in a + 1..n {
            count += u64::from(disagrees(&[a, b]));
            if rule == Rule::ThreeWise {
                for c in b + 1..n {
                    count += u64::from(disagrees(&[a, b, c]));
                }
            }
        }
    }
    Ok(count)
}

pub fn ranking_distance(a: &Ranking, b: &Ranking, rule: Rule) -> Result<u64> {
    kwise_distance(a, &b.to_vote(), rule)
}

/// Multiplicity-weighted sum of [`kwise_distance`] over a profile.
pub fn profile_distance(ranking: &Ranking, profile: &Profile, rule: Rule) -> Result<u64> {
    profile
        .entries()
        .iter()
        .try_fold(0u64, |acc, (vote, count)| {
            Ok(acc + count * kwise_distance(ranking, vote, rule)?)
        })
}
