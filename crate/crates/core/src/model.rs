//! Alternatives, rankings, possibly incomplete votes, profiles, and
//! transitively closed pair-order constraint sets.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{input, Error, Result};

/// Labels for the `n` alternatives of an election, indexed `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternativeRegistry {
    labels: Vec<String>,
}

impl AlternativeRegistry {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return input("an election needs at least one alternative");
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return input(format!("duplicate alternative label {label:?}"));
            }
        }
        Ok(Self { labels })
    }

    /// Registry with the default labels `Candidate 1 .. Candidate n`.
    pub fn with_count(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("Candidate {i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Resolves a `a > b > c` style sequence of labels to indices.
    pub fn parse_sequence(&self, text: &str) -> Result<Vec<usize>> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        text.split(['>', ','])
            .map(|token| {
                let token = token.trim();
                self.index_of(token)
                    .ok_or_else(|| Error::Input(format!("unknown alternative {token:?}")))
            })
            .collect()
    }

    pub fn render(&self, order: &[usize]) -> String {
        order
            .iter()
            .map(|&i| self.labels[i].as_str())
            .collect::<Vec<_>>()
            .join(">")
    }
}

/// A complete strict ranking: a permutation of `0..n`, best first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Ranking {
    order: Vec<usize>,
}

impl Ranking {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &a in &order {
            if a >= n || seen[a] {
                return input(format!("{order:?} is not a permutation of 0..{n}"));
            }
            seen[a] = true;
        }
        Ok(Self { order })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).collect(),
        }
    }

    pub fn parse(registry: &AlternativeRegistry, text: &str) -> Result<Self> {
        let order = registry.parse_sequence(text)?;
        if order.len() != registry.len() {
            return input(format!(
                "ranking {text:?} names {} of {} alternatives",
                order.len(),
                registry.len()
            ));
        }
        Self::new(order)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn into_order(self) -> Vec<usize> {
        self.order
    }

    /// `positions()[a]` is the 0-based rank of alternative `a`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &a) in self.order.iter().enumerate() {
            pos[a] = i;
        }
        pos
    }

    pub fn reversed(&self) -> Self {
        Self {
            order: self.order.iter().rev().copied().collect(),
        }
    }

    pub fn to_vote(&self) -> Vote {
        Vote {
            prefix: self.order.clone(),
            n: self.order.len(),
        }
    }

    pub fn render(&self, registry: &AlternativeRegistry) -> String {
        registry.render(&self.order)
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.order.iter().map(|a| a.to_string()).collect();
        f.write_str(&parts.join(">"))
    }
}

/// A strict vote over `n` alternatives that ranks a prefix; every
/// alternative missing from the prefix shares the last position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vote {
    prefix: Vec<usize>,
    n: usize,
}

impl Vote {
    /// A prefix of length `n - 1` is completed, since a lone unranked
    /// alternative is simply last.
    pub fn new(mut prefix: Vec<usize>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for &a in &prefix {
            if a >= n {
                return input(format!("alternative {a} out of range for {n} alternatives"));
            }
            if seen[a] {
                return input(format!("alternative {a} ranked twice in one vote"));
            }
            seen[a] = true;
        }
        if n >= 1 && prefix.len() == n - 1 {
            let missing = seen
                .iter()
                .position(|s| !s)
                .expect("one alternative unranked");
            prefix.push(missing);
        }
        Ok(Self { prefix, n })
    }

    pub fn complete(order: Vec<usize>) -> Result<Self> {
        Ok(Ranking::new(order)?.into())
    }

    pub fn parse(registry: &AlternativeRegistry, text: &str) -> Result<Self> {
        Self::new(registry.parse_sequence(text)?, registry.len())
    }

    pub fn num_alternatives(&self) -> usize {
        self.n
    }

    pub fn ranked(&self) -> &[usize] {
        &self.prefix
    }

    pub fn is_complete(&self) -> bool {
        self.prefix.len() == self.n
    }

    pub fn is_ranked(&self, a: usize) -> bool {
        self.prefix.contains(&a)
    }

    /// `positions()[a]` is `a`'s rank, or `ranked().len()` for every
    /// unranked alternative, so `pos[a] < pos[b]` is strict precedence.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![self.prefix.len(); self.n];
        for (i, &a) in self.prefix.iter().enumerate() {
            pos[a] = i;
        }
        pos
    }

    /// Strict precedence: `x` is ranked and either `y` is not or `y` comes later.
    pub fn precedes(&self, x: usize, y: usize) -> Result<bool> {
        if x >= self.n || y >= self.n {
            return input(format!(
                "alternative pair ({x}, {y}) out of range for {} alternatives",
                self.n
            ));
        }
        if x == y {
            return input("precedence needs two distinct alternatives");
        }
        let px = self.prefix.iter().position(|&a| a == x);
        let py = self.prefix.iter().position(|&a| a == y);
        Ok(match (px, py) {
            (Some(i), Some(j)) => i < j,
            (Some(_), None) => true,
            _ => false,
        })
    }

    pub fn to_ranking(&self) -> Option<Ranking> {
        self.is_complete().then(|| Ranking {
            order: self.prefix.clone(),
        })
    }
}

impl From<Ranking> for Vote {
    fn from(r: Ranking) -> Self {
        let n = r.order.len();
        Vote { prefix: r.order, n }
    }
}

/// A multiset of votes over a shared registry.
#[derive(Debug, Clone)]
pub struct Profile {
    registry: AlternativeRegistry,
    entries: Vec<(Vote, u64)>,
}

impl Profile {
    pub fn new(registry: AlternativeRegistry, entries: Vec<(Vote, u64)>) -> Result<Self> {
        if entries.is_empty() {
            return input("a profile needs at least one vote");
        }
        for (vote, count) in &entries {
            if vote.num_alternatives() != registry.len() {
                return input(format!(
                    "vote over {} alternatives in a profile over {}",
                    vote.num_alternatives(),
                    registry.len()
                ));
            }
            if *count == 0 {
                return input("vote multiplicities must be positive");
            }
        }
        Ok(Self { registry, entries })
    }

    /// Builds a profile from `(">"-separated labels, multiplicity)` pairs.
    pub fn from_labeled<S: AsRef<str>>(labels: &[&str], votes: &[(S, u64)]) -> Result<Self> {
        let registry = AlternativeRegistry::new(labels.iter().copied())?;
        let entries = votes
            .iter()
            .map(|(text, count)| Ok((Vote::parse(&registry, text.as_ref())?, *count)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(registry, entries)
    }

    pub fn from_rankings(registry: AlternativeRegistry, rankings: Vec<Ranking>) -> Result<Self> {
        Self::new(
            registry,
            rankings.into_iter().map(|r| (Vote::from(r), 1)).collect(),
        )
    }

    pub fn registry(&self) -> &AlternativeRegistry {
        &self.registry
    }

    pub fn num_alternatives(&self) -> usize {
        self.registry.len()
    }

    pub fn entries(&self) -> &[(Vote, u64)] {
        &self.entries
    }

    /// Total number of votes `m`, counting multiplicity.
    pub fn num_voters(&self) -> u64 {
        self.entries.iter().map(|(_, c)| c).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(|(v, _)| v.is_complete())
    }

    /// Votes merged by identity and sorted; two profiles are equal exactly
    /// when these agree.
    pub fn canonical_entries(&self) -> Vec<(Vote, u64)> {
        let mut merged: BTreeMap<&Vote, u64> = BTreeMap::new();
        for (vote, count) in &self.entries {
            *merged.entry(vote).or_default() += count;
        }
        merged.into_iter().map(|(v, c)| (v.clone(), c)).collect()
    }

    /// Every vote's multiplicity multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Result<Self> {
        if factor == 0 {
            return input("scale factor must be positive");
        }
        Ok(Self {
            registry: self.registry.clone(),
            entries: self
                .entries
                .iter()
                .map(|(v, c)| (v.clone(), c * factor))
                .collect(),
        })
    }
}

impl PartialEq for Profile {
    fn eq(&self, other: &Self) -> bool {
        self.registry == other.registry && self.canonical_entries() == other.canonical_entries()
    }
}

impl Eq for Profile {}

/// A strict partial order on alternatives, stored transitively closed as a
/// dense boolean matrix. `(x, y)` means "x before y".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    n: usize,
    closure: Vec<bool>,
    // Edges inserted explicitly; used to report cycles as real paths.
    direct: Vec<bool>,
}

impl ConstraintSet {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            closure: vec![false; n * n],
            direct: vec![false; n * n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut cs = Self::new(n);
        for (x, y) in edges {
            cs.insert(x, y)?;
        }
        Ok(cs)
    }

    pub fn num_alternatives(&self) -> usize {
        self.n
    }

    /// Always true: every mutation re-closes the relation.
    pub fn is_closed(&self) -> bool {
        true
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.closure[x * self.n + y]
    }

    /// True when either order of the pair is fixed.
    #[inline]
    pub fn resolves(&self, x: usize, y: usize) -> bool {
        self.contains(x, y) || self.contains(y, x)
    }

    /// Adds `(x, y)` and re-closes. Returns whether the closure grew.
    pub fn insert(&mut self, x: usize, y: usize) -> Result<bool> {
        if x >= self.n || y >= self.n {
            return input(format!(
                "pair ({x}, {y}) out of range for {} alternatives",
                self.n
            ));
        }
        if x == y {
            return input(format!("pair ({x}, {x}) is reflexive"));
        }
        if self.contains(y, x) {
            let mut cycle = vec![x];
            cycle.extend(self.direct_path(y, x));
            return Err(Error::Cycle(cycle));
        }
        if self.contains(x, y) {
            return Ok(false);
        }
        let n = self.n;
        self.direct[x * n + y] = true;
        let preds: Vec<usize> = (0..n).filter(|&a| a == x || self.contains(a, x)).collect();
        let succs: Vec<usize> = (0..n).filter(|&b| b == y || self.contains(y, b)).collect();
        for &a in &preds {
            for &b in &succs {
                self.closure[a * n + b] = true;
            }
        }
        Ok(true)
    }

    /// Functional form of [`insert`](Self::insert).
    pub fn with(mut self, x: usize, y: usize) -> Result<Self> {
        self.insert(x, y)?;
        Ok(self)
    }

    pub fn extend_from(&mut self, other: &ConstraintSet) -> Result<bool> {
        let mut grew = false;
        for (x, y) in other.edges() {
            grew |= self.insert(x, y)?;
        }
        Ok(grew)
    }

    fn direct_path(&self, from: usize, to: usize) -> Vec<usize> {
        let n = self.n;
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::from([from]);
        parent[from] = from;
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for (v, slot) in parent.iter_mut().enumerate() {
                if self.direct[u * n + v] && *slot == usize::MAX {
                    *slot = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[to] == usize::MAX {
            return vec![from, to];
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// All closure edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n * n)
            .filter(move |&i| self.closure[i])
            .map(move |i| (i / n, i % n))
    }

    pub fn edge_count(&self) -> usize {
        self.closure.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_count() == 0
    }

    /// `L_x`: alternatives fixed before `x`.
    pub fn predecessors(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&z| self.contains(z, x)).collect()
    }

    /// `R_x`: alternatives fixed after `x`.
    pub fn successors(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&z| self.contains(x, z)).collect()
    }

    /// `L_{x,y}`: alternatives fixed before both.
    pub fn common_predecessors(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&z| self.contains(z, x) && self.contains(z, y))
            .collect()
    }

    /// `R_{x,y}`: alternatives fixed after both.
    pub fn common_successors(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&z| self.contains(x, z) && self.contains(y, z))
            .collect()
    }

    /// Whether `ranking` is a linear extension of this order.
    pub fn admits(&self, ranking: &Ranking) -> bool {
        let pos = ranking.positions();
        self.edges().all(|(x, y)| pos[x] < pos[y])
    }

    /// Fraction of the `n(n-1)/2` unordered pairs whose order is fixed.
    pub fn solved_fraction(&self) -> f64 {
        let total = self.n * self.n.saturating_sub(1) / 2;
        if total == 0 {
            return 0.0;
        }
        self.edge_count() as f64 / total as f64
    }
}
