//! Exact linear programming over arbitrary-precision rationals and the
//! proof-obligation systems built on it.
//!
//! The solver is a dense two-phase tableau simplex with Bland's
//! lowest-index pivoting rule, so it terminates without cycling and every
//! answer (optimum, infeasibility) is exact.

mod systems;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{input, Result};

pub use systems::{
    bad_rankings, build_lemma_lp1, build_lemma_lp1_without_majorities, build_second_best_lp,
    build_system_star, good_rankings, permutations, profile_distribution, star_sweep,
    system_star_feasible, verify_second_best_bounds, verify_six_candidate_rule, SecondBestReport,
    SecondBestSubset, SixCandidateReport, StarCase, StarSweepReport,
};

pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `maximize objective · c` (or feasibility only) subject to the rows and
/// `c >= 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Option<Vec<Rational>>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Objective value at the returned vertex (0 for feasibility problems).
    pub optimum: Option<Rational>,
    /// Primal vertex when the system is feasible.
    pub solution: Option<Vec<Rational>>,
    /// Minimum total artificial mass found by phase 1; strictly positive
    /// exactly when the system is infeasible.
    pub phase_one_optimum: Rational,
    pub pivots: usize,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: None,
            constraints: Vec::new(),
        }
    }

    pub fn maximize(&mut self, objective: Vec<Rational>) -> &mut Self {
        self.objective = Some(objective);
        self
    }

    pub fn add(
        &mut self,
        coefficients: Vec<Rational>,
        relation: Relation,
        rhs: Rational,
    ) -> &mut Self {
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
        self
    }

    /// `sum c = 1`: the variables form a probability distribution.
    pub fn add_simplex_row(&mut self) -> &mut Self {
        let ones = vec![Rational::one(); self.num_vars];
        self.add(ones, Relation::Eq, Rational::one())
    }

    fn validate(&self) -> Result<()> {
        if let Some(obj) = &self.objective {
            if obj.len() != self.num_vars {
                return input(format!(
                    "objective has {} coefficients for {} variables",
                    obj.len(),
                    self.num_vars
                ));
            }
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coefficients.len() != self.num_vars {
                return input(format!(
                    "constraint {i} has {} coefficients for {} variables",
                    c.coefficients.len(),
                    self.num_vars
                ));
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        match &self.objective {
            Some(obj) => dot(obj, x),
            None => Rational::zero(),
        }
    }

    /// Exact re-substitution check, including non-negativity.
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs = dot(&c.coefficients, x);
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                }
            })
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        self.validate()?;
        Ok(Tableau::solve(self))
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

struct Tableau {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    basis: Vec<usize>,
    // Reduced costs of the current objective and its value.
    d: Vec<Rational>,
    z: Rational,
    pivots: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn solve(lp: &LinearProgram) -> LpOutcome {
        let n = lp.num_vars;
        let rows: Vec<(Vec<Rational>, Relation, Rational)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let flipped = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (
                        c.coefficients.iter().map(|v| -v).collect(),
                        flipped,
                        -&c.rhs,
                    )
                } else {
                    (c.coefficients.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();
        let slacks = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let artificials = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let first_art = n + slacks;
        let ncols = first_art + artificials;

        let mut a = Vec::with_capacity(rows.len());
        let mut b = Vec::with_capacity(rows.len());
        let mut basis = Vec::with_capacity(rows.len());
        let (mut s, mut t) = (n, first_art);
        for (coeffs, rel, rhs) in rows {
            let mut row = coeffs;
            row.resize(ncols, Rational::zero());
            match rel {
                Relation::Le => {
                    row[s] = Rational::one();
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -Rational::one();
                    s += 1;
                    row[t] = Rational::one();
                    basis.push(t);
                    t += 1;
                }
                Relation::Eq => {
                    row[t] = Rational::one();
                    basis.push(t);
                    t += 1;
                }
            }
            a.push(row);
            b.push(rhs);
        }
        let mut tab = Tableau {
            a,
            b,
            basis,
            d: Vec::new(),
            z: Rational::zero(),
            pivots: 0,
        };

        // Phase 1: maximize -(sum of artificials).
        let mut cost1 = vec![Rational::zero(); ncols];
        for c in cost1.iter_mut().skip(first_art) {
            *c = -Rational::one();
        }
        tab.set_objective(&cost1);
        let all = vec![true; ncols];
        // Phase 1 is bounded above by 0, so it always ends optimal.
        let _ = tab.run(&all);
        let phase_one_optimum = -tab.z.clone();
        if phase_one_optimum.is_positive() {
            return LpOutcome {
                status: LpStatus::Infeasible,
                optimum: None,
                solution: None,
                phase_one_optimum,
                pivots: tab.pivots,
            };
        }
        tab.evict_artificials(first_art);

        let mut cost2 = vec![Rational::zero(); ncols];
        if let Some(obj) = &lp.objective {
            cost2[..n].clone_from_slice(obj);
        }
        tab.set_objective(&cost2);
        let allowed: Vec<bool> = (0..ncols).map(|j| j < first_art).collect();
        let status = match tab.run(&allowed) {
            Phase::Optimal => LpStatus::Optimal,
            Phase::Unbounded => LpStatus::Unbounded,
        };
        let solution = (status == LpStatus::Optimal).then(|| {
            let mut x = vec![Rational::zero(); n];
            for (i, &j) in tab.basis.iter().enumerate() {
                if j < n {
                    x[j] = tab.b[i].clone();
                }
            }
            x
        });
        LpOutcome {
            status,
            optimum: (status == LpStatus::Optimal).then(|| tab.z.clone()),
            solution,
            phase_one_optimum,
            pivots: tab.pivots,
        }
    }

    fn set_objective(&mut self, cost: &[Rational]) {
        let mut d = cost.to_vec();
        let mut z = Rational::zero();
        for (i, &j) in self.basis.iter().enumerate() {
            let cb = &cost[j];
            if cb.is_zero() {
                continue;
            }
            for (dk, ak) in d.iter_mut().zip(&self.a[i]) {
                if !ak.is_zero() {
                    *dk -= cb * ak;
                }
            }
            z += cb * &self.b[i];
        }
        self.d = d;
        self.z = z;
    }

    fn run(&mut self, allowed: &[bool]) -> Phase {
        loop {
            let Some(col) = (0..self.d.len()).find(|&j| allowed[j] && self.d[j].is_positive())
            else {
                return Phase::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                let aij = &self.a[i][col];
                if !aij.is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / aij;
                let better = match &leave {
                    None => true,
                    Some((r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return Phase::Unbounded;
            };
            self.pivot(row, col);
        }
    }

    fn pivot(&mut self, r: usize, col: usize) {
        self.pivots += 1;
        let inv = self.a[r][col].recip();
        for v in self.a[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.b[r] *= &inv;
        let pivot_row = std::mem::take(&mut self.a[r]);
        let nz: Vec<usize> = (0..pivot_row.len())
            .filter(|&k| !pivot_row[k].is_zero())
            .collect();
        let br = self.b[r].clone();
        for i in 0..self.a.len() {
            if i == r || self.a[i][col].is_zero() {
                continue;
            }
            let f = self.a[i][col].clone();
            for &k in &nz {
                let delta = &f * &pivot_row[k];
                self.a[i][k] -= delta;
            }
            self.b[i] -= &f * &br;
        }
        let f = self.d[col].clone();
        if !f.is_zero() {
            for &k in &nz {
                let delta = &f * &pivot_row[k];
                self.d[k] -= delta;
            }
            self.z += &f * &br;
        }
        self.a[r] = pivot_row;
        self.basis[r] = col;
    }

    /// After a successful phase 1, pivots zero-level artificials out of the
    /// basis and drops rows that turn out to be redundant.
    fn evict_artificials(&mut self, first_art: usize) {
        let mut i = 0;
        while i < self.a.len() {
            if self.basis[i] < first_art {
                i += 1;
                continue;
            }
            match (0..first_art).find(|&j| !self.a[i][j].is_zero()) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.a.remove(i);
                    self.b.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }
}
