//! Set-wise Kemeny rank aggregation.
//!
//! The 3-wise distance between two rankings counts the subsets of two or
//! three alternatives whose top element differs. A median minimises the
//! summed distance to a profile of votes. This crate provides the distance,
//! the order statistics behind exact pair-ordering tests, the tests
//! themselves, an exact median search that honours the certified orders, an
//! exact-arithmetic LP checker for the impossibility results, PREFLIB
//! input/output and a seeded simulation harness.

pub mod cli;
pub mod distance;
pub mod error;
pub mod experiments;
pub mod fixtures;
pub mod lp;
pub mod model;
pub mod preflib;
pub mod reduction;
pub mod solver;
pub mod stats;

pub use distance::{kwise_distance, profile_distance, ranking_distance, Rule};
pub use error::{Error, Result};
pub use model::{AlternativeRegistry, ConstraintSet, Profile, Ranking, Vote};
pub use stats::OrderStatistics;
