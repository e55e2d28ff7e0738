//! Metaheuristic optimization over combinatorial design problems.
//!
//! A problem assigns one decision to each of `N` positions, subject to
//! per-decision allowed-position maps, optional group capacities and
//! uniqueness. Solutions are scored by a pluggable [`evaluators::Evaluator`]
//! and a weighted objective with threshold penalties, then optimized with a
//! genetic algorithm or simulated annealing. The [`runner`] module reads the
//! YAML input file and writes run reports.

pub mod annealing;
pub mod error;
pub mod evaluators;
pub mod generation;
pub mod genetic;
pub mod objective;
pub mod problem;
pub mod record;
pub mod rng;
pub mod runner;

pub use error::{Error, Result};
pub use problem::{
    Decision, DecisionGroup, DecisionId, DecisionMap, EvaluationResult, Goal, ObjectiveSpec,
    ProblemDefinition, Solution,
};
