//! Scalar objective function: weighted maximize/minimize terms plus weighted
//! threshold penalties.

use serde::{Deserialize, Serialize};

use crate::error::{EvaluationError, UsageError};
use crate::problem::{EvaluationResult, Goal, ObjectiveSpec, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Upper,
    Lower,
}

/// Amount by which `value` breaks the threshold `target`; zero when met.
pub fn penalty(value: f64, target: f64, bound: Bound) -> f64 {
    match bound {
        Bound::Upper => (value - target).max(0.0),
        Bound::Lower => (target - value).max(0.0),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contribution {
    pub name: String,
    pub goal: String,
    pub value: f64,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveBreakdown {
    pub contributions: Vec<Contribution>,
    pub total: f64,
}

/// Signed contribution of one objective value.
pub fn contribution(spec: &ObjectiveSpec, value: f64) -> f64 {
    let w = spec.weight;
    match spec.goal {
        Goal::Maximize => w * value,
        Goal::Minimize => -w * value,
        Goal::LessThanTarget(t) => -w * penalty(value, t, Bound::Upper),
        Goal::GreaterThanTarget(t) => -w * penalty(value, t, Bound::Lower),
    }
}

/// Combines objective values into `F`, summing contributions in spec order.
pub fn compose_objective(
    result: &EvaluationResult,
    specs: &[ObjectiveSpec],
) -> Result<ObjectiveBreakdown, EvaluationError> {
    let mut contributions = Vec::with_capacity(specs.len());
    let mut total = 0.0;
    for spec in specs {
        let value = result
            .get(&spec.name)
            .ok_or_else(|| EvaluationError::MissingObjective(spec.name.clone()))?;
        let c = contribution(spec, value);
        total += c;
        contributions.push(Contribution {
            name: spec.name.clone(),
            goal: spec.goal.keyword().to_string(),
            value,
            contribution: c,
        });
    }
    Ok(ObjectiveBreakdown {
        contributions,
        total,
    })
}

/// Indices sorted by descending fitness; ties keep input order.
pub fn rank(solutions: &[Solution]) -> Result<Vec<usize>, UsageError> {
    let fitness = solutions
        .iter()
        .enumerate()
        .map(|(i, s)| {
            s.fitness
                .ok_or_else(|| UsageError(format!("solution {i} has not been evaluated")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut order: Vec<usize> = (0..solutions.len()).collect();
    order.sort_by(|&a, &b| fitness[b].total_cmp(&fitness[a]));
    Ok(order)
}
