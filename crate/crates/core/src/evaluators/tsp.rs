//! Closed-tour length for travelling-salesman problems.
//!
//! Decisions are cities; a problem where every decision is unique and there are
//! as many positions as cities makes every feasible solution a permutation.

use crate::error::{ConfigError, EvaluationError};
use crate::problem::{DecisionId, EvaluationResult, ProblemDefinition};

use super::Evaluator;

pub const OUTPUTS: [&str; 1] = ["tour_length"];

#[derive(Debug, Clone, PartialEq)]
pub struct TspSpec {
    pub cities: Vec<(DecisionId, [f64; 2])>,
}

impl TspSpec {
    pub(crate) fn check(&self, def: &ProblemDefinition) -> Vec<String> {
        let mut out = Vec::new();
        for d in &def.decisions {
            if !self.cities.iter().any(|(id, _)| id == &d.id) {
                out.push(format!("no coordinates for city {}", d.id));
            }
        }
        for (id, _) in &self.cities {
            if def.decision_index(id).is_none() {
                out.push(format!("coordinates given for unknown city {id}"));
            }
        }
        if def.n_decisions() != def.n_variables || def.decisions.iter().any(|d| !d.unique) {
            out.push("a tour problem needs N unique city decisions".to_string());
        }
        out
    }
}

/// Sum of consecutive Euclidean legs plus the closing leg.
pub fn tour_length(points: &[[f64; 2]]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    for i in 0..points.len() {
        let a = points[i];
        let b = points[(i + 1) % points.len()];
        total += (a[0] - b[0]).hypot(a[1] - b[1]);
    }
    total
}

pub struct TspEvaluator {
    coords: Vec<[f64; 2]>,
}

impl TspEvaluator {
    pub fn new(def: &ProblemDefinition, spec: &TspSpec) -> Result<Self, ConfigError> {
        let coords = def
            .decisions
            .iter()
            .map(|d| {
                spec.cities
                    .iter()
                    .find(|(id, _)| id == &d.id)
                    .map(|(_, c)| *c)
                    .ok_or_else(|| {
                        ConfigError::new(
                            format!("evaluator.cities.{}", d.id),
                            "missing city coordinates",
                        )
                    })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { coords })
    }

    pub fn from_coords(coords: Vec<[f64; 2]>) -> Self {
        Self { coords }
    }
}

impl Evaluator for TspEvaluator {
    fn evaluate(&self, assignment: &[usize]) -> Result<EvaluationResult, EvaluationError> {
        let n = self.coords.len();
        let mut seen = vec![false; n];
        if assignment.len() != n {
            return Err(EvaluationError::InvalidSolution(format!(
                "tour visits {} cities, expected {n}",
                assignment.len()
            )));
        }
        for &c in assignment {
            if c >= n || std::mem::replace(&mut seen[c], true) {
                return Err(EvaluationError::InvalidSolution(
                    "tour is not a permutation of the cities".into(),
                ));
            }
        }
        let points: Vec<[f64; 2]> = assignment.iter().map(|&c| self.coords[c]).collect();
        Ok(EvaluationResult::new().with("tour_length", tour_length(&points)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_triangle_tours_are_twelve() {
        let e = TspEvaluator::from_coords(vec![[0.0, 0.0], [0.0, 3.0], [4.0, 0.0]]);
        for t in [[0, 1, 2], [0, 2, 1], [2, 1, 0]] {
            assert_eq!(e.evaluate(&t).unwrap().get("tour_length"), Some(12.0));
        }
    }

    #[test]
    fn unit_square_optimum_by_enumeration() {
        let e = TspEvaluator::from_coords(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        // the three distinct tours through city 0
        let lengths: Vec<f64> = [[0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3]]
            .iter()
            .map(|t| e.evaluate(t).unwrap().get("tour_length").unwrap())
            .collect();
        let best = lengths.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((best - 4.0).abs() < 1e-12);
        assert!((lengths[1] - (2.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn reversal_preserves_length() {
        let e = TspEvaluator::from_coords(vec![[0.0, 0.0], [2.0, 5.0], [7.0, 1.0], [3.0, -4.0]]);
        let f = e.evaluate(&[0, 1, 2, 3]).unwrap();
        let r = e.evaluate(&[3, 2, 1, 0]).unwrap();
        assert!((f.get("tour_length").unwrap() - r.get("tour_length").unwrap()).abs() < 1e-12);
    }

    #[test]
    fn non_permutation_rejected() {
        let e = TspEvaluator::from_coords(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]);
        assert!(matches!(
            e.evaluate(&[0, 0, 1]),
            Err(EvaluationError::InvalidSolution(_))
        ));
        assert!(e.evaluate(&[0, 1]).is_err());
    }
}
