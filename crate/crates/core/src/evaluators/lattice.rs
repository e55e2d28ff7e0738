//! Pin-lattice surrogate producing `k_eoc`, `k_max` and `pr_max`.
//!
//! With per-decision attributes `enrichment` (e), `poison` (p, in [0, 1]) and
//! `residual` (r, >= 0) and per-position adjacency counts `adj`:
//!
//! ```text
//! w_i   = e_i (1 - p_i) (1 + m adj_i)
//! k_max = k0 + a mean(e) - c mean(p)
//! k_eoc = k_max - d - mean(r)
//! pr_max = max(w) / mean(w)
//! ```
//!
//! Positions with `w = 0` (guide tubes, zero enrichment) are left out of the
//! pin-power average.
//!
//! This is an auditable stand-in, not a lattice physics calculation.

use crate::error::{ConfigError, EvaluationError};
use crate::problem::{EvaluationResult, ProblemDefinition};

use super::{attribute_column, mean, missing_attributes, Evaluator};

pub const OUTPUTS: [&str; 3] = ["k_eoc", "k_max", "pr_max"];
pub const ATTRIBUTES: [&str; 3] = ["enrichment", "poison", "residual"];

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    pub k0: f64,
    pub enrichment_coefficient: f64,
    pub poison_coefficient: f64,
    pub depletion_offset: f64,
    pub adjacency_coefficient: f64,
    pub adjacency: Vec<f64>,
}

impl LatticeSpec {
    pub(crate) fn check(&self, def: &ProblemDefinition) -> Vec<String> {
        let mut out = missing_attributes(def, &ATTRIBUTES);
        if self.adjacency.len() != def.n_variables {
            out.push(format!(
                "adjacency has {} entries, expected {}",
                self.adjacency.len(),
                def.n_variables
            ));
        }
        if self.adjacency.iter().any(|&a| a < 0.0) {
            out.push("adjacency counts must be non-negative".into());
        }
        out
    }
}

pub struct LatticeSurrogate {
    spec: LatticeSpec,
    enrichment: Vec<f64>,
    poison: Vec<f64>,
    residual: Vec<f64>,
}

impl LatticeSurrogate {
    pub fn new(def: &ProblemDefinition, spec: &LatticeSpec) -> Result<Self, ConfigError> {
        Ok(Self {
            spec: spec.clone(),
            enrichment: attribute_column(def, "enrichment")?,
            poison: attribute_column(def, "poison")?,
            residual: attribute_column(def, "residual")?,
        })
    }

    /// Direct constructor from attribute columns (index = decision).
    pub fn from_columns(
        spec: LatticeSpec,
        enrichment: Vec<f64>,
        poison: Vec<f64>,
        residual: Vec<f64>,
    ) -> Self {
        Self {
            spec,
            enrichment,
            poison,
            residual,
        }
    }
}

impl Evaluator for LatticeSurrogate {
    fn evaluate(&self, assignment: &[usize]) -> Result<EvaluationResult, EvaluationError> {
        if assignment.len() != self.spec.adjacency.len() {
            return Err(EvaluationError::InvalidSolution(format!(
                "expected {} pins, got {}",
                self.spec.adjacency.len(),
                assignment.len()
            )));
        }
        let s = &self.spec;
        let e = || assignment.iter().map(|&d| self.enrichment[d]);
        let p = || assignment.iter().map(|&d| self.poison[d]);
        let k_max = s.k0 + s.enrichment_coefficient * mean(e()) - s.poison_coefficient * mean(p());
        let k_eoc = k_max - s.depletion_offset - mean(assignment.iter().map(|&d| self.residual[d]));
        let weights: Vec<f64> = assignment
            .iter()
            .zip(&s.adjacency)
            .map(|(&d, &adj)| {
                self.enrichment[d] * (1.0 - self.poison[d]) * (1.0 + s.adjacency_coefficient * adj)
            })
            .collect();
        let avg = mean(weights.iter().copied().filter(|&w| w > 0.0));
        if !(avg > 0.0) {
            return Err(EvaluationError::InvalidSolution(
                "lattice has no fuelled pin".into(),
            ));
        }
        let peak = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(EvaluationResult::new()
            .with("k_eoc", k_eoc)
            .with("k_max", k_max)
            .with("pr_max", peak / avg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(adjacency: Vec<f64>, m: f64) -> LatticeSpec {
        LatticeSpec {
            k0: 0.9,
            enrichment_coefficient: 0.05,
            poison_coefficient: 0.2,
            depletion_offset: 0.01,
            adjacency_coefficient: m,
            adjacency,
        }
    }

    #[test]
    fn identical_pins_have_unit_peaking() {
        let s = LatticeSurrogate::from_columns(spec(vec![0.0; 4], 0.3), vec![4.4], vec![0.2], vec![0.0]);
        let r = s.evaluate(&[0, 0, 0, 0]).unwrap();
        assert!((r.get("pr_max").unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn no_poison_kmax() {
        let s = LatticeSurrogate::from_columns(
            spec(vec![0.0, 1.0], 0.1),
            vec![4.0, 5.0],
            vec![0.0, 0.0],
            vec![0.0, 0.0],
        );
        let r = s.evaluate(&[0, 1]).unwrap();
        assert!((r.get("k_max").unwrap() - (0.9 + 0.05 * 4.5)).abs() < 1e-15);
    }

    #[test]
    fn empty_positions_not_averaged() {
        let s = LatticeSurrogate::from_columns(
            spec(vec![0.0; 3], 0.0),
            vec![4.0, 2.0, 0.0],
            vec![0.0; 3],
            vec![0.0; 3],
        );
        let r = s.evaluate(&[0, 1, 2]).unwrap();
        assert!((r.get("pr_max").unwrap() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn three_pin_toy() {
        // w = [4.0, 2.0, 0.18], mean 2.06
        let s = LatticeSurrogate::from_columns(
            spec(vec![0.0; 3], 7.0),
            vec![4.0, 4.0, 1.8],
            vec![0.0, 0.5, 0.9],
            vec![0.0, 0.0, 0.03],
        );
        let r = s.evaluate(&[0, 1, 2]).unwrap();
        assert!((r.get("pr_max").unwrap() - 4.0 / 2.06).abs() < 1e-12);
        assert!((r.get("pr_max").unwrap() - 1.9417).abs() < 1e-4);
        let k_max = 0.9 + 0.05 * (9.8 / 3.0) - 0.2 * (1.4 / 3.0);
        assert!((r.get("k_max").unwrap() - k_max).abs() < 1e-12);
        assert!((r.get("k_eoc").unwrap() - (k_max - 0.01 - 0.01)).abs() < 1e-12);
    }
}
