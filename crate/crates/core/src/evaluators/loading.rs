//! Loading-pattern surrogate producing `cycle_length`, `max_boron`,
//! `FDeltaH` and `Fq` from a per-decision `reactivity` attribute (rho):
//!
//! ```text
//! cycle_length = c_cl * sum_i g_i rho_i
//! max_boron    = c_sb * mean(rho)
//! q_i          = rho_i h_i
//! FDeltaH      = max(q) / mean(q)
//! Fq           = c_fq * FDeltaH
//! ```
//!
//! `g` (importance) and `h` (peaking) are per-position vectors from the
//! problem file. Positions with `h = 0` (reflector) are left out of the
//! power average. It mimics the shape of the trade-off only; it is not a core
//! simulator.

use crate::error::{ConfigError, EvaluationError};
use crate::problem::{EvaluationResult, ProblemDefinition};

use super::{attribute_column, mean, missing_attributes, Evaluator};

pub const OUTPUTS: [&str; 4] = ["cycle_length", "max_boron", "FDeltaH", "Fq"];

#[derive(Debug, Clone, PartialEq)]
pub struct LoadingSpec {
    pub importance: Vec<f64>,
    pub peaking: Vec<f64>,
    pub cycle_length_scale: f64,
    pub boron_scale: f64,
    pub fq_scale: f64,
}

impl LoadingSpec {
    pub(crate) fn check(&self, def: &ProblemDefinition) -> Vec<String> {
        let mut out = missing_attributes(def, &["reactivity"]);
        for (name, v) in [("importance", &self.importance), ("peaking", &self.peaking)] {
            if v.len() != def.n_variables {
                out.push(format!(
                    "{name} has {} entries, expected {}",
                    v.len(),
                    def.n_variables
                ));
            }
            if v.iter().any(|&x| !(x >= 0.0)) {
                out.push(format!("{name} entries must not be negative"));
            }
        }
        if !self.peaking.iter().any(|&h| h > 0.0) {
            out.push("peaking needs at least one positive entry".into());
        }
        out
    }
}

pub struct LoadingSurrogate {
    spec: LoadingSpec,
    reactivity: Vec<f64>,
}

impl LoadingSurrogate {
    pub fn new(def: &ProblemDefinition, spec: &LoadingSpec) -> Result<Self, ConfigError> {
        Ok(Self {
            spec: spec.clone(),
            reactivity: attribute_column(def, "reactivity")?,
        })
    }

    pub fn from_columns(spec: LoadingSpec, reactivity: Vec<f64>) -> Self {
        Self { spec, reactivity }
    }
}

impl Evaluator for LoadingSurrogate {
    fn evaluate(&self, assignment: &[usize]) -> Result<EvaluationResult, EvaluationError> {
        let s = &self.spec;
        if assignment.len() != s.importance.len() {
            return Err(EvaluationError::InvalidSolution(format!(
                "expected {} positions, got {}",
                s.importance.len(),
                assignment.len()
            )));
        }
        let rho: Vec<f64> = assignment.iter().map(|&d| self.reactivity[d]).collect();
        let cycle_length = s.cycle_length_scale
            * rho.iter().zip(&s.importance).map(|(r, g)| r * g).sum::<f64>();
        let max_boron = s.boron_scale * mean(rho.iter().copied());
        let q: Vec<f64> = rho
            .iter()
            .zip(&s.peaking)
            .filter(|(_, &h)| h > 0.0)
            .map(|(r, h)| r * h)
            .collect();
        let avg = mean(q.iter().copied());
        if !(avg > 0.0) {
            return Err(EvaluationError::InvalidSolution(
                "pattern has zero average power".into(),
            ));
        }
        let f_delta_h = q.iter().copied().fold(f64::NEG_INFINITY, f64::max) / avg;
        Ok(EvaluationResult::new()
            .with("cycle_length", cycle_length)
            .with("max_boron", max_boron)
            .with("FDeltaH", f_delta_h)
            .with("Fq", s.fq_scale * f_delta_h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(importance: Vec<f64>, peaking: Vec<f64>) -> LoadingSpec {
        LoadingSpec {
            importance,
            peaking,
            cycle_length_scale: 100.0,
            boron_scale: 1000.0,
            fq_scale: 1.4,
        }
    }

    #[test]
    fn uniform_pattern_is_flat() {
        let s = LoadingSurrogate::from_columns(spec(vec![1.0; 3], vec![1.0; 3]), vec![1.2]);
        let r = s.evaluate(&[0, 0, 0]).unwrap();
        assert_eq!(r.get("FDeltaH"), Some(1.0));
        assert!((r.get("Fq").unwrap() - 1.4).abs() < 1e-15);
    }

    #[test]
    fn two_position_toy() {
        let s = LoadingSurrogate::from_columns(spec(vec![2.0, 1.0], vec![1.0, 1.0]), vec![1.0, 3.0]);
        let r = s.evaluate(&[0, 1]).unwrap();
        assert_eq!(r.get("cycle_length"), Some(500.0));
        assert_eq!(r.get("FDeltaH"), Some(1.5));
        assert_eq!(r.get("max_boron"), Some(2000.0));
    }

    #[test]
    fn zero_peaking_positions_are_not_averaged() {
        let s = LoadingSurrogate::from_columns(spec(vec![1.0; 3], vec![1.0, 1.0, 0.0]), vec![1.0, 2.0, 0.0]);
        let r = s.evaluate(&[0, 1, 2]).unwrap();
        assert!((r.get("FDeltaH").unwrap() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn doubling_reactivity_is_homogeneous() {
        let sp = spec(vec![2.0, 1.0, 0.5], vec![1.1, 0.9, 1.3]);
        let a = LoadingSurrogate::from_columns(sp.clone(), vec![1.0, 1.5, 0.7]);
        let b = LoadingSurrogate::from_columns(sp, vec![2.0, 3.0, 1.4]);
        let ra = a.evaluate(&[0, 1, 2]).unwrap();
        let rb = b.evaluate(&[0, 1, 2]).unwrap();
        assert!((rb.get("cycle_length").unwrap() - 2.0 * ra.get("cycle_length").unwrap()).abs() < 1e-9);
        assert!((rb.get("max_boron").unwrap() - 2.0 * ra.get("max_boron").unwrap()).abs() < 1e-9);
        assert!((rb.get("FDeltaH").unwrap() - ra.get("FDeltaH").unwrap()).abs() < 1e-12);
    }
}
