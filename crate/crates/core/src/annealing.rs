//! Simulated annealing over a single current solution.

use rand::Rng;

use crate::error::{Error, UsageError};
use crate::evaluators::Scorer;
use crate::generation::generate;
use crate::genetic::MutationVariant;
use crate::problem::ProblemDefinition;
use crate::record::{Methodology, OptimizationRecord, Recorder};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct SaConfig {
    pub t_initial: f64,
    /// Geometric cooling factor applied once per step.
    pub alpha: f64,
    pub n_steps: usize,
    /// Perturbation operators; one is drawn uniformly at each step.
    pub perturbation_variants: Vec<MutationVariant>,
}

impl SaConfig {
    pub fn check(&self) -> Result<(), UsageError> {
        if !(self.t_initial > 0.0 && self.t_initial.is_finite()) {
            return Err(UsageError(format!("initial_temperature must be positive, got {}", self.t_initial)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(UsageError(format!("cooling_rate must lie in (0, 1), got {}", self.alpha)));
        }
        if self.n_steps == 0 {
            return Err(UsageError("number_of_steps must be positive".into()));
        }
        if self.perturbation_variants.is_empty() {
            return Err(UsageError("no perturbation method configured".into()));
        }
        Ok(())
    }
}

/// Probability of moving from `f_current` to `f_new` at temperature `t`.
/// Improvements are always taken; ties and worse moves follow the Boltzmann
/// factor.
pub fn acceptance_probability(f_current: f64, f_new: f64, t: f64) -> Result<f64, UsageError> {
    if !(t > 0.0) {
        return Err(UsageError(format!("temperature must be positive, got {t}")));
    }
    if f_new > f_current {
        Ok(1.0)
    } else {
        Ok((-(f_current - f_new) / t).exp())
    }
}

pub fn cool(t: f64, alpha: f64) -> f64 {
    alpha * t
}

/// Runs SA for `n_steps` steps after evaluating a random initial solution.
pub fn run<R: Rng + ?Sized>(
    def: &ProblemDefinition,
    config: &SaConfig,
    scorer: &Scorer,
    rng: &mut R,
) -> Result<OptimizationRecord, Error> {
    config.check()?;
    let names = def.objectives.iter().map(|o| o.name.clone()).collect();
    let mut rec = Recorder::new(names);
    let evaluate = |a: &[usize]| {
        scorer.score(a).map_err(|source| Error::Evaluation {
            solution: def.describe(a),
            source,
        })
    };

    let mut current = generate(def, rng)?;
    let scored = evaluate(&current.assignment)?;
    let mut f_current = scored.fitness();
    let row = rec.push(0, &current.assignment, &scored, false);
    rec.row_mut(row).accepted = Some(true);
    rec.close_iteration(0, f_current);

    let mut t = config.t_initial;
    for step in 1..=config.n_steps {
        let variant = rng::pick(rng, &config.perturbation_variants);
        let out = variant.apply(&current, def, rng);
        let scored = evaluate(&out.solution.assignment)?;
        let f_new = scored.fitness();
        let p = acceptance_probability(f_current, f_new, t)?;
        let accepted = rng::unit(rng) < p;
        let row = rec.push(step, &out.solution.assignment, &scored, out.noop);
        rec.row_mut(row).accepted = Some(accepted);
        if accepted {
            current = out.solution;
            f_current = f_new;
        }
        rec.close_iteration(step, f_new);
        t = cool(t, config.alpha);
    }
    Ok(rec.finish(Methodology::SimulatedAnnealing))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn improvement_always_accepted() {
        assert_eq!(acceptance_probability(1.0, 2.0, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn boltzmann_factor() {
        let p = acceptance_probability(10.0, 9.0, 20.0).unwrap();
        assert!((p - 0.951229).abs() < 1e-6);
        assert_eq!(acceptance_probability(1.0, 1.0, 3.0).unwrap(), 1.0);
    }

    #[test]
    fn nonpositive_temperature_rejected() {
        assert!(acceptance_probability(1.0, 0.0, 0.0).is_err());
        assert!(acceptance_probability(1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn cooling_is_geometric() {
        let mut t = 100.0;
        for _ in 0..10 {
            t = cool(t, 0.9);
        }
        assert!((t - 100.0 * 0.9f64.powi(10)).abs() < 1e-9);
    }
}
