//! Turns a parsed configuration into something runnable.

use crate::annealing::{self, SaConfig};
use crate::error::{ConfigError, Error};
use crate::evaluators::{self, Evaluator, EvaluatorKind, Scorer};
use crate::genetic::{self, CrossoverVariant, GaConfig, MutationVariant};
use crate::problem::ProblemDefinition;
use crate::record::OptimizationRecord;
use crate::rng;

use super::config::{Algorithm, RunConfig};

pub enum Optimizer<'a> {
    Ga {
        def: &'a ProblemDefinition,
        config: &'a GaConfig,
        evaluator: Box<dyn Evaluator>,
    },
    Sa {
        def: &'a ProblemDefinition,
        config: &'a SaConfig,
        evaluator: Box<dyn Evaluator>,
    },
}

/// Operator/problem combinations that cannot keep solutions feasible.
pub fn check_compatibility(cfg: &RunConfig) -> Result<(), ConfigError> {
    let constrained = cfg.problem.group_constrained;
    if let Algorithm::Ga(ga) = &cfg.algorithm {
        match ga.crossover {
            CrossoverVariant::Grouped if !constrained => {
                return Err(ConfigError::new(
                    "optimization.reproducer",
                    "grouped crossover needs fixed groups (fixed_problem: true)",
                ))
            }
            CrossoverVariant::Free if constrained => {
                return Err(ConfigError::new(
                    "optimization.reproducer",
                    "free crossover would break the fixed group counts",
                ))
            }
            _ => {}
        }
    }
    for v in cfg.variants() {
        let bad = match v {
            MutationVariant::FreeReplace if constrained => {
                Some("free_replace would break the fixed group counts")
            }
            MutationVariant::WithinGroupReplace if !constrained => {
                Some("within_group_replace needs fixed groups (fixed_problem: true)")
            }
            _ => None,
        };
        if let Some(msg) = bad {
            return Err(ConfigError::new("optimization.mutation.method", msg));
        }
    }
    if matches!(cfg.problem.evaluator.kind, EvaluatorKind::Unspecified) {
        return Err(ConfigError::new("evaluator", "no evaluator configured"));
    }
    Ok(())
}

pub fn build_optimizer(cfg: &RunConfig) -> Result<Optimizer<'_>, ConfigError> {
    check_compatibility(cfg)?;
    let evaluator = evaluators::build(&cfg.problem)?;
    let def = &cfg.problem;
    Ok(match &cfg.algorithm {
        Algorithm::Ga(config) => Optimizer::Ga {
            def,
            config,
            evaluator,
        },
        Algorithm::Sa(config) => Optimizer::Sa {
            def,
            config,
            evaluator,
        },
    })
}

impl Optimizer<'_> {
    /// Runs with a fresh stream for `seed`. GA children are scored on
    /// `threads` workers; SA always runs serially.
    pub fn run(&self, seed: u64, threads: usize) -> Result<OptimizationRecord, Error> {
        let mut stream = rng::seeded(seed);
        match self {
            Optimizer::Ga {
                def,
                config,
                evaluator,
            } => {
                let scorer = Scorer::new(evaluator.as_ref(), &def.objectives);
                let pool = if threads > 1 {
                    Some(
                        rayon::ThreadPoolBuilder::new()
                            .num_threads(threads)
                            .build()
                            .map_err(|e| Error::Usage(crate::error::UsageError(format!("thread pool: {e}"))))?,
                    )
                } else {
                    None
                };
                genetic::run(def, config, &scorer, &mut stream, pool.as_ref())
            }
            Optimizer::Sa {
                def,
                config,
                evaluator,
            } => {
                let scorer = Scorer::new(evaluator.as_ref(), &def.objectives);
                annealing::run(def, config, &scorer, &mut stream)
            }
        }
    }

    pub fn evaluator(&self) -> &dyn Evaluator {
        match self {
            Optimizer::Ga { evaluator, .. } | Optimizer::Sa { evaluator, .. } => evaluator.as_ref(),
        }
    }
}
