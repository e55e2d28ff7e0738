//! Solution evaluation: the map from an assignment to named objective values.
//!
//! Built-in evaluators are deterministic, pure functions of the assignment.
//! The lattice and loading-pattern surrogates are simple closed-form stand-ins
//! with documented formulas; they are not physics models. Real codes plug in
//! through [`external::ExternalCommand`].

pub mod brute_force;
pub mod external;
pub mod lattice;
pub mod loading;
pub mod tsp;

use rayon::prelude::*;

use crate::error::{ConfigError, EvaluationError};
use crate::objective::{compose_objective, ObjectiveBreakdown};
use crate::problem::{EvaluationResult, ObjectiveSpec, ProblemDefinition};

pub use brute_force::{brute_force_optimum, BruteForceOptimum, DEFAULT_CAP};
pub use external::{ExternalCommand, ExternalSpec};
pub use lattice::{LatticeSpec, LatticeSurrogate};
pub use loading::{LoadingSpec, LoadingSurrogate};
pub use tsp::{tour_length, TspEvaluator, TspSpec};

pub trait Evaluator: Send + Sync {
    fn evaluate(&self, assignment: &[usize]) -> Result<EvaluationResult, EvaluationError>;
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvaluatorKind {
    /// No evaluator configured; the problem can be validated but not run.
    Unspecified,
    Tsp(TspSpec),
    LatticeSurrogate(LatticeSpec),
    LoadingSurrogate(LoadingSpec),
    ExternalCommand(ExternalSpec),
}

impl EvaluatorKind {
    pub fn keyword(&self) -> &'static str {
        match self {
            EvaluatorKind::Unspecified => "unspecified",
            EvaluatorKind::Tsp(_) => "tsp",
            EvaluatorKind::LatticeSurrogate(_) => "lattice_surrogate",
            EvaluatorKind::LoadingSurrogate(_) => "loading_surrogate",
            EvaluatorKind::ExternalCommand(_) => "external_command",
        }
    }

    /// Output names of a built-in evaluator; `None` when open-ended.
    pub fn outputs(&self) -> Option<&'static [&'static str]> {
        match self {
            EvaluatorKind::Unspecified | EvaluatorKind::ExternalCommand(_) => None,
            EvaluatorKind::Tsp(_) => Some(&tsp::OUTPUTS),
            EvaluatorKind::LatticeSurrogate(_) => Some(&lattice::OUTPUTS),
            EvaluatorKind::LoadingSurrogate(_) => Some(&loading::OUTPUTS),
        }
    }
}

/// Evaluator kind plus an optional renaming of its outputs, so that a
/// surrogate emitting `Fq` can feed an objective named `PinPowerPeaking`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluatorSpec {
    pub kind: EvaluatorKind,
    /// (built-in output name, objective name) pairs.
    pub rename: Vec<(String, String)>,
}

impl EvaluatorSpec {
    pub fn new(kind: EvaluatorKind) -> Self {
        Self {
            kind,
            rename: Vec::new(),
        }
    }

    pub fn unspecified() -> Self {
        Self::new(EvaluatorKind::Unspecified)
    }

    pub fn renamed(mut self, from: &str, to: &str) -> Self {
        self.rename.push((from.to_string(), to.to_string()));
        self
    }

    fn output_names(&self) -> Option<Vec<String>> {
        self.kind.outputs().map(|outs| {
            outs.iter()
                .map(|o| {
                    self.rename
                        .iter()
                        .find(|(from, _)| from == o)
                        .map(|(_, to)| to.clone())
                        .unwrap_or_else(|| o.to_string())
                })
                .collect()
        })
    }

    /// Problems with the evaluator setup, as human-readable messages.
    pub fn check(&self, def: &ProblemDefinition) -> Vec<String> {
        let mut out = match &self.kind {
            EvaluatorKind::Unspecified | EvaluatorKind::ExternalCommand(_) => Vec::new(),
            EvaluatorKind::Tsp(s) => s.check(def),
            EvaluatorKind::LatticeSurrogate(s) => s.check(def),
            EvaluatorKind::LoadingSurrogate(s) => s.check(def),
        };
        if let Some(outs) = self.kind.outputs() {
            for (from, _) in &self.rename {
                if !outs.contains(&from.as_str()) {
                    out.push(format!(
                        "cannot rename `{from}`: {} produces {:?}",
                        self.kind.keyword(),
                        outs
                    ));
                }
            }
        }
        if let Some(names) = self.output_names() {
            for o in &def.objectives {
                if !names.contains(&o.name) {
                    out.push(format!(
                        "objective `{}` is not produced by the {} evaluator (outputs {:?})",
                        o.name,
                        self.kind.keyword(),
                        names
                    ));
                }
            }
        }
        out
    }
}

/// Instantiates the configured evaluator.
pub fn build(def: &ProblemDefinition) -> Result<Box<dyn Evaluator>, ConfigError> {
    let spec = &def.evaluator;
    let problems = spec.check(def);
    if let Some(first) = problems.first() {
        return Err(ConfigError::new("evaluator", first.clone()));
    }
    let inner: Box<dyn Evaluator> = match &spec.kind {
        EvaluatorKind::Unspecified => {
            return Err(ConfigError::new("evaluator", "no evaluator configured"))
        }
        EvaluatorKind::Tsp(s) => Box::new(TspEvaluator::new(def, s)?),
        EvaluatorKind::LatticeSurrogate(s) => Box::new(LatticeSurrogate::new(def, s)?),
        EvaluatorKind::LoadingSurrogate(s) => Box::new(LoadingSurrogate::new(def, s)?),
        EvaluatorKind::ExternalCommand(s) => Box::new(ExternalCommand::new(def, s)?),
    };
    if spec.rename.is_empty() {
        Ok(inner)
    } else {
        Ok(Box::new(Renamed {
            inner,
            rename: spec.rename.clone(),
        }))
    }
}

struct Renamed {
    inner: Box<dyn Evaluator>,
    rename: Vec<(String, String)>,
}

impl Evaluator for Renamed {
    fn evaluate(&self, assignment: &[usize]) -> Result<EvaluationResult, EvaluationError> {
        let mut r = self.inner.evaluate(assignment)?;
        for (from, to) in &self.rename {
            if let Some(v) = r.values.remove(from) {
                r.values.insert(to.clone(), v);
            }
        }
        Ok(r)
    }
}

/// An evaluation together with its composed objective.
#[derive(Debug, Clone, PartialEq)]
pub struct Scored {
    pub result: EvaluationResult,
    pub breakdown: ObjectiveBreakdown,
}

impl Scored {
    pub fn fitness(&self) -> f64 {
        self.breakdown.total
    }
}

/// Evaluator and objective specs bundled: assignment in, fitness out.
#[derive(Clone, Copy)]
pub struct Scorer<'a> {
    pub evaluator: &'a dyn Evaluator,
    pub specs: &'a [ObjectiveSpec],
}

impl<'a> Scorer<'a> {
    pub fn new(evaluator: &'a dyn Evaluator, specs: &'a [ObjectiveSpec]) -> Self {
        Self { evaluator, specs }
    }

    pub fn score(&self, assignment: &[usize]) -> Result<Scored, EvaluationError> {
        let result = self.evaluator.evaluate(assignment)?;
        let breakdown = compose_objective(&result, self.specs)?;
        Ok(Scored { result, breakdown })
    }

    /// Scores a batch, in parallel when a pool is given. Results stay in input
    /// order; the first failure (by index) is returned with its index.
    pub fn score_all(
        &self,
        assignments: &[&[usize]],
        pool: Option<&rayon::ThreadPool>,
    ) -> Result<Vec<Scored>, (usize, EvaluationError)> {
        let results: Vec<Result<Scored, EvaluationError>> = match pool {
            Some(pool) => pool.install(|| assignments.par_iter().map(|a| self.score(a)).collect()),
            None => assignments.iter().map(|a| self.score(a)).collect(),
        };
        results
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.map_err(|e| (i, e)))
            .collect()
    }
}

/// Attribute vector for `name`, one entry per decision.
pub(crate) fn attribute_column(
    def: &ProblemDefinition,
    name: &str,
) -> Result<Vec<f64>, ConfigError> {
    def.decisions
        .iter()
        .map(|d| {
            d.attributes.get(name).copied().ok_or_else(|| {
                ConfigError::new(
                    format!("genome.chromosomes.{}.attributes.{name}", d.id),
                    "missing attribute required by the evaluator",
                )
            })
        })
        .collect()
}

pub(crate) fn missing_attributes(def: &ProblemDefinition, names: &[&str]) -> Vec<String> {
    let mut out = Vec::new();
    for d in &def.decisions {
        for n in names {
            if !d.attributes.contains_key(*n) {
                out.push(format!("decision {} lacks attribute `{n}`", d.id));
            }
        }
    }
    out
}

pub(crate) fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    sum / n as f64
}
