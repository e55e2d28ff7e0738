//! Run traces shared by both optimizers.

use crate::evaluators::Scored;
use crate::objective::ObjectiveBreakdown;
use crate::problem::EvaluationResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Methodology {
    GeneticAlgorithm,
    SimulatedAnnealing,
}

impl Methodology {
    pub fn keyword(&self) -> &'static str {
        match self {
            Methodology::GeneticAlgorithm => "genetic_algorithm",
            Methodology::SimulatedAnnealing => "simulated_annealing",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "genetic_algorithm" => Some(Methodology::GeneticAlgorithm),
            "simulated_annealing" => Some(Methodology::SimulatedAnnealing),
            _ => None,
        }
    }
}

/// One evaluated solution.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationRow {
    pub index: usize,
    /// GA generation (0 = initial population) or SA step (0 = initial solution).
    pub iteration: usize,
    /// Objective values in objective-spec order.
    pub values: Vec<f64>,
    pub fitness: f64,
    /// SA only: candidate became the current solution.
    pub accepted: Option<bool>,
    /// GA only: solution is in the population after its generation's selection.
    pub survivor: Option<bool>,
    /// Row set a new global best.
    pub best_so_far: bool,
    /// The perturbation that produced this row could not act.
    pub noop: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProgressPoint {
    pub iteration: usize,
    /// Evaluations performed up to and including this iteration.
    pub evaluations: usize,
    pub iteration_max: f64,
    pub best_so_far: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestSolution {
    pub assignment: Vec<usize>,
    pub result: EvaluationResult,
    pub breakdown: ObjectiveBreakdown,
    /// Trace row where it was first evaluated.
    pub row: usize,
}

impl BestSolution {
    pub fn fitness(&self) -> f64 {
        self.breakdown.total
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationRecord {
    pub methodology: Methodology,
    pub objective_names: Vec<String>,
    pub rows: Vec<EvaluationRow>,
    pub progress: Vec<ProgressPoint>,
    pub best: BestSolution,
}

impl OptimizationRecord {
    pub fn evaluations(&self) -> usize {
        self.rows.len()
    }

    pub fn best_fitness(&self) -> f64 {
        self.best.fitness()
    }
}

pub(crate) struct Recorder {
    names: Vec<String>,
    rows: Vec<EvaluationRow>,
    progress: Vec<ProgressPoint>,
    best: Option<BestSolution>,
}

impl Recorder {
    pub fn new(names: Vec<String>) -> Self {
        Self {
            names,
            rows: Vec::new(),
            progress: Vec::new(),
            best: None,
        }
    }

    /// Appends a row, updating the global best; returns the row index.
    pub fn push(&mut self, iteration: usize, assignment: &[usize], scored: &Scored, noop: bool) -> usize {
        let index = self.rows.len();
        let fitness = scored.fitness();
        let improved = self.best.as_ref().map_or(true, |b| fitness > b.fitness());
        if improved {
            self.best = Some(BestSolution {
                assignment: assignment.to_vec(),
                result: scored.result.clone(),
                breakdown: scored.breakdown.clone(),
                row: index,
            });
        }
        self.rows.push(EvaluationRow {
            index,
            iteration,
            values: scored.breakdown.contributions.iter().map(|c| c.value).collect(),
            fitness,
            accepted: None,
            survivor: None,
            best_so_far: improved,
            noop,
        });
        index
    }

    pub fn row_mut(&mut self, index: usize) -> &mut EvaluationRow {
        &mut self.rows[index]
    }

    pub fn best_fitness(&self) -> f64 {
        self.best.as_ref().map_or(f64::NEG_INFINITY, |b| b.fitness())
    }

    pub fn close_iteration(&mut self, iteration: usize, iteration_max: f64) {
        self.progress.push(ProgressPoint {
            iteration,
            evaluations: self.rows.len(),
            iteration_max,
            best_so_far: self.best_fitness(),
        });
    }

    pub fn finish(self, methodology: Methodology) -> OptimizationRecord {
        OptimizationRecord {
            methodology,
            objective_names: self.names,
            rows: self.rows,
            progress: self.progress,
            best: self.best.expect("at least one evaluation"),
        }
    }
}
