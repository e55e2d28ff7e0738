//! Steady-population genetic algorithm.
//!
//! Each generation shuffles the population, mutates a fraction `R` of it and
//! mates the rest (each breeder with its most similar remaining partner). The
//! `P` children are evaluated, then a binary tournament over parents and
//! children picks the next `P`. `R` follows a geometric schedule from
//! `r_initial` to `r_final`.

pub mod crossover;
pub mod mutation;
pub mod schedule;
pub mod selection;

use rand::Rng;

use crate::error::{Error, UsageError};
use crate::evaluators::{Scored, Scorer};
use crate::generation::generate_population;
use crate::problem::{ProblemDefinition, Solution};
use crate::record::{Methodology, OptimizationRecord, Recorder};
use crate::rng;

pub use crossover::CrossoverVariant;
pub use mutation::{MutationVariant, Perturbed};

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub n_generations: usize,
    pub r_initial: f64,
    pub r_final: f64,
    pub crossover: CrossoverVariant,
    /// Exchange positions for grouped crossover; `None` uses a quarter of the
    /// free positions, rounded up.
    pub crossover_positions: Option<usize>,
    pub mutation_variants: Vec<MutationVariant>,
}

impl GaConfig {
    pub fn check(&self) -> Result<(), UsageError> {
        if self.population_size < 2 {
            return Err(UsageError("population_size must be at least 2".into()));
        }
        for (name, r) in [("initial_rate", self.r_initial), ("final_rate", self.r_final)] {
            if !(0.0..1.0).contains(&r) {
                return Err(UsageError(format!("{name} must lie in [0, 1), got {r}")));
            }
        }
        if self.n_generations == 0 {
            return Err(UsageError("number_of_generations must be positive".into()));
        }
        if self.mutation_variants.is_empty() {
            return Err(UsageError("no mutation method configured".into()));
        }
        if self.crossover_positions == Some(0) {
            return Err(UsageError("crossover_positions must be positive".into()));
        }
        Ok(())
    }

    fn next_rate(&self, r: f64) -> f64 {
        schedule::mutation_rate_update(r, self.r_initial, self.r_final, self.n_generations)
    }
}

fn score_batch(
    def: &ProblemDefinition,
    scorer: &Scorer,
    batch: &[Solution],
    pool: Option<&rayon::ThreadPool>,
) -> Result<Vec<Scored>, Error> {
    let refs: Vec<&[usize]> = batch.iter().map(|s| s.assignment.as_slice()).collect();
    scorer.score_all(&refs, pool).map_err(|(i, source)| Error::Evaluation {
        solution: def.describe(&batch[i].assignment),
        source,
    })
}

fn with_score(mut s: Solution, scored: &Scored) -> Solution {
    s.evaluation = Some(scored.result.clone());
    s.fitness = Some(scored.fitness());
    s
}

/// Runs the GA. Performs `population_size * (n_generations + 1)` evaluations.
pub fn run<R: Rng + ?Sized>(
    def: &ProblemDefinition,
    config: &GaConfig,
    scorer: &Scorer,
    rng: &mut R,
    pool: Option<&rayon::ThreadPool>,
) -> Result<OptimizationRecord, Error> {
    config.check()?;
    let p = config.population_size;
    let names = def.objectives.iter().map(|o| o.name.clone()).collect();
    let mut rec = Recorder::new(names);

    let initial = generate_population(def, p, rng)?;
    let scored = score_batch(def, scorer, &initial, pool)?;
    let mut population = Vec::with_capacity(p);
    let mut gen_max = f64::NEG_INFINITY;
    for (s, sc) in initial.into_iter().zip(&scored) {
        let row = rec.push(0, &s.assignment, sc, false);
        rec.row_mut(row).survivor = Some(true);
        gen_max = gen_max.max(sc.fitness());
        population.push(with_score(s, sc));
    }
    rec.close_iteration(0, gen_max);

    let mut rate = config.r_initial;
    for generation in 1..=config.n_generations {
        let (children, noops) = reproduce(def, config, &population, rate, rng);
        let scored = score_batch(def, scorer, &children, pool)?;
        let mut rows = Vec::with_capacity(p);
        let mut gen_max = f64::NEG_INFINITY;
        let mut pool_solutions = std::mem::take(&mut population);
        for ((s, sc), noop) in children.into_iter().zip(&scored).zip(noops) {
            rows.push(rec.push(generation, &s.assignment, sc, noop));
            gen_max = gen_max.max(sc.fitness());
            pool_solutions.push(with_score(s, sc));
        }
        let fitness: Vec<f64> = pool_solutions
            .iter()
            .map(|s| s.fitness.expect("scored"))
            .collect();
        let mut survivors = selection::tournament_select(&fitness, rng)?;
        survivors.sort_unstable();
        for (k, &row) in rows.iter().enumerate() {
            rec.row_mut(row).survivor = Some(survivors.binary_search(&(p + k)).is_ok());
        }
        let mut keep = vec![false; pool_solutions.len()];
        for &i in &survivors {
            keep[i] = true;
        }
        population = pool_solutions
            .into_iter()
            .zip(keep)
            .filter_map(|(s, k)| k.then_some(s))
            .collect();
        rec.close_iteration(generation, gen_max);
        rate = config.next_rate(rate);
    }
    Ok(rec.finish(Methodology::GeneticAlgorithm))
}

/// Produces `P` children from the current population, plus a no-op flag
/// for each one.
pub fn reproduce<R: Rng + ?Sized>(
    def: &ProblemDefinition,
    config: &GaConfig,
    population: &[Solution],
    rate: f64,
    rng: &mut R,
) -> (Vec<Solution>, Vec<bool>) {
    let p = population.len();
    let mut order: Vec<usize> = (0..p).collect();
    rng::shuffle(rng, &mut order);
    let m = ((rate * p as f64).round() as usize).min(p);

    let mut children = Vec::with_capacity(p + 1);
    let mut noops = Vec::with_capacity(p + 1);
    for &i in &order[..m] {
        let variant = rng::pick(rng, &config.mutation_variants);
        let out = variant.apply(&population[i], def, rng);
        children.push(out.solution);
        noops.push(out.noop);
    }

    let genomes: Vec<&[usize]> = population.iter().map(|s| s.assignment.as_slice()).collect();
    let mut rest: Vec<usize> = order[m..].to_vec();
    while !rest.is_empty() {
        let first = rest.remove(0);
        let partner = match selection::partner_select(first, &rest, &genomes) {
            Some(k) => rest.remove(k),
            None => {
                let others: Vec<usize> = (0..p).filter(|&j| j != first).collect();
                selection::partner_select(first, &others, &genomes).map_or(first, |k| others[k])
            }
        };
        let (a, b) = (&population[first], &population[partner]);
        let (x, y) = match config.crossover {
            CrossoverVariant::Free => crossover::crossover_free(a, b, def, rng),
            CrossoverVariant::Grouped => {
                let k = config
                    .crossover_positions
                    .unwrap_or_else(|| crossover::default_positions(def.free_positions().len()));
                crossover::crossover_grouped_with(a, b, def, k, rng)
            }
        };
        children.push(x);
        children.push(y);
        noops.push(false);
        noops.push(false);
    }
    children.truncate(p);
    noops.truncate(p);
    (children, noops)
}
