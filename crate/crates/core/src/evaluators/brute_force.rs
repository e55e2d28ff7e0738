//! Exhaustive-enumeration oracle for desk-scale problems.

use std::ops::ControlFlow;

use crate::error::{Error, OracleCapExceeded};
use crate::objective::ObjectiveBreakdown;
use crate::problem::{ObjectiveSpec, ProblemDefinition, Solution};

use super::{Evaluator, Scorer};

pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Debug, Clone)]
pub struct BruteForceOptimum {
    pub solution: Solution,
    pub breakdown: ObjectiveBreakdown,
    pub feasible_count: u64,
}

impl BruteForceOptimum {
    pub fn fitness(&self) -> f64 {
        self.breakdown.total
    }
}

struct Walk<'a> {
    def: &'a ProblemDefinition,
    assignment: Vec<usize>,
    used: Vec<bool>,
    remaining: Vec<usize>,
}

impl<'a> Walk<'a> {
    fn new(def: &'a ProblemDefinition) -> Self {
        Self {
            def,
            assignment: Vec::with_capacity(def.n_variables),
            used: vec![false; def.n_decisions()],
            remaining: def.groups.iter().map(|g| g.capacity).collect(),
        }
    }

    /// Visits feasible assignments in lexicographic decision-index order.
    fn run<F>(&mut self, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let def = self.def;
        let pos = self.assignment.len();
        if pos == def.n_variables {
            if def.group_constrained && self.remaining.iter().any(|&r| r != 0) {
                return ControlFlow::Continue(());
            }
            return visit(&self.assignment);
        }
        for d in 0..def.n_decisions() {
            if !def.placeable(d, pos) {
                continue;
            }
            let decision = &def.decisions[d];
            if decision.unique && self.used[d] {
                continue;
            }
            let group = if def.group_constrained {
                match decision.group {
                    Some(g) if self.remaining[g] > 0 => Some(g),
                    _ => continue,
                }
            } else {
                None
            };
            let was_used = self.used[d];
            self.used[d] = true;
            if let Some(g) = group {
                self.remaining[g] -= 1;
            }
            self.assignment.push(d);
            let flow = self.run(visit);
            self.assignment.pop();
            if let Some(g) = group {
                self.remaining[g] += 1;
            }
            self.used[d] = was_used;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Product of per-position allowed-set sizes, an upper bound on the count.
pub fn upper_bound(def: &ProblemDefinition) -> f64 {
    (0..def.n_variables)
        .map(|p| def.allowed_at(p).len() as f64)
        .product()
}

/// Counts feasible assignments, stopping once the count exceeds `limit`.
pub fn count_feasible(def: &ProblemDefinition, limit: u64) -> u64 {
    let mut count = 0u64;
    let _ = Walk::new(def).run(&mut |_| {
        count += 1;
        if count > limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    count
}

/// Best feasible solution by enumeration; ties keep the first enumerated.
pub fn brute_force_optimum(
    def: &ProblemDefinition,
    evaluator: &dyn Evaluator,
    specs: &[ObjectiveSpec],
    cap: u64,
) -> Result<BruteForceOptimum, Error> {
    let count = count_feasible(def, cap);
    if count > cap {
        return Err(OracleCapExceeded {
            cap,
            estimate: upper_bound(def),
        }
        .into());
    }
    if count == 0 {
        return Err(Error::Infeasible("problem has no feasible solution".into()));
    }
    let scorer = Scorer::new(evaluator, specs);
    let mut best: Option<(Vec<usize>, ObjectiveBreakdown)> = None;
    let mut failure = None;
    let _ = Walk::new(def).run(&mut |a| match scorer.score(a) {
        Ok(scored) => {
            let better = best
                .as_ref()
                .map_or(true, |(_, b)| scored.breakdown.total > b.total);
            if better {
                best = Some((a.to_vec(), scored.breakdown));
            }
            ControlFlow::Continue(())
        }
        Err(e) => {
            failure = Some((a.to_vec(), e));
            ControlFlow::Break(())
        }
    });
    if let Some((a, source)) = failure {
        return Err(Error::Evaluation {
            solution: format!("{a:?}"),
            source,
        });
    }
    let (assignment, breakdown) = best.expect("at least one feasible solution");
    let mut solution = Solution::new(assignment);
    solution.fitness = Some(breakdown.total);
    Ok(BruteForceOptimum {
        solution,
        breakdown,
        feasible_count: count,
    })
}
