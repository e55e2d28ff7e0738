//! Mutation operators. Simulated annealing reuses them as perturbations.

use rand::Rng;

use crate::problem::{ProblemDefinition, Solution};
use crate::rng;

/// Redraw budget for the swap operator.
pub const SWAP_ATTEMPTS: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MutationVariant {
    /// Replace one decision with any other map-allowed decision.
    FreeReplace,
    /// Exchange the contents of two positions.
    SwapPosition,
    /// Replace one decision with another member of its group.
    WithinGroupReplace,
}

impl MutationVariant {
    pub const ALL: [MutationVariant; 3] = [
        MutationVariant::FreeReplace,
        MutationVariant::SwapPosition,
        MutationVariant::WithinGroupReplace,
    ];

    pub fn keyword(&self) -> &'static str {
        match self {
            MutationVariant::FreeReplace => "free_replace",
            MutationVariant::SwapPosition => "swap_position",
            MutationVariant::WithinGroupReplace => "within_group_replace",
        }
    }

    /// Accepts the canonical keywords plus the legacy method names
    /// `mutate_by_genome`, `mutate fixed` and `mutate_by_type`.
    pub fn from_keyword(s: &str) -> Option<Self> {
        match s.trim() {
            "free_replace" | "mutate_by_genome" => Some(MutationVariant::FreeReplace),
            "swap_position" | "mutate fixed" | "mutate_fixed" => Some(MutationVariant::SwapPosition),
            "within_group_replace" | "mutate_by_type" => Some(MutationVariant::WithinGroupReplace),
            _ => None,
        }
    }

    /// Whether the operator keeps group counts fixed.
    pub fn preserves_groups(&self) -> bool {
        !matches!(self, MutationVariant::FreeReplace)
    }

    pub fn apply<R: Rng + ?Sized>(&self, s: &Solution, def: &ProblemDefinition, rng: &mut R) -> Perturbed {
        match self {
            MutationVariant::FreeReplace => mutate_free(s, def, rng),
            MutationVariant::SwapPosition => mutate_swap(s, def, rng),
            MutationVariant::WithinGroupReplace => mutate_within_group(s, def, rng),
        }
    }
}

/// Outcome of a mutation; `noop` marks an operator that found nothing to do
/// and returned its input unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbed {
    pub solution: Solution,
    pub noop: bool,
}

impl Perturbed {
    fn unchanged(s: &Solution) -> Self {
        Self {
            solution: Solution::new(s.assignment.clone()),
            noop: true,
        }
    }

    fn changed(assignment: Vec<usize>) -> Self {
        Self {
            solution: Solution::new(assignment),
            noop: false,
        }
    }
}

fn usage(def: &ProblemDefinition, assignment: &[usize]) -> Vec<usize> {
    let mut used = vec![0usize; def.n_decisions()];
    for &d in assignment {
        used[d] += 1;
    }
    used
}

/// Replaces the decision at `pos` with one of `candidates`, picking a position
/// uniformly among those with at least one candidate.
fn replace_somewhere<R, F>(s: &Solution, def: &ProblemDefinition, rng: &mut R, candidates: F) -> Perturbed
where
    R: Rng + ?Sized,
    F: Fn(usize, usize) -> Vec<usize>,
{
    let options: Vec<(usize, Vec<usize>)> = def
        .free_positions()
        .into_iter()
        .map(|p| (p, candidates(p, s.assignment[p])))
        .filter(|(_, c)| !c.is_empty())
        .collect();
    if options.is_empty() {
        return Perturbed::unchanged(s);
    }
    let (pos, cands) = rng::pick(rng, &options);
    let mut a = s.assignment.clone();
    a[*pos] = *rng::pick(rng, cands);
    Perturbed::changed(a)
}

pub fn mutate_free<R: Rng + ?Sized>(s: &Solution, def: &ProblemDefinition, rng: &mut R) -> Perturbed {
    let used = usage(def, &s.assignment);
    replace_somewhere(s, def, rng, |pos, current| {
        (0..def.n_decisions())
            .filter(|&d| d != current && def.placeable(d, pos))
            .filter(|&d| !def.decisions[d].unique || used[d] == 0)
            .collect()
    })
}

pub fn mutate_within_group<R: Rng + ?Sized>(s: &Solution, def: &ProblemDefinition, rng: &mut R) -> Perturbed {
    let used = usage(def, &s.assignment);
    replace_somewhere(s, def, rng, |pos, current| {
        let Some(g) = def.decisions[current].group else {
            return Vec::new();
        };
        (0..def.n_decisions())
            .filter(|&d| d != current && def.decisions[d].group == Some(g))
            .filter(|&d| def.placeable(d, pos))
            .filter(|&d| !def.decisions[d].unique || used[d] == 0)
            .collect()
    })
}

pub fn mutate_swap<R: Rng + ?Sized>(s: &Solution, def: &ProblemDefinition, rng: &mut R) -> Perturbed {
    let free = def.free_positions();
    if free.len() < 2 {
        return Perturbed::unchanged(s);
    }
    let a = &s.assignment;
    for _ in 0..SWAP_ATTEMPTS {
        let i = free[rng::index(rng, free.len())];
        let mut j = free[rng::index(rng, free.len() - 1)];
        if j == i {
            j = free[free.len() - 1];
        }
        if def.placeable(a[j], i) && def.placeable(a[i], j) {
            let mut out = a.clone();
            out.swap(i, j);
            return Perturbed::changed(out);
        }
    }
    Perturbed::unchanged(s)
}
