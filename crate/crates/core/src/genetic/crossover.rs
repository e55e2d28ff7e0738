//! Crossover operators. Both return two children and leave the parents alone.

use rand::Rng;

use crate::problem::{ProblemDefinition, Solution};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossoverVariant {
    /// Uniform per-position exchange; may change group counts.
    Free,
    /// Exchange at a few positions, repaired so group counts stay fixed.
    Grouped,
}

impl CrossoverVariant {
    pub fn keyword(&self) -> &'static str {
        match self {
            CrossoverVariant::Free => "free",
            CrossoverVariant::Grouped => "grouped",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s.trim() {
            "free" => Some(CrossoverVariant::Free),
            "grouped" | "unique genes" | "unique_genes" => Some(CrossoverVariant::Grouped),
            _ => None,
        }
    }
}

/// Default count of exchange positions for grouped crossover.
pub fn default_positions(n_free: usize) -> usize {
    n_free.div_ceil(4)
}

fn contains_elsewhere(child: &[usize], d: usize, skip: usize) -> bool {
    child.iter().enumerate().any(|(i, &x)| i != skip && x == d)
}

/// Can `incoming` replace `child[p]` without duplicating a unique decision?
fn unique_ok(def: &ProblemDefinition, child: &[usize], p: usize, incoming: usize) -> bool {
    !def.decisions[incoming].unique || !contains_elsewhere(child, incoming, p)
}

/// Per free position, exchange the parents' decisions with probability 1/2.
/// Exchanges that would duplicate a unique decision in either child are skipped.
pub fn crossover_free<R: Rng + ?Sized>(
    a: &Solution,
    b: &Solution,
    def: &ProblemDefinition,
    rng: &mut R,
) -> (Solution, Solution) {
    let mut ca = a.assignment.clone();
    let mut cb = b.assignment.clone();
    for p in def.free_positions() {
        let u = rng::unit(rng);
        if u >= 0.5 {
            continue;
        }
        let (da, db) = (ca[p], cb[p]);
        if da == db || !unique_ok(def, &ca, p, db) || !unique_ok(def, &cb, p, da) {
            continue;
        }
        ca[p] = db;
        cb[p] = da;
    }
    (Solution::new(ca), Solution::new(cb))
}

/// Grouped crossover at the default number of positions.
pub fn crossover_grouped<R: Rng + ?Sized>(
    a: &Solution,
    b: &Solution,
    def: &ProblemDefinition,
    rng: &mut R,
) -> (Solution, Solution) {
    let k = default_positions(def.free_positions().len());
    crossover_grouped_with(a, b, def, k, rng)
}

/// Chooses `k` distinct free positions. At each one the children trade
/// decisions directly when both belong to the same group; otherwise each child
/// pulls the other's decision (or another member of its group) into place by
/// swapping two of its own positions, which keeps every group count intact.
pub fn crossover_grouped_with<R: Rng + ?Sized>(
    a: &Solution,
    b: &Solution,
    def: &ProblemDefinition,
    k: usize,
    rng: &mut R,
) -> (Solution, Solution) {
    let mut ca = a.assignment.clone();
    let mut cb = b.assignment.clone();
    let mut free = def.free_positions();
    let k = k.min(free.len());
    // partial Fisher-Yates: the first k entries become the sample
    for i in 0..k {
        let j = i + rng::index(rng, free.len() - i);
        free.swap(i, j);
    }
    for &p in &free[..k] {
        let (da, db) = (ca[p], cb[p]);
        if da == db {
            continue;
        }
        let same_group = def.decisions[da].group == def.decisions[db].group;
        if same_group
            && def.placeable(db, p)
            && def.placeable(da, p)
            && unique_ok(def, &ca, p, db)
            && unique_ok(def, &cb, p, da)
        {
            ca[p] = db;
            cb[p] = da;
            continue;
        }
        internal_swap(def, &mut ca, p, db, rng);
        internal_swap(def, &mut cb, p, da, rng);
    }
    (Solution::new(ca), Solution::new(cb))
}

/// Brings `incoming` (or, failing that, a member of its group) to position `p`
/// by swapping `child[p]` with another free position. Does nothing when no
/// permitted swap exists.
fn internal_swap<R: Rng + ?Sized>(def: &ProblemDefinition, child: &mut [usize], p: usize, incoming: usize, rng: &mut R) {
    let current = child[p];
    let permitted = |j: usize, child: &[usize]| {
        j != p && !def.is_pinned(j) && def.placeable(child[j], p) && def.placeable(current, j)
    };
    let exact: Vec<usize> = (0..child.len())
        .filter(|&j| child[j] == incoming && permitted(j, child))
        .collect();
    if let Some(&j) = exact.first() {
        child.swap(p, j);
        return;
    }
    let group = def.decisions[incoming].group;
    let similar: Vec<usize> = (0..child.len())
        .filter(|&j| child[j] != current && def.decisions[child[j]].group == group && permitted(j, child))
        .collect();
    if !similar.is_empty() {
        let j = *rng::pick(rng, &similar);
        child.swap(p, j);
    }
}
