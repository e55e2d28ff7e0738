//! Random initial solutions.
//!
//! Two branches: unconstrained problems fill positions in order, redrawing a
//! uniformly chosen decision until the map allows it. Group-constrained
//! problems repeatedly pick a random unfilled position, a random group with
//! remaining capacity and a random member decision, placing it only when the
//! map allows it and, for unique decisions, when it is still unused.

use rand::Rng;

use crate::error::GenerationError;
use crate::problem::{ProblemDefinition, Solution};
use crate::rng;

/// Consecutive failed placements tolerated before a restart (or failure in
/// the unconstrained branch).
pub const PLACEMENT_ATTEMPTS: usize = 1_000;
/// Restarts of the constrained branch before giving up.
pub const RESTARTS: usize = 100;

pub fn generate<R: Rng + ?Sized>(
    def: &ProblemDefinition,
    rng: &mut R,
) -> Result<Solution, GenerationError> {
    if def.group_constrained {
        generate_constrained(def, rng)
    } else {
        generate_unconstrained(def, rng)
    }
}

pub fn generate_unconstrained<R: Rng + ?Sized>(
    def: &ProblemDefinition,
    rng: &mut R,
) -> Result<Solution, GenerationError> {
    let n_dec = def.n_decisions();
    if n_dec == 0 {
        return Err(GenerationError::Precondition("problem has no decisions".into()));
    }
    let mut used = vec![false; n_dec];
    let mut assignment = Vec::with_capacity(def.n_variables);
    for pos in 0..def.n_variables {
        if let Some(&pinned) = def.fixed_positions.get(&pos) {
            used[pinned] = true;
            assignment.push(pinned);
            continue;
        }
        let mut placed = None;
        for _ in 0..PLACEMENT_ATTEMPTS {
            let d = rng::index(rng, n_dec);
            if def.decisions[d].unique && used[d] {
                continue;
            }
            if def.maps.get(d, pos) {
                placed = Some(d);
                break;
            }
        }
        let d = placed.ok_or(GenerationError::PositionExhausted { position: pos })?;
        used[d] = true;
        assignment.push(d);
    }
    Ok(Solution::new(assignment))
}

pub fn generate_constrained<R: Rng + ?Sized>(
    def: &ProblemDefinition,
    rng: &mut R,
) -> Result<Solution, GenerationError> {
    let members: Vec<Vec<usize>> = (0..def.groups.len())
        .map(|g| def.group_members(g))
        .collect();
    for _ in 0..RESTARTS {
        if let Some(sol) = try_constrained(def, &members, rng)? {
            return Ok(sol);
        }
    }
    Err(GenerationError::RestartsExhausted { restarts: RESTARTS })
}

/// One pass of the constrained branch; `Ok(None)` asks for a restart.
fn try_constrained<R: Rng + ?Sized>(
    def: &ProblemDefinition,
    members: &[Vec<usize>],
    rng: &mut R,
) -> Result<Option<Solution>, GenerationError> {
    let n = def.n_variables;
    let mut slots: Vec<Option<usize>> = vec![None; n];
    let mut remaining: Vec<usize> = def.groups.iter().map(|g| g.capacity).collect();
    let mut used = vec![false; def.n_decisions()];

    for (&pos, &d) in &def.fixed_positions {
        let g = def.decisions[d].group.ok_or_else(|| {
            GenerationError::Precondition(format!("pinned decision {} has no group", d))
        })?;
        if remaining[g] == 0 {
            return Err(GenerationError::Precondition(format!(
                "pinned decisions exceed capacity of group {}",
                def.groups[g].id
            )));
        }
        remaining[g] -= 1;
        used[d] = true;
        slots[pos] = Some(d);
    }

    let mut unfilled: Vec<usize> = (0..n).filter(|&p| slots[p].is_none()).collect();
    let mut failures = 0;
    while !unfilled.is_empty() {
        let k = rng::index(rng, unfilled.len());
        let pos = unfilled[k];
        let open: Vec<usize> = (0..remaining.len())
            .filter(|&g| remaining[g] > 0 && !members[g].is_empty())
            .collect();
        if open.is_empty() {
            return Ok(None);
        }
        let g = *rng::pick(rng, &open);
        let d = *rng::pick(rng, &members[g]);
        let ok = if def.decisions[d].unique {
            !used[d] && def.maps.get(d, pos)
        } else {
            def.maps.get(d, pos)
        };
        if ok {
            slots[pos] = Some(d);
            used[d] = true;
            remaining[g] -= 1;
            unfilled.swap_remove(k);
            failures = 0;
        } else {
            failures += 1;
            if failures >= PLACEMENT_ATTEMPTS {
                return Ok(None);
            }
        }
    }
    Ok(Some(Solution::new(
        slots.into_iter().map(|s| s.expect("filled")).collect(),
    )))
}

/// `size` independent draws from the branch matching the problem.
pub fn generate_population<R: Rng + ?Sized>(
    def: &ProblemDefinition,
    size: usize,
    rng: &mut R,
) -> Result<Vec<Solution>, GenerationError> {
    (0..size).map(|_| generate(def, rng)).collect()
}
