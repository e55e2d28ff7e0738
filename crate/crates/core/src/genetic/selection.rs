//! Mate choice and survivor selection.

use rand::Rng;

use crate::error::UsageError;
use crate::rng;

/// Number of positions holding the same decision.
pub fn similarity(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x == y).count()
}

/// Index (into `candidates`) of the candidate most similar to `population[target]`.
/// Ties go to the earliest candidate. `None` when there are no candidates.
pub fn partner_select(target: usize, candidates: &[usize], population: &[&[usize]]) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for (k, &c) in candidates.iter().enumerate() {
        let s = similarity(population[target], population[c]);
        if best.map_or(true, |(_, b)| s > b) {
            best = Some((k, s));
        }
    }
    best.map(|(k, _)| k)
}

/// Binary tournament: shuffle, pair consecutive entries, keep the fitter of
/// each pair (the first one on ties). Returns survivor indices into `fitness`.
pub fn tournament_select<R: Rng + ?Sized>(fitness: &[f64], rng: &mut R) -> Result<Vec<usize>, UsageError> {
    if fitness.len() % 2 != 0 {
        return Err(UsageError(format!(
            "tournament needs an even pool, got {}",
            fitness.len()
        )));
    }
    let mut order: Vec<usize> = (0..fitness.len()).collect();
    rng::shuffle(rng, &mut order);
    Ok(order
        .chunks_exact(2)
        .map(|pair| {
            let (i, j) = (pair[0], pair[1]);
            if fitness[j] > fitness[i] {
                j
            } else {
                i
            }
        })
        .collect())
}
