use super::{LeafQuery, LearningError, SearchTree, SlabId};
use crate::distributions::SeededRng;

/// Mean number of steps a search spends before its range fits inside
/// `interval`, with targets drawn in proportion to `weights`.
///
/// `weights` has one entry per leaf slab. Entries outside `interval` are
/// ignored, which is what restricting a distribution to the interval means.
pub fn simulate_restricted_search(
    tree: &SearchTree,
    interval: (SlabId, SlabId),
    weights: &[f64],
    trials: usize,
    rng: &mut SeededRng,
) -> Result<f64, LearningError> {
    let (lo, hi) = interval;
    if lo > hi || hi >= weights.len() {
        return Err(LearningError::EmptySupport);
    }
    let mut support = Vec::new();
    let mut cumulative = Vec::new();
    let mut total = 0.0;
    for (j, &w) in weights.iter().enumerate().take(hi + 1).skip(lo) {
        if w > 0.0 {
            total += w;
            support.push(j);
            cumulative.push(total);
        }
    }
    if support.is_empty() || trials == 0 {
        return Err(LearningError::EmptySupport);
    }

    let mut steps = 0usize;
    for _ in 0..trials {
        let u = rng.next_f64() * total;
        let pick = cumulative
            .partition_point(|&c| c <= u)
            .min(support.len() - 1);
        steps += restricted_depth(tree, support[pick], interval);
    }
    Ok(steps as f64 / trials as f64)
}

/// Steps of one restricted search for leaf slab `target`.
pub fn restricted_depth(tree: &SearchTree, target: SlabId, (lo, hi): (SlabId, SlabId)) -> usize {
    let mut query = LeafQuery(target);
    let mut cursor = tree.start();
    let mut steps = 0;
    loop {
        let (a, b) = tree.range(cursor);
        if lo <= a && b <= hi {
            return steps;
        }
        cursor = tree.step(cursor, &mut query);
        steps += 1;
    }
}
