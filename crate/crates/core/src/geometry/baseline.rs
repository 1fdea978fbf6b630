use serde::{Deserialize, Serialize};

use super::{dominates, sweep_order, Certificate, GeometryError, InputSet, Point};

/// Comparison counters for the classical algorithms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaselineStats {
    /// Point-coordinate comparisons outside of sorting (sweep steps,
    /// dominance tests).
    pub comparisons: u64,
    /// Comparisons spent sorting by x.
    pub sort_cost: u64,
}

impl BaselineStats {
    pub fn total(&self) -> u64 {
        self.comparisons + self.sort_cost
    }
}

/// Quadratic reference: every point is tested against every other one.
/// Non-maximal points get their smallest-index dominator.
pub fn brute_force_maxima(input: &InputSet) -> Result<Certificate, GeometryError> {
    brute_force_maxima_with_stats(input, &mut BaselineStats::default())
}

pub fn brute_force_maxima_with_stats(
    input: &InputSet,
    stats: &mut BaselineStats,
) -> Result<Certificate, GeometryError> {
    if input.is_empty() {
        return Err(GeometryError::EmptyInput);
    }
    let pts = input.points();
    let mut dominators = vec![None; pts.len()];
    let mut maxima = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let mut witness = None;
        for (j, q) in pts.iter().enumerate() {
            if i == j {
                continue;
            }
            stats.comparisons += 1;
            if dominates(q, p) {
                witness = Some(j);
                break;
            }
        }
        match witness {
            Some(j) => dominators[i] = Some(j),
            None => maxima.push(i),
        }
    }
    maxima.sort_by(|&a, &b| sweep_order(&pts[a], &pts[b]).then(a.cmp(&b)));
    Ok(Certificate { maxima, dominators })
}

/// Sorts by x and sweeps right to left keeping the highest point seen so far.
pub fn sort_scan_maxima(
    input: &InputSet,
    stats: &mut BaselineStats,
) -> Result<Certificate, GeometryError> {
    if input.is_empty() {
        return Err(GeometryError::EmptyInput);
    }
    let pts = input.points();
    let mut order: Vec<usize> = (0..pts.len()).collect();
    stats.sort_cost += sort_indices(pts, &mut order);

    let mut dominators = vec![None; pts.len()];
    let mut maxima = Vec::new();
    let mut best = None;
    for &i in order.iter().rev() {
        match sweep_visit(pts, &mut best, i, &mut stats.comparisons) {
            Some(j) => dominators[i] = Some(j),
            None => maxima.push(i),
        }
    }
    maxima.reverse();
    Ok(Certificate { maxima, dominators })
}

/// Stable top-down merge sort of point indices by [`sweep_order`].
/// Returns the number of point comparisons made.
///
/// The comparison count is part of the reported cost, so it must not depend
/// on the standard library's sorting internals.
pub(crate) fn sort_indices(pts: &[Point], order: &mut [usize]) -> u64 {
    let mut scratch = order.to_vec();
    merge_sort(pts, order, &mut scratch)
}

fn merge_sort(pts: &[Point], items: &mut [usize], scratch: &mut [usize]) -> u64 {
    let len = items.len();
    if len <= 1 {
        return 0;
    }
    let mid = len / 2;
    let mut count = merge_sort(pts, &mut items[..mid], &mut scratch[..mid]);
    count += merge_sort(pts, &mut items[mid..], &mut scratch[mid..]);

    scratch[..len].copy_from_slice(items);
    let (left, right) = scratch[..len].split_at(mid);
    let (mut i, mut j) = (0, 0);
    for slot in items.iter_mut() {
        let take_right = if i == left.len() {
            true
        } else if j == right.len() {
            false
        } else {
            count += 1;
            sweep_order(&pts[right[j]], &pts[left[i]]).is_lt()
        };
        if take_right {
            *slot = right[j];
            j += 1;
        } else {
            *slot = left[i];
            i += 1;
        }
    }
    count
}

/// One step of the right-to-left sweep.
///
/// `best` holds the highest point visited so far (rightmost among equals).
/// Every point visited earlier precedes `i` in reverse [`sweep_order`].
/// Returns the dominator of `i`, or `None` when `i` is maximal among the
/// visited points.
#[inline]
pub(crate) fn sweep_visit(
    pts: &[Point],
    best: &mut Option<usize>,
    i: usize,
    comparisons: &mut u64,
) -> Option<usize> {
    let p = pts[i];
    let Some(b) = *best else {
        *best = Some(i);
        return None;
    };
    let top = pts[b];
    *comparisons += 1;
    if p.y < top.y {
        return Some(b);
    }
    if p.y > top.y {
        *best = Some(i);
        return None;
    }
    *comparisons += 1;
    if top.x > p.x {
        Some(b)
    } else {
        None
    }
}
