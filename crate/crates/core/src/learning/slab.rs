use serde::{Deserialize, Serialize};

use super::LearningError;
use crate::geometry::InputSet;

/// Leaf-slab index.
pub type SlabId = usize;

/// Vertical lines `b_0 < b_1 < ... < b_{m-1}` splitting the plane into
/// `m + 1` leaf slabs. Leaf slab `j` is `[b_{j-1}, b_j)`, with slab 0
/// unbounded on the left and slab `m` unbounded on the right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SlabStructure {
    boundaries: Vec<f64>,
}

impl SlabStructure {
    pub fn new(boundaries: Vec<f64>) -> Result<Self, LearningError> {
        if boundaries.iter().any(|b| !b.is_finite()) {
            return Err(LearningError::InvalidBoundaries(
                "non-finite boundary".into(),
            ));
        }
        if boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LearningError::InvalidBoundaries(
                "boundaries must be strictly increasing".into(),
            ));
        }
        Ok(SlabStructure { boundaries })
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    /// Number of leaf slabs, `|S|`.
    pub fn num_slabs(&self) -> usize {
        self.boundaries.len() + 1
    }

    /// Leaf slab containing `x`: the number of boundaries `<= x`.
    #[inline]
    pub fn locate(&self, x: f64) -> SlabId {
        self.boundaries.partition_point(|&b| b <= x)
    }

    /// Left boundary of leaf slab `j` (`-inf` for slab 0).
    #[inline]
    pub fn left_of(&self, j: SlabId) -> f64 {
        if j == 0 {
            f64::NEG_INFINITY
        } else {
            self.boundaries[j - 1]
        }
    }

    /// Right boundary of leaf slab `j` (`+inf` for the last slab).
    #[inline]
    pub fn right_of(&self, j: SlabId) -> f64 {
        self.boundaries.get(j).copied().unwrap_or(f64::INFINITY)
    }
}

impl TryFrom<Vec<f64>> for SlabStructure {
    type Error = LearningError;

    fn try_from(boundaries: Vec<f64>) -> Result<Self, Self::Error> {
        SlabStructure::new(boundaries)
    }
}

impl From<SlabStructure> for Vec<f64> {
    fn from(s: SlabStructure) -> Self {
        s.boundaries
    }
}

/// Number of training inputs the slab construction consumes: `ceil(log2 n)`,
/// at least one.
pub fn slab_rounds(n: usize) -> usize {
    ceil_log2(n).max(1)
}

pub(crate) fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Merges the first `k = ceil(log2 n)` inputs, sorts their `k n`
/// x-coordinates and keeps every `k`-th value as a boundary.
pub fn build_slab_structure(training: &[InputSet]) -> Result<SlabStructure, LearningError> {
    let n = training.first().map(InputSet::len).unwrap_or(0);
    if n == 0 {
        return Err(LearningError::NotEnoughInputs { needed: 1, got: 0 });
    }
    let k = slab_rounds(n);
    if training.len() < k {
        return Err(LearningError::NotEnoughInputs {
            needed: k,
            got: training.len(),
        });
    }
    let used = &training[..k];
    if let Some(bad) = used.iter().find(|p| p.len() != n) {
        return Err(LearningError::SizeMismatch {
            expected: n,
            got: bad.len(),
        });
    }
    let mut xs: Vec<f64> = used
        .iter()
        .flat_map(|p| p.points().iter().map(|q| q.x))
        .collect();
    xs.sort_unstable_by(f64::total_cmp);
    let mut boundaries: Vec<f64> = xs.iter().step_by(k).copied().collect();
    boundaries.dedup();
    SlabStructure::new(boundaries)
}
