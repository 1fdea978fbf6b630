use serde::{Deserialize, Serialize};

use super::{SlabId, SlabStructure, TrainingConfig};
use crate::distributions::{sample_unchecked, ScenarioSpec, SeededRng};

/// Per-point leaf-slab hit counts over the training rounds.
///
/// Each row keeps its hits sorted by slab, which doubles as the prefix-sum
/// array: the count of a slab range is the width of its span in the row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTable {
    rounds: u32,
    num_slabs: usize,
    rows: Vec<Vec<u32>>,
}

impl FrequencyTable {
    /// Builds a table from dense counts; every row must sum to `rounds`.
    pub fn from_counts(rounds: u32, counts: &[Vec<u32>]) -> Self {
        let num_slabs = counts.first().map_or(0, Vec::len);
        let rows = counts
            .iter()
            .map(|row| {
                assert_eq!(row.len(), num_slabs, "ragged count rows");
                assert_eq!(
                    row.iter().sum::<u32>(),
                    rounds,
                    "row does not sum to rounds"
                );
                row.iter()
                    .enumerate()
                    .flat_map(|(j, &c)| std::iter::repeat_n(j as u32, c as usize))
                    .collect()
            })
            .collect();
        FrequencyTable {
            rounds,
            num_slabs,
            rows,
        }
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    pub fn num_points(&self) -> usize {
        self.rows.len()
    }

    pub fn num_slabs(&self) -> usize {
        self.num_slabs
    }

    /// `N(S)` for point `i` and the slab made of leaf slabs `lo..=hi`.
    #[inline]
    pub fn range_count(&self, i: usize, lo: SlabId, hi: SlabId) -> u32 {
        if lo > hi {
            return 0;
        }
        let row = &self.rows[i];
        let start = row.partition_point(|&s| (s as usize) < lo);
        let end = row.partition_point(|&s| (s as usize) <= hi);
        (end - start) as u32
    }

    pub fn count(&self, i: usize, j: SlabId) -> u32 {
        self.range_count(i, j, j)
    }

    /// Smallest `j` in `lo..=hi` with `N([lo, j]) >= target`.
    pub(crate) fn prefix_reaching(&self, i: usize, lo: SlabId, target: u32) -> SlabId {
        let row = &self.rows[i];
        let start = row.partition_point(|&s| (s as usize) < lo);
        let at = start + target.max(1) as usize - 1;
        row[at] as usize
    }

    /// Nonzero `(slab, count)` pairs of row `i` in slab order.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (SlabId, u32)> + '_ {
        let row = &self.rows[i];
        let mut pos = 0;
        std::iter::from_fn(move || {
            let &slab = row.get(pos)?;
            let end = pos + row[pos..].partition_point(|&s| s == slab);
            let count = (end - pos) as u32;
            pos = end;
            Some((slab as usize, count))
        })
    }

    /// Empirical probability `q(i, lo..=hi)`.
    pub fn probability(&self, i: usize, lo: SlabId, hi: SlabId) -> f64 {
        self.range_count(i, lo, hi) as f64 / self.rounds as f64
    }
}

/// Samples `cfg.tree_rounds(n)` fresh inputs and records the leaf slab of
/// every point in each of them.
pub fn collect_frequencies(
    spec: &ScenarioSpec,
    slabs: &SlabStructure,
    cfg: &TrainingConfig,
    rng: &mut SeededRng,
) -> FrequencyTable {
    collect_rounds(spec, slabs, cfg.tree_rounds(spec.n) as u32, rng)
}

pub(crate) fn collect_rounds(
    spec: &ScenarioSpec,
    slabs: &SlabStructure,
    rounds: u32,
    rng: &mut SeededRng,
) -> FrequencyTable {
    let mut rows: Vec<Vec<u32>> = vec![Vec::with_capacity(rounds as usize); spec.n];
    for _ in 0..rounds {
        let input = sample_unchecked(spec, rng);
        for (row, p) in rows.iter_mut().zip(input.points()) {
            row.push(slabs.locate(p.x) as u32);
        }
    }
    for row in &mut rows {
        row.sort_unstable();
    }
    FrequencyTable {
        rounds,
        num_slabs: slabs.num_slabs(),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{build_scenario, PointDistribution, ScenarioKind, ScenarioParams};
    use crate::geometry::Point;

    #[test]
    fn range_counts_from_dense() {
        let t = FrequencyTable::from_counts(16, &[vec![4, 4, 8], vec![0, 16, 0]]);
        assert_eq!(t.range_count(0, 0, 2), 16);
        assert_eq!(t.range_count(0, 1, 2), 12);
        assert_eq!(t.count(0, 2), 8);
        assert_eq!(t.range_count(1, 0, 0), 0);
        assert_eq!(t.range_count(1, 2, 1), 0);
        assert_eq!(t.row(0).collect::<Vec<_>>(), vec![(0, 4), (1, 4), (2, 8)]);
        assert_eq!(t.row(1).collect::<Vec<_>>(), vec![(1, 16)]);
        assert_eq!(t.prefix_reaching(0, 0, 8), 1);
        assert_eq!(t.prefix_reaching(0, 1, 5), 2);
    }

    #[test]
    fn point_mass_concentrates() {
        let slabs = SlabStructure::new(vec![0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
        let spec = ScenarioSpec::new(
            "pm",
            vec![PointDistribution::point_mass(Point::new(2.5, 0.0)); 2],
        )
        .unwrap();
        let cfg = TrainingConfig::default();
        let t = collect_frequencies(&spec, &slabs, &cfg, &mut SeededRng::new(1));
        for i in 0..2 {
            assert_eq!(t.row(i).collect::<Vec<_>>(), vec![(3, t.rounds())]);
        }
    }

    #[test]
    fn rows_conserve_rounds_and_replay() {
        let spec = build_scenario(ScenarioKind::TwoLevel, 32, &ScenarioParams::default()).unwrap();
        let slabs = SlabStructure::new((1..40).map(|k| k as f64 / 20.0).collect()).unwrap();
        let cfg = TrainingConfig::default();
        let t = collect_frequencies(&spec, &slabs, &cfg, &mut SeededRng::new(4));
        assert_eq!(t.rounds() as usize, cfg.tree_rounds(32));
        for i in 0..32 {
            assert_eq!(t.row(i).map(|(_, c)| c).sum::<u32>(), t.rounds());
            assert_eq!(t.range_count(i, 0, slabs.num_slabs() - 1), t.rounds());
        }
        let again = collect_frequencies(&spec, &slabs, &cfg, &mut SeededRng::new(4));
        assert_eq!(t, again);
    }
}
