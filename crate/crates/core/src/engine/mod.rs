//! Limiting phase.
//!
//! Every point walks down its own search tree one step at a time. The point
//! whose current slab reaches furthest right always moves next, so the
//! slabs get resolved from right to left. Once a slab is done, the points
//! located in it are swept to extend the staircase of maxima found so far.
//! Any point dominated by the leftmost known maximum is dropped as soon as
//! it is picked, however coarse its search still is.

mod entropy;
mod queue;

pub use entropy::{entropy_proxy, EntropyReport, ZeroRounds};
pub use queue::{BucketQueue, QueueError};

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::baseline::{sort_indices, sweep_visit};
use crate::geometry::{dominates, sweep_order, Certificate, InputSet, Point};
use crate::learning::{Cursor, SearchTree, SlabId, SlabStructure, TrainedModel, XQuery};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("model was trained for {model} points but the input has {input}")]
    SizeMismatch { model: usize, input: usize },
    #[error("model is inconsistent: {0}")]
    BadModel(String),
    #[error(
        "maxima right of leaf slab {lambda_hat} are not settled: expected {expected} in sorted order, have {found}"
    )]
    FrontierInvariant {
        lambda_hat: SlabId,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Queue(#[from] QueueError),
}

/// Cost counters of one limiting-phase run.
///
/// A tree step costs up to two coordinate comparisons (recorded in
/// `tree_comparisons`), a dominance check two. Sorting inside Update is
/// counted separately in `update_comparisons`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub tree_steps: u64,
    pub tree_comparisons: u64,
    pub dominance_checks: u64,
    pub decrease_keys: u64,
    pub find_max_calls: u64,
    /// Buckets skipped by the queue cursor.
    pub find_max_scans: u64,
    pub update_calls: u64,
    /// Points sorted by Update, summed over calls.
    pub update_sorted_points: u64,
    /// Comparisons spent sorting and sweeping inside Update.
    pub update_comparisons: u64,
    pub wall_time_ns: u64,
}

/// Read-only view of what the engine needs from a trained model.
#[derive(Debug, Clone, Copy)]
pub struct SearchModel<'a> {
    pub slabs: &'a SlabStructure,
    pub trees: &'a [SearchTree],
}

impl<'a> SearchModel<'a> {
    pub fn new(slabs: &'a SlabStructure, trees: &'a [SearchTree]) -> Self {
        SearchModel { slabs, trees }
    }
}

impl<'a> From<&'a TrainedModel> for SearchModel<'a> {
    fn from(model: &'a TrainedModel) -> Self {
        SearchModel {
            slabs: &model.slabs,
            trees: &model.trees,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Before every Update, compare the maxima found so far with a sweep
    /// over the points right of the current slab.
    pub check_frontier: bool,
}

/// Maxima of every suffix of the x-order, for checking the frontier.
struct FrontierOracle {
    /// Maxima of the whole input in right-to-left sweep order.
    sweep_maxima: Vec<Point>,
}

impl FrontierOracle {
    fn new(pts: &[Point]) -> Self {
        let mut order: Vec<usize> = (0..pts.len()).collect();
        order.sort_by(|&a, &b| sweep_order(&pts[a], &pts[b]));
        let mut best = None;
        let mut unused = 0;
        let sweep_maxima = order
            .iter()
            .rev()
            .filter(|&&i| sweep_visit(pts, &mut best, i, &mut unused).is_none())
            .map(|&i| pts[i])
            .collect();
        FrontierOracle { sweep_maxima }
    }

    /// The maxima among points with `x >= threshold`, right to left.
    fn right_of(&self, threshold: f64) -> &[Point] {
        let r = self.sweep_maxima.partition_point(|p| p.x >= threshold);
        &self.sweep_maxima[..r]
    }
}

/// Variables of the limiting phase for one input.
pub struct EngineState<'a> {
    model: SearchModel<'a>,
    input: &'a InputSet,
    queue: BucketQueue,
    cursors: Vec<Cursor>,
    /// Leaf slab currently being completed.
    lambda_hat: SlabId,
    /// Points located in `lambda_hat`, waiting for Update.
    buffer: Vec<usize>,
    /// Maxima found so far, rightmost first.
    maxima_rev: Vec<usize>,
    dominators: Vec<Option<usize>>,
    oracle: Option<FrontierOracle>,
}

impl<'a> EngineState<'a> {
    pub fn new(
        model: SearchModel<'a>,
        input: &'a InputSet,
        opts: RunOptions,
    ) -> Result<Self, EngineError> {
        let n = input.len();
        if model.trees.len() != n {
            return Err(EngineError::SizeMismatch {
                model: model.trees.len(),
                input: n,
            });
        }
        let top = model.slabs.num_slabs() - 1;
        if let Some(t) = model.trees.iter().find(|t| t.root_range() != (0, top)) {
            return Err(EngineError::BadModel(format!(
                "tree {} does not span all leaf slabs",
                t.point()
            )));
        }
        let mut queue = BucketQueue::new(top + 1, n);
        let mut cursors = Vec::with_capacity(n);
        for (i, tree) in model.trees.iter().enumerate() {
            queue.insert(i, top)?;
            cursors.push(tree.start());
        }
        Ok(EngineState {
            model,
            input,
            queue,
            cursors,
            lambda_hat: top,
            buffer: Vec::new(),
            maxima_rev: Vec::new(),
            dominators: vec![None; n],
            oracle: opts
                .check_frontier
                .then(|| FrontierOracle::new(input.points())),
        })
    }

    pub fn lambda_hat(&self) -> SlabId {
        self.lambda_hat
    }

    /// Leftmost maximum found so far.
    pub fn p_hat(&self) -> Option<usize> {
        self.maxima_rev.last().copied()
    }

    pub fn buffer(&self) -> &[usize] {
        &self.buffer
    }

    pub fn queue(&self) -> &BucketQueue {
        &self.queue
    }

    pub fn cursor(&self, i: usize) -> Cursor {
        self.cursors[i]
    }

    /// Maxima found so far, left to right.
    pub fn maxima(&self) -> Vec<usize> {
        self.maxima_rev.iter().rev().copied().collect()
    }

    pub fn dominator(&self, i: usize) -> Option<usize> {
        self.dominators[i]
    }

    /// One iteration of Search. Returns the key that was at the top of the
    /// queue, or `None` once the queue is empty.
    pub fn search_step(&mut self, stats: &mut RunStats) -> Result<Option<SlabId>, EngineError> {
        let Some((i, m)) = self.queue.find_max() else {
            return Ok(None);
        };
        stats.find_max_calls += 1;
        if m < self.lambda_hat {
            self.update_step(Some(m), stats)?;
        }

        let pts = self.input.points();
        if let Some(h) = self.p_hat() {
            stats.dominance_checks += 1;
            if dominates(&pts[h], &pts[i]) {
                self.queue.delete(i)?;
                self.dominators[i] = Some(h);
                return Ok(Some(m));
            }
        }

        let tree = &self.model.trees[i];
        let next = match self.cursors[i] {
            Cursor::Located(j) => {
                debug_assert_eq!(j as usize, self.lambda_hat);
                self.queue.delete(i)?;
                self.buffer.push(i);
                return Ok(Some(m));
            }
            cursor => {
                let mut query = XQuery::new(self.model.slabs, pts[i].x);
                let next = tree.step(cursor, &mut query);
                stats.tree_steps += 1;
                stats.tree_comparisons += query.comparisons;
                next
            }
        };
        self.cursors[i] = next;
        let (_, hi) = tree.range(next);
        if hi < m {
            self.queue.decrease_key(i, hi)?;
            stats.decrease_keys += 1;
        }
        if next == Cursor::Located(self.lambda_hat as u32) {
            self.queue.delete(i)?;
            self.buffer.push(i);
        }
        Ok(Some(m))
    }

    /// Update: settles the points buffered in the current leaf slab and, if
    /// given, moves on to leaf slab `next`.
    pub fn update_step(
        &mut self,
        next: Option<SlabId>,
        stats: &mut RunStats,
    ) -> Result<(), EngineError> {
        stats.update_calls += 1;
        self.check_frontier()?;

        let pts = self.input.points();
        stats.update_comparisons += sort_indices(pts, &mut self.buffer);
        stats.update_sorted_points += self.buffer.len() as u64;

        let mut best = self.p_hat();
        for &i in self.buffer.iter().rev() {
            match sweep_visit(pts, &mut best, i, &mut stats.update_comparisons) {
                Some(j) => self.dominators[i] = Some(j),
                None => self.maxima_rev.push(i),
            }
        }
        self.buffer.clear();
        if let Some(m) = next {
            self.lambda_hat = m;
        }
        Ok(())
    }

    fn check_frontier(&self) -> Result<(), EngineError> {
        let Some(oracle) = &self.oracle else {
            return Ok(());
        };
        let expected = oracle.right_of(self.model.slabs.right_of(self.lambda_hat));
        let pts = self.input.points();
        let matches = expected.len() == self.maxima_rev.len()
            && expected
                .iter()
                .zip(&self.maxima_rev)
                .all(|(p, &i)| *p == pts[i]);
        if matches {
            Ok(())
        } else {
            Err(EngineError::FrontierInvariant {
                lambda_hat: self.lambda_hat,
                expected: expected.len(),
                found: self.maxima_rev.len(),
            })
        }
    }

    /// Final Update and certificate assembly.
    pub fn finish(mut self, stats: &mut RunStats) -> Result<Certificate, EngineError> {
        debug_assert!(self.queue.is_empty());
        self.update_step(None, stats)?;
        stats.find_max_scans = self.queue.cursor_moves();
        let maxima = self.maxima_rev.into_iter().rev().collect();
        Ok(Certificate::new(maxima, self.dominators))
    }
}

/// Computes the maxima of `input` with the trained search structures.
pub fn run_maxima<'a>(
    model: impl Into<SearchModel<'a>>,
    input: &'a InputSet,
    stats: &mut RunStats,
) -> Result<Certificate, EngineError> {
    run_maxima_with(model, input, RunOptions::default(), stats)
}

pub fn run_maxima_with<'a>(
    model: impl Into<SearchModel<'a>>,
    input: &'a InputSet,
    opts: RunOptions,
    stats: &mut RunStats,
) -> Result<Certificate, EngineError> {
    let start = Instant::now();
    let mut state = EngineState::new(model.into(), input, opts)?;
    while state.search_step(stats)?.is_some() {}
    let cert = state.finish(stats)?;
    stats.wall_time_ns = start.elapsed().as_nanos() as u64;
    Ok(cert)
}
