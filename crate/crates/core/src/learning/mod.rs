//! Learning phase: slab structure, frequency estimates and per-point search
//! trees, bundled into a [`TrainedModel`].

mod frequency;
mod model;
mod restricted;
mod slab;
mod tree;

pub use frequency::{collect_frequencies, FrequencyTable};
pub use model::{
    estimate_deviation, train, TrainedModel, TrainingMeta, TrainingOutcome, MODEL_FORMAT_VERSION,
};
pub use restricted::{restricted_depth, simulate_restricted_search};
pub use slab::{build_slab_structure, slab_rounds, SlabId, SlabStructure};
pub use tree::{
    build_search_tree, check_mu_reducing, Cursor, LeafQuery, NodeId, SearchTree, SlabQuery,
    TreeNode, XQuery,
};

pub(crate) use frequency::collect_rounds;
pub(crate) use slab::ceil_log2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distributions::ScenarioError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LearningError {
    #[error("need at least {needed} training inputs, got {got}")]
    NotEnoughInputs { needed: usize, got: usize },
    #[error("training input has {got} points, expected {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("invalid slab boundaries: {0}")]
    InvalidBoundaries(String),
    #[error("invalid search tree: {0}")]
    InvalidTree(String),
    #[error("restricted distribution has no mass inside the interval")]
    EmptySupport,
    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("malformed model artifact: {0}")]
    Format(String),
}

/// Knobs of the learning phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    /// Trade-off between training rounds (`n^eps`) and search overhead (`1/eps`).
    pub epsilon: f64,
    /// Relative accuracy targeted by the frequency estimates.
    pub delta: f64,
    /// Constant multiplier on the number of tree-training rounds.
    pub c_rounds: f64,
    /// Hard cap on tree-training rounds.
    pub rounds_cap: usize,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            epsilon: 0.5,
            delta: 0.5,
            c_rounds: 1.0,
            rounds_cap: 10_000,
        }
    }
}

impl TrainingConfig {
    pub fn with_epsilon(epsilon: f64) -> Self {
        TrainingConfig {
            epsilon,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), LearningError> {
        let unit = |v: f64| v > 0.0 && v <= 1.0;
        if !unit(self.epsilon) {
            return Err(LearningError::InvalidConfig(format!(
                "epsilon must be in (0, 1], got {}",
                self.epsilon
            )));
        }
        if !unit(self.delta) {
            return Err(LearningError::InvalidConfig(format!(
                "delta must be in (0, 1], got {}",
                self.delta
            )));
        }
        if !(self.c_rounds > 0.0 && self.c_rounds.is_finite()) {
            return Err(LearningError::InvalidConfig(
                "c_rounds must be positive".into(),
            ));
        }
        if self.rounds_cap == 0 {
            return Err(LearningError::InvalidConfig(
                "rounds cap must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Uncapped round count `c delta^-2 n^eps ceil(log2 n)`.
    pub fn uncapped_tree_rounds(&self, n: usize) -> usize {
        let log_n = ceil_log2(n).max(1) as f64;
        let rounds =
            self.c_rounds / (self.delta * self.delta) * (n as f64).powf(self.epsilon) * log_n;
        (rounds.ceil() as usize).max(1)
    }

    pub fn tree_rounds(&self, n: usize) -> usize {
        self.uncapped_tree_rounds(n).min(self.rounds_cap)
    }

    /// Slabs hit fewer than `5 ceil(log2 n)` times become stored leaves.
    pub fn leaf_threshold(&self, n: usize) -> u32 {
        (5 * ceil_log2(n).max(1)) as u32
    }
}
