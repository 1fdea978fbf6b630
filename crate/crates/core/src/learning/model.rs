use serde::{Deserialize, Serialize};

use super::{
    build_search_tree, build_slab_structure, collect_rounds, slab_rounds, FrequencyTable,
    LearningError, SearchTree, SlabStructure, TrainingConfig, TreeNode,
};
use crate::distributions::{sample_unchecked, ScenarioSpec, SeededRng};
use crate::engine::{entropy_proxy, EntropyReport};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub seed: u64,
    pub rng: String,
    pub config: TrainingConfig,
    /// Inputs consumed to build the slab structure.
    pub slab_rounds: usize,
    /// Inputs consumed to estimate frequencies.
    pub tree_rounds: usize,
    /// Whether `tree_rounds` was clipped by the configured cap.
    pub rounds_capped: bool,
    pub leaf_threshold: u32,
}

/// Everything the limiting phase needs, plus the scenario it was trained on
/// so trials can be replayed from the artifact alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub format_version: u32,
    pub scenario: ScenarioSpec,
    pub slabs: SlabStructure,
    pub trees: Vec<SearchTree>,
    pub entropy: EntropyReport,
    pub meta: TrainingMeta,
}

pub struct TrainingOutcome {
    pub model: TrainedModel,
    pub frequencies: FrequencyTable,
}

/// Runs the learning phase on fresh inputs drawn from `spec`.
///
/// The first `ceil(log2 n)` inputs shape the slab structure; the next
/// `cfg.tree_rounds(n)` inputs feed the frequency table the trees are built
/// from. All draws come from one generator seeded with `seed`.
pub fn train(
    spec: &ScenarioSpec,
    cfg: &TrainingConfig,
    seed: u64,
) -> Result<TrainingOutcome, LearningError> {
    spec.validate()?;
    cfg.validate()?;
    let n = spec.n;
    let mut rng = SeededRng::new(seed);

    let k = slab_rounds(n);
    let training: Vec<_> = (0..k).map(|_| sample_unchecked(spec, &mut rng)).collect();
    let slabs = build_slab_structure(&training)?;

    let rounds = cfg.tree_rounds(n);
    let frequencies = collect_rounds(spec, &slabs, rounds as u32, &mut rng);
    let threshold = cfg.leaf_threshold(n);
    let trees = (0..n)
        .map(|i| build_search_tree(i, &frequencies, threshold))
        .collect();
    let entropy = entropy_proxy(&frequencies).expect("at least one training round");

    let model = TrainedModel {
        format_version: MODEL_FORMAT_VERSION,
        scenario: spec.clone(),
        slabs,
        trees,
        entropy,
        meta: TrainingMeta {
            seed,
            rng: SeededRng::ALGORITHM.to_string(),
            config: *cfg,
            slab_rounds: k,
            tree_rounds: rounds,
            rounds_capped: rounds < cfg.uncapped_tree_rounds(n),
            leaf_threshold: threshold,
        },
    };
    Ok(TrainingOutcome { model, frequencies })
}

impl TrainedModel {
    pub fn n(&self) -> usize {
        self.trees.len()
    }

    /// Total stored tree nodes across all points.
    pub fn storage_nodes(&self) -> usize {
        self.trees.iter().map(SearchTree::size).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("models always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, LearningError> {
        let model: TrainedModel =
            serde_json::from_str(text).map_err(|e| LearningError::Format(e.to_string()))?;
        model.check()?;
        Ok(model)
    }

    fn check(&self) -> Result<(), LearningError> {
        if self.format_version != MODEL_FORMAT_VERSION {
            return Err(LearningError::Format(format!(
                "unsupported format version {} (expected {MODEL_FORMAT_VERSION})",
                self.format_version
            )));
        }
        self.scenario.validate()?;
        if self.scenario.n != self.trees.len() || self.entropy.per_point.len() != self.trees.len() {
            return Err(LearningError::Format("point counts disagree".into()));
        }
        let top = self.slabs.num_slabs() - 1;
        for (i, tree) in self.trees.iter().enumerate() {
            if tree.point() != i {
                return Err(LearningError::Format(format!(
                    "tree {i} belongs to point {}",
                    tree.point()
                )));
            }
            if tree.root_range() != (0, top) {
                return Err(LearningError::Format(format!(
                    "tree {i} does not cover all slabs"
                )));
            }
            SearchTree::from_nodes(i, tree.nodes().to_vec())?;
        }
        Ok(())
    }
}

/// How far the trained estimates are from a long-run reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    /// Split-node slabs examined; these all had at least the leaf threshold
    /// of training hits.
    pub monitored: usize,
    /// Slabs whose estimate is off by more than a `delta` fraction.
    pub deviating: usize,
}

impl DeviationReport {
    pub fn fraction(&self) -> f64 {
        if self.monitored == 0 {
            0.0
        } else {
            self.deviating as f64 / self.monitored as f64
        }
    }
}

/// Compares the training estimate of every split-node slab with `reference`
/// (an independent, longer frequency run over the same slabs).
pub fn estimate_deviation(
    model: &TrainedModel,
    training: &FrequencyTable,
    reference: &FrequencyTable,
) -> DeviationReport {
    let delta = model.meta.config.delta;
    let mut report = DeviationReport {
        monitored: 0,
        deviating: 0,
    };
    for tree in &model.trees {
        let i = tree.point();
        for node in tree.nodes() {
            if let TreeNode::Split { .. } = node {
                let (lo, hi) = node.range();
                let estimate = training.probability(i, lo, hi);
                let truth = reference.probability(i, lo, hi);
                report.monitored += 1;
                if (estimate - truth).abs() > delta * truth {
                    report.deviating += 1;
                }
            }
        }
    }
    report
}
