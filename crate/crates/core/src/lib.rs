//! Self-improving computation of planar coordinate-wise maxima.
//!
//! The learning phase ([`learning`]) watches inputs drawn from an unknown
//! product distribution and builds a vertical slab structure plus one
//! search tree per input index. The limiting phase ([`engine`]) then
//! computes a verifiable [`Certificate`] of the maxima of each new input,
//! searching each point only as far as needed to settle its status.

pub mod distributions;
pub mod engine;
pub mod geometry;
pub mod learning;

pub use distributions::{
    build_scenario, sample_input, ScenarioError, ScenarioKind, ScenarioParams, ScenarioSpec,
    SeededRng,
};
pub use engine::{
    run_maxima, run_maxima_with, EngineError, EntropyReport, RunOptions, RunStats, SearchModel,
};
pub use geometry::{
    brute_force_maxima, brute_force_maxima_with_stats, dominates, sort_scan_maxima,
    verify_certificate, BaselineStats, Certificate, GeometryError, InputSet, Point,
};
pub use learning::{train, LearningError, SlabStructure, TrainedModel, TrainingConfig};
