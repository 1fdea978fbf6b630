use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::learning::FrequencyTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("frequency table has zero rounds")]
pub struct ZeroRounds;

/// Empirical leaf-slab entropy of every input index, in bits.
///
/// `total` stands in for the depth of an optimal comparison tree: the sum of
/// per-point search entropies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub per_point: Vec<f64>,
    pub total: f64,
}

pub fn entropy_proxy(freq: &FrequencyTable) -> Result<EntropyReport, ZeroRounds> {
    if freq.rounds() == 0 {
        return Err(ZeroRounds);
    }
    let rounds = freq.rounds() as f64;
    let per_point: Vec<f64> = (0..freq.num_points())
        .map(|i| {
            freq.row(i)
                .map(|(_, c)| {
                    let q = c as f64 / rounds;
                    -q * q.log2()
                })
                .sum::<f64>()
                .max(0.0)
        })
        .collect();
    let total = per_point.iter().sum();
    Ok(EntropyReport { per_point, total })
}
