use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

pub const CSV_HEADER: &str =
    "scenario,n,seed,phase,algorithm,tree_steps,dominance_checks,sort_comparisons,\
update_sorted_points,entropy_total,wall_time_ns,verified";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    BruteForce,
    SelfImproving,
    SortScan,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::BruteForce,
        Algorithm::SelfImproving,
        Algorithm::SortScan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::BruteForce => "brute_force",
            Algorithm::SelfImproving => "self_improving",
            Algorithm::SortScan => "sort_scan",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// A trial of a trained model.
    Limiting,
    /// Placeholder for an algorithm that was not run; every measurement is
    /// left empty.
    Skipped,
}

/// One algorithm on one trial.
///
/// Cost columns by algorithm:
/// - `self_improving`: tree steps, dominance checks, and the sorting done
///   inside Update (`sort_comparisons`, `update_sorted_points`).
/// - `sort_scan`: sorting comparisons, and the sweep's comparisons in
///   `dominance_checks`.
/// - `brute_force`: pairwise dominance tests in `dominance_checks`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub scenario: String,
    pub n: usize,
    pub seed: u64,
    pub phase: Phase,
    pub algorithm: Algorithm,
    pub tree_steps: Option<u64>,
    pub dominance_checks: Option<u64>,
    pub sort_comparisons: Option<u64>,
    pub update_sorted_points: Option<u64>,
    pub entropy_total: f64,
    pub wall_time_ns: Option<u64>,
    pub verified: Option<bool>,
}

impl ReportRow {
    /// All counted comparisons divided by `n`; `None` for skipped rows.
    pub fn cost_per_point(&self) -> Option<f64> {
        let total = self.tree_steps? + self.dominance_checks? + self.sort_comparisons?;
        Some(total as f64 / self.n as f64)
    }
}

pub fn write_rows<W: Write>(rows: &[ReportRow], out: W) -> Result<(), CliError> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(|e| CliError::Csv(e.into()))?;
    Ok(())
}

/// Parses rows written by [`write_rows`]. Row numbers in errors count the
/// header as row 1.
pub fn read_rows<R: Read>(path: &Path, input: R) -> Result<Vec<ReportRow>, CliError> {
    let malformed = |row: u64, message: String| CliError::MalformedCsv {
        path: path.to_path_buf(),
        row,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = reader.headers().map_err(|e| malformed(1, e.to_string()))?;
    if header.is_empty() {
        return Ok(Vec::new());
    }
    let header = header.iter().collect::<Vec<_>>().join(",");
    if header != CSV_HEADER {
        return Err(malformed(1, format!("unexpected header `{header}`")));
    }
    let mut rows = Vec::new();
    for (k, record) in reader.deserialize::<ReportRow>().enumerate() {
        let line = k as u64 + 2;
        let row = record.map_err(|e| malformed(line, e.to_string()))?;
        match (row.phase, row.verified) {
            (Phase::Limiting, Some(true)) | (Phase::Skipped, None) => {}
            (Phase::Limiting, _) => return Err(malformed(line, "row is not verified".into())),
            (Phase::Skipped, Some(_)) => {
                return Err(malformed(line, "skipped row carries a verdict".into()))
            }
        }
        if row.n == 0 {
            return Err(malformed(line, "n must be positive".into()));
        }
        rows.push(row);
    }
    Ok(rows)
}
