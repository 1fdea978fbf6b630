use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::row::{Algorithm, Phase, ReportRow};
use crate::svg::{line_chart, scatter_chart, Axis, Series};
use crate::CliError;

/// Aggregate of one (scenario, n, algorithm) group.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub scenario: String,
    pub n: usize,
    pub algorithm: Algorithm,
    pub trials: usize,
    pub skipped: usize,
    pub mean_cost_per_point: f64,
    pub stddev_cost_per_point: f64,
    pub mean_tree_steps_per_point: f64,
    pub mean_entropy_per_point: f64,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Groups rows by (scenario, n, algorithm) in that sort order.
pub fn summarize(rows: &[ReportRow]) -> Result<Vec<SummaryRow>, CliError> {
    if rows.is_empty() {
        return Err(CliError::NoDataRows);
    }
    let mut groups: BTreeMap<(String, usize, Algorithm), Vec<&ReportRow>> = BTreeMap::new();
    for row in rows {
        groups
            .entry((row.scenario.clone(), row.n, row.algorithm))
            .or_default()
            .push(row);
    }
    Ok(groups
        .into_iter()
        .map(|((scenario, n, algorithm), group)| {
            let measured: Vec<&ReportRow> = group
                .iter()
                .copied()
                .filter(|r| r.phase == Phase::Limiting)
                .collect();
            let costs: Vec<f64> = measured.iter().filter_map(|r| r.cost_per_point()).collect();
            let steps: Vec<f64> = measured
                .iter()
                .filter_map(|r| r.tree_steps.map(|t| t as f64 / n as f64))
                .collect();
            let entropy: Vec<f64> = group.iter().map(|r| r.entropy_total / n as f64).collect();
            let (mean_cost_per_point, stddev_cost_per_point) = mean_std(&costs);
            SummaryRow {
                scenario,
                n,
                algorithm,
                trials: measured.len(),
                skipped: group.len() - measured.len(),
                mean_cost_per_point,
                stddev_cost_per_point,
                mean_tree_steps_per_point: mean_std(&steps).0,
                mean_entropy_per_point: mean_std(&entropy).0,
            }
        })
        .collect())
}

pub fn summary_table(summary: &[SummaryRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<16} {:>7} {:<15} {:>6} {:>12} {:>10} {:>12} {:>10}",
        "scenario", "n", "algorithm", "trials", "cost/point", "stddev", "steps/point", "H/point"
    );
    for s in summary {
        if s.trials == 0 {
            let _ = writeln!(
                out,
                "{:<16} {:>7} {:<15} {:>6} {:>12}",
                s.scenario,
                s.n,
                s.algorithm.name(),
                0,
                "skipped"
            );
            continue;
        }
        let _ = writeln!(
            out,
            "{:<16} {:>7} {:<15} {:>6} {:>12.3} {:>10.3} {:>12.3} {:>10.3}",
            s.scenario,
            s.n,
            s.algorithm.name(),
            s.trials,
            s.mean_cost_per_point,
            s.stddev_cost_per_point,
            s.mean_tree_steps_per_point,
            s.mean_entropy_per_point
        );
    }
    out
}

fn summary_csv(summary: &[SummaryRow]) -> String {
    let mut out = String::from(
        "scenario,n,algorithm,trials,skipped,mean_cost_per_point,stddev_cost_per_point,mean_tree_steps_per_point,mean_entropy_per_point\n",
    );
    for s in summary {
        let num = |v: f64| {
            if v.is_finite() {
                format!("{v}")
            } else {
                String::new()
            }
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            s.scenario,
            s.n,
            s.algorithm.name(),
            s.trials,
            s.skipped,
            num(s.mean_cost_per_point),
            num(s.stddev_cost_per_point),
            num(s.mean_tree_steps_per_point),
            num(s.mean_entropy_per_point)
        );
    }
    out
}

/// Mean comparisons per point against `n` (log scale), one line per
/// (scenario, algorithm).
pub fn cost_chart(summary: &[SummaryRow]) -> String {
    let mut ns: Vec<usize> = summary.iter().map(|s| s.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let x_axis = Axis {
        label: "n (log scale)".into(),
        ticks: ns
            .iter()
            .map(|&n| ((n as f64).log2(), n.to_string()))
            .collect(),
    };
    let mut by_series: BTreeMap<(String, Algorithm), Vec<(f64, f64)>> = BTreeMap::new();
    for s in summary.iter().filter(|s| s.trials > 0) {
        by_series
            .entry((s.scenario.clone(), s.algorithm))
            .or_default()
            .push(((s.n as f64).log2(), s.mean_cost_per_point));
    }
    let max = by_series
        .values()
        .flatten()
        .map(|p| p.1)
        .fold(0.0, f64::max);
    let y_axis = Axis::linear("comparisons per point", 0.0, max);
    let series: Vec<Series> = by_series
        .into_iter()
        .map(|((scenario, algorithm), points)| Series {
            label: format!("{scenario} / {algorithm}"),
            points,
        })
        .collect();
    line_chart("Comparisons per point", &x_axis, &y_axis, &series)
}

/// Self-improving cost per point against the model's entropy per point,
/// one dot per trial.
pub fn entropy_chart(rows: &[ReportRow]) -> String {
    let mut by_scenario: BTreeMap<&str, Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows
        .iter()
        .filter(|r| r.algorithm == Algorithm::SelfImproving && r.phase == Phase::Limiting)
    {
        if let Some(cost) = r.cost_per_point() {
            by_scenario
                .entry(&r.scenario)
                .or_default()
                .push((r.entropy_total / r.n as f64, cost));
        }
    }
    let pts = || by_scenario.values().flatten();
    let x_max = pts().map(|p| p.0).fold(0.0, f64::max);
    let y_max = pts().map(|p| p.1).fold(0.0, f64::max);
    let series: Vec<Series> = by_scenario
        .iter()
        .map(|(scenario, points)| Series {
            label: scenario.to_string(),
            points: points.clone(),
        })
        .collect();
    scatter_chart(
        "Self-improving cost vs entropy",
        &Axis::linear("entropy per point (bits)", 0.0, x_max),
        &Axis::linear("comparisons per point", 0.0, y_max),
        &series,
    )
}

/// Writes `summary.csv`, `cost_per_point.svg` and `entropy_scatter.svg`
/// into `dir`, returning the paths written.
pub fn write_report(
    rows: &[ReportRow],
    dir: &Path,
) -> Result<(Vec<SummaryRow>, Vec<PathBuf>), CliError> {
    let summary = summarize(rows)?;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let outputs = [
        ("summary.csv", summary_csv(&summary)),
        ("cost_per_point.svg", cost_chart(&summary)),
        ("entropy_scatter.svg", entropy_chart(rows)),
    ];
    let mut written = Vec::new();
    for (name, text) in outputs {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }
    Ok((summary, written))
}
