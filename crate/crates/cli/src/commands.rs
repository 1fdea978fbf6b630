use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use simax_core::distributions::parse_scenario_config;
use simax_core::learning::TrainingOutcome;
use simax_core::{
    brute_force_maxima_with_stats, build_scenario, run_maxima_with, sample_input, sort_scan_maxima,
    train, verify_certificate, BaselineStats, Certificate, InputSet, RunOptions, RunStats,
    ScenarioKind, ScenarioParams, ScenarioSpec, SeededRng, TrainedModel, TrainingConfig,
};

use crate::row::{Algorithm, Phase, ReportRow};
use crate::CliError;

/// Largest `n` the quadratic baseline is run for.
pub const BRUTE_FORCE_MAX_N: usize = 4096;

#[derive(Debug, Clone)]
pub struct TrainPlan {
    /// Built-in scenario name or path to a JSON scenario config.
    pub scenario: String,
    /// Required for built-in scenarios; checked against the config otherwise.
    pub n: Option<usize>,
    pub config: TrainingConfig,
    pub seed: u64,
}

/// Built-in name, or else a scenario config file.
pub fn resolve_scenario(scenario: &str, n: Option<usize>) -> Result<ScenarioSpec, CliError> {
    if let Ok(kind) = scenario.parse::<ScenarioKind>() {
        if kind != ScenarioKind::Custom {
            let n = n.ok_or_else(|| {
                CliError::Plan(format!("--n is required for built-in scenario `{kind}`"))
            })?;
            return Ok(build_scenario(kind, n, &ScenarioParams::default())?);
        }
    }
    let path = Path::new(scenario);
    if !path.exists() {
        return Err(CliError::Plan(format!(
            "`{scenario}` is neither a built-in scenario nor a readable file"
        )));
    }
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let spec = parse_scenario_config(&text)?;
    if let Some(n) = n {
        if n != spec.n {
            return Err(CliError::Plan(format!(
                "--n {n} disagrees with the {} points in {scenario}",
                spec.n
            )));
        }
    }
    Ok(spec)
}

pub fn train_model(plan: &TrainPlan) -> Result<TrainingOutcome, CliError> {
    if let Some(n) = plan.n {
        if n < 2 {
            return Err(CliError::Plan(format!("n must be at least 2, got {n}")));
        }
    }
    let spec = resolve_scenario(&plan.scenario, plan.n)?;
    Ok(train(&spec, &plan.config, plan.seed)?)
}

pub fn save_model(model: &TrainedModel, path: &Path) -> Result<(), CliError> {
    fs::write(path, model.to_json()).map_err(|source| CliError::CannotWriteModel {
        path: path.into(),
        source,
    })
}

pub fn load_model(path: &Path) -> Result<TrainedModel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(TrainedModel::from_json(&text)?)
}

#[derive(Debug, Clone)]
pub struct RunPlan {
    pub trials: usize,
    /// Trial `j` samples its input from seed `seed + j`.
    pub seed: u64,
    /// Record wall-clock times; off by default so output is reproducible.
    pub wall_time: bool,
}

impl RunPlan {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.trials == 0 {
            return Err(CliError::Plan("trials must be ≥ 1".into()));
        }
        Ok(())
    }

    pub fn trial_seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.trials as u64).map(|j| self.seed.wrapping_add(j))
    }
}

/// Runs every trial of `plan` against all three algorithms. Rows come out
/// sorted by seed, then algorithm.
pub fn run_trials(model: &TrainedModel, plan: &RunPlan) -> Result<Vec<ReportRow>, CliError> {
    plan.validate()?;
    let mut rows = Vec::with_capacity(plan.trials * Algorithm::ALL.len());
    for seed in plan.trial_seeds() {
        rows.extend(run_one(model, seed, plan.wall_time, RunOptions::default())?);
    }
    Ok(rows)
}

fn run_one(
    model: &TrainedModel,
    seed: u64,
    wall_time: bool,
    opts: RunOptions,
) -> Result<Vec<ReportRow>, CliError> {
    let input = sample_input(&model.scenario, &mut SeededRng::new(seed))?;
    let n = input.len();
    let row = |algorithm, phase| ReportRow {
        scenario: model.scenario.name.clone(),
        n,
        seed,
        phase,
        algorithm,
        tree_steps: None,
        dominance_checks: None,
        sort_comparisons: None,
        update_sorted_points: None,
        entropy_total: model.entropy.total,
        wall_time_ns: None,
        verified: None,
    };
    let elapsed = |start: Instant| {
        if wall_time {
            start.elapsed().as_nanos() as u64
        } else {
            0
        }
    };
    let mut rows = Vec::with_capacity(3);

    if n <= BRUTE_FORCE_MAX_N {
        let mut stats = BaselineStats::default();
        let start = Instant::now();
        let cert = brute_force_maxima_with_stats(&input, &mut stats)?;
        let time = elapsed(start);
        check(&input, &cert, Algorithm::BruteForce, seed)?;
        rows.push(ReportRow {
            tree_steps: Some(0),
            dominance_checks: Some(stats.comparisons),
            sort_comparisons: Some(stats.sort_cost),
            update_sorted_points: Some(0),
            wall_time_ns: Some(time),
            verified: Some(true),
            ..row(Algorithm::BruteForce, Phase::Limiting)
        });
    } else {
        rows.push(row(Algorithm::BruteForce, Phase::Skipped));
    }

    let mut stats = RunStats::default();
    let cert = run_maxima_with(model, &input, opts, &mut stats)?;
    check(&input, &cert, Algorithm::SelfImproving, seed)?;
    rows.push(ReportRow {
        tree_steps: Some(stats.tree_steps),
        dominance_checks: Some(stats.dominance_checks),
        sort_comparisons: Some(stats.update_comparisons),
        update_sorted_points: Some(stats.update_sorted_points),
        wall_time_ns: Some(if wall_time { stats.wall_time_ns } else { 0 }),
        verified: Some(true),
        ..row(Algorithm::SelfImproving, Phase::Limiting)
    });

    let mut stats = BaselineStats::default();
    let start = Instant::now();
    let cert = sort_scan_maxima(&input, &mut stats)?;
    let time = elapsed(start);
    check(&input, &cert, Algorithm::SortScan, seed)?;
    rows.push(ReportRow {
        tree_steps: Some(0),
        dominance_checks: Some(stats.comparisons),
        sort_comparisons: Some(stats.sort_cost),
        update_sorted_points: Some(0),
        wall_time_ns: Some(time),
        verified: Some(true),
        ..row(Algorithm::SortScan, Phase::Limiting)
    });
    Ok(rows)
}

fn check(
    input: &InputSet,
    cert: &Certificate,
    algorithm: Algorithm,
    seed: u64,
) -> Result<(), CliError> {
    if verify_certificate(input, cert)? {
        Ok(())
    } else {
        Err(CliError::Verification { algorithm, seed })
    }
}

/// One trial with the frontier invariant checked before every Update.
pub struct VerifyOutcome {
    pub rows: Vec<ReportRow>,
    pub maxima: usize,
}

pub fn verify_trial(model: &TrainedModel, seed: u64) -> Result<VerifyOutcome, CliError> {
    let rows = run_one(
        model,
        seed,
        false,
        RunOptions {
            check_frontier: true,
        },
    )?;
    let input = sample_input(&model.scenario, &mut SeededRng::new(seed))?;
    let maxima = sort_scan_maxima(&input, &mut BaselineStats::default())?
        .maxima
        .len();
    Ok(VerifyOutcome { rows, maxima })
}

pub fn default_model_path(scenario: &str, n: usize) -> PathBuf {
    PathBuf::from(format!("{scenario}_{n}.model.json"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(scenario: &str, n: usize) -> TrainPlan {
        TrainPlan {
            scenario: scenario.into(),
            n: Some(n),
            config: TrainingConfig::default(),
            seed: 1,
        }
    }

    #[test]
    fn three_rows_per_trial_sorted() {
        let model = train_model(&plan("staircase_line", 64)).unwrap().model;
        let rows = run_trials(
            &model,
            &RunPlan {
                trials: 4,
                seed: 10,
                wall_time: false,
            },
        )
        .unwrap();
        assert_eq!(rows.len(), 12);
        for (k, r) in rows.iter().enumerate() {
            assert_eq!(r.seed, 10 + (k / 3) as u64);
            assert_eq!(r.algorithm, Algorithm::ALL[k % 3]);
            assert_eq!(r.verified, Some(true));
            assert_eq!(r.wall_time_ns, Some(0));
        }
    }

    #[test]
    fn zero_trials() {
        let model = train_model(&plan("uniform_square", 8)).unwrap().model;
        let err = run_trials(
            &model,
            &RunPlan {
                trials: 0,
                seed: 0,
                wall_time: false,
            },
        )
        .unwrap_err();
        assert_eq!(err.to_string(), "invalid plan: trials must be ≥ 1");
    }

    #[test]
    fn built_in_needs_n() {
        let err = resolve_scenario("two_level", None).unwrap_err();
        assert!(err.to_string().contains("--n is required"));
        assert!(resolve_scenario("no_such_thing", Some(4)).is_err());
    }

    #[test]
    fn tiny_n_is_rejected() {
        assert!(train_model(&plan("uniform_square", 1)).is_err());
    }

    #[test]
    fn verify_runs_with_frontier_checks() {
        let model = train_model(&plan("two_level", 32)).unwrap().model;
        let outcome = verify_trial(&model, 5).unwrap();
        assert_eq!(outcome.rows.len(), 3);
        assert!(outcome.maxima >= 1);
    }
}
