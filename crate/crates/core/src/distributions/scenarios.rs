use std::fmt;
use std::str::FromStr;

use super::{PointDistribution, ScenarioError, ScenarioSpec};
use crate::geometry::Point;

/// Built-in scenario families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    /// `n/2` fixed points on a descending staircase; the other `n/2` points
    /// are uniform on a segment entirely dominated by the lowest stair.
    StaircaseLine,
    /// `n/2` two-atom mixtures (a high atom above the unit square, a low atom
    /// inside it) followed by `n/2` uniform points in the unit square.
    TwoLevel,
    /// Every point uniform on the unit square.
    UniformSquare,
    /// Caller-supplied distributions, see [`ScenarioParams::custom`].
    Custom,
}

impl ScenarioKind {
    pub const BUILT_IN: [ScenarioKind; 3] = [
        ScenarioKind::UniformSquare,
        ScenarioKind::StaircaseLine,
        ScenarioKind::TwoLevel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::StaircaseLine => "staircase_line",
            ScenarioKind::TwoLevel => "two_level",
            ScenarioKind::UniformSquare => "uniform_square",
            ScenarioKind::Custom => "custom",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "staircase_line" => Ok(ScenarioKind::StaircaseLine),
            "two_level" => Ok(ScenarioKind::TwoLevel),
            "uniform_square" => Ok(ScenarioKind::UniformSquare),
            "custom" => Ok(ScenarioKind::Custom),
            other => Err(ScenarioError::Parameter(format!(
                "unknown scenario `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    /// Probability of the high atom in `two_level`.
    pub p_high: f64,
    /// Gap between the staircase's lowest point and the far end of the
    /// dominated segment in `staircase_line`, in both coordinates.
    pub segment_gap: f64,
    /// Distributions for [`ScenarioKind::Custom`].
    pub custom: Option<ScenarioSpec>,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        ScenarioParams {
            p_high: 0.5,
            segment_gap: 0.05,
            custom: None,
        }
    }
}

pub fn build_scenario(
    kind: ScenarioKind,
    n: usize,
    params: &ScenarioParams,
) -> Result<ScenarioSpec, ScenarioError> {
    if n < 2 {
        return Err(ScenarioError::TooSmall(n));
    }
    let per_point = match kind {
        ScenarioKind::UniformSquare => vec![PointDistribution::unit_square(); n],
        ScenarioKind::StaircaseLine => staircase_line(n, params)?,
        ScenarioKind::TwoLevel => two_level(n, params)?,
        ScenarioKind::Custom => {
            let spec = params.custom.clone().ok_or_else(|| {
                ScenarioError::Parameter("custom scenario needs distributions".into())
            })?;
            spec.validate()?;
            if spec.n != n {
                return Err(ScenarioError::CountMismatch { n, got: spec.n });
            }
            return Ok(spec);
        }
    };
    ScenarioSpec::new(kind.name(), per_point)
}

fn half(kind: ScenarioKind, n: usize) -> Result<usize, ScenarioError> {
    if !n.is_multiple_of(2) {
        return Err(ScenarioError::OddCount {
            kind: kind.name(),
            n,
        });
    }
    Ok(n / 2)
}

/// Stair `k` of `m` sits at `((k+1)/m, 2 - (k+1)/m)`; the lowest stair is
/// `(1, 1)` and the segment runs from the origin to `(1 - gap, 1 - gap)`.
fn staircase_line(
    n: usize,
    params: &ScenarioParams,
) -> Result<Vec<PointDistribution>, ScenarioError> {
    let m = half(ScenarioKind::StaircaseLine, n)?;
    let gap = params.segment_gap;
    if !(gap > 0.0 && gap <= 1.0) {
        return Err(ScenarioError::Parameter(format!(
            "segment_gap must be in (0, 1], got {gap}"
        )));
    }
    let mut per_point = Vec::with_capacity(n);
    for k in 0..m {
        let x = (k + 1) as f64 / m as f64;
        per_point.push(PointDistribution::point_mass(Point::new(x, 2.0 - x)));
    }
    let segment = PointDistribution::UniformSegment {
        a: Point::new(0.0, 0.0),
        b: Point::new(1.0 - gap, 1.0 - gap),
    };
    per_point.extend(std::iter::repeat_n(segment, m));
    Ok(per_point)
}

/// Mixture `k` of `m` picks `(x_k, 2 - x_k)` with probability `p_high`,
/// else `(x_k, (1 - x_k) / 2)`, where `x_k = (k + 1/2)/m`. A chosen high atom
/// dominates every square point to its left.
fn two_level(n: usize, params: &ScenarioParams) -> Result<Vec<PointDistribution>, ScenarioError> {
    let m = half(ScenarioKind::TwoLevel, n)?;
    let p = params.p_high;
    if !(p > 0.0 && p < 1.0) {
        return Err(ScenarioError::Parameter(format!(
            "p_high must be in (0, 1), got {p}"
        )));
    }
    let mut per_point = Vec::with_capacity(n);
    for k in 0..m {
        let x = (k as f64 + 0.5) / m as f64;
        per_point.push(PointDistribution::mixture(&[
            (Point::new(x, 2.0 - x), p),
            (Point::new(x, 0.5 * (1.0 - x)), 1.0 - p),
        ]));
    }
    per_point.extend(std::iter::repeat_n(PointDistribution::unit_square(), m));
    Ok(per_point)
}
