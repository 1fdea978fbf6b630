//! Product distributions over planar inputs and their seeded sampling.
//!
//! A [`ScenarioSpec`] assigns one [`PointDistribution`] to each index; an
//! input draws point `i` from distribution `i`, independently.

mod config;
mod rng;
mod scenarios;

pub use config::{parse_scenario_config, serialize_scenario};
pub use rng::SeededRng;
pub use scenarios::{build_scenario, ScenarioKind, ScenarioParams};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{InputSet, Point};

/// Tolerance on the total weight of a finite mixture.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("{context}: weights must sum to 1 (got {sum})")]
    WeightSum { context: String, sum: f64 },
    #[error("{context}: mixture weights must be positive")]
    NonPositiveWeight { context: String },
    #[error("{context}: mixture has no atoms")]
    EmptyMixture { context: String },
    #[error("{context}: extent must satisfy lo <= hi")]
    ExtentOrder { context: String },
    #[error("{context}: coordinates must be finite")]
    NonFinite { context: String },
    #[error("scenario declares n = {n} but lists {got} distributions")]
    CountMismatch { n: usize, got: usize },
    #[error("scenario needs n >= 2 (got {0})")]
    TooSmall(usize),
    #[error("scenario {kind} needs an even n (got {n})")]
    OddCount { kind: &'static str, n: usize },
    #[error("invalid scenario parameter: {0}")]
    Parameter(String),
    #[error("{0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub y: f64,
    pub weight: f64,
}

impl Atom {
    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// Distribution of a single input point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointDistribution {
    PointMass { x: f64, y: f64 },
    FiniteMixture { atoms: Vec<Atom> },
    UniformRect { x0: f64, x1: f64, y0: f64, y1: f64 },
    UniformSegment { a: Point, b: Point },
}

impl PointDistribution {
    pub fn point_mass(p: Point) -> Self {
        PointDistribution::PointMass { x: p.x, y: p.y }
    }

    pub fn mixture(atoms: &[(Point, f64)]) -> Self {
        PointDistribution::FiniteMixture {
            atoms: atoms
                .iter()
                .map(|&(p, weight)| Atom {
                    x: p.x,
                    y: p.y,
                    weight,
                })
                .collect(),
        }
    }

    pub fn unit_square() -> Self {
        PointDistribution::UniformRect {
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y1: 1.0,
        }
    }

    pub fn validate(&self, context: &str) -> Result<(), ScenarioError> {
        let ctx = || context.to_string();
        let finite = |vals: &[f64]| vals.iter().all(|v| v.is_finite());
        match self {
            PointDistribution::PointMass { x, y } => {
                if !finite(&[*x, *y]) {
                    return Err(ScenarioError::NonFinite { context: ctx() });
                }
            }
            PointDistribution::FiniteMixture { atoms } => {
                if atoms.is_empty() {
                    return Err(ScenarioError::EmptyMixture { context: ctx() });
                }
                if !atoms.iter().all(|a| finite(&[a.x, a.y, a.weight])) {
                    return Err(ScenarioError::NonFinite { context: ctx() });
                }
                if atoms.iter().any(|a| a.weight <= 0.0) {
                    return Err(ScenarioError::NonPositiveWeight { context: ctx() });
                }
                let sum: f64 = atoms.iter().map(|a| a.weight).sum();
                if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
                    return Err(ScenarioError::WeightSum {
                        context: ctx(),
                        sum,
                    });
                }
            }
            PointDistribution::UniformRect { x0, x1, y0, y1 } => {
                if !finite(&[*x0, *x1, *y0, *y1]) {
                    return Err(ScenarioError::NonFinite { context: ctx() });
                }
                if x0 > x1 || y0 > y1 {
                    return Err(ScenarioError::ExtentOrder { context: ctx() });
                }
            }
            PointDistribution::UniformSegment { a, b } => {
                if !(a.is_finite() && b.is_finite()) {
                    return Err(ScenarioError::NonFinite { context: ctx() });
                }
            }
        }
        Ok(())
    }

    /// Draws one point. Point masses consume no randomness, mixtures and
    /// segments one uniform, rectangles two (x then y).
    pub fn sample(&self, rng: &mut SeededRng) -> Point {
        match self {
            PointDistribution::PointMass { x, y } => Point::new(*x, *y),
            PointDistribution::FiniteMixture { atoms } => {
                let u = rng.next_f64();
                let mut acc = 0.0;
                for atom in atoms {
                    acc += atom.weight;
                    if u < acc {
                        return atom.point();
                    }
                }
                // Rounding left `u` above the accumulated total.
                atoms[atoms.len() - 1].point()
            }
            PointDistribution::UniformRect { x0, x1, y0, y1 } => {
                let x = x0 + (x1 - x0) * rng.next_f64();
                let y = y0 + (y1 - y0) * rng.next_f64();
                Point::new(x, y)
            }
            PointDistribution::UniformSegment { a, b } => {
                let t = rng.next_f64();
                Point::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)
            }
        }
    }
}

/// A product distribution: one [`PointDistribution`] per input index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: String,
    pub n: usize,
    pub per_point: Vec<PointDistribution>,
}

impl ScenarioSpec {
    pub fn new(
        name: impl Into<String>,
        per_point: Vec<PointDistribution>,
    ) -> Result<Self, ScenarioError> {
        let spec = ScenarioSpec {
            name: name.into(),
            n: per_point.len(),
            per_point,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.per_point.len() != self.n {
            return Err(ScenarioError::CountMismatch {
                n: self.n,
                got: self.per_point.len(),
            });
        }
        for (i, d) in self.per_point.iter().enumerate() {
            d.validate(&format!("per_point[{i}]"))?;
        }
        Ok(())
    }
}

/// Draws one input from the product distribution, point 0 first.
pub fn sample_input(spec: &ScenarioSpec, rng: &mut SeededRng) -> Result<InputSet, ScenarioError> {
    spec.validate()?;
    Ok(sample_unchecked(spec, rng))
}

/// Sampling without re-validating; for hot loops over an already valid spec.
pub(crate) fn sample_unchecked(spec: &ScenarioSpec, rng: &mut SeededRng) -> InputSet {
    let points = spec.per_point.iter().map(|d| d.sample(rng)).collect();
    InputSet::new(points).expect("validated distributions yield finite points")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_masses_are_fixed() {
        let pts = [Point::new(0.0, 1.0), Point::new(2.0, 3.0)];
        let spec = ScenarioSpec::new(
            "fixed",
            pts.iter()
                .map(|&p| PointDistribution::point_mass(p))
                .collect(),
        )
        .unwrap();
        let mut rng = SeededRng::new(1);
        for _ in 0..3 {
            assert_eq!(sample_input(&spec, &mut rng).unwrap().points(), &pts);
        }
    }

    #[test]
    fn same_seed_same_inputs() {
        let spec =
            build_scenario(ScenarioKind::UniformSquare, 16, &ScenarioParams::default()).unwrap();
        let a = sample_input(&spec, &mut SeededRng::new(11)).unwrap();
        let b = sample_input(&spec, &mut SeededRng::new(11)).unwrap();
        assert_eq!(a, b);
        let c = sample_input(&spec, &mut SeededRng::new(12)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rectangle_support() {
        let spec = build_scenario(
            ScenarioKind::UniformSquare,
            1000,
            &ScenarioParams::default(),
        )
        .unwrap();
        let input = sample_input(&spec, &mut SeededRng::new(5)).unwrap();
        assert!(input
            .points()
            .iter()
            .all(|p| (0.0..=1.0).contains(&p.x) && (0.0..=1.0).contains(&p.y)));
    }

    #[test]
    fn segment_support() {
        let d = PointDistribution::UniformSegment {
            a: Point::new(0.0, 0.0),
            b: Point::new(2.0, 1.0),
        };
        let mut rng = SeededRng::new(2);
        for _ in 0..1000 {
            let p = d.sample(&mut rng);
            assert!((0.0..=2.0).contains(&p.x));
            assert!((p.y - p.x / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mixture_frequencies() {
        let d = PointDistribution::mixture(&[
            (Point::new(0.0, 0.0), 0.25),
            (Point::new(1.0, 1.0), 0.75),
        ]);
        let mut rng = SeededRng::new(8);
        let hits = (0..20_000).filter(|_| d.sample(&mut rng).x == 1.0).count();
        let freq = hits as f64 / 20_000.0;
        assert!((freq - 0.75).abs() < 0.02, "{freq}");
    }

    #[test]
    fn invalid_specs_are_configuration_errors() {
        let bad_weights =
            PointDistribution::mixture(&[(Point::new(0.0, 0.0), 0.5), (Point::new(1.0, 1.0), 0.4)]);
        assert!(matches!(
            ScenarioSpec::new("w", vec![bad_weights]),
            Err(ScenarioError::WeightSum { .. })
        ));
        let bad_rect = PointDistribution::UniformRect {
            x0: 1.0,
            x1: 0.0,
            y0: 0.0,
            y1: 1.0,
        };
        assert!(matches!(
            ScenarioSpec::new("r", vec![bad_rect]),
            Err(ScenarioError::ExtentOrder { .. })
        ));
        let mut spec = ScenarioSpec::new("ok", vec![PointDistribution::unit_square()]).unwrap();
        spec.n = 2;
        assert!(matches!(
            sample_input(&spec, &mut SeededRng::new(0)),
            Err(ScenarioError::CountMismatch { n: 2, got: 1 })
        ));
    }
}
