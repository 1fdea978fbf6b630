//! JSON scenario files.
//!
//! ```json
//! {
//!   "name": "example",
//!   "n": 2,
//!   "per_point": [
//!     {"kind": "point_mass", "x": 0.5, "y": 1.0},
//!     {"kind": "finite_mixture", "atoms": [{"x": 0, "y": 1, "weight": 0.5},
//!                                          {"x": 1, "y": 0, "weight": 0.5}]},
//!     {"kind": "uniform_rect", "x0": 0, "x1": 1, "y0": 0, "y1": 1},
//!     {"kind": "uniform_segment", "a": {"x": 0, "y": 0}, "b": {"x": 1, "y": 1}}
//!   ]
//! }
//! ```

use super::{ScenarioError, ScenarioSpec};

/// Parses and validates a scenario document. Errors carry the JSON path and
/// line/column of the offending field.
pub fn parse_scenario_config(text: &str) -> Result<ScenarioSpec, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let spec: ScenarioSpec = serde_path_to_error::deserialize(de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.into_inner();
        ScenarioError::Parse(format!("at `{path}`: {inner}"))
    })?;
    spec.validate()?;
    Ok(spec)
}

pub fn serialize_scenario(spec: &ScenarioSpec) -> String {
    serde_json::to_string_pretty(spec).expect("scenario specs always serialize")
}
