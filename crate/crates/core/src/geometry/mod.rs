//! Points, dominance and maxima certificates.
//!
//! A point `p` dominates `q` when it is at least as large in both coordinates
//! and strictly larger in one. Exact duplicates therefore never dominate each
//! other and are both reported maximal.

pub(crate) mod baseline;
mod certificate;

pub use baseline::{
    brute_force_maxima, brute_force_maxima_with_stats, sort_scan_maxima, BaselineStats,
};
pub use certificate::{explain_certificate, verify_certificate, Certificate, Violation};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("input set is empty")]
    EmptyInput,
    #[error("point {index} has a non-finite coordinate ({x}, {y})")]
    NonFinite { index: usize, x: f64, y: f64 },
    #[error("certificate references index {index} but the input has {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("certificate covers {got} points but the input has {n}")]
    LengthMismatch { got: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn dominates(&self, other: &Point) -> bool {
        dominates(self, other)
    }
}

/// True iff `p` dominates `q`: `x(p) >= x(q)`, `y(p) >= y(q)`, one strictly.
#[inline]
pub fn dominates(p: &Point, q: &Point) -> bool {
    p.x >= q.x && p.y >= q.y && (p.x > q.x || p.y > q.y)
}

/// One input: `n` points, where index `i` identifies the distribution that
/// produced point `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct InputSet {
    points: Vec<Point>,
}

impl InputSet {
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        if let Some((index, p)) = points.iter().enumerate().find(|(_, p)| !p.is_finite()) {
            return Err(GeometryError::NonFinite {
                index,
                x: p.x,
                y: p.y,
            });
        }
        Ok(InputSet { points })
    }

    pub fn from_coords(coords: &[(f64, f64)]) -> Result<Self, GeometryError> {
        Self::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, i: usize) -> Option<&Point> {
        self.points.get(i)
    }
}

impl std::ops::Index<usize> for InputSet {
    type Output = Point;

    fn index(&self, i: usize) -> &Point {
        &self.points[i]
    }
}

impl TryFrom<Vec<Point>> for InputSet {
    type Error = GeometryError;

    fn try_from(points: Vec<Point>) -> Result<Self, Self::Error> {
        InputSet::new(points)
    }
}

impl From<InputSet> for Vec<Point> {
    fn from(input: InputSet) -> Self {
        input.points
    }
}

/// Total order used by every sweep in the crate: ascending x, ties by
/// ascending y. Sweeping this order backwards visits a dominator of `p`
/// before `p` itself.
#[inline]
pub(crate) fn sweep_order(a: &Point, b: &Point) -> std::cmp::Ordering {
    a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y))
}
