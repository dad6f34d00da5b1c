//! Planar geometry: exact predicates, Delaunay graph, Euclidean MST, hull
//! peeling and the twisting number of embedded binary trees.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod delaunay;
mod hull;
mod network;
pub mod predicates;
mod twist;

pub use delaunay::{delaunay_graph, euclidean_mst, DelaunayGraph};
pub use hull::{convex_hull, convexity_levels, ConvexityLevels};
pub use network::{PlaneNetwork, VertexKind};
pub use twist::{full_components, twisting_number};

use crate::graph::GraphError;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum GeometryError {
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("coordinate of point {0} is not finite")]
    NonFinite(usize),
    #[error("edge ({0},{1}) has zero length")]
    ZeroLengthEdge(usize, usize),
    #[error("interior vertex {vertex} has degree {degree}, expected 3")]
    InteriorDegree { vertex: usize, degree: usize },
    #[error("{0} positions for {1} vertices")]
    PositionCount(usize, usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Counterclockwise rotation by `angle` radians about the origin.
    pub fn rotate(self, angle: f64) -> Point2 {
        let (s, c) = angle.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Point2::new(x, y)
    }
}

/// Rejects non-finite coordinates and coincident points.
pub fn check_points(points: &[Point2], need: usize) -> Result<(), GeometryError> {
    if points.len() < need {
        return Err(GeometryError::TooFewPoints { need, got: points.len() });
    }
    if let Some(i) = points.iter().position(|p| !p.is_finite()) {
        return Err(GeometryError::NonFinite(i));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| lex_cmp(points[a], points[b]));
    for w in order.windows(2) {
        if points[w[0]] == points[w[1]] {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(GeometryError::DuplicatePoint(a, b));
        }
    }
    Ok(())
}

pub(crate) fn lex_cmp(a: Point2, b: Point2) -> std::cmp::Ordering {
    a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y))
}

/// Largest pairwise distance.
pub fn diameter(points: &[Point2]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            d = d.max(p.dist(*q));
        }
    }
    d
}
