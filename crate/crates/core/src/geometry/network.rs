use serde::{Deserialize, Serialize};

use super::{GeometryError, Point2};
use crate::graph::TreeTopology;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Terminal,
    Steiner,
}

/// A tree drawn in the plane with straight edges. Boundary vertices sit on
/// the terminals; edge weights are the Euclidean edge lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneNetwork {
    pub topology: TreeTopology,
    pub positions: Vec<Point2>,
}

impl PlaneNetwork {
    pub fn new(topology: TreeTopology, positions: Vec<Point2>) -> Result<Self, GeometryError> {
        if positions.len() != topology.vertex_count() {
            return Err(GeometryError::PositionCount(positions.len(), topology.vertex_count()));
        }
        if let Some(i) = positions.iter().position(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite(i));
        }
        Ok(Self { topology, positions })
    }

    /// Straight segment between two terminals.
    pub fn segment(a: Point2, b: Point2) -> Self {
        Self { topology: TreeTopology::star(2), positions: vec![a, b] }
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        self.topology
            .edges()
            .iter()
            .map(|&(u, v)| self.positions[u].dist(self.positions[v]))
            .collect()
    }

    pub fn length(&self) -> f64 {
        self.edge_lengths().iter().sum()
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        if self.topology.is_boundary(v) {
            VertexKind::Terminal
        } else {
            VertexKind::Steiner
        }
    }

    pub fn terminals(&self) -> Vec<Point2> {
        self.topology.boundary().iter().map(|&b| self.positions[b]).collect()
    }

    pub fn steiner_vertices(&self) -> Vec<usize> {
        (0..self.topology.vertex_count()).filter(|&v| !self.topology.is_boundary(v)).collect()
    }
}
