//! Euclidean Steiner minimal trees for small terminal sets.

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::graph::GraphError;

mod melzak;
mod relax;
mod smt;
mod structure;
mod torricelli;

pub use crate::geometry::PlaneNetwork;
pub use melzak::{melzak_branches, melzak_solve, MelzakReport};
pub use relax::{relax_topology, RelaxOutcome, RELAX_MAX_ITERATIONS, RELAX_REL_TOL};
pub use smt::{contract_short_edges, smt, smt_by_relaxation, SteinerTree, COLLAPSE_REL_TOL, DEFAULT_NMAX};
pub use structure::{check_local_structure, LocalStructureReport, StructureViolation, ANGLE_TOL};
pub use torricelli::{torricelli_point, Torricelli};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SteinerError {
    #[error("{terminals} terminals for a topology with {boundary} boundary vertices")]
    BoundaryMismatch { terminals: usize, boundary: usize },
    #[error("topology is not full: boundary vertices must be leaves and interior vertices of degree 3")]
    NotFullTopology,
    #[error("two merged points coincide")]
    CoincidentMerge,
    #[error("numerical failure in a geometric construction")]
    NumericalFailure,
    #[error("{n} terminals exceed the limit of {nmax}")]
    TooManyTerminals { n: usize, nmax: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
