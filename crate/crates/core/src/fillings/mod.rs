//! Minimal fillings of finite metric spaces.
//!
//! A filling of a space `M` is a weighted tree whose boundary is `M` and whose
//! path distances dominate the metric. Weights per tree type come from a small
//! linear program; the minimal filling minimizes over all binary types.

use thiserror::Error;

use crate::graph::GraphError;
use crate::metric::MetricError;

mod additive;
mod kuratowski;
pub mod lp;
mod parametric;
mod tours;

pub use additive::reconstruct_additive_tree;
pub use kuratowski::{kuratowski_network, KuratowskiNetwork};
pub use lp::{lp_solve, LpError, LpProblem, LpSolution, Relation, VarBound, LP_EPS};
pub use parametric::{
    four_point_mf, is_filling, mf, mpf, star_weights, FourPointFilling, MinimalFilling, ParametricFilling,
    DEFAULT_FILLING_NMAX,
};
pub use tours::{enumerate_multitours, enumerate_tours, eremin_value, EreminBound, Multitour, DEFAULT_KMAX, MULTITOUR_NMAX};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum FillingError {
    #[error("topology has {boundary} boundary vertices but the space has {points} points")]
    BoundaryMismatch { boundary: usize, points: usize },
    #[error("{n} points exceed the limit of {nmax}")]
    TooManyPoints { n: usize, nmax: usize },
    #[error("multiplicity {k} exceeds the limit of {kmax}")]
    MultiplicityTooLarge { k: usize, kmax: usize },
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("expected exactly {expected} points, got {got}")]
    PointCount { expected: usize, got: usize },
    #[error("topology is not binary")]
    NotBinary,
    #[error("space is not additive (witness {0:?})")]
    NotAdditive(Option<[usize; 4]>),
    #[error("Gromov products at point {point} disagree: {first} via ({j}, {k}) and {second} via ({j2}, {k2})")]
    InconsistentProducts { point: usize, j: usize, k: usize, j2: usize, k2: usize, first: String, second: String },
    #[error("weights do not form a filling: {0}")]
    NotAFilling(String),
    #[error("reconstructed tree misses the metric by {0}")]
    Residual(String),
    #[error("internal linear programming failure: {0}")]
    Lp(#[from] LpError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}
