//! Optimal connection networks: minimal spanning trees, planar Steiner
//! minimal trees and minimal fillings of finite metric spaces.

#![allow(clippy::needless_range_loop)]

pub mod fillings;
pub mod geometry;
pub mod graph;
pub mod metric;
pub mod ratios;
pub mod repro;
pub mod scalar;
pub mod steiner;
