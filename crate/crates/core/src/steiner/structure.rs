use std::f64::consts::{PI, TAU};

use crate::geometry::PlaneNetwork;

/// Angular slack for structure audits, in radians.
pub const ANGLE_TOL: f64 = 1e-6;

const TWO_THIRDS_PI: f64 = 2.0 * PI / 3.0;

#[derive(Debug, Clone, PartialEq)]
pub enum StructureViolation {
    ZeroLengthEdge { u: usize, v: usize },
    DegreeAboveThree { vertex: usize, degree: usize },
    /// Two neighboring edges meet at less than 120°.
    NarrowAngle { vertex: usize, angle: f64 },
    /// A Steiner point of degree 1.
    SteinerLeaf { vertex: usize },
    /// A Steiner point of degree 2 whose edges are not opposite.
    BentSteinerPoint { vertex: usize, angle: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalStructureReport {
    /// Smallest angle between neighboring edges over all vertices of degree
    /// at least 2, in radians (`2π` when there is none).
    pub min_angle: f64,
    pub max_degree: usize,
    pub violations: Vec<StructureViolation>,
}

impl LocalStructureReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Audits the necessary conditions for local minimality: straight edges of
/// positive length, degree at most 3, neighboring edges at 120° or more, and
/// straight Steiner points of degree 2.
pub fn check_local_structure(network: &PlaneNetwork) -> LocalStructureReport {
    let topo = &network.topology;
    let pos = &network.positions;
    let mut violations = Vec::new();
    for &(u, v) in topo.edges() {
        if pos[u] == pos[v] {
            violations.push(StructureViolation::ZeroLengthEdge { u, v });
        }
    }
    let adj = topo.adjacency();
    let mut min_angle = TAU;
    let mut max_degree = 0;
    for (v, list) in adj.iter().enumerate() {
        let degree = list.len();
        max_degree = max_degree.max(degree);
        if degree > 3 {
            violations.push(StructureViolation::DegreeAboveThree { vertex: v, degree });
        }
        if degree == 1 && !topo.is_boundary(v) {
            violations.push(StructureViolation::SteinerLeaf { vertex: v });
        }
        let mut dirs: Vec<f64> = list
            .iter()
            .filter(|&&(w, _)| pos[w] != pos[v])
            .map(|&(w, _)| {
                let d = pos[w] - pos[v];
                d.y.atan2(d.x)
            })
            .collect();
        if dirs.len() < 2 {
            continue;
        }
        dirs.sort_by(f64::total_cmp);
        let mut smallest = TAU;
        for k in 0..dirs.len() {
            let next = if k + 1 < dirs.len() { dirs[k + 1] } else { dirs[0] + TAU };
            smallest = smallest.min(next - dirs[k]);
        }
        min_angle = min_angle.min(smallest);
        if degree == 2 && !topo.is_boundary(v) {
            if (smallest - PI).abs() > ANGLE_TOL {
                violations.push(StructureViolation::BentSteinerPoint { vertex: v, angle: smallest });
            }
        } else if smallest < TWO_THIRDS_PI - ANGLE_TOL {
            violations.push(StructureViolation::NarrowAngle { vertex: v, angle: smallest });
        }
    }
    LocalStructureReport { min_angle, max_degree, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{euclidean_mst, Point2};
    use crate::graph::TreeTopology;

    #[test]
    fn torricelli_star_passes() {
        let h = 3f64.sqrt() / 2.0;
        let pos = vec![Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(0.5, h), Point2::new(0.5, h / 3.0)];
        let r = check_local_structure(&PlaneNetwork::new(TreeTopology::star(3), pos).unwrap());
        assert!(r.passes());
        assert!((r.min_angle - TWO_THIRDS_PI).abs() < 1e-12);
        assert_eq!(r.max_degree, 3);
    }

    #[test]
    fn square_mst_fails_at_a_corner() {
        let pts = [Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(1., 1.), Point2::new(0., 1.)];
        let (net, _) = euclidean_mst(&pts).unwrap();
        let r = check_local_structure(&net);
        assert!(!r.passes());
        assert!((r.min_angle - PI / 2.0).abs() < 1e-12);
    }
}
