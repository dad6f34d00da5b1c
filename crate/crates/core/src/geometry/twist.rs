use std::cmp::Ordering;
use std::f64::consts::TAU;

use super::predicates::orient;
use super::{GeometryError, PlaneNetwork, Point2};
use crate::graph::{TreeTopology, UnionFind};

/// Maximum over ordered edge pairs of (left turns - right turns) along the
/// path joining them.
///
/// At a degree-3 vertex the turn is read from the cyclic order of its edges:
/// arriving from `u`, the neighbor met first when sweeping clockwise from the
/// direction of `u` is the left turn. At a degree-2 boundary vertex the sign
/// of the orientation decides, and an exactly straight passage counts as no
/// turn.
pub fn twisting_number(network: &PlaneNetwork) -> Result<i64, GeometryError> {
    let topo = &network.topology;
    let pos = &network.positions;
    let deg = topo.degrees();
    for v in 0..topo.vertex_count() {
        if !topo.is_boundary(v) && deg[v] != 3 {
            return Err(GeometryError::InteriorDegree { vertex: v, degree: deg[v] });
        }
    }
    for &(u, v) in topo.edges() {
        if pos[u] == pos[v] {
            return Err(GeometryError::ZeroLengthEdge(u, v));
        }
    }
    let adj: Vec<Vec<usize>> = topo.adjacency().into_iter().map(|l| l.into_iter().map(|(w, _)| w).collect()).collect();

    let mut best = 0;
    for &(a, b) in topo.edges() {
        for (from, to) in [(a, b), (b, a)] {
            // walk away from edge (from, to), carrying the running turn sum
            let mut stack = vec![(from, to, 0i64)];
            while let Some((u, v, sum)) = stack.pop() {
                for &w in &adj[v] {
                    if w == u {
                        continue;
                    }
                    let s = sum + turn(pos, &adj[v], u, v, w);
                    best = best.max(s);
                    stack.push((v, w, s));
                }
            }
        }
    }
    Ok(best)
}

fn turn(pos: &[Point2], around: &[usize], u: usize, v: usize, w: usize) -> i64 {
    if around.len() == 3 {
        let other = *around.iter().find(|&&x| x != u && x != w).expect("three neighbors");
        let back = clockwise_angle(pos[u] - pos[v], pos[w] - pos[v]);
        let alt = clockwise_angle(pos[u] - pos[v], pos[other] - pos[v]);
        return if back < alt { 1 } else { -1 };
    }
    match orient(pos[u], pos[v], pos[w]) {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal => 0,
    }
}

/// Clockwise angle in `[0, 2π)` from direction `from` to direction `to`.
fn clockwise_angle(from: Point2, to: Point2) -> f64 {
    let a = from.y.atan2(from.x) - to.y.atan2(to.x);
    a.rem_euclid(TAU)
}

/// Splits a network at terminals of degree at least 2. Each piece has its
/// terminals as leaves. Boundary order follows the parent network, and
/// terminal vertices precede Steiner vertices in the new numbering.
pub fn full_components(network: &PlaneNetwork) -> Vec<PlaneNetwork> {
    let topo = &network.topology;
    let edges = topo.edges();
    let mut uf = UnionFind::new(edges.len());
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); topo.vertex_count()];
    for (i, &(u, v)) in edges.iter().enumerate() {
        incident[u].push(i);
        incident[v].push(i);
    }
    for v in 0..topo.vertex_count() {
        if !topo.is_boundary(v) {
            for w in incident[v].windows(2) {
                uf.union(w[0], w[1]);
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..edges.len() {
        let r = uf.find(i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, list)) => list.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    groups
        .into_iter()
        .map(|(_, group)| {
            let mut used = vec![false; topo.vertex_count()];
            for &i in &group {
                used[edges[i].0] = true;
                used[edges[i].1] = true;
            }
            let terminals: Vec<usize> = topo.boundary().iter().copied().filter(|&b| used[b]).collect();
            let steiner: Vec<usize> =
                (0..topo.vertex_count()).filter(|&v| used[v] && !topo.is_boundary(v)).collect();
            let mut relabel = vec![usize::MAX; topo.vertex_count()];
            for (k, &v) in terminals.iter().chain(&steiner).enumerate() {
                relabel[v] = k;
            }
            let count = terminals.len() + steiner.len();
            let new_edges = group.iter().map(|&i| (relabel[edges[i].0], relabel[edges[i].1])).collect();
            let topology = TreeTopology::new_unchecked_degrees(count, new_edges, (0..terminals.len()).collect())
                .expect("a connected edge group of a tree is a tree");
            let positions = terminals.iter().chain(&steiner).map(|&v| network.positions[v]).collect();
            PlaneNetwork { topology, positions }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn net(edges: Vec<(usize, usize)>, boundary: usize, pos: &[(f64, f64)]) -> PlaneNetwork {
        let topo = TreeTopology::new(pos.len(), edges, (0..boundary).collect()).unwrap();
        PlaneNetwork::new(topo, pos.iter().map(|&p| p.into()).collect()).unwrap()
    }

    #[test]
    fn single_edge_has_no_turns() {
        assert_eq!(twisting_number(&PlaneNetwork::segment(Point2::new(0., 0.), Point2::new(1., 0.))).unwrap(), 0);
    }

    #[test]
    fn torricelli_star_turns_once() {
        let h = 3f64.sqrt() / 2.0;
        let n = net(vec![(0, 3), (1, 3), (2, 3)], 3, &[(0., 0.), (1., 0.), (0.5, h), (0.5, h / 3.0)]);
        assert_eq!(twisting_number(&n).unwrap(), 1);
    }

    #[test]
    fn zigzag_spine_accumulates_turns() {
        // spine of Steiner points along the x axis with leaves alternating
        // above and below: turns alternate, so tw stays small
        let n = net(
            vec![(0, 4), (1, 4), (4, 5), (2, 5), (3, 5)],
            4,
            &[(-1., 1.), (-1., -1.), (2., 1.), (2., -1.), (0., 0.), (1., 0.)],
        );
        assert_eq!(twisting_number(&n).unwrap(), 2);
    }

    #[test]
    fn interior_degree_checked() {
        let topo = TreeTopology::new_unchecked_degrees(3, vec![(0, 2), (2, 1)], vec![0, 1]).unwrap();
        let n = PlaneNetwork::new(topo, vec![Point2::new(0., 0.), Point2::new(2., 0.), Point2::new(1., 1.)]).unwrap();
        assert_eq!(twisting_number(&n), Err(GeometryError::InteriorDegree { vertex: 2, degree: 2 }));
    }

    #[test]
    fn split_at_degree_two_terminal() {
        // path 0 - 1 - 2 through terminal 1
        let n = net(vec![(0, 1), (1, 2)], 3, &[(0., 0.), (1., 0.), (2., 1.)]);
        let parts = full_components(&n);
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| p.topology.edges().len() == 1));
    }
}
