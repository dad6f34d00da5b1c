use std::cmp::Ordering;
use std::collections::HashMap;

use super::predicates::{incircle, orient};
use super::{check_points, lex_cmp, GeometryError, PlaneNetwork, Point2};
use crate::graph::{kruskal_mst, TreeTopology, WeightedGraph};

/// Dual graph of the Voronoi diagram: `(i, j)` is an edge iff the cells of
/// points `i` and `j` share a segment of positive length.
#[derive(Debug, Clone, PartialEq)]
pub struct DelaunayGraph {
    pub points: Vec<Point2>,
    /// Sorted pairs `(i, j)` with `i < j`, in ascending order.
    pub edges: Vec<(usize, usize)>,
}

impl DelaunayGraph {
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i.min(j), i.max(j))).is_ok()
    }
}

/// Builds the Delaunay graph.
///
/// Points are inserted in lexicographic order, so every new point lies outside
/// the current hull and is joined to the hull edges it sees strictly; Lawson
/// flips then restore the empty-circle property. Interior edges whose two
/// opposite vertices are cocircular with them are dropped at the end, since
/// the corresponding Voronoi cells meet in a single point.
pub fn delaunay_graph(points: &[Point2]) -> Result<DelaunayGraph, GeometryError> {
    check_points(points, 2)?;
    let n = points.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| lex_cmp(points[a], points[b]));
    let p = |i: usize| points[i];

    let Some(first_off_line) = (2..n).find(|&k| orient(p(order[0]), p(order[1]), p(order[k])) != Ordering::Equal)
    else {
        // Collinear input: consecutive slabs are the only adjacent cells.
        let edges = order.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))).collect();
        return Ok(finish(points, edges));
    };

    let mut tri = Triangulation::default();
    let apex = order[first_off_line];
    for w in order[..first_off_line].windows(2) {
        let (a, b) = (w[0], w[1]);
        if orient(p(a), p(b), p(apex)) == Ordering::Greater {
            tri.add([a, b, apex]);
        } else {
            tri.add([b, a, apex]);
        }
    }
    let spokes = order[1..first_off_line - 1].iter().map(|&v| (v, apex)).collect();
    tri.legalize(points, spokes);
    for &v in &order[first_off_line + 1..] {
        let visible: Vec<(usize, usize)> = tri
            .hull_edges()
            .filter(|&(a, b)| orient(p(a), p(b), p(v)) == Ordering::Less)
            .collect();
        let mut stack = Vec::with_capacity(visible.len());
        for (a, b) in visible {
            tri.add([b, a, v]);
            stack.push((b, a));
        }
        tri.legalize(points, stack);
    }

    let mut edges = Vec::new();
    for (&(a, b), &t) in &tri.by_edge {
        if a > b && tri.by_edge.contains_key(&(b, a)) {
            continue; // interior edge, handled from the other side
        }
        if let Some(&s) = tri.by_edge.get(&(b, a)) {
            let c = tri.opposite(t, a, b);
            let d = tri.opposite(s, b, a);
            if incircle(p(a), p(b), p(c), p(d)) == Ordering::Equal {
                continue;
            }
        }
        edges.push((a.min(b), a.max(b)));
    }
    Ok(finish(points, edges))
}

fn finish(points: &[Point2], mut edges: Vec<(usize, usize)>) -> DelaunayGraph {
    edges.sort_unstable();
    edges.dedup();
    DelaunayGraph { points: points.to_vec(), edges }
}

#[derive(Default)]
struct Triangulation {
    tris: Vec<[usize; 3]>,
    /// Directed edge `a -> b` of a counterclockwise triangle.
    by_edge: HashMap<(usize, usize), usize>,
}

impl Triangulation {
    fn add(&mut self, t: [usize; 3]) {
        let id = self.tris.len();
        self.tris.push(t);
        self.index(id);
    }

    fn index(&mut self, id: usize) {
        let t = self.tris[id];
        for k in 0..3 {
            self.by_edge.insert((t[k], t[(k + 1) % 3]), id);
        }
    }

    fn unindex(&mut self, id: usize) {
        let t = self.tris[id];
        for k in 0..3 {
            self.by_edge.remove(&(t[k], t[(k + 1) % 3]));
        }
    }

    fn hull_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.by_edge.keys().copied().filter(|&(a, b)| !self.by_edge.contains_key(&(b, a)))
    }

    fn opposite(&self, id: usize, a: usize, b: usize) -> usize {
        *self.tris[id].iter().find(|&&v| v != a && v != b).expect("triangle has three vertices")
    }

    fn legalize(&mut self, points: &[Point2], mut stack: Vec<(usize, usize)>) {
        while let Some((a, b)) = stack.pop() {
            let (Some(&t), Some(&s)) = (self.by_edge.get(&(a, b)), self.by_edge.get(&(b, a))) else {
                continue;
            };
            let c = self.opposite(t, a, b);
            let d = self.opposite(s, b, a);
            if incircle(points[a], points[b], points[c], points[d]) != Ordering::Greater {
                continue;
            }
            // quad a, d, b, c is convex; swap diagonal ab for cd
            self.unindex(t);
            self.unindex(s);
            self.tris[t] = [a, d, c];
            self.tris[s] = [d, b, c];
            self.index(t);
            self.index(s);
            stack.extend([(a, d), (d, b), (b, c), (c, a)]);
        }
    }
}

/// Minimal spanning tree of the points, found by Kruskal on the Delaunay edges.
pub fn euclidean_mst(points: &[Point2]) -> Result<(PlaneNetwork, f64), GeometryError> {
    let dg = delaunay_graph(points)?;
    let graph = WeightedGraph::from_triples(
        points.len(),
        dg.edges.iter().map(|&(i, j)| (i, j, points[i].dist(points[j]))),
    )?;
    let mst = kruskal_mst(&graph)?;
    let edges = mst.tree.edges().iter().map(|e| (e.u, e.v)).collect();
    let topology = TreeTopology::new(points.len(), edges, (0..points.len()).collect())?;
    let network = PlaneNetwork::new(topology, points.to_vec())?;
    Ok((network, mst.weight))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point2> {
        v.iter().map(|&p| p.into()).collect()
    }

    #[test]
    fn square_has_no_diagonals() {
        let g = delaunay_graph(&pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)])).unwrap();
        assert_eq!(g.edges, vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn triangle_is_complete() {
        let g = delaunay_graph(&pts(&[(0., 0.), (4., 1.), (1., 3.)])).unwrap();
        assert_eq!(g.edges, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn collinear_points_form_a_path() {
        let g = delaunay_graph(&pts(&[(2., 2.), (0., 0.), (3., 3.), (1., 1.)])).unwrap();
        assert_eq!(g.edges, vec![(0, 2), (0, 3), (1, 3)]);
    }

    #[test]
    fn duplicates_rejected() {
        let err = delaunay_graph(&pts(&[(0., 0.), (1., 0.), (0., 0.)])).unwrap_err();
        assert_eq!(err, GeometryError::DuplicatePoint(0, 2));
    }

    #[test]
    fn mst_examples() {
        let h = 3f64.sqrt() / 2.0;
        let (_, len) = euclidean_mst(&pts(&[(0., 0.), (1., 0.), (0.5, h)])).unwrap();
        assert!((len - 2.0).abs() < 1e-12);
        let (net, len) = euclidean_mst(&pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)])).unwrap();
        assert_eq!(len, 3.0);
        assert_eq!(net.topology.edges().len(), 3);
    }

    #[test]
    fn regular_hexagon_with_center_is_a_wheel() {
        let mut v = vec![(0.0, 0.0)];
        for k in 0..6 {
            let a = std::f64::consts::PI / 3.0 * k as f64;
            v.push((a.cos(), a.sin()));
        }
        let g = delaunay_graph(&pts(&v)).unwrap();
        // 6 spokes + 6 rim edges; rounding may keep the hexagon off-circle but
        // never adds chords across the center
        assert!(g.edges.len() >= 12 && g.edges.len() <= 15);
        for k in 1..=6 {
            assert!(g.has_edge(0, k));
        }
    }
}
