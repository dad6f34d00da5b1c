use std::cmp::Ordering;

use super::{Edge, GraphError, WeightedGraph};
use crate::scalar::Scalar;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

#[derive(Debug, Clone)]
pub struct MstResult<W> {
    pub tree: WeightedGraph<W>,
    /// Indices into the input edge list, in the order Kruskal accepted them.
    pub edge_indices: Vec<usize>,
    pub weight: W,
}

/// Kruskal's algorithm. Edges are scanned by `(weight, min endpoint, max endpoint)`,
/// so the output is the same on every run and platform.
pub fn kruskal_mst<W: Scalar>(graph: &WeightedGraph<W>) -> Result<MstResult<W>, GraphError> {
    let n = graph.vertex_count();
    let edges = graph.edges();
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&a, &b| edge_order(&edges[a], &edges[b]));

    let mut uf = UnionFind::new(n);
    let mut chosen = Vec::with_capacity(n.saturating_sub(1));
    for idx in order {
        if chosen.len() + 1 >= n {
            break;
        }
        let e = &edges[idx];
        if uf.union(e.u, e.v) {
            chosen.push(idx);
        }
    }
    if n > 0 && chosen.len() + 1 != n {
        return Err(GraphError::Disconnected);
    }
    let tree_edges: Vec<Edge<W>> = chosen.iter().map(|&i| edges[i].clone()).collect();
    let weight = tree_edges.iter().fold(W::zero(), |acc, e| acc + e.weight.clone());
    let mut tree = WeightedGraph::new(n, tree_edges)?;
    if let Some(b) = graph.boundary() {
        tree = tree.with_boundary(b.to_vec())?;
    }
    Ok(MstResult { tree, edge_indices: chosen, weight })
}

fn edge_order<W: Scalar>(a: &Edge<W>, b: &Edge<W>) -> Ordering {
    a.weight
        .partial_cmp(&b.weight)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.u.min(a.v).cmp(&b.u.min(b.v)))
        .then_with(|| a.u.max(a.v).cmp(&b.u.max(b.v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_triangle_has_weight_two() {
        let g = WeightedGraph::complete(3, |_, _| 1.0);
        let r = kruskal_mst(&g).unwrap();
        assert_eq!(r.weight, 2.0);
        assert_eq!(r.edge_indices, vec![0, 1]);
    }

    #[test]
    fn single_edge() {
        let g = WeightedGraph::from_triples(2, [(0, 1, 7.0)]).unwrap();
        assert_eq!(kruskal_mst(&g).unwrap().weight, 7.0);
    }

    #[test]
    fn disconnected_is_an_error() {
        let g = WeightedGraph::from_triples(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert_eq!(kruskal_mst(&g).unwrap_err(), GraphError::Disconnected);
    }

    #[test]
    fn tie_break_prefers_smaller_endpoints() {
        let g = WeightedGraph::from_triples(3, [(1, 2, 1.0), (0, 2, 1.0), (0, 1, 1.0)]).unwrap();
        let r = kruskal_mst(&g).unwrap();
        // (0,1) then (0,2); (1,2) closes the cycle
        assert_eq!(r.edge_indices, vec![2, 1]);
    }
}
