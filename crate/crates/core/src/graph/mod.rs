//! Weighted graphs and trees with a distinguished boundary.
//!
//! Vertex ids are dense `usize` indices. Trees used as filling or network
//! types carry an ordered `boundary`: `boundary[i]` is the vertex that
//! represents point `i` of the connected set.

mod kirchhoff;
mod mst;
mod spanning;
mod topology;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

pub use kirchhoff::spanning_tree_count;
pub use mst::{kruskal_mst, MstResult, UnionFind};
pub use spanning::{enumerate_spanning_trees, for_each_spanning_tree, SPANNING_ENUMERATION_LIMIT};
pub use topology::{binary_topology_count, enumerate_binary_topologies, BinaryTopologies};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range (vertex count {count})")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("edge {0}-{1} has a non-finite weight")]
    NonFiniteWeight(usize, usize),
    #[error("graph has {size} vertices, enumeration is limited to {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),
    #[error("need at least {0} vertices")]
    TooSmall(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge<W> {
    pub u: usize,
    pub v: usize,
    pub weight: W,
}

/// Simple undirected graph with edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<W = f64> {
    vertex_count: usize,
    edges: Vec<Edge<W>>,
    boundary: Option<Vec<usize>>,
}

impl<W: Scalar> WeightedGraph<W> {
    pub fn new(vertex_count: usize, edges: Vec<Edge<W>>) -> Result<Self, GraphError> {
        let mut seen = std::collections::HashSet::new();
        for e in &edges {
            for x in [e.u, e.v] {
                if x >= vertex_count {
                    return Err(GraphError::VertexOutOfRange { vertex: x, count: vertex_count });
                }
            }
            if e.u == e.v {
                return Err(GraphError::SelfLoop(e.u));
            }
            if !W::EXACT && !e.weight.to_f64_lossy().is_finite() {
                return Err(GraphError::NonFiniteWeight(e.u, e.v));
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(GraphError::DuplicateEdge(e.u, e.v));
            }
        }
        Ok(Self { vertex_count, edges, boundary: None })
    }

    pub fn from_triples(vertex_count: usize, triples: impl IntoIterator<Item = (usize, usize, W)>) -> Result<Self, GraphError> {
        Self::new(
            vertex_count,
            triples.into_iter().map(|(u, v, weight)| Edge { u, v, weight }).collect(),
        )
    }

    /// Complete graph on `n` vertices, weight of `{i, j}` from `weight(i, j)`.
    pub fn complete(n: usize, mut weight: impl FnMut(usize, usize) -> W) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                edges.push(Edge { u: i, v: j, weight: weight(i, j) });
            }
        }
        Self { vertex_count: n, edges, boundary: None }
    }

    pub fn with_boundary(mut self, boundary: Vec<usize>) -> Result<Self, GraphError> {
        if let Some(&b) = boundary.iter().find(|&&b| b >= self.vertex_count) {
            return Err(GraphError::VertexOutOfRange { vertex: b, count: self.vertex_count });
        }
        self.boundary = Some(boundary);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge<W>] {
        &self.edges
    }

    pub fn boundary(&self) -> Option<&[usize]> {
        self.boundary.as_deref()
    }

    pub fn total_weight(&self) -> W {
        self.edges.iter().fold(W::zero(), |acc, e| acc + e.weight.clone())
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut uf = UnionFind::new(self.vertex_count);
        let mut components = self.vertex_count;
        for e in &self.edges {
            if uf.union(e.u, e.v) {
                components -= 1;
            }
        }
        components == 1
    }
}

/// Tree shape with labeled boundary vertices and unlabeled interior ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeTopology {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    boundary: Vec<usize>,
}

impl TreeTopology {
    /// Validates connectivity, acyclicity, boundary ids, and that every
    /// vertex of degree 1 or 2 is a boundary vertex.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>, boundary: Vec<usize>) -> Result<Self, GraphError> {
        let topo = Self::new_unchecked_degrees(vertex_count, edges, boundary)?;
        let deg = topo.degrees();
        let mut is_boundary = vec![false; vertex_count];
        for &b in &topo.boundary {
            is_boundary[b] = true;
        }
        if let Some(v) = (0..vertex_count).find(|&v| !is_boundary[v] && deg[v] <= 2) {
            return Err(GraphError::InvalidBoundary(format!(
                "interior vertex {v} has degree {}",
                deg[v]
            )));
        }
        Ok(topo)
    }

    /// Like [`TreeTopology::new`] but allows interior vertices of degree 1 or 2.
    pub fn new_unchecked_degrees(
        vertex_count: usize,
        edges: Vec<(usize, usize)>,
        boundary: Vec<usize>,
    ) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::TooSmall(1));
        }
        if edges.len() + 1 != vertex_count {
            return Err(GraphError::NotATree(format!(
                "{} vertices but {} edges",
                vertex_count,
                edges.len()
            )));
        }
        let mut uf = UnionFind::new(vertex_count);
        for &(u, v) in &edges {
            for x in [u, v] {
                if x >= vertex_count {
                    return Err(GraphError::VertexOutOfRange { vertex: x, count: vertex_count });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !uf.union(u, v) {
                return Err(GraphError::NotATree(format!("edge {u}-{v} closes a cycle")));
            }
        }
        let mut seen = vec![false; vertex_count];
        for &b in &boundary {
            if b >= vertex_count {
                return Err(GraphError::VertexOutOfRange { vertex: b, count: vertex_count });
            }
            if std::mem::replace(&mut seen[b], true) {
                return Err(GraphError::InvalidBoundary(format!("vertex {b} listed twice")));
            }
        }
        Ok(Self { vertex_count, edges, boundary })
    }

    /// Star with `n` boundary leaves `0..n` and center `n`.
    pub fn star(n: usize) -> Self {
        assert!(n >= 2);
        if n == 2 {
            return Self { vertex_count: 2, edges: vec![(0, 1)], boundary: vec![0, 1] };
        }
        Self {
            vertex_count: n + 1,
            edges: (0..n).map(|i| (i, n)).collect(),
            boundary: (0..n).collect(),
        }
    }

    /// Binary tree on four leaves with cherries `{a, b}` and `{c, d}`.
    pub fn quartet(a: usize, b: usize, c: usize, d: usize) -> Self {
        Self {
            vertex_count: 6,
            edges: vec![(a, 4), (b, 4), (4, 5), (c, 5), (d, 5)],
            boundary: vec![0, 1, 2, 3],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn boundary_len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary.contains(&v)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Neighbor lists as `(neighbor, edge index)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        adj
    }

    /// Boundary = exactly the degree-1 vertices, all others of degree 3.
    pub fn is_binary(&self) -> bool {
        let deg = self.degrees();
        let leaves = deg.iter().filter(|&&d| d == 1).count();
        leaves == self.boundary.len()
            && self.boundary.iter().all(|&b| deg[b] == 1)
            && (0..self.vertex_count).all(|v| deg[v] == 1 || deg[v] == 3)
    }

    /// Edge indices of the unique path from `from` to `to`, in walking order.
    pub fn path(&self, from: usize, to: usize) -> Vec<usize> {
        tree_path(&self.adjacency(), from, to)
    }

    /// For each edge, the set of boundary indices on the side away from boundary point 0,
    /// as a sorted list. Identifies the tree up to boundary-preserving isomorphism once
    /// degenerate vertices are excluded.
    pub fn splits(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let root = self.boundary.first().copied().unwrap_or(0);
        let mut index_of = vec![None; self.vertex_count];
        for (i, &b) in self.boundary.iter().enumerate() {
            index_of[b] = Some(i);
        }
        let (parent_edge, order) = bfs_order(&adj, root);
        let mut below: Vec<Vec<usize>> = (0..self.vertex_count)
            .map(|v| index_of[v].into_iter().collect())
            .collect();
        let mut out = vec![Vec::new(); self.edges.len()];
        for &v in order.iter().rev() {
            if let Some((p, e)) = parent_edge[v] {
                let mut side = std::mem::take(&mut below[v]);
                side.sort_unstable();
                below[p].extend(side.iter().copied());
                out[e] = side;
            }
        }
        out
    }
}

/// Edge indices of the path `from -> to` in a tree given by its adjacency.
pub fn tree_path(adj: &[Vec<(usize, usize)>], from: usize, to: usize) -> Vec<usize> {
    if from == to {
        return Vec::new();
    }
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
    let mut visited = vec![false; adj.len()];
    let mut queue = VecDeque::from([to]);
    visited[to] = true;
    while let Some(x) = queue.pop_front() {
        if x == from {
            break;
        }
        for &(y, e) in &adj[x] {
            if !visited[y] {
                visited[y] = true;
                parent[y] = Some((x, e));
                queue.push_back(y);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = from;
    while let Some((next, e)) = parent[cur] {
        path.push(e);
        cur = next;
    }
    path
}

/// BFS from `root`: parent `(vertex, edge)` per vertex and the visiting order.
pub(crate) fn bfs_order(adj: &[Vec<(usize, usize)>], root: usize) -> (Vec<Option<(usize, usize)>>, Vec<usize>) {
    let mut parent = vec![None; adj.len()];
    let mut visited = vec![false; adj.len()];
    let mut order = Vec::with_capacity(adj.len());
    let mut queue = VecDeque::from([root]);
    visited[root] = true;
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for &(y, e) in &adj[x] {
            if !visited[y] {
                visited[y] = true;
                parent[y] = Some((x, e));
                queue.push_back(y);
            }
        }
    }
    (parent, order)
}

/// A tree type together with (possibly negative) edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTree<T = f64> {
    pub topology: TreeTopology,
    pub weights: Vec<T>,
}

impl<T: Scalar> WeightedTree<T> {
    pub fn new(topology: TreeTopology, weights: Vec<T>) -> Result<Self, GraphError> {
        if weights.len() != topology.edges().len() {
            return Err(GraphError::NotATree(format!(
                "{} weights for {} edges",
                weights.len(),
                topology.edges().len()
            )));
        }
        Ok(Self { topology, weights })
    }

    pub fn total_weight(&self) -> T {
        self.weights.iter().fold(T::zero(), |acc, w| acc + w.clone())
    }

    /// Weighted distances from `source` to every vertex.
    pub fn distances_from(&self, source: usize) -> Vec<T> {
        let adj = self.topology.adjacency();
        let (parent, order) = bfs_order(&adj, source);
        let mut dist = vec![T::zero(); self.topology.vertex_count()];
        for &v in order.iter().skip(1) {
            let (p, e) = parent[v].expect("tree is connected");
            dist[v] = dist[p].clone() + self.weights[e].clone();
        }
        dist
    }

    /// Path-weight distances between boundary points, `result[i][j]`.
    pub fn boundary_distances(&self) -> Vec<Vec<T>> {
        let boundary = self.topology.boundary();
        boundary
            .iter()
            .map(|&b| {
                let d = self.distances_from(b);
                boundary.iter().map(|&c| d[c].clone()).collect()
            })
            .collect()
    }

    /// Merges the endpoints of every edge whose weight is within `tol` of zero.
    /// Boundary vertices keep their identity; interior ids are renumbered after them
    /// in order of first appearance.
    pub fn contract_zero_edges(&self, tol: &T) -> WeightedTree<T> {
        let n = self.topology.vertex_count();
        let mut uf = UnionFind::new(n);
        let mut keep = Vec::new();
        for (i, &(u, v)) in self.topology.edges().iter().enumerate() {
            if self.weights[i].abs() <= *tol {
                uf.union(u, v);
            } else {
                keep.push(i);
            }
        }
        let mut new_id: Vec<Option<usize>> = vec![None; n];
        let mut boundary = Vec::with_capacity(self.topology.boundary_len());
        let mut next = 0;
        for &b in self.topology.boundary() {
            let r = uf.find(b);
            let id = *new_id[r].get_or_insert_with(|| {
                next += 1;
                next - 1
            });
            boundary.push(id);
        }
        let mut edges = Vec::with_capacity(keep.len());
        let mut weights = Vec::with_capacity(keep.len());
        for &i in &keep {
            let (u, v) = self.topology.edges()[i];
            let mut map = |x: usize| {
                let r = uf.find(x);
                *new_id[r].get_or_insert_with(|| {
                    next += 1;
                    next - 1
                })
            };
            let (a, b) = (map(u), map(v));
            edges.push((a, b));
            weights.push(self.weights[i].clone());
        }
        let topology = TreeTopology::new_unchecked_degrees(next, edges, boundary)
            .expect("contracting edges of a tree yields a tree");
        WeightedTree { topology, weights }
    }

    /// Split of each edge (see [`TreeTopology::splits`]) paired with its weight, sorted.
    pub fn weighted_splits(&self) -> Vec<(Vec<usize>, T)> {
        let mut out: Vec<(Vec<usize>, T)> = self
            .topology
            .splits()
            .into_iter()
            .zip(self.weights.iter().cloned())
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_tree(len: usize) -> TreeTopology {
        let edges = (0..len).map(|i| (i, i + 1)).collect();
        TreeTopology::new_unchecked_degrees(len + 1, edges, vec![0, len]).unwrap()
    }

    #[test]
    fn star_leaf_to_leaf_path_has_two_edges() {
        let star = TreeTopology::star(3);
        assert_eq!(star.path(0, 2).len(), 2);
        assert!(star.path(1, 1).is_empty());
    }

    #[test]
    fn quartet_cross_cherry_path_uses_interior_edge() {
        let q = TreeTopology::quartet(0, 1, 2, 3);
        let p = q.path(0, 3);
        assert_eq!(p.len(), 3);
        assert!(p.contains(&2));
        assert_eq!(q.path(0, 1).len(), 2);
    }

    #[test]
    fn path_tree_endpoints_cover_all_edges() {
        let t = path_tree(5);
        let mut p = t.path(0, 5);
        assert_eq!(p, vec![0, 1, 2, 3, 4]);
        p.sort_unstable();
        assert_eq!(p, (0..5).collect::<Vec<_>>());
    }

    #[test]
    fn interior_vertex_of_degree_two_is_rejected() {
        let err = TreeTopology::new(3, vec![(0, 2), (2, 1)], vec![0, 1]).unwrap_err();
        assert!(matches!(err, GraphError::InvalidBoundary(_)));
        assert!(TreeTopology::new(3, vec![(0, 1), (1, 2)], vec![0, 1, 2]).is_ok());
    }

    #[test]
    fn cycles_and_bad_counts_are_rejected() {
        assert!(TreeTopology::new(3, vec![(0, 1), (1, 2), (2, 0)], vec![0, 1, 2]).is_err());
        assert!(TreeTopology::new(4, vec![(0, 1), (1, 0), (2, 3)], vec![0, 1, 2, 3]).is_err());
    }

    #[test]
    fn contraction_merges_zero_edges() {
        let q = TreeTopology::quartet(0, 1, 2, 3);
        let t = WeightedTree::new(q, vec![0.5, 0.5, 0.0, 0.5, 0.5]).unwrap();
        let c = t.contract_zero_edges(&1e-12);
        assert_eq!(c.topology.vertex_count(), 5);
        assert_eq!(c.topology.degrees()[4], 4);
        assert_eq!(c.total_weight(), 2.0);
    }

    #[test]
    fn splits_identify_quartets() {
        let a = TreeTopology::quartet(0, 1, 2, 3).splits();
        let b = TreeTopology::quartet(2, 3, 1, 0).splits();
        let mut sa = a.clone();
        let mut sb = b.clone();
        sa.sort();
        sb.sort();
        assert_eq!(sa, sb);
        let c = TreeTopology::quartet(0, 2, 1, 3).splits();
        let mut sc = c.clone();
        sc.sort();
        assert_ne!(sa, sc);
    }
}
