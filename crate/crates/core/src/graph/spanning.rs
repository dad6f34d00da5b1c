use super::{GraphError, UnionFind, WeightedGraph};
use crate::scalar::Scalar;

/// Largest vertex count accepted by the spanning-tree enumerator.
pub const SPANNING_ENUMERATION_LIMIT: usize = 10;

/// Calls `visit` once per spanning tree with the indices of its edges (ascending).
///
/// Include/exclude backtracking over the edge list; an exclusion is only explored
/// when the chosen edges plus the undecided ones still connect the graph, so
/// every leaf of the search is a spanning tree.
pub fn for_each_spanning_tree<W: Scalar>(
    graph: &WeightedGraph<W>,
    mut visit: impl FnMut(&[usize]),
) -> Result<(), GraphError> {
    let n = graph.vertex_count();
    if n > SPANNING_ENUMERATION_LIMIT {
        return Err(GraphError::TooLarge { size: n, limit: SPANNING_ENUMERATION_LIMIT });
    }
    if n == 0 {
        return Ok(());
    }
    if !graph.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let edges: Vec<(usize, usize)> = graph.edges().iter().map(|e| (e.u, e.v)).collect();
    let mut chosen = Vec::with_capacity(n - 1);
    let uf = UnionFind::new(n);
    search(&edges, n, 0, &mut chosen, uf, &mut visit);
    Ok(())
}

/// Collects every spanning tree as a list of edge indices.
pub fn enumerate_spanning_trees<W: Scalar>(graph: &WeightedGraph<W>) -> Result<Vec<Vec<usize>>, GraphError> {
    let mut out = Vec::new();
    for_each_spanning_tree(graph, |t| out.push(t.to_vec()))?;
    Ok(out)
}

fn search(
    edges: &[(usize, usize)],
    n: usize,
    next: usize,
    chosen: &mut Vec<usize>,
    uf: UnionFind,
    visit: &mut impl FnMut(&[usize]),
) {
    if chosen.len() + 1 == n {
        visit(chosen);
        return;
    }
    if next == edges.len() || chosen.len() + (edges.len() - next) + 1 < n {
        return;
    }
    let (u, v) = edges[next];
    let mut with = uf.clone();
    if with.union(u, v) {
        chosen.push(next);
        search(edges, n, next + 1, chosen, with, visit);
        chosen.pop();
    }
    if still_connectable(edges, n, next + 1, &uf) {
        search(edges, n, next + 1, chosen, uf, visit);
    }
}

fn still_connectable(edges: &[(usize, usize)], n: usize, from: usize, uf: &UnionFind) -> bool {
    let mut probe = uf.clone();
    let mut roots = std::collections::HashSet::new();
    for &(u, v) in &edges[from..] {
        probe.union(u, v);
    }
    for x in 0..n {
        roots.insert(probe.find(x));
        if roots.len() > 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_has_three() {
        let g = WeightedGraph::complete(3, |_, _| 1.0);
        assert_eq!(enumerate_spanning_trees(&g).unwrap().len(), 3);
    }

    #[test]
    fn four_cycle_has_four() {
        let g = WeightedGraph::from_triples(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap();
        let trees = enumerate_spanning_trees(&g).unwrap();
        assert_eq!(trees.len(), 4);
        let mut uniq = trees.clone();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), 4);
    }

    #[test]
    fn k4_has_sixteen() {
        let g = WeightedGraph::complete(4, |_, _| 1.0);
        assert_eq!(enumerate_spanning_trees(&g).unwrap().len(), 16);
    }

    #[test]
    fn size_guard() {
        let g = WeightedGraph::complete(11, |_, _| 1.0);
        assert!(matches!(enumerate_spanning_trees(&g), Err(GraphError::TooLarge { .. })));
    }
}
