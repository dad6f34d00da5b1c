use num_bigint::BigInt;
use optnet::graph::{enumerate_spanning_trees, kruskal_mst, spanning_tree_count, Edge, GraphError, UnionFind, WeightedGraph};
use proptest::prelude::*;

/// Random simple graphs on up to 7 vertices with small integer weights.
fn graph() -> impl Strategy<Value = WeightedGraph<f64>> {
    (2usize..=7)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(prop::option::weighted(0.6, 1u32..20), n * (n - 1) / 2)))
        .prop_map(|(n, slots)| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges =
                pairs.zip(slots).filter_map(|((u, v), w)| w.map(|w| Edge { u, v, weight: f64::from(w) })).collect();
            WeightedGraph::new(n, edges).unwrap()
        })
}

fn is_spanning_tree(graph: &WeightedGraph<f64>, subset: &[usize]) -> bool {
    let mut uf = UnionFind::new(graph.vertex_count());
    subset.len() + 1 == graph.vertex_count() && subset.iter().all(|&i| uf.union(graph.edges()[i].u, graph.edges()[i].v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matrix_tree_count_matches_enumeration(g in graph()) {
        if !g.is_connected() {
            prop_assert_eq!(spanning_tree_count(&g), Err(GraphError::Disconnected));
            prop_assert_eq!(enumerate_spanning_trees(&g), Err(GraphError::Disconnected));
            return Ok(());
        }
        let trees = enumerate_spanning_trees(&g).unwrap();
        prop_assert_eq!(spanning_tree_count(&g).unwrap(), BigInt::from(trees.len()));
        for t in &trees {
            prop_assert!(is_spanning_tree(&g, t));
        }
    }

    #[test]
    fn kruskal_is_the_lightest_spanning_tree(g in graph()) {
        prop_assume!(g.is_connected());
        let mst = kruskal_mst(&g).unwrap();
        let lightest = enumerate_spanning_trees(&g)
            .unwrap()
            .iter()
            .map(|t| t.iter().map(|&i| g.edges()[i].weight).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        prop_assert_eq!(mst.weight, lightest);
        prop_assert!(is_spanning_tree(&g, &mst.edge_indices));
    }
}
