use super::lp::LP_EPS;
use super::parametric::{mf, DEFAULT_FILLING_NMAX};
use super::FillingError;
use crate::graph::WeightedTree;
use crate::metric::FiniteMetricSpace;
use crate::scalar::{eq_tol, Scalar};

/// Generating tree of an additive space: its minimal filling with
/// zero-weight edges contracted, checked to reproduce every distance.
pub fn reconstruct_additive_tree<T: Scalar>(space: &FiniteMetricSpace<T>) -> Result<WeightedTree<T>, FillingError> {
    let report = space.check_four_point();
    if !report.is_additive() {
        return Err(FillingError::NotAdditive(report.witness));
    }
    let tree = mf(space, DEFAULT_FILLING_NMAX)?.tree;
    let tol = T::slack(&space.max_distance(), LP_EPS);
    let d = tree.boundary_distances();
    let n = space.len();
    for i in 0..n {
        for j in i + 1..n {
            if !eq_tol(&d[i][j], space.d(i, j), &tol) {
                let gap = (d[i][j].clone() - space.d(i, j).clone()).abs();
                return Err(FillingError::Residual(gap.to_string()));
            }
        }
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TreeTopology;
    use crate::metric::metric_from_weighted_tree;
    use crate::scalar::{rational, Rational};

    #[test]
    fn three_four_five_is_a_star() {
        let q = |v: i64| Rational::from_int(v);
        let m = [[0, 3, 4], [3, 0, 5], [4, 5, 0]];
        let space = FiniteMetricSpace::new(m.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()).unwrap();
        let t = reconstruct_additive_tree(&space).unwrap();
        assert_eq!(t.topology.edges().len(), 3);
        let mut w = t.weights.clone();
        w.sort();
        assert_eq!(w, vec![q(1), q(2), q(3)]);
    }

    #[test]
    fn caterpillar_round_trip() {
        // leaves 0..5, interior 5, 6, 7 on a spine
        let topo = TreeTopology::new(
            8,
            vec![(0, 5), (1, 5), (5, 6), (2, 6), (6, 7), (3, 7), (4, 7)],
            vec![0, 1, 2, 3, 4],
        )
        .unwrap();
        let weights: Vec<Rational> = [3, 1, 2, 5, 1, 4, 1].iter().map(|&v| rational(v, 2)).collect();
        let original = WeightedTree::new(topo, weights).unwrap();
        let space = metric_from_weighted_tree(&original).unwrap();
        let rebuilt = reconstruct_additive_tree(&space).unwrap();
        assert_eq!(rebuilt.weighted_splits(), original.weighted_splits());
    }

    #[test]
    fn simplex_gives_a_star() {
        let t = reconstruct_additive_tree(&FiniteMetricSpace::regular_simplex(5, 2.0)).unwrap();
        assert_eq!(t.topology.edges().len(), 5);
        assert!(t.weights.iter().all(|w| (w - 1.0).abs() < 1e-12));
    }

    #[test]
    fn rejects_rectangle() {
        let m = vec![vec![0., 3., 5., 4.], vec![3., 0., 4., 5.], vec![5., 4., 0., 3.], vec![4., 5., 3., 0.]];
        let r = reconstruct_additive_tree(&FiniteMetricSpace::new(m).unwrap());
        assert!(matches!(r, Err(FillingError::NotAdditive(Some(_)))));
    }
}
