use super::parametric::check_filling;
use super::FillingError;
use crate::graph::{TreeTopology, WeightedTree};
use crate::metric::{linf, FiniteMetricSpace};
use crate::scalar::Scalar;

/// A filling realized in the max-norm space of dimension `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct KuratowskiNetwork<T> {
    pub topology: TreeTopology,
    /// Image of every vertex of the tree.
    pub points: Vec<Vec<T>>,
    /// Max-norm length of every edge.
    pub edge_lengths: Vec<T>,
}

impl<T: Scalar> KuratowskiNetwork<T> {
    pub fn length(&self) -> T {
        self.edge_lengths.iter().fold(T::zero(), |acc, w| acc + w.clone())
    }
}

/// Maps each vertex `v` to `(d(v, p_1), ..., d(v, p_n))`, where `d` is the
/// shortest-path distance in the tree joined with the complete graph on the
/// boundary weighted by the metric.
pub fn kuratowski_network<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    filling: &WeightedTree<T>,
) -> Result<KuratowskiNetwork<T>, FillingError> {
    check_filling(space, filling)?;
    let topo = &filling.topology;
    let vc = topo.vertex_count();
    let boundary = topo.boundary();
    let mut d: Vec<Vec<Option<T>>> = vec![vec![None; vc]; vc];
    let relax = |d: &mut Vec<Vec<Option<T>>>, u: usize, v: usize, w: &T| {
        if d[u][v].as_ref().is_none_or(|x| w < x) {
            d[u][v] = Some(w.clone());
            d[v][u] = Some(w.clone());
        }
    };
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(T::zero());
    }
    for (&(u, v), w) in topo.edges().iter().zip(&filling.weights) {
        relax(&mut d, u, v, w);
    }
    for i in 0..boundary.len() {
        for j in i + 1..boundary.len() {
            relax(&mut d, boundary[i], boundary[j], space.d(i, j));
        }
    }
    for m in 0..vc {
        for u in 0..vc {
            let Some(um) = d[u][m].clone() else { continue };
            for v in 0..vc {
                if let Some(mv) = &d[m][v] {
                    let via = um.clone() + mv.clone();
                    if d[u][v].as_ref().is_none_or(|x| via < *x) {
                        d[u][v] = Some(via);
                    }
                }
            }
        }
    }
    let points: Vec<Vec<T>> = (0..vc)
        .map(|v| boundary.iter().map(|&b| d[v][b].clone().expect("connected")).collect())
        .collect();
    let edge_lengths = topo.edges().iter().map(|&(u, v)| linf(&points[u], &points[v])).collect();
    Ok(KuratowskiNetwork { topology: topo.clone(), points, edge_lengths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fillings::{mpf, star_weights};
    use crate::graph::enumerate_binary_topologies;
    use crate::scalar::{rational, Rational};

    #[test]
    fn equilateral_star() {
        let space = FiniteMetricSpace::regular_simplex(3, Rational::from_int(1));
        let k = kuratowski_network(&space, &star_weights(&space).unwrap()).unwrap();
        assert_eq!(k.points[3], vec![rational(1, 2); 3]);
        assert!(k.edge_lengths.iter().all(|w| *w == rational(1, 2)));
        assert_eq!(k.length(), rational(3, 2));
        for i in 0..3 {
            assert_eq!(k.points[i], space.row(i));
        }
    }

    #[test]
    fn two_points() {
        let space = FiniteMetricSpace::new(vec![vec![0.0, 2.5], vec![2.5, 0.0]]).unwrap();
        let k = kuratowski_network(&space, &star_weights(&space).unwrap()).unwrap();
        assert_eq!(k.points, space.to_matrix());
    }

    #[test]
    fn parametric_weights_are_induced() {
        let q = |v: i64| Rational::from_int(v);
        let m = [[0, 3, 5, 4, 6], [3, 0, 4, 5, 4], [5, 4, 0, 3, 5], [4, 5, 3, 0, 7], [6, 4, 5, 7, 0]];
        let space = FiniteMetricSpace::new(m.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()).unwrap();
        for topo in enumerate_binary_topologies(5) {
            let f = mpf(&space, &topo, false).unwrap();
            let k = kuratowski_network(&space, &f.tree).unwrap();
            assert_eq!(k.edge_lengths, f.tree.weights);
        }
    }

    #[test]
    fn rejects_short_trees() {
        let space = FiniteMetricSpace::regular_simplex(3, 1.0);
        let tree = WeightedTree::new(TreeTopology::star(3), vec![0.5, 0.5, 0.4]).unwrap();
        assert!(matches!(kuratowski_network(&space, &tree), Err(FillingError::NotAFilling(_))));
    }
}
