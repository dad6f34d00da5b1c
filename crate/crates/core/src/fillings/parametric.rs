use rayon::prelude::*;

use super::lp::{lp_solve, LpProblem, Relation, VarBound, LP_EPS};
use super::FillingError;
use crate::graph::{enumerate_binary_topologies, tree_path, TreeTopology, WeightedTree};
use crate::metric::FiniteMetricSpace;
use crate::scalar::{eq_tol, le_tol, Scalar};

/// Default limit on the number of points for global minimization.
pub const DEFAULT_FILLING_NMAX: usize = 8;

/// Relative window, in floating point, within which a topology stays a
/// candidate for the exact minimum.
const SCREEN_REL_TOL: f64 = 1e-6;
/// Relative accuracy assumed of floating point parametric weights.
const ROUNDING_REL_TOL: f64 = 1e-11;

/// Optimal weights for one tree type.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricFilling<T> {
    pub tree: WeightedTree<T>,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimalFilling<T> {
    pub value: T,
    /// Nonnegative optimal weights on a binary type.
    pub binary: WeightedTree<T>,
    /// Canonical index of that type among the binary topologies.
    pub topology_index: usize,
    /// `binary` with zero-weight edges contracted.
    pub tree: WeightedTree<T>,
}

/// Edge sets of the boundary-to-boundary paths, one per pair `i < j`.
pub(crate) fn boundary_paths(topology: &TreeTopology) -> Vec<(usize, usize, Vec<usize>)> {
    let adj = topology.adjacency();
    let b = topology.boundary();
    let mut out = Vec::with_capacity(b.len() * b.len().saturating_sub(1) / 2);
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            out.push((i, j, tree_path(&adj, b[i], b[j])));
        }
    }
    out
}

/// Lightest weights on `topology` whose path sums dominate the metric.
/// With `allow_negative` the weights may be negative (generalized filling).
///
/// The program is solved through its dual, which has one variable per
/// boundary pair and one row per edge: maximize `Σ ρ(p,q) y_pq` subject to
/// the `y` of the paths through each edge summing to 1 (at most 1 for
/// nonnegative weights). The weights are the optimal multipliers of the rows.
pub fn mpf<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    topology: &TreeTopology,
    allow_negative: bool,
) -> Result<ParametricFilling<T>, FillingError> {
    let n = space.len();
    if topology.boundary_len() != n {
        return Err(FillingError::BoundaryMismatch { boundary: topology.boundary_len(), points: n });
    }
    let ne = topology.edges().len();
    let paths = boundary_paths(topology);
    // floating point problems are solved on the unit scale
    let scale = if T::EXACT { T::one() } else { space.max_distance() };
    let objective = paths.iter().map(|(i, j, _)| -(space.d(*i, *j).clone() / scale.clone())).collect();
    let mut problem = LpProblem::new(objective, vec![VarBound::NonNegative; paths.len()]);
    let relation = if allow_negative { Relation::Eq } else { Relation::Le };
    let mut rows = vec![vec![T::zero(); paths.len()]; ne];
    for (p, (_, _, path)) in paths.iter().enumerate() {
        for &e in path {
            rows[e][p] = T::one();
        }
    }
    for row in rows {
        problem.constrain(row, relation, T::one());
    }
    let solution = lp_solve(&problem)?;
    let weights: Vec<T> = solution
        .duals
        .into_iter()
        .map(|pi| {
            let w = -pi * scale.clone();
            if !allow_negative && w.is_negative() {
                T::zero()
            } else {
                w
            }
        })
        .collect();
    let tree = WeightedTree::new(topology.clone(), weights)?;
    Ok(ParametricFilling { value: tree.total_weight(), tree })
}

/// Minimal filling over all binary types.
///
/// The value is the least generalized parametric weight; a nonnegative
/// filling of the same weight is then recovered on the first type that admits
/// one. Exact scalars are screened in floating point first: types are solved
/// exactly in order of their floating value, skipping those whose floating
/// value is not below the best exact value found so far by more than rounding.
pub fn mf<T: Scalar>(space: &FiniteMetricSpace<T>, nmax: usize) -> Result<MinimalFilling<T>, FillingError> {
    let n = space.len();
    if n > nmax {
        return Err(FillingError::TooManyPoints { n, nmax });
    }
    let topologies = enumerate_binary_topologies(n);
    let total = topologies.total();
    let topology = |i: usize| topologies.get(i).expect("index in range");
    let tol = T::slack(&space.max_distance(), LP_EPS);

    let (least, order) = if T::EXACT {
        let approx = space.to_f64();
        let values: Vec<f64> = (0..total)
            .into_par_iter()
            .map(|i| mpf(&approx, &topology(i), true).map(|f| f.value))
            .collect::<Result<_, _>>()?;
        let floor = values.iter().copied().fold(f64::INFINITY, f64::min);
        let scale = approx.max_distance();
        let mut order: Vec<usize> = (0..total).filter(|&i| values[i] <= floor + SCREEN_REL_TOL * scale).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        let mut least: Option<T> = None;
        for &i in &order {
            if let Some(best) = &least {
                if values[i] >= best.to_f64_lossy() - ROUNDING_REL_TOL * scale {
                    continue;
                }
            }
            let v = mpf(space, &topology(i), true)?.value;
            if least.as_ref().is_none_or(|b| v < *b) {
                least = Some(v);
            }
        }
        (least.expect("at least one candidate"), order)
    } else {
        let values: Vec<T> = (0..total)
            .into_par_iter()
            .map(|i| mpf(space, &topology(i), true).map(|f| f.value))
            .collect::<Result<_, _>>()?;
        let least = values.iter().cloned().reduce(|a, b| if b < a { b } else { a }).expect("at least one topology");
        let order = (0..total).filter(|&i| eq_tol(&values[i], &least, &tol)).collect();
        (least, order)
    };

    for index in order {
        let filling = mpf(space, &topology(index), false)?;
        if le_tol(&filling.value, &least, &tol) {
            let tree = filling.tree.contract_zero_edges(&tol);
            return Ok(MinimalFilling { value: least, binary: filling.tree, topology_index: index, tree });
        }
    }
    Err(FillingError::NotAFilling("no nonnegative filling attains the generalized minimum".into()))
}

/// Checks nonnegativity and that path sums dominate the metric.
pub(crate) fn check_filling<T: Scalar>(space: &FiniteMetricSpace<T>, tree: &WeightedTree<T>) -> Result<(), FillingError> {
    let n = space.len();
    if tree.topology.boundary_len() != n {
        return Err(FillingError::BoundaryMismatch { boundary: tree.topology.boundary_len(), points: n });
    }
    if let Some(e) = tree.weights.iter().position(|w| w.is_negative()) {
        return Err(FillingError::NotAFilling(format!("edge {e} has negative weight {}", tree.weights[e])));
    }
    let tol = T::slack(&space.max_distance(), LP_EPS);
    let d = tree.boundary_distances();
    for i in 0..n {
        for j in i + 1..n {
            if !le_tol(space.d(i, j), &d[i][j], &tol) {
                return Err(FillingError::NotAFilling(format!(
                    "path {i}-{j} has weight {} below the distance {}",
                    d[i][j],
                    space.d(i, j)
                )));
            }
        }
    }
    Ok(())
}

/// Whether `tree` is a (nonnegative) filling of `space`.
pub fn is_filling<T: Scalar>(space: &FiniteMetricSpace<T>, tree: &WeightedTree<T>) -> bool {
    check_filling(space, tree).is_ok()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourPointFilling<T> {
    pub value: T,
    /// The pairing with the least sum; its pairs are the cherries of the minimal type.
    pub pairing: [(usize, usize); 2],
}

/// Closed form for four points: half the sum of the least and the greatest
/// of the three pairing sums.
pub fn four_point_mf<T: Scalar>(space: &FiniteMetricSpace<T>) -> Result<FourPointFilling<T>, FillingError> {
    if space.len() != 4 {
        return Err(FillingError::PointCount { expected: 4, got: space.len() });
    }
    let pairings = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
    let sums: Vec<T> = pairings
        .iter()
        .map(|[(a, b), (c, d)]| space.d(*a, *b).clone() + space.d(*c, *d).clone())
        .collect();
    let mut lo = 0;
    let mut hi = 0;
    for k in 1..3 {
        if sums[k] < sums[lo] {
            lo = k;
        }
        if sums[k] > sums[hi] {
            hi = k;
        }
    }
    Ok(FourPointFilling { value: (sums[lo].clone() + sums[hi].clone()) * T::half(), pairing: pairings[lo] })
}

/// Star filling of an additive space whose generating tree is a star: the
/// edge to point `i` weighs the Gromov product at `i`, which must not depend
/// on the other two points.
pub fn star_weights<T: Scalar>(space: &FiniteMetricSpace<T>) -> Result<WeightedTree<T>, FillingError> {
    let n = space.len();
    if n == 2 {
        return Ok(WeightedTree::new(TreeTopology::star(2), vec![space.d(0, 1).clone()])?);
    }
    let report = space.check_four_point();
    if !report.is_additive() {
        return Err(FillingError::NotAdditive(report.witness));
    }
    let tol = space.tolerance();
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let others: Vec<usize> = (0..n).filter(|&x| x != i).collect();
        let (j, k) = (others[0], others[1]);
        let first = space.gromov_product(i, j, k)?;
        for (a, &j2) in others.iter().enumerate() {
            for &k2 in &others[a + 1..] {
                let second = space.gromov_product(i, j2, k2)?;
                if !eq_tol(&first, &second, &tol) {
                    return Err(FillingError::InconsistentProducts {
                        point: i,
                        j,
                        k,
                        j2,
                        k2,
                        first: first.to_string(),
                        second: second.to_string(),
                    });
                }
            }
        }
        weights.push(first);
    }
    Ok(WeightedTree::new(TreeTopology::star(n), weights)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn space(m: &[&[i64]]) -> FiniteMetricSpace<Rational> {
        FiniteMetricSpace::new(m.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()).unwrap()
    }

    /// Corners of a 3x4 rectangle in boundary order.
    fn rectangle() -> FiniteMetricSpace<Rational> {
        space(&[&[0, 3, 5, 4], &[3, 0, 4, 5], &[5, 4, 0, 3], &[4, 5, 3, 0]])
    }

    #[test]
    fn rectangle_diagonal_mustaches() {
        let topo = TreeTopology::quartet(0, 2, 1, 3);
        let nonneg = mpf(&rectangle(), &topo, false).unwrap();
        assert_eq!(nonneg.value, q(10));
        let general = mpf(&rectangle(), &topo, true).unwrap();
        assert_eq!(general.value, q(9));
        assert!(general.tree.weights[2] < q(0));
    }

    #[test]
    fn rectangle_minimal_filling() {
        let m = mf(&rectangle(), DEFAULT_FILLING_NMAX).unwrap();
        assert_eq!(m.value, q(8));
        assert!(m.tree.weights.iter().all(|w| *w >= q(0)));
        assert!(is_filling(&rectangle(), &m.tree));
        let closed = four_point_mf(&rectangle()).unwrap();
        assert_eq!(closed.value, q(8));
        assert_eq!(closed.pairing, [(0, 1), (2, 3)]);
        let fm = mf(&rectangle().to_f64(), DEFAULT_FILLING_NMAX).unwrap();
        assert!((fm.value - 8.0).abs() < 1e-12);
    }

    #[test]
    fn equilateral_star() {
        let eq = FiniteMetricSpace::regular_simplex(3, q(1));
        let f = mpf(&eq, &TreeTopology::star(3), false).unwrap();
        assert_eq!(f.value, rational(3, 2));
        assert!(f.tree.weights.iter().all(|w| *w == rational(1, 2)));
        for n in 2..=6 {
            let m = mf(&FiniteMetricSpace::regular_simplex(n, q(2)), DEFAULT_FILLING_NMAX).unwrap();
            assert_eq!(m.value, q(n as i64));
            // interior edges vanish and the filling is a star
            assert_eq!(m.tree.topology.edges().len(), if n == 2 { 1 } else { n });
        }
    }

    #[test]
    fn three_four_five() {
        let t = space(&[&[0, 3, 4], &[3, 0, 5], &[4, 5, 0]]);
        let m = mf(&t, DEFAULT_FILLING_NMAX).unwrap();
        assert_eq!(m.value, q(6));
        assert_eq!(star_weights(&t).unwrap().weights, vec![q(1), q(2), q(3)]);
    }

    #[test]
    fn star_weights_rejects_rectangle() {
        assert!(matches!(star_weights(&rectangle()), Err(FillingError::NotAdditive(_))));
        let eq = FiniteMetricSpace::regular_simplex(5, q(1));
        assert!(star_weights(&eq).unwrap().weights.iter().all(|w| *w == rational(1, 2)));
    }

    #[test]
    fn star_weights_rejects_non_star_tree() {
        // additive with a quartet generating tree: cherries {0,1} and {2,3}, interior edge 1
        let s = space(&[&[0, 2, 3, 3], &[2, 0, 3, 3], &[3, 3, 0, 2], &[3, 3, 2, 0]]);
        assert!(matches!(star_weights(&s), Err(FillingError::InconsistentProducts { .. })));
    }

    /// Direct form: minimize the total weight subject to every path constraint.
    fn mpf_primal(space: &FiniteMetricSpace<Rational>, topology: &TreeTopology, allow_negative: bool) -> Rational {
        let ne = topology.edges().len();
        let bound = if allow_negative { VarBound::Free } else { VarBound::NonNegative };
        let mut problem = LpProblem::new(vec![q(1); ne], vec![bound; ne]);
        for (i, j, path) in boundary_paths(topology) {
            let mut row = vec![q(0); ne];
            for e in path {
                row[e] = q(1);
            }
            problem.constrain(row, Relation::Ge, space.d(i, j).clone());
        }
        lp_solve(&problem).unwrap().value
    }

    #[test]
    fn dual_matches_primal() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let n = rng.random_range(3..=6);
            let mut m = vec![vec![q(0); n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    let v = q(rng.random_range(10..=20));
                    m[i][j] = v.clone();
                    m[j][i] = v;
                }
            }
            let space = FiniteMetricSpace::new(m).unwrap();
            let topo = enumerate_binary_topologies(n).nth(rng.random_range(0..crate::graph::binary_topology_count(n))).unwrap();
            for neg in [false, true] {
                let f = mpf(&space, &topo, neg).unwrap();
                assert_eq!(f.value, mpf_primal(&space, &topo, neg));
                if !neg {
                    assert!(is_filling(&space, &f.tree));
                }
                let d = f.tree.boundary_distances();
                for i in 0..n {
                    for j in i + 1..n {
                        assert!(d[i][j] >= *space.d(i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn guards() {
        assert!(matches!(
            mpf(&rectangle(), &TreeTopology::star(3), false),
            Err(FillingError::BoundaryMismatch { boundary: 3, points: 4 })
        ));
        assert!(matches!(mf(&rectangle(), 3), Err(FillingError::TooManyPoints { n: 4, nmax: 3 })));
    }
}
