use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use optnet::geometry::{convex_hull, delaunay_graph, euclidean_mst, predicates::orient, Point2};
use optnet::graph::{kruskal_mst, WeightedGraph};
use optnet::scalar::{Rational, Scalar};
use proptest::prelude::*;

/// Points on a small integer grid, so cocircular and collinear
/// configurations are common.
fn grid_points(max_len: usize) -> impl Strategy<Value = Vec<Point2>> {
    prop::collection::btree_set((0i32..7, 0i32..7), 2..=max_len)
        .prop_map(|s| s.into_iter().map(|(x, y)| Point2::new(x as f64, y as f64)).collect())
}

fn q(x: f64) -> Rational {
    Rational::from_f64_exact(x).unwrap()
}

/// The cells of `i` and `j` share a segment of positive length iff an open
/// interval of centers on the bisector is strictly closer to `i` and `j`
/// than to every other point. With `c(t) = m + t u`, the condition for `k`
/// is `a + b t > 0`, linear in `t`.
fn voronoi_neighbors(points: &[Point2], i: usize, j: usize) -> bool {
    let (pi, pj) = (points[i], points[j]);
    let (mx, my) = ((q(pi.x) + q(pj.x)) / Rational::from_int(2), (q(pi.y) + q(pj.y)) / Rational::from_int(2));
    let (ux, uy) = (q(pi.y) - q(pj.y), q(pj.x) - q(pi.x));
    let sq = |x: Rational, y: Rational| x.clone() * x + y.clone() * y;
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for (k, pk) in points.iter().enumerate() {
        if k == i || k == j {
            continue;
        }
        let a = sq(mx.clone() - q(pk.x), my.clone() - q(pk.y)) - sq(mx.clone() - q(pi.x), my.clone() - q(pi.y));
        let b = Rational::from_int(2) * (ux.clone() * (q(pi.x) - q(pk.x)) + uy.clone() * (q(pi.y) - q(pk.y)));
        if b.is_zero() {
            if !a.is_positive() {
                return false;
            }
            continue;
        }
        let t = -a / b.clone();
        if b.is_positive() {
            lo = Some(lo.map_or(t.clone(), |l| l.max(t)));
        } else {
            hi = Some(hi.map_or(t.clone(), |h| h.min(t)));
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) => l < h,
        _ => true,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn delaunay_matches_voronoi_oracle(points in grid_points(14)) {
        let graph = delaunay_graph(&points).unwrap();
        let n = points.len();
        let expected: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| voronoi_neighbors(&points, i, j)).collect();
        prop_assert_eq!(graph.edges, expected);
    }

    #[test]
    fn emst_matches_complete_graph(points in grid_points(12)) {
        let (network, length) = euclidean_mst(&points).unwrap();
        let n = points.len();
        let complete = WeightedGraph::complete(n, |i, j| points[i].dist(points[j]));
        let reference = kruskal_mst(&complete).unwrap().weight;
        prop_assert!((length - reference).abs() <= 1e-12 * reference);
        prop_assert_eq!(network.topology.edges().len(), n - 1);
    }

    #[test]
    fn hull_is_convex_and_contains_everything(points in grid_points(14)) {
        let hull = convex_hull(&points);
        let distinct: BTreeSet<usize> = hull.iter().copied().collect();
        prop_assert_eq!(distinct.len(), hull.len());
        if hull.len() >= 3 {
            for t in 0..hull.len() {
                let (a, b) = (points[hull[t]], points[hull[(t + 1) % hull.len()]]);
                for &p in &points {
                    prop_assert_ne!(orient(a, b, p), std::cmp::Ordering::Less);
                }
            }
        }
    }
}
