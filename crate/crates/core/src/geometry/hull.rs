use std::cmp::Ordering;

use super::predicates::orient;
use super::{lex_cmp, Point2};

/// Strict convex hull vertices (no collinear ones) in counterclockwise order,
/// starting from the lexicographically smallest point. Collinear input yields
/// the two extreme points.
pub fn convex_hull(points: &[Point2]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| lex_cmp(points[a], points[b]));
    order.dedup_by(|a, b| points[*a] == points[*b]);
    if order.len() < 3 {
        return order;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * order.len());
    for pass in 0..2 {
        let start = hull.len();
        let seq: Box<dyn Iterator<Item = &usize>> =
            if pass == 0 { Box::new(order.iter()) } else { Box::new(order.iter().rev()) };
        for &i in seq {
            while hull.len() >= start + 2
                && orient(points[hull[hull.len() - 2]], points[hull[hull.len() - 1]], points[i]) != Ordering::Greater
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    if hull.len() == 2 && hull[0] == hull[1] {
        hull.pop();
    }
    hull
}

/// Nested hull layers: `levels[0]` are the points on the boundary of the
/// convex hull (including those inside hull edges), `levels[1]` the boundary
/// points of what remains, and so on. Each level is sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexityLevels {
    pub levels: Vec<Vec<usize>>,
}

impl ConvexityLevels {
    /// `c(M)`
    pub fn count(&self) -> usize {
        self.levels.len()
    }
}

pub fn convexity_levels(points: &[Point2]) -> ConvexityLevels {
    let mut remaining: Vec<usize> = (0..points.len()).collect();
    let mut levels = Vec::new();
    while !remaining.is_empty() {
        let sub: Vec<Point2> = remaining.iter().map(|&i| points[i]).collect();
        let hull = convex_hull(&sub);
        let on_boundary = |k: usize| -> bool {
            if hull.len() < 3 {
                return true;
            }
            (0..hull.len()).any(|h| {
                let (a, b) = (sub[hull[h]], sub[hull[(h + 1) % hull.len()]]);
                orient(a, b, sub[k]) == Ordering::Equal
            })
        };
        let (level, rest): (Vec<usize>, Vec<usize>) =
            (0..remaining.len()).partition(|&k| on_boundary(k));
        levels.push(level.into_iter().map(|k| remaining[k]).collect());
        remaining = rest.into_iter().map(|k| remaining[k]).collect();
    }
    ConvexityLevels { levels }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point2> {
        v.iter().map(|&p| p.into()).collect()
    }

    #[test]
    fn square_is_one_level() {
        let l = convexity_levels(&pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]));
        assert_eq!(l.count(), 1);
    }

    #[test]
    fn square_with_center_is_two_levels() {
        let l = convexity_levels(&pts(&[(0., 0.), (2., 0.), (1., 1.), (2., 2.), (0., 2.)]));
        assert_eq!(l.levels, vec![vec![0, 1, 3, 4], vec![2]]);
    }

    #[test]
    fn collinear_and_edge_points_stay_on_the_hull() {
        let l = convexity_levels(&pts(&[(0., 0.), (1., 1.), (2., 2.), (3., 3.)]));
        assert_eq!(l.count(), 1);
        let l = convexity_levels(&pts(&[(0., 0.), (1., 0.), (2., 0.), (1., 2.)]));
        assert_eq!(l.count(), 1);
    }

    #[test]
    fn hull_drops_collinear_vertices() {
        let h = convex_hull(&pts(&[(0., 0.), (1., 0.), (2., 0.), (2., 2.), (0., 2.), (1., 1.)]));
        assert_eq!(h, vec![0, 2, 3, 4]);
    }
}
