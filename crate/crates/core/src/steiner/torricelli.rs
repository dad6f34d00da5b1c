use std::f64::consts::FRAC_PI_3;

use super::SteinerError;
use crate::geometry::predicates::orient;
use crate::geometry::Point2;

/// Outcome of the three-point Steiner problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Torricelli {
    /// The Torricelli point, or the vertex with the wide angle.
    pub point: Point2,
    pub smt3: f64,
    /// `Some(k)` when the angle at input `k` is at least 120°, so the
    /// optimal network has no Steiner point.
    pub degenerate: Option<usize>,
}

impl Torricelli {
    pub fn is_degenerate(&self) -> bool {
        self.degenerate.is_some()
    }
}

/// Third vertex of the equilateral triangle on `a`, `b` lying to the right of
/// the directed line `a -> b` (`left = false`) or to its left.
pub(crate) fn equilateral_apex(a: Point2, b: Point2, left: bool) -> Point2 {
    let angle = if left { FRAC_PI_3 } else { -FRAC_PI_3 };
    a + (b - a).rotate(angle)
}

fn line_intersection(p: Point2, r: Point2, q: Point2, s: Point2) -> Option<Point2> {
    // p + t r = q + u s
    let denom = r.cross(s);
    if denom == 0.0 {
        return None;
    }
    let t = (q - p).cross(s) / denom;
    Some(p + r * t)
}

/// Solves the Steiner problem for three distinct points.
///
/// With all angles below 120° the Torricelli point is the common point of the
/// Simpson lines `A A'`, where `A'` is the apex of the equilateral triangle
/// erected outward on the opposite side; each Simpson line has length
/// `smt3`. Otherwise the network is the two sides at the wide vertex.
pub fn torricelli_point(a: Point2, b: Point2, c: Point2) -> Result<Torricelli, SteinerError> {
    let pts = [a, b, c];
    for i in 0..3 {
        if !pts[i].is_finite() {
            return Err(SteinerError::Geometry(crate::geometry::GeometryError::NonFinite(i)));
        }
        for j in i + 1..3 {
            if pts[i] == pts[j] {
                return Err(SteinerError::Geometry(crate::geometry::GeometryError::DuplicatePoint(i, j)));
            }
        }
    }
    for k in 0..3 {
        let (p, q, r) = (pts[k], pts[(k + 1) % 3], pts[(k + 2) % 3]);
        let (u, v) = (q - p, r - p);
        // angle at p is at least 120° iff cos <= -1/2
        if u.dot(v) <= -0.5 * u.norm() * v.norm() {
            return Ok(Torricelli { point: p, smt3: u.norm() + v.norm(), degenerate: Some(k) });
        }
    }
    let ccw = orient(a, b, c) == std::cmp::Ordering::Greater;
    // outward apex on side (b, c) lies on the side opposite a
    let a_apex = equilateral_apex(b, c, !ccw);
    let b_apex = equilateral_apex(c, a, !ccw);
    let point = line_intersection(a, a_apex - a, b, b_apex - b).ok_or(SteinerError::NumericalFailure)?;
    Ok(Torricelli { point, smt3: a.dist(a_apex), degenerate: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_triangle() {
        let h = 3f64.sqrt() / 2.0;
        let t = torricelli_point(Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(0.5, h)).unwrap();
        assert!(t.degenerate.is_none());
        assert!((t.smt3 - 3f64.sqrt()).abs() < 1e-14);
        assert!(t.point.dist(Point2::new(0.5, h / 3.0)) < 1e-14);
    }

    #[test]
    fn wide_angle_is_degenerate() {
        let c = Point2::new(-(150f64.to_radians().cos().abs()), 0.5);
        let t = torricelli_point(Point2::new(0., 0.), Point2::new(1., 0.), c).unwrap();
        assert_eq!(t.degenerate, Some(0));
        assert_eq!(t.point, Point2::new(0., 0.));
        assert!((t.smt3 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn orientation_does_not_matter() {
        let (a, b, c) = (Point2::new(0., 0.), Point2::new(4., 0.), Point2::new(1., 3.));
        let t1 = torricelli_point(a, b, c).unwrap();
        let t2 = torricelli_point(a, c, b).unwrap();
        assert!((t1.smt3 - t2.smt3).abs() < 1e-12);
        assert!(t1.point.dist(t2.point) < 1e-12);
        let sum = a.dist(t1.point) + b.dist(t1.point) + c.dist(t1.point);
        assert!((sum - t1.smt3).abs() < 1e-12);
    }

    #[test]
    fn coincident_points_rejected() {
        let p = Point2::new(1., 1.);
        assert!(torricelli_point(p, p, Point2::new(0., 0.)).is_err());
    }
}
