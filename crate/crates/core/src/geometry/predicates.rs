//! Orientation and incircle signs, exact for all finite `f64` inputs.

use std::cmp::Ordering;

use robust::Coord;

use super::Point2;

fn coord(p: Point2) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

/// `Greater` when `a, b, c` turn counterclockwise, `Less` when clockwise.
pub fn orient(a: Point2, b: Point2, c: Point2) -> Ordering {
    sign(robust::orient2d(coord(a), coord(b), coord(c)))
}

/// `Greater` when `d` lies strictly inside the circle through the
/// counterclockwise triangle `a, b, c`, `Equal` when cocircular.
pub fn incircle(a: Point2, b: Point2, c: Point2, d: Point2) -> Ordering {
    sign(robust::incircle(coord(a), coord(b), coord(c), coord(d)))
}

fn sign(v: f64) -> Ordering {
    v.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::{FromPrimitive, Signed, Zero};

    fn r(x: f64) -> Rational {
        Rational::from_f64(x).unwrap()
    }

    fn exact_orient(a: Point2, b: Point2, c: Point2) -> Ordering {
        let v = (r(b.x) - r(a.x)) * (r(c.y) - r(a.y)) - (r(b.y) - r(a.y)) * (r(c.x) - r(a.x));
        v.cmp(&Rational::zero())
    }

    fn exact_incircle(a: Point2, b: Point2, c: Point2, d: Point2) -> Ordering {
        let row = |p: Point2| {
            let (x, y) = (r(p.x) - r(d.x), r(p.y) - r(d.y));
            let w = x.clone() * x.clone() + y.clone() * y.clone();
            [x, y, w]
        };
        let (m0, m1, m2) = (row(a), row(b), row(c));
        let det = m0[0].clone() * (m1[1].clone() * m2[2].clone() - m1[2].clone() * m2[1].clone())
            - m0[1].clone() * (m1[0].clone() * m2[2].clone() - m1[2].clone() * m2[0].clone())
            + m0[2].clone() * (m1[0].clone() * m2[1].clone() - m1[1].clone() * m2[0].clone());
        if det.is_positive() {
            Ordering::Greater
        } else if det.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }

    #[test]
    fn simple_signs() {
        let (a, b, c) = (Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(0., 1.));
        assert_eq!(orient(a, b, c), Ordering::Greater);
        assert_eq!(orient(a, c, b), Ordering::Less);
        assert_eq!(orient(a, b, Point2::new(2., 0.)), Ordering::Equal);
        assert_eq!(incircle(a, b, c, Point2::new(0.5, 0.5)), Ordering::Greater);
        assert_eq!(incircle(a, b, c, Point2::new(1., 1.)), Ordering::Equal);
        assert_eq!(incircle(a, b, c, Point2::new(2., 2.)), Ordering::Less);
    }

    #[test]
    fn near_degenerate_inputs_match_exact_arithmetic() {
        let base = 0.5f64;
        for i in 0..64 {
            for j in 0..8 {
                let eps = f64::EPSILON * i as f64;
                let a = Point2::new(base + eps, base);
                let b = Point2::new(12.0, 12.0 + j as f64 * f64::EPSILON * 8.0);
                let c = Point2::new(24.0, 24.0);
                assert_eq!(orient(a, b, c), exact_orient(a, b, c));
                let d = Point2::new(0.1 + eps, 24.0);
                assert_eq!(incircle(a, b, d, c), exact_incircle(a, b, d, c));
            }
        }
    }
}
