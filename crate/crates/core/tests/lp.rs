#![allow(clippy::needless_range_loop)]

use num_traits::{Signed, Zero};
use optnet::fillings::{lp_solve, LpError, LpProblem, Relation, VarBound};
use optnet::scalar::{Rational, Scalar};
use proptest::prelude::*;

type Row = (Vec<i64>, Relation, i64);

fn q(x: i64) -> Rational {
    Rational::from_int(x)
}

/// Unique solution of a square system, by Gaussian elimination.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone() / a[col][col].clone();
                for c in col..n {
                    let delta = f.clone() * a[col][c].clone();
                    a[r][c] -= delta;
                }
                let delta = f * b[col].clone();
                b[r] -= delta;
            }
        }
    }
    Some((0..n).map(|i| b[i].clone() / a[i][i].clone()).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    (k - 1..n).flat_map(|last| combinations(last, k - 1).into_iter().map(move |mut c| {
        c.push(last);
        c
    })).collect()
}

/// Least objective over all basic feasible points of a bounded problem.
fn vertex_minimum(objective: &[i64], rows: &[Row]) -> Option<Rational> {
    let nv = objective.len();
    let mut tight: Vec<(Vec<Rational>, Rational)> = rows.iter().map(|(a, _, b)| (a.iter().map(|&x| q(x)).collect(), q(*b))).collect();
    for i in 0..nv {
        tight.push(((0..nv).map(|j| q((i == j) as i64)).collect(), q(0)));
    }
    let feasible = |x: &[Rational]| {
        x.iter().all(|v| !v.is_negative())
            && rows.iter().all(|(a, rel, b)| {
                let lhs = a.iter().zip(x).fold(q(0), |acc, (&c, v)| acc + q(c) * v.clone());
                match rel {
                    Relation::Le => lhs <= q(*b),
                    Relation::Ge => lhs >= q(*b),
                    Relation::Eq => lhs == q(*b),
                }
            })
    };
    let mut best: Option<Rational> = None;
    for subset in combinations(tight.len(), nv) {
        let a = subset.iter().map(|&i| tight[i].0.clone()).collect();
        let b = subset.iter().map(|&i| tight[i].1.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(&x) {
                let value = objective.iter().zip(&x).fold(q(0), |acc, (&c, v)| acc + q(c) * v.clone());
                if best.as_ref().is_none_or(|b| value < *b) {
                    best = Some(value);
                }
            }
        }
    }
    best
}

fn relation() -> impl Strategy<Value = Relation> {
    prop_oneof![3 => Just(Relation::Le), 2 => Just(Relation::Ge), 1 => Just(Relation::Eq)]
}

/// Random rows inside the box `x >= 0, sum x <= 12`, so every feasible problem is bounded.
fn problem() -> impl Strategy<Value = (Vec<i64>, Vec<Row>)> {
    (2usize..=3).prop_flat_map(|nv| {
        let row = (prop::collection::vec(-3i64..=4, nv), relation(), 0i64..=8);
        (prop::collection::vec(-5i64..=5, nv), prop::collection::vec(row, 1..=4)).prop_map(move |(c, mut rows)| {
            rows.push((vec![1; nv], Relation::Le, 12));
            (c, rows)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn simplex_matches_vertex_enumeration((objective, rows) in problem()) {
        let nv = objective.len();
        let mut lp = LpProblem::new(objective.iter().map(|&c| q(c)).collect(), vec![VarBound::NonNegative; nv]);
        for (a, rel, b) in &rows {
            lp.constrain(a.iter().map(|&x| q(x)).collect(), *rel, q(*b));
        }
        match (lp_solve(&lp), vertex_minimum(&objective, &rows)) {
            (Ok(sol), Some(best)) => {
                prop_assert_eq!(&sol.value, &best);
                prop_assert!(lp.violation(&sol.x).is_zero());
                // strong duality through the returned multipliers
                let dual_value = rows.iter().zip(&sol.duals).fold(q(0), |acc, ((_, _, b), y)| acc + q(*b) * y.clone());
                prop_assert_eq!(dual_value, best);
                for j in 0..nv {
                    let reduced = rows.iter().zip(&sol.duals).fold(q(objective[j]), |acc, ((a, _, _), y)| acc - q(a[j]) * y.clone());
                    prop_assert!(!reduced.is_negative());
                }
            }
            (Err(LpError::Infeasible), None) => {}
            (got, expected) => prop_assert!(false, "solver {:?}, enumeration {:?}", got, expected),
        }
    }

    #[test]
    fn floating_point_agrees_with_exact((objective, rows) in problem()) {
        let nv = objective.len();
        let mut exact = LpProblem::new(objective.iter().map(|&c| q(c)).collect(), vec![VarBound::NonNegative; nv]);
        let mut float = LpProblem::new(objective.iter().map(|&c| c as f64).collect(), vec![VarBound::NonNegative; nv]);
        for (a, rel, b) in &rows {
            exact.constrain(a.iter().map(|&x| q(x)).collect(), *rel, q(*b));
            float.constrain(a.iter().map(|&x| x as f64).collect(), *rel, *b as f64);
        }
        match (lp_solve(&exact), lp_solve(&float)) {
            (Ok(e), Ok(f)) => prop_assert!((e.value.to_f64_lossy() - f.value).abs() < 1e-9),
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert!(false, "exact {:?}, float {:?}", a, b),
        }
    }
}
