use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{GraphError, WeightedGraph};
use crate::scalar::Scalar;

/// Number of spanning trees via the Kirchhoff matrix: the determinant of the
/// principal minor obtained by deleting the last row and column, evaluated with
/// fraction-free (Bareiss) elimination so the count is exact.
///
/// Edge weights are ignored. A disconnected graph yields `Err(Disconnected)`;
/// its count would be zero.
pub fn spanning_tree_count<W: Scalar>(graph: &WeightedGraph<W>) -> Result<BigInt, GraphError> {
    let n = graph.vertex_count();
    if n < 2 {
        return Err(GraphError::TooSmall(2));
    }
    let mut lap = vec![vec![BigInt::zero(); n]; n];
    for e in graph.edges() {
        lap[e.u][e.u] += 1;
        lap[e.v][e.v] += 1;
        lap[e.u][e.v] -= 1;
        lap[e.v][e.u] -= 1;
    }
    let minor: Vec<Vec<BigInt>> = lap.into_iter().take(n - 1).map(|mut row| {
        row.truncate(n - 1);
        row
    }).collect();
    let det = bareiss_determinant(minor);
    if det.is_zero() {
        return Err(GraphError::Disconnected);
    }
    Ok(det)
}

pub(crate) fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}
