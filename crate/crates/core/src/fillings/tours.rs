use std::collections::BTreeSet;

use super::lp::LP_EPS;
use super::parametric::{boundary_paths, mpf};
use super::FillingError;
use crate::graph::TreeTopology;
use crate::metric::{canonical_cycle, CyclicOrder, FiniteMetricSpace};
use crate::scalar::{eq_tol, Scalar};

/// Default largest multiplicity searched by [`eremin_value`].
pub const DEFAULT_KMAX: usize = 2;
/// Largest multiplicity accepted at all.
pub const MULTITOUR_KMAX: usize = 3;
/// Largest boundary for multitours of multiplicity above one.
pub const MULTITOUR_NMAX: usize = 7;

/// A closed walk through the tree using every edge exactly `2k` times,
/// recorded by the boundary points it visits. Each point occurs `k` times.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multitour {
    multiplicity: usize,
    sequence: Vec<usize>,
}

impl Multitour {
    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    /// Visiting order, starting at point 0, up to rotation and reflection.
    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    /// The bijection on `k` copies of the boundary: copy `c` of point `x` is
    /// element `x * k + c`, and the `c`-th visit of `x` in [`Self::sequence`]
    /// is its copy `c`.
    pub fn bijection(&self) -> Vec<usize> {
        let k = self.multiplicity;
        let mut copy_seen = vec![0; self.sequence.len() / k];
        let ids: Vec<usize> = self
            .sequence
            .iter()
            .map(|&x| {
                let c = copy_seen[x];
                copy_seen[x] += 1;
                x * k + c
            })
            .collect();
        let mut pi = vec![0; ids.len()];
        for t in 0..ids.len() {
            pi[ids[t]] = ids[(t + 1) % ids.len()];
        }
        pi
    }

    /// `(1/2k) Σ ρ(x, π(x))`.
    pub fn half_perimeter<T: Scalar>(&self, space: &FiniteMetricSpace<T>) -> T {
        let m = self.sequence.len();
        let sum = (0..m).fold(T::zero(), |acc, t| {
            acc + space.d(self.sequence[t], self.sequence[(t + 1) % m]).clone()
        });
        sum / T::from_int(2 * self.multiplicity as i64)
    }

    /// The cyclic order of a tour (multiplicity one).
    pub fn as_cyclic_order(&self) -> Option<CyclicOrder> {
        if self.multiplicity == 1 {
            CyclicOrder::from_sequence(&self.sequence).ok()
        } else {
            None
        }
    }
}

fn require_binary(topology: &TreeTopology) -> Result<(), FillingError> {
    if topology.is_binary() {
        Ok(())
    } else {
        Err(FillingError::NotBinary)
    }
}

fn boundary_index(topology: &TreeTopology) -> Vec<Option<usize>> {
    let mut index = vec![None; topology.vertex_count()];
    for (i, &b) in topology.boundary().iter().enumerate() {
        index[b] = Some(i);
    }
    index
}

/// Tours of a binary tree: the boundary orders met when walking around each
/// of its planar embeddings, without repetitions up to rotation and reflection.
pub fn enumerate_tours(topology: &TreeTopology) -> Result<Vec<Multitour>, FillingError> {
    require_binary(topology)?;
    let index = boundary_index(topology);
    let adj: Vec<Vec<usize>> = topology.adjacency().iter().map(|l| l.iter().map(|&(w, _)| w).collect()).collect();
    let interior: Vec<usize> = (0..adj.len()).filter(|&v| adj[v].len() == 3).collect();
    let start = topology.boundary()[0];
    let mut found = BTreeSet::new();
    for mask in 0u64..1 << interior.len() {
        let mut rotation = adj.clone();
        for (bit, &v) in interior.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                rotation[v].swap(1, 2);
            }
        }
        let first = (start, rotation[start][0]);
        let (mut prev, mut cur) = first;
        let mut seq = Vec::with_capacity(index.len());
        loop {
            if let Some(i) = index[cur] {
                seq.push(i);
            }
            let at = rotation[cur].iter().position(|&w| w == prev).expect("neighbor");
            let next = rotation[cur][(at + 1) % rotation[cur].len()];
            if (cur, next) == first {
                break;
            }
            (prev, cur) = (cur, next);
        }
        found.insert(canonical_cycle(&seq));
    }
    Ok(found.into_iter().map(|sequence| Multitour { multiplicity: 1, sequence }).collect())
}

/// Multitours of multiplicity `k`, found by a depth-first search over boundary
/// sequences whose consecutive paths cover every edge exactly `2k` times.
pub fn enumerate_multitours(topology: &TreeTopology, k: usize) -> Result<Vec<Multitour>, FillingError> {
    require_binary(topology)?;
    let n = topology.boundary_len();
    if k == 0 || k > MULTITOUR_KMAX {
        return Err(FillingError::MultiplicityTooLarge { k, kmax: MULTITOUR_KMAX });
    }
    if n > MULTITOUR_NMAX {
        return Err(FillingError::TooManyPoints { n, nmax: MULTITOUR_NMAX });
    }
    let mut paths = vec![vec![Vec::new(); n]; n];
    for (i, j, p) in boundary_paths(topology) {
        paths[i][j] = p.clone();
        paths[j][i] = p;
    }
    let mut search = MultitourSearch {
        n,
        k,
        paths,
        cover: vec![0; topology.edges().len()],
        remaining: vec![k; n],
        seq: vec![0],
        found: BTreeSet::new(),
    };
    search.remaining[0] -= 1;
    search.run();
    Ok(search.found.into_iter().map(|sequence| Multitour { multiplicity: k, sequence }).collect())
}

struct MultitourSearch {
    n: usize,
    k: usize,
    paths: Vec<Vec<Vec<usize>>>,
    cover: Vec<usize>,
    remaining: Vec<usize>,
    seq: Vec<usize>,
    found: BTreeSet<Vec<usize>>,
}

impl MultitourSearch {
    fn step(&mut self, from: usize, to: usize, forward: bool) -> bool {
        let mut ok = true;
        for &e in &self.paths[from][to] {
            if forward {
                self.cover[e] += 1;
                ok &= self.cover[e] <= 2 * self.k;
            } else {
                self.cover[e] -= 1;
            }
        }
        ok
    }

    fn run(&mut self) {
        let cur = *self.seq.last().expect("nonempty");
        if self.seq.len() == self.n * self.k {
            if cur != 0 {
                let ok = self.step(cur, 0, true);
                if ok && self.cover.iter().all(|&c| c == 2 * self.k) {
                    self.found.insert(canonical_cycle(&self.seq));
                }
                self.step(cur, 0, false);
            }
            return;
        }
        for next in 0..self.n {
            if next == cur || self.remaining[next] == 0 {
                continue;
            }
            if self.step(cur, next, true) {
                self.remaining[next] -= 1;
                self.seq.push(next);
                self.run();
                self.seq.pop();
                self.remaining[next] += 1;
            }
            self.step(cur, next, false);
        }
    }
}

/// Lower bound for the generalized parametric weight from multitours.
#[derive(Debug, Clone, PartialEq)]
pub struct EreminBound<T> {
    /// Largest multitour half-perimeter found.
    pub lower_bound: T,
    /// The multitour attaining it.
    pub attaining: Multitour,
    /// The generalized parametric weight from the linear program.
    pub mpf_minus: T,
    /// Whether the bound reaches `mpf_minus`.
    pub exact: bool,
}

/// Maximizes the multitour half-perimeter over multiplicities `1..=kmax`
/// and compares it with the linear programming value.
pub fn eremin_value<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    topology: &TreeTopology,
    kmax: usize,
) -> Result<EreminBound<T>, FillingError> {
    let n = space.len();
    if topology.boundary_len() != n {
        return Err(FillingError::BoundaryMismatch { boundary: topology.boundary_len(), points: n });
    }
    let mut best: Option<(T, Multitour)> = None;
    for k in 1..=kmax.max(1) {
        let tours = if k == 1 { enumerate_tours(topology)? } else { enumerate_multitours(topology, k)? };
        for tour in tours {
            let value = tour.half_perimeter(space);
            if best.as_ref().is_none_or(|(b, _)| value > *b) {
                best = Some((value, tour));
            }
        }
    }
    let (lower_bound, attaining) = best.expect("every binary tree has a tour");
    let mpf_minus = mpf(space, topology, true)?.value;
    let tol = T::slack(&space.max_distance(), LP_EPS);
    let exact = eq_tol(&lower_bound, &mpf_minus, &tol);
    Ok(EreminBound { lower_bound, attaining, mpf_minus, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_binary_topologies;
    use crate::scalar::{rational, Rational};

    #[test]
    fn tour_counts() {
        assert_eq!(enumerate_tours(&TreeTopology::star(2)).unwrap().len(), 1);
        assert_eq!(enumerate_tours(&TreeTopology::star(3)).unwrap().len(), 1);
        let quartet = enumerate_tours(&TreeTopology::quartet(0, 1, 2, 3)).unwrap();
        let seqs: Vec<&[usize]> = quartet.iter().map(Multitour::sequence).collect();
        assert_eq!(seqs, vec![&[0, 1, 2, 3][..], &[0, 1, 3, 2][..]]);
        // caterpillars with n leaves have 2^(n-3) tours
        let caterpillar = enumerate_binary_topologies(6).next().unwrap();
        assert_eq!(enumerate_tours(&caterpillar).unwrap().len(), 8);
    }

    #[test]
    fn single_multitours_are_tours() {
        for n in 3..=6 {
            for topo in enumerate_binary_topologies(n) {
                assert_eq!(enumerate_tours(&topo).unwrap(), enumerate_multitours(&topo, 1).unwrap());
            }
        }
    }

    #[test]
    fn double_multitours_include_doubled_tours() {
        let topo = TreeTopology::quartet(0, 1, 2, 3);
        let doubles = enumerate_multitours(&topo, 2).unwrap();
        assert!(doubles.iter().any(|m| m.sequence() == [0, 1, 2, 3, 0, 1, 2, 3]));
        for m in &doubles {
            let pi = m.bijection();
            let mut sorted = pi.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..8).collect::<Vec<_>>());
        }
    }

    #[test]
    fn rectangle_crossing_tour() {
        let q = |v: i64| Rational::from_int(v);
        let m = [[0, 3, 5, 4], [3, 0, 4, 5], [5, 4, 0, 3], [4, 5, 3, 0]];
        let space = FiniteMetricSpace::new(m.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()).unwrap();
        let e = eremin_value(&space, &TreeTopology::quartet(0, 2, 1, 3), 1).unwrap();
        assert_eq!(e.lower_bound, q(9));
        assert!(e.exact);
        let tri = eremin_value(&FiniteMetricSpace::regular_simplex(3, q(1)), &TreeTopology::star(3), 2).unwrap();
        assert_eq!(tri.lower_bound, rational(3, 2));
        assert!(tri.exact);
    }

    #[test]
    fn guards() {
        assert!(matches!(enumerate_tours(&TreeTopology::star(4)), Err(FillingError::NotBinary)));
        let topo = TreeTopology::quartet(0, 1, 2, 3);
        assert!(matches!(enumerate_multitours(&topo, 4), Err(FillingError::MultiplicityTooLarge { .. })));
    }
}
