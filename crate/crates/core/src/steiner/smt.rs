use rayon::prelude::*;

use super::{melzak_solve, relax_topology, SteinerError};
use crate::geometry::{check_points, diameter, PlaneNetwork, Point2};
use crate::graph::{enumerate_binary_topologies, TreeTopology, UnionFind};

/// Default limit on the number of terminals.
pub const DEFAULT_NMAX: usize = 8;
/// Edges shorter than this fraction of the diameter are contracted.
pub const COLLAPSE_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SteinerTree {
    /// Terminals are vertices `0..n` in input order; Steiner points follow.
    pub network: PlaneNetwork,
    pub length: f64,
}

/// Steiner minimal tree of at most `nmax` terminals.
///
/// A Steiner minimal tree splits at terminals into full components, each a
/// full Steiner tree on a subset of the terminals. For every subset the
/// shortest full Steiner tree over all its full topologies is built with
/// Melzak's construction, and a dynamic program over subsets picks the
/// cheapest combination that spans all terminals. The value equals the
/// minimum over full topologies of the relaxed length, which is what
/// [`smt_by_relaxation`] computes directly.
pub fn smt(terminals: &[Point2], nmax: usize) -> Result<SteinerTree, SteinerError> {
    let n = terminals.len();
    if n > nmax {
        return Err(SteinerError::TooManyTerminals { n, nmax });
    }
    check_points(terminals, 2)?;
    let full = 1usize << n;

    let fsts: Vec<Option<PlaneNetwork>> = (0..full)
        .into_par_iter()
        .map(|mask| full_steiner_tree(terminals, mask))
        .collect::<Result<_, _>>()?;
    let cost: Vec<f64> = fsts.iter().map(|f| f.as_ref().map_or(f64::INFINITY, PlaneNetwork::length)).collect();

    // best[u]: shortest union of full Steiner trees spanning exactly the terminals in u
    let mut best = vec![f64::INFINITY; full];
    let mut choice: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new()); full];
    for u in 1..full {
        if u.count_ones() == 1 {
            best[u] = 0.0;
            continue;
        }
        let low = u & u.wrapping_neg();
        let rest_all = u ^ low;
        // s runs over subsets of u containing the lowest terminal
        let mut sub = rest_all;
        loop {
            let s = sub | low;
            if s != low && cost[s].is_finite() {
                let members = bits(s);
                let value = cost[s] + distribute(&members, u ^ s, &best);
                if value < best[u] {
                    best[u] = value;
                    choice[u] = (s, distribute_parts(&members, u ^ s, &best));
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest_all;
        }
    }

    let mut components = Vec::new();
    collect(full - 1, &choice, &mut components);
    let mut positions = terminals.to_vec();
    let mut edges = Vec::new();
    for s in components {
        let fst = fsts[s].as_ref().expect("chosen components exist");
        let members = bits(s);
        let offset = positions.len();
        let boundary_len = members.len();
        let relabel = |v: usize| if v < boundary_len { members[v] } else { offset + v - boundary_len };
        positions.extend_from_slice(&fst.positions[boundary_len..]);
        edges.extend(fst.topology.edges().iter().map(|&(a, b)| (relabel(a), relabel(b))));
    }
    let topology = TreeTopology::new_unchecked_degrees(positions.len(), edges, (0..n).collect())?;
    let network = PlaneNetwork::new(topology, positions)?;
    Ok(SteinerTree { length: network.length(), network })
}

fn bits(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Shortest full Steiner tree on the terminals in `mask`, with the subset's
/// terminals as vertices `0..k` in index order.
fn full_steiner_tree(terminals: &[Point2], mask: usize) -> Result<Option<PlaneNetwork>, SteinerError> {
    let members = bits(mask);
    let pts: Vec<Point2> = members.iter().map(|&i| terminals[i]).collect();
    match pts.len() {
        0 | 1 => Ok(None),
        2 => Ok(Some(PlaneNetwork::segment(pts[0], pts[1]))),
        k => {
            let mut best: Option<PlaneNetwork> = None;
            for topo in enumerate_binary_topologies(k) {
                if let Some(net) = melzak_solve(&topo, &pts)? {
                    if best.as_ref().is_none_or(|b| net.length() < b.length()) {
                        best = Some(net);
                    }
                }
            }
            Ok(best)
        }
    }
}

/// Cheapest way to hang the terminals of `rest` off the members of a chosen
/// component, each member rooting a union of trees on a disjoint part.
fn distribute(members: &[usize], rest: usize, best: &[f64]) -> f64 {
    let (&first, others) = members.split_first().expect("nonempty");
    if others.is_empty() {
        return best[rest | 1 << first];
    }
    let mut value = f64::INFINITY;
    let mut sub = rest;
    loop {
        let here = best[sub | 1 << first];
        if here < value {
            value = value.min(here + distribute(others, rest ^ sub, best));
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    value
}

/// Same minimization as [`distribute`], returning the part given to each member.
fn distribute_parts(members: &[usize], rest: usize, best: &[f64]) -> Vec<usize> {
    let (&first, others) = members.split_first().expect("nonempty");
    if others.is_empty() {
        return vec![rest];
    }
    let (mut value, mut pick) = (f64::INFINITY, 0);
    let mut sub = rest;
    loop {
        let here = best[sub | 1 << first];
        if here < value {
            let total = here + distribute(others, rest ^ sub, best);
            if total < value {
                value = total;
                pick = sub;
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    let mut parts = vec![pick];
    parts.extend(distribute_parts(others, rest ^ pick, best));
    parts
}

fn collect(u: usize, choice: &[(usize, Vec<usize>)], out: &mut Vec<usize>) {
    if u.count_ones() <= 1 {
        return;
    }
    let (s, parts) = &choice[u];
    out.push(*s);
    for (m, part) in bits(*s).into_iter().zip(parts) {
        collect(part | 1 << m, choice, out);
    }
}

/// Minimum over all full topologies of [`relax_topology`], with short edges
/// contracted. Ties go to the first topology in canonical order.
pub fn smt_by_relaxation(terminals: &[Point2], nmax: usize) -> Result<SteinerTree, SteinerError> {
    let n = terminals.len();
    if n > nmax {
        return Err(SteinerError::TooManyTerminals { n, nmax });
    }
    check_points(terminals, 2)?;
    let topologies = enumerate_binary_topologies(n);
    let results: Vec<PlaneNetwork> = (0..topologies.total())
        .into_par_iter()
        .map(|i| {
            let topo = topologies.get(i).expect("index in range");
            relax_topology(&topo, terminals).map(|r| r.network)
        })
        .collect::<Result<_, _>>()?;
    let best = results
        .into_iter()
        .reduce(|a, b| if b.length() < a.length() { b } else { a })
        .expect("at least one topology");
    let network = contract_short_edges(&best, COLLAPSE_REL_TOL * diameter(terminals));
    Ok(SteinerTree { length: network.length(), network })
}

/// Merges the endpoints of edges shorter than `tol`, never merging two
/// terminals. Terminals keep their numbers; surviving Steiner points follow.
pub fn contract_short_edges(network: &PlaneNetwork, tol: f64) -> PlaneNetwork {
    let topo = &network.topology;
    let vc = topo.vertex_count();
    let mut uf = UnionFind::new(vc);
    let mut has_terminal = vec![false; vc];
    for &b in topo.boundary() {
        has_terminal[b] = true;
    }
    for &(u, v) in topo.edges() {
        if network.positions[u].dist(network.positions[v]) < tol {
            let (ru, rv) = (uf.find(u), uf.find(v));
            if ru != rv && !(has_terminal[ru] && has_terminal[rv]) {
                let either = has_terminal[ru] || has_terminal[rv];
                uf.union(ru, rv);
                let r = uf.find(ru);
                has_terminal[r] = either;
            }
        }
    }
    let mut id = vec![usize::MAX; vc];
    let mut positions = Vec::new();
    let mut boundary = Vec::new();
    for &b in topo.boundary() {
        let r = uf.find(b);
        id[r] = positions.len();
        boundary.push(positions.len());
        positions.push(network.positions[b]);
    }
    for v in 0..vc {
        let r = uf.find(v);
        if id[r] == usize::MAX {
            id[r] = positions.len();
            positions.push(network.positions[v]);
        }
    }
    let mut edges = Vec::new();
    for &(u, v) in topo.edges() {
        let (a, b) = (id[uf.find(u)], id[uf.find(v)]);
        if a != b {
            edges.push((a, b));
        }
    }
    let topology = TreeTopology::new_unchecked_degrees(positions.len(), edges, boundary)
        .expect("contracting edges of a tree gives a tree");
    PlaneNetwork { topology, positions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steiner::check_local_structure;

    fn pts(v: &[(f64, f64)]) -> Vec<Point2> {
        v.iter().map(|&p| p.into()).collect()
    }

    #[test]
    fn regular_triangle() {
        let h = 3f64.sqrt() / 2.0;
        let t = smt(&pts(&[(0., 0.), (1., 0.), (0.5, h)]), DEFAULT_NMAX).unwrap();
        assert!((t.length - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(t.network.steiner_vertices().len(), 1);
        assert!(check_local_structure(&t.network).passes());
    }

    #[test]
    fn wide_triangle_has_no_steiner_point() {
        let c = (-(150f64.to_radians().cos().abs()), 0.5);
        let t = smt(&pts(&[(0., 0.), (1., 0.), c]), DEFAULT_NMAX).unwrap();
        assert!((t.length - 2.0).abs() < 1e-12);
        assert!(t.network.steiner_vertices().is_empty());
    }

    #[test]
    fn two_points() {
        let t = smt(&pts(&[(0., 0.), (3., 4.)]), DEFAULT_NMAX).unwrap();
        assert_eq!(t.length, 5.0);
    }

    #[test]
    fn unit_square() {
        let t = smt(&pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]), DEFAULT_NMAX).unwrap();
        assert!((t.length - (1.0 + 3f64.sqrt())).abs() < 1e-12);
        assert!(check_local_structure(&t.network).passes());
    }

    #[test]
    fn agrees_with_relaxation() {
        let sets = [
            pts(&[(0., 0.), (4., 0.), (2., 3.), (7., 1.), (5., 5.)]),
            pts(&[(0., 0.), (10., 0.), (5., 0.5), (5., -0.5)]),
            pts(&[(0., 0.), (1., 2.), (3., 1.), (2., -2.), (-1., -1.), (0.5, 0.2)]),
        ];
        for set in sets {
            let a = smt(&set, DEFAULT_NMAX).unwrap();
            let b = smt_by_relaxation(&set, DEFAULT_NMAX).unwrap();
            assert!((a.length - b.length).abs() < 1e-9 * a.length, "{} vs {}", a.length, b.length);
            assert!(check_local_structure(&a.network).passes());
        }
    }

    #[test]
    fn guard() {
        let many: Vec<Point2> = (0..9).map(|i| Point2::new(i as f64, (i * i) as f64)).collect();
        assert!(matches!(smt(&many, DEFAULT_NMAX), Err(SteinerError::TooManyTerminals { n: 9, nmax: 8 })));
    }

    #[test]
    fn contraction_merges_into_terminals() {
        let topo = TreeTopology::star(3);
        let pos = pts(&[(0., 0.), (1., 0.), (0., 1.), (0., 1e-12)]);
        let c = contract_short_edges(&PlaneNetwork::new(topo, pos).unwrap(), 1e-9);
        assert_eq!(c.topology.vertex_count(), 3);
        assert_eq!(c.topology.edges().len(), 2);
    }
}
