use std::cmp::Ordering;

use super::torricelli::equilateral_apex;
use super::SteinerError;
use crate::geometry::predicates::orient;
use crate::geometry::{PlaneNetwork, Point2};
use crate::graph::TreeTopology;

/// Every branch of the Melzak construction for one full topology.
#[derive(Debug, Clone)]
pub struct MelzakReport {
    /// Branches explored: one per choice of equilateral apex at each merge.
    pub branches: usize,
    /// Successful back traces as `(choice mask, network)`, in mask order.
    pub successes: Vec<(u64, PlaneNetwork)>,
}

impl MelzakReport {
    /// Shortest successful network.
    pub fn best(&self) -> Option<&PlaneNetwork> {
        self.successes
            .iter()
            .map(|(_, n)| n)
            .min_by(|a, b| a.length().total_cmp(&b.length()))
    }
}

/// Runs Melzak's construction on a full binary topology.
///
/// The tree is rooted at its first boundary vertex. Going up from the leaves,
/// the two children of each interior vertex are replaced by a pseudo-terminal,
/// the apex of an equilateral triangle on them, on either side. The back trace
/// goes down from the root: the Steiner point is where the segment from the
/// parent position to the pseudo-terminal meets the circumcircle of the
/// equilateral triangle again, and it must lie strictly inside the segment and
/// on the arc between the children. A branch that violates either condition,
/// or that merges two coincident points, fails.
pub fn melzak_branches(topology: &TreeTopology, terminals: &[Point2]) -> Result<MelzakReport, SteinerError> {
    let n = topology.boundary_len();
    if terminals.len() != n {
        return Err(SteinerError::BoundaryMismatch { terminals: terminals.len(), boundary: n });
    }
    let deg = topology.degrees();
    let full = topology.is_binary() || (n == 2 && topology.vertex_count() == 2);
    if !full || topology.boundary().iter().any(|&b| deg[b] != 1) {
        return Err(SteinerError::NotFullTopology);
    }
    let mut pos = vec![Point2::default(); topology.vertex_count()];
    for (i, &b) in topology.boundary().iter().enumerate() {
        pos[b] = terminals[i];
    }
    if n == 2 {
        if terminals[0] == terminals[1] {
            return Err(SteinerError::CoincidentMerge);
        }
        let net = PlaneNetwork::new(topology.clone(), pos)?;
        return Ok(MelzakReport { branches: 1, successes: vec![(0, net)] });
    }

    let adj = topology.adjacency();
    let root = topology.boundary()[0];
    let top = adj[root][0].0;
    // children of each interior vertex and a pre-order of interior vertices
    let mut children = vec![Vec::new(); topology.vertex_count()];
    let mut preorder = Vec::with_capacity(n - 2);
    let mut stack = vec![(top, root)];
    while let Some((v, parent)) = stack.pop() {
        if topology.is_boundary(v) {
            continue;
        }
        preorder.push(v);
        for &(w, _) in &adj[v] {
            if w != parent {
                children[v].push(w);
                stack.push((w, v));
            }
        }
    }
    let bit: Vec<usize> = {
        let mut b = vec![0; topology.vertex_count()];
        for (k, &v) in preorder.iter().enumerate() {
            b[v] = k;
        }
        b
    };

    let branches = 1usize << preorder.len();
    let mut successes = Vec::new();
    let mut pseudo = pos.clone();
    'branch: for mask in 0..branches as u64 {
        for &v in preorder.iter().rev() {
            let (a, b) = (pseudo[children[v][0]], pseudo[children[v][1]]);
            if a == b {
                continue 'branch;
            }
            pseudo[v] = equilateral_apex(a, b, mask >> bit[v] & 1 == 1);
        }
        let mut placed = pos.clone();
        let mut parent_pos = vec![Point2::default(); topology.vertex_count()];
        parent_pos[top] = pos[root];
        for &v in &preorder {
            let (a, b, p, z) = (pseudo[children[v][0]], pseudo[children[v][1]], pseudo[v], parent_pos[v]);
            let Some(s) = back_trace_point(a, b, p, z) else {
                continue 'branch;
            };
            placed[v] = s;
            for &c in &children[v] {
                parent_pos[c] = s;
            }
        }
        successes.push((mask, PlaneNetwork::new(topology.clone(), placed)?));
    }
    Ok(MelzakReport { branches, successes })
}

/// Second intersection of segment `z -> p` with the circle through the
/// equilateral triangle `a, b, p`, if it lies strictly between `z` and `p` and
/// on the arc `ab` not containing `p`.
fn back_trace_point(a: Point2, b: Point2, p: Point2, z: Point2) -> Option<Point2> {
    let center = (a + b + p) * (1.0 / 3.0);
    let r2 = {
        let d = a - center;
        d.dot(d)
    };
    let dir = p - z;
    let len2 = dir.dot(dir);
    if len2 == 0.0 {
        return None;
    }
    // roots of |z + t dir - center|^2 = r^2 multiply to c / len2; one root is 1
    let zc = z - center;
    let t = (zc.dot(zc) - r2) / len2;
    if !(t > 0.0 && t < 1.0) {
        return None;
    }
    let s = z + dir * t;
    let side_p = orient(a, b, p);
    let side_s = orient(a, b, s);
    if side_s == Ordering::Equal || side_s == side_p {
        return None;
    }
    Some(s)
}

/// Shortest network of the given full topology found by Melzak's
/// construction, or `None` when no branch survives.
pub fn melzak_solve(topology: &TreeTopology, terminals: &[Point2]) -> Result<Option<PlaneNetwork>, SteinerError> {
    Ok(melzak_branches(topology, terminals)?.best().cloned())
}
