use super::TreeTopology;

/// `(2n-5)!!` for `n >= 3`, and 1 for `n = 2`.
pub fn binary_topology_count(n: usize) -> usize {
    assert!(n >= 2, "binary topologies need at least two leaves");
    (3..=n).map(|k| 2 * k - 5).product::<usize>().max(1)
}

/// All boundary-labeled binary trees with leaves `0..n` and interior vertices
/// `n..2n-2`, in canonical order.
///
/// Topology `index` is decoded as a mixed-radix number whose digit for leaf `k`
/// (`k >= 3`) picks which of the `2k-3` edges of the tree on leaves `0..k` is
/// subdivided to attach `k`. Distinct indices give distinct labeled trees.
pub fn enumerate_binary_topologies(n: usize) -> BinaryTopologies {
    BinaryTopologies { n, next: 0, total: binary_topology_count(n) }
}

#[derive(Debug, Clone)]
pub struct BinaryTopologies {
    n: usize,
    next: usize,
    total: usize,
}

impl BinaryTopologies {
    pub fn leaf_count(&self) -> usize {
        self.n
    }

    /// Topology at canonical position `index`.
    pub fn get(&self, index: usize) -> Option<TreeTopology> {
        (index < self.total).then(|| build(self.n, index))
    }

    pub fn total(&self) -> usize {
        self.total
    }
}

impl Iterator for BinaryTopologies {
    type Item = TreeTopology;

    fn next(&mut self) -> Option<TreeTopology> {
        let t = self.get(self.next)?;
        self.next += 1;
        Some(t)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.total - self.next;
        (left, Some(left))
    }
}

impl ExactSizeIterator for BinaryTopologies {}

fn build(n: usize, index: usize) -> TreeTopology {
    if n == 2 {
        return TreeTopology::star(2);
    }
    let mut edges: Vec<(usize, usize)> = vec![(0, n), (1, n), (2, n)];
    // Digits are little-endian in insertion order so index 0, 1, 2, ... vary the
    // last inserted leaf fastest.
    let mut digits = Vec::with_capacity(n.saturating_sub(3));
    let mut rest = index;
    for k in (3..n).rev() {
        let radix = 2 * k - 3;
        digits.push(rest % radix);
        rest /= radix;
    }
    digits.reverse();
    for (offset, &choice) in digits.iter().enumerate() {
        let leaf = 3 + offset;
        let junction = n + 1 + offset;
        let (a, b) = edges[choice];
        edges[choice] = (a, junction);
        edges.push((junction, b));
        edges.push((leaf, junction));
    }
    TreeTopology::new(2 * n - 2, edges, (0..n).collect()).expect("leaf insertion yields a binary tree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn canonical(t: &TreeTopology) -> Vec<Vec<usize>> {
        let mut s = t.splits();
        for side in s.iter_mut() {
            // normalize: side not containing leaf 0 is already guaranteed
            side.sort_unstable();
        }
        s.sort();
        s
    }

    #[test]
    fn counts_match_double_factorial() {
        assert_eq!(enumerate_binary_topologies(2).count(), 1);
        assert_eq!(enumerate_binary_topologies(3).count(), 1);
        assert_eq!(enumerate_binary_topologies(4).count(), 3);
        assert_eq!(enumerate_binary_topologies(5).count(), 15);
        assert_eq!(enumerate_binary_topologies(6).count(), 105);
    }

    #[test]
    fn topologies_are_binary_and_pairwise_distinct() {
        for n in 3..=7 {
            let mut seen = HashSet::new();
            for t in enumerate_binary_topologies(n) {
                assert!(t.is_binary());
                assert_eq!(t.vertex_count(), 2 * n - 2);
                assert!(seen.insert(canonical(&t)), "duplicate topology for n={n}");
            }
            assert_eq!(seen.len(), binary_topology_count(n));
        }
    }

    #[test]
    fn three_leaves_is_the_star() {
        let t = enumerate_binary_topologies(3).next().unwrap();
        assert_eq!(t.degrees()[3], 3);
    }
}
