//! Finite metric spaces.

use std::fmt;

use thiserror::Error;

use crate::graph::WeightedTree;
use crate::scalar::{eq_tol, le_tol, max_of, Scalar};

/// Relative tolerance for metric axioms and the four-point rule in floating mode.
pub const METRIC_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotSquare { row: usize, len: usize },
    NonFinite { i: usize, j: usize },
    Negative { i: usize, j: usize },
    NonZeroDiagonal { i: usize },
    ZeroOffDiagonal { i: usize, j: usize },
    Asymmetric { i: usize, j: usize },
    /// `dist[i][k] > dist[i][j] + dist[j][k]`
    Triangle { i: usize, j: usize, k: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSquare { row, len } => write!(f, "row {row} has {len} entries"),
            Violation::NonFinite { i, j } => write!(f, "entry ({i},{j}) is not finite"),
            Violation::Negative { i, j } => write!(f, "entry ({i},{j}) is negative"),
            Violation::NonZeroDiagonal { i } => write!(f, "diagonal entry ({i},{i}) is not zero"),
            Violation::ZeroOffDiagonal { i, j } => write!(f, "distinct points {i},{j} at distance zero"),
            Violation::Asymmetric { i, j } => write!(f, "entries ({i},{j}) and ({j},{i}) differ"),
            Violation::Triangle { i, j, k } => {
                write!(f, "triangle inequality fails at ({i},{k}) through {j}")
            }
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum MetricError {
    #[error("a metric space needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("invalid metric: {}", list(.0))]
    Invalid(Vec<Violation>),
    #[error("index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("indices must be distinct")]
    RepeatedIndex,
    #[error("order is not a single cycle through all points")]
    NotACycle,
    #[error("{0} labels for {1} points")]
    LabelCount(usize, usize),
}

fn list(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Validated symmetric distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace<T = f64> {
    n: usize,
    dist: Vec<T>,
    labels: Option<Vec<String>>,
}

impl<T: Scalar> FiniteMetricSpace<T> {
    /// Checks every axiom and reports all violations at once.
    pub fn new(matrix: Vec<Vec<T>>) -> Result<Self, MetricError> {
        let n = matrix.len();
        if n < 2 {
            return Err(MetricError::TooFewPoints(n));
        }
        let mut violations = Vec::new();
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != n {
                violations.push(Violation::NotSquare { row, len: r.len() });
            }
        }
        if !violations.is_empty() {
            return Err(MetricError::Invalid(violations));
        }
        let scale = max_of(matrix.iter().flatten());
        let tol = T::slack(&scale, METRIC_REL_TOL);
        for i in 0..n {
            for j in 0..n {
                let d = &matrix[i][j];
                if !T::EXACT && !d.to_f64_lossy().is_finite() {
                    violations.push(Violation::NonFinite { i, j });
                    continue;
                }
                if i == j {
                    if !d.is_zero() {
                        violations.push(Violation::NonZeroDiagonal { i });
                    }
                    continue;
                }
                if d.is_negative() {
                    violations.push(Violation::Negative { i, j });
                } else if d.is_zero() && i < j {
                    violations.push(Violation::ZeroOffDiagonal { i, j });
                }
                if i < j && !eq_tol(d, &matrix[j][i], &tol) {
                    violations.push(Violation::Asymmetric { i, j });
                }
            }
        }
        if violations.is_empty() {
            for i in 0..n {
                for k in i + 1..n {
                    for j in 0..n {
                        if j == i || j == k {
                            continue;
                        }
                        let via = matrix[i][j].clone() + matrix[j][k].clone();
                        if !le_tol(&matrix[i][k], &via, &tol) {
                            violations.push(Violation::Triangle { i, j, k });
                        }
                    }
                }
            }
        }
        if !violations.is_empty() {
            return Err(MetricError::Invalid(violations));
        }
        Ok(Self { n, dist: matrix.into_iter().flatten().collect(), labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, MetricError> {
        if labels.len() != self.n {
            return Err(MetricError::LabelCount(labels.len(), self.n));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// All off-diagonal distances equal to `d`.
    pub fn regular_simplex(n: usize, d: T) -> Self {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { T::zero() } else { d.clone() }).collect())
            .collect();
        Self::new(matrix).expect("regular simplex is a metric")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn d(&self, i: usize, j: usize) -> &T {
        &self.dist[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn to_matrix(&self) -> Vec<Vec<T>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn max_distance(&self) -> T {
        max_of(self.dist.iter())
    }

    /// Comparison slack at the scale of this space.
    pub fn tolerance(&self) -> T {
        T::slack(&self.max_distance(), METRIC_REL_TOL)
    }

    /// Multiplies every distance by `factor > 0`.
    pub fn scaled(&self, factor: &T) -> Self {
        Self {
            n: self.n,
            dist: self.dist.iter().map(|d| d.clone() * factor.clone()).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Subspace on the given point indices.
    pub fn subspace(&self, indices: &[usize]) -> Result<Self, MetricError> {
        Self::new(
            indices
                .iter()
                .map(|&i| indices.iter().map(|&j| self.d(i, j).clone()).collect())
                .collect(),
        )
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> FiniteMetricSpace<U> {
        FiniteMetricSpace { n: self.n, dist: self.dist.iter().map(f).collect(), labels: self.labels.clone() }
    }

    pub fn to_f64(&self) -> FiniteMetricSpace<f64> {
        self.map_scalar(|d| d.to_f64_lossy())
    }

    fn check_index(&self, i: usize) -> Result<(), MetricError> {
        if i >= self.n {
            Err(MetricError::IndexOutOfRange { index: i, n: self.n })
        } else {
            Ok(())
        }
    }

    /// `(p_j, p_k)_{p_i} = (d_ij + d_ik - d_jk) / 2`.
    pub fn gromov_product(&self, i: usize, j: usize, k: usize) -> Result<T, MetricError> {
        for x in [i, j, k] {
            self.check_index(x)?;
        }
        if i == j || j == k || i == k {
            return Err(MetricError::RepeatedIndex);
        }
        Ok((self.d(i, j).clone() + self.d(i, k).clone() - self.d(j, k).clone()) * T::half())
    }

    /// Classifies the space by the four-point rules.
    pub fn check_four_point(&self) -> AdditivityReport {
        let tol = self.tolerance();
        let n = self.n;
        let mut strong_witness = None;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        let mut sums = [
                            self.d(i, j).clone() + self.d(k, l).clone(),
                            self.d(i, k).clone() + self.d(j, l).clone(),
                            self.d(i, l).clone() + self.d(j, k).clone(),
                        ];
                        sums.sort_by(|a, b| a.partial_cmp(b).expect("comparable"));
                        let top_equal = eq_tol(&sums[1], &sums[2], &tol);
                        let isosceles = top_equal || eq_tol(&sums[0], &sums[1], &tol);
                        if !top_equal && strong_witness.is_none() {
                            strong_witness = Some([i, j, k, l]);
                        }
                        if !isosceles {
                            return AdditivityReport {
                                class: AdditivityClass::Neither,
                                witness: Some([i, j, k, l]),
                            };
                        }
                    }
                }
            }
        }
        match strong_witness {
            None => AdditivityReport { class: AdditivityClass::Additive, witness: None },
            Some(w) => AdditivityReport { class: AdditivityClass::PseudoAdditive, witness: Some(w) },
        }
    }

    /// Rows of the distance matrix as points of the max-norm space.
    pub fn kuratowski_embed(&self) -> KuratowskiImage<T> {
        KuratowskiImage { points: (0..self.n).map(|i| self.row(i).to_vec()).collect() }
    }

    /// `½ Σ ρ(x, π(x))` for the cyclic order `order`.
    pub fn half_perimeter(&self, order: &CyclicOrder) -> Result<T, MetricError> {
        if order.len() != self.n {
            return Err(MetricError::NotACycle);
        }
        Ok(self.cycle_sum(order.sequence()) * T::half())
    }

    fn cycle_sum(&self, seq: &[usize]) -> T {
        let m = seq.len();
        (0..m).fold(T::zero(), |acc, t| acc + self.d(seq[t], seq[(t + 1) % m]).clone())
    }

    /// Minimum half-perimeter over all `(n-1)!/2` cyclic orders (point 0 first,
    /// direction quotiented). Ties go to the lexicographically smallest sequence.
    pub fn min_half_perimeter(&self) -> (T, CyclicOrder) {
        let mut best: Option<(T, Vec<usize>)> = None;
        let mut rest: Vec<usize> = (1..self.n).collect();
        loop {
            if self.n <= 2 || rest[0] < rest[rest.len() - 1] {
                let mut seq = Vec::with_capacity(self.n);
                seq.push(0);
                seq.extend_from_slice(&rest);
                let value = self.cycle_sum(&seq);
                if best.as_ref().is_none_or(|(b, _)| value < *b) {
                    best = Some((value, seq));
                }
            }
            if !next_permutation(&mut rest) {
                break;
            }
        }
        let (sum, seq) = best.expect("at least one order");
        (sum * T::half(), CyclicOrder { seq })
    }
}

impl FiniteMetricSpace<f64> {
    /// Euclidean distances between points.
    pub fn from_points(points: &[crate::geometry::Point2]) -> Result<Self, MetricError> {
        Self::new(points.iter().map(|p| points.iter().map(|q| p.dist(*q)).collect()).collect())
    }
}

/// Builds the space induced on the boundary of a weighted tree by path sums.
pub fn metric_from_weighted_tree<T: Scalar>(tree: &WeightedTree<T>) -> Result<FiniteMetricSpace<T>, MetricError> {
    FiniteMetricSpace::new(tree.boundary_distances())
}

/// Lexicographic next permutation; `false` after the last one.
pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdditivityClass {
    Additive,
    PseudoAdditive,
    Neither,
}

impl fmt::Display for AdditivityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdditivityClass::Additive => "additive",
            AdditivityClass::PseudoAdditive => "pseudo-additive",
            AdditivityClass::Neither => "neither",
        })
    }
}

/// Outcome of the four-point tests. `witness` is a quadruple violating the
/// strong rule (for `PseudoAdditive`) or the weak rule (for `Neither`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditivityReport {
    pub class: AdditivityClass,
    pub witness: Option<[usize; 4]>,
}

impl AdditivityReport {
    pub fn is_additive(&self) -> bool {
        self.class == AdditivityClass::Additive
    }

    pub fn is_pseudo_additive(&self) -> bool {
        self.class != AdditivityClass::Neither
    }
}

/// Image of the Kuratowski isometry in the max-norm space of dimension `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct KuratowskiImage<T> {
    pub points: Vec<Vec<T>>,
}

impl<T: Scalar> KuratowskiImage<T> {
    pub fn linf_distance(&self, i: usize, j: usize) -> T {
        linf(&self.points[i], &self.points[j])
    }
}

pub fn linf<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |m, (x, y)| {
            let d = (x.clone() - y.clone()).abs();
            if d > m {
                d
            } else {
                m
            }
        })
}

/// A single cycle through all points, stored as the visiting sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicOrder {
    seq: Vec<usize>,
}

impl CyclicOrder {
    /// `seq` must be a permutation of `0..seq.len()`.
    pub fn from_sequence(seq: &[usize]) -> Result<Self, MetricError> {
        let mut seen = vec![false; seq.len()];
        for &x in seq {
            if x >= seq.len() || std::mem::replace(&mut seen[x], true) {
                return Err(MetricError::NotACycle);
            }
        }
        Ok(Self { seq: seq.to_vec() })
    }

    /// `successor[x]` is the point visited after `x`; must form one cycle.
    pub fn from_successors(successor: &[usize]) -> Result<Self, MetricError> {
        let n = successor.len();
        if n == 0 || successor.iter().any(|&s| s >= n) {
            return Err(MetricError::NotACycle);
        }
        let mut seq = Vec::with_capacity(n);
        let mut cur = 0;
        for _ in 0..n {
            seq.push(cur);
            cur = successor[cur];
        }
        if cur != 0 {
            return Err(MetricError::NotACycle);
        }
        Self::from_sequence(&seq)
    }

    pub fn sequence(&self) -> &[usize] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// Representative up to rotation and reflection: starts at the smallest
    /// point, second element smaller than last.
    pub fn canonical(&self) -> CyclicOrder {
        CyclicOrder { seq: canonical_cycle(&self.seq) }
    }
}

/// Lexicographically smallest rotation/reflection of a cyclic sequence.
pub(crate) fn canonical_cycle(seq: &[usize]) -> Vec<usize> {
    let m = seq.len();
    let mut best: Option<Vec<usize>> = None;
    for rev in [false, true] {
        let base: Vec<usize> = if rev { seq.iter().rev().copied().collect() } else { seq.to_vec() };
        for s in 0..m {
            let cand: Vec<usize> = (0..m).map(|t| base[(s + t) % m]).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}
