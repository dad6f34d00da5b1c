//! Steiner ratio, Steiner–Gromov ratio and Steiner subratio.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fillings::{four_point_mf, mf, FillingError, DEFAULT_FILLING_NMAX};
use crate::geometry::{check_points, euclidean_mst, GeometryError, Point2};
use crate::graph::{kruskal_mst, GraphError, WeightedGraph};
use crate::metric::{FiniteMetricSpace, MetricError};
use crate::scalar::Scalar;
use crate::steiner::{smt, SteinerError, DEFAULT_NMAX};

/// Relative slack for the ratio inequalities.
pub const RATIO_REL_TOL: f64 = 1e-9;
/// Largest point count for searches that need Steiner minimal trees.
pub const SEARCH_SMT_NMAX: usize = 7;
/// Perturbation steps after each random restart.
pub const DESCENT_STEPS: usize = 50;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum RatioError {
    #[error("{n} points exceed the limit of {nmax}")]
    TooManyPoints { n: usize, nmax: usize },
    #[error("the trial budget is zero")]
    NoTrials,
    #[error("ratio invariant violated: {0}")]
    Invariant(String),
    #[error("unknown ratio kind {0:?} (expected sr, sgr or ssr)")]
    UnknownKind(String),
    #[error(transparent)]
    Steiner(#[from] SteinerError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Filling(#[from] FillingError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RatioKind {
    /// `smt / mst`
    Sr,
    /// `mf / mst`
    Sgr,
    /// `mf / smt`
    Ssr,
}

impl fmt::Display for RatioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RatioKind::Sr => "sr",
            RatioKind::Sgr => "sgr",
            RatioKind::Ssr => "ssr",
        })
    }
}

impl FromStr for RatioKind {
    type Err = RatioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sr" => Ok(RatioKind::Sr),
            "sgr" => Ok(RatioKind::Sgr),
            "ssr" => Ok(RatioKind::Ssr),
            _ => Err(RatioError::UnknownKind(s.to_string())),
        }
    }
}

/// Lengths and ratios of one planar point set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub points: Vec<Point2>,
    pub mst: f64,
    pub smt: f64,
    pub mf: f64,
    pub sr: f64,
    pub sgr: f64,
    pub ssr: f64,
}

impl RatioReport {
    pub fn ratio(&self, kind: RatioKind) -> f64 {
        match kind {
            RatioKind::Sr => self.sr,
            RatioKind::Sgr => self.sgr,
            RatioKind::Ssr => self.ssr,
        }
    }

    /// Inequalities every planar instance satisfies, as messages for the failing ones.
    pub fn violations(&self) -> Vec<String> {
        let n = self.points.len();
        let slack = RATIO_REL_TOL * self.mst;
        let mut out = Vec::new();
        if self.smt > self.mst + slack {
            out.push(format!("smt {} exceeds mst {}", self.smt, self.mst));
        }
        if self.mf > self.smt + slack {
            out.push(format!("mf {} exceeds smt {}", self.mf, self.smt));
        }
        if self.sr <= 0.5 {
            out.push(format!("sr {} is not above 1/2", self.sr));
        }
        let floor = sgr_floor(n);
        if self.sgr < floor - RATIO_REL_TOL {
            out.push(format!("sgr {} is below {floor}", self.sgr));
        }
        out
    }
}

/// `max(1/2, n/(2n-2))`, the least possible Steiner–Gromov ratio of `n` points.
pub fn sgr_floor(n: usize) -> f64 {
    if n < 2 {
        return 1.0;
    }
    (n as f64 / (2 * n - 2) as f64).max(0.5)
}

/// Minimal filling weight with closed forms for up to four points.
fn mf_value(space: &FiniteMetricSpace<f64>) -> Result<f64, FillingError> {
    match space.len() {
        2 => Ok(*space.d(0, 1)),
        3 => Ok((space.d(0, 1) + space.d(1, 2) + space.d(0, 2)) / 2.0),
        4 => Ok(four_point_mf(space)?.value),
        _ => Ok(mf(space, DEFAULT_FILLING_NMAX)?.value),
    }
}

/// All three ratios of a planar point set with at most eight points.
pub fn ratio_report(points: &[Point2]) -> Result<RatioReport, RatioError> {
    let n = points.len();
    if n > DEFAULT_NMAX {
        return Err(RatioError::TooManyPoints { n, nmax: DEFAULT_NMAX });
    }
    check_points(points, 2)?;
    let (_, mst) = euclidean_mst(points)?;
    let smt = smt(points, DEFAULT_NMAX)?.length;
    let mf = mf_value(&FiniteMetricSpace::from_points(points)?)?;
    let report = RatioReport { points: points.to_vec(), mst, smt, mf, sr: smt / mst, sgr: mf / mst, ssr: mf / smt };
    let violations = report.violations();
    if !violations.is_empty() {
        return Err(RatioError::Invariant(violations.join("; ")));
    }
    Ok(report)
}

/// `mf / mst` of a finite metric space, where `mst` is taken over the
/// complete distance graph.
pub fn sgr_metric<T: Scalar>(space: &FiniteMetricSpace<T>) -> Result<T, RatioError> {
    let n = space.len();
    let graph = WeightedGraph::complete(n, |i, j| space.d(i, j).clone());
    let mst = kruskal_mst(&graph)?.weight;
    let filling = mf(space, DEFAULT_FILLING_NMAX)?.value;
    Ok(filling / mst)
}

fn ratio_of(kind: RatioKind, points: &[Point2]) -> Option<f64> {
    check_points(points, 2).ok()?;
    let mst = || euclidean_mst(points).ok().map(|(_, l)| l);
    let smt = || smt(points, DEFAULT_NMAX).ok().map(|t| t.length);
    let mf = || FiniteMetricSpace::from_points(points).ok().and_then(|s| mf_value(&s).ok());
    let value = match kind {
        RatioKind::Sr => smt()? / mst()?,
        RatioKind::Sgr => mf()? / mst()?,
        RatioKind::Ssr => mf()? / smt()?,
    };
    value.is_finite().then_some(value)
}

/// Least ratio found by a randomized search, with the trial that found it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub kind: RatioKind,
    pub trials: usize,
    pub seed: u64,
    pub best_trial: usize,
    pub value: f64,
    pub report: RatioReport,
}

/// Empirical lower envelope of a ratio over planar `n`-point sets.
///
/// Each trial draws `n` uniform points in the unit square from its own
/// stream of the seeded generator, then runs [`DESCENT_STEPS`] Gaussian
/// perturbations of all coordinates with a shrinking scale, keeping a
/// perturbation whenever it lowers the ratio. The result depends only on the
/// arguments.
pub fn ratio_search(kind: RatioKind, n: usize, trials: usize, seed: u64) -> Result<SearchOutcome, RatioError> {
    if trials == 0 {
        return Err(RatioError::NoTrials);
    }
    let nmax = if kind == RatioKind::Sgr { DEFAULT_FILLING_NMAX } else { SEARCH_SMT_NMAX };
    if n > nmax {
        return Err(RatioError::TooManyPoints { n, nmax });
    }
    if n < 2 {
        return Err(GeometryError::TooFewPoints { need: 2, got: n }.into());
    }
    let best = (0..trials)
        .into_par_iter()
        .map(|trial| search_trial(kind, n, seed, trial))
        .reduce(
            || (f64::INFINITY, usize::MAX, Vec::new()),
            |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );
    let (value, best_trial, points) = best;
    if !value.is_finite() {
        return Err(RatioError::Invariant("no trial produced a valid configuration".into()));
    }
    let report = ratio_report(&points)?;
    Ok(SearchOutcome { kind, trials, seed, best_trial, value, report })
}

fn search_trial(kind: RatioKind, n: usize, seed: u64, trial: usize) -> (f64, usize, Vec<Point2>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let mut points: Vec<Point2> = (0..n).map(|_| Point2::new(rng.random(), rng.random())).collect();
    let mut value = ratio_of(kind, &points).unwrap_or(f64::INFINITY);
    let mut scale = 0.1;
    for _ in 0..DESCENT_STEPS {
        let normal = Normal::new(0.0, scale).expect("positive scale");
        let candidate: Vec<Point2> = points
            .iter()
            .map(|p| Point2::new(p.x + normal.sample(&mut rng), p.y + normal.sample(&mut rng)))
            .collect();
        if let Some(v) = ratio_of(kind, &candidate) {
            if v < value {
                value = v;
                points = candidate;
            }
        }
        scale *= 0.9;
    }
    (value, trial, points)
}

/// The two-dimensional case of the Du–Smith configuration: the center and
/// vertices of a regular hexagon with side `√2`, split into three regular
/// triangles through the center.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DuSmithCheck {
    pub points: Vec<Point2>,
    pub mst: f64,
    pub part_mst: f64,
    pub smt: f64,
    pub part_smt: f64,
}

impl DuSmithCheck {
    /// `mst(P) = 3 mst(P^i)` and `smt(P) ≤ 3 smt(P^i)`.
    pub fn holds(&self, tol: f64) -> bool {
        (self.mst - 3.0 * self.part_mst).abs() <= tol && self.smt <= 3.0 * self.part_smt + tol
    }
}

pub fn du_smith_check() -> Result<DuSmithCheck, RatioError> {
    // project the points of x + y + z = 0 with coordinates in {-1, 0, 1}
    let u = [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0];
    let v = [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()];
    let project = |x: [f64; 3]| Point2::new(x[0] * u[0] + x[1] * u[1] + x[2] * u[2], x[0] * v[0] + x[1] * v[1] + x[2] * v[2]);
    let mut cube = vec![[0.0; 3]];
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                let mut x = [0.0; 3];
                x[i] = 1.0;
                x[j] = -1.0;
                cube.push(x);
            }
        }
    }
    let points: Vec<Point2> = cube.iter().map(|&x| project(x)).collect();
    // P^1: the origin and the two points with first coordinate 1
    let part: Vec<Point2> = cube.iter().filter(|x| x[0] == 1.0 || x.iter().all(|&c| c == 0.0)).map(|&x| project(x)).collect();
    let (_, mst) = euclidean_mst(&points)?;
    let (_, part_mst) = euclidean_mst(&part)?;
    let smt_len = smt(&points, DEFAULT_NMAX)?.length;
    let part_smt = smt(&part, DEFAULT_NMAX)?.length;
    Ok(DuSmithCheck { points, mst, part_mst, smt: smt_len, part_smt })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_triangle() {
        let h = 3f64.sqrt() / 2.0;
        let r = ratio_report(&[Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(0.5, h)]).unwrap();
        assert!((r.sr - h).abs() < 1e-12);
        assert!((r.sgr - 0.75).abs() < 1e-12);
        assert!((r.ssr - h).abs() < 1e-12);
    }

    #[test]
    fn obtuse_and_two_points() {
        let a = 150f64.to_radians();
        let r = ratio_report(&[Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(a.cos(), a.sin())]).unwrap();
        assert!((r.sr - 1.0).abs() < 1e-12);
        let two = ratio_report(&[Point2::new(0., 0.), Point2::new(3., 4.)]).unwrap();
        assert_eq!((two.sr, two.sgr, two.ssr), (1.0, 1.0, 1.0));
    }

    #[test]
    fn simplex_sgr() {
        for n in 3..=6 {
            let v = sgr_metric(&FiniteMetricSpace::regular_simplex(n, crate::scalar::rational(1, 1))).unwrap();
            assert_eq!(v, crate::scalar::rational(n as i64, 2 * n as i64 - 2));
        }
    }

    #[test]
    fn search_is_reproducible() {
        let a = ratio_search(RatioKind::Sr, 3, 20, 7).unwrap();
        let b = ratio_search(RatioKind::Sr, 3, 20, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.value >= 3f64.sqrt() / 2.0 - 1e-12);
        assert!(matches!(ratio_search(RatioKind::Sr, 3, 0, 7), Err(RatioError::NoTrials)));
        assert!(matches!(ratio_search(RatioKind::Ssr, 8, 1, 7), Err(RatioError::TooManyPoints { .. })));
    }

    #[test]
    fn du_smith() {
        let c = du_smith_check().unwrap();
        assert_eq!(c.points.len(), 7);
        assert!((c.mst - 6.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!(c.holds(1e-9));
    }

    #[test]
    fn kind_round_trip() {
        for k in [RatioKind::Sr, RatioKind::Sgr, RatioKind::Ssr] {
            assert_eq!(k.to_string().parse::<RatioKind>().unwrap(), k);
        }
        assert!("xyz".parse::<RatioKind>().is_err());
    }
}
