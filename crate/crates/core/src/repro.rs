//! Reproducible checks of the published values and theorems.
//!
//! Every check draws its instances from a fixed seed, so a run is identical
//! on every machine. The same suite backs `optnet repro` and the acceptance
//! test.

use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fillings::{
    eremin_value, four_point_mf, kuratowski_network, mf, mpf, reconstruct_additive_tree, DEFAULT_FILLING_NMAX,
    DEFAULT_KMAX,
};
use crate::geometry::{convexity_levels, delaunay_graph, euclidean_mst, full_components, twisting_number, Point2};
use crate::graph::{
    binary_topology_count, enumerate_binary_topologies, enumerate_spanning_trees, kruskal_mst, spanning_tree_count,
    TreeTopology, WeightedGraph, WeightedTree,
};
use crate::metric::{metric_from_weighted_tree, FiniteMetricSpace};
use crate::ratios::{ratio_report, ratio_search, sgr_floor, sgr_metric, RatioKind};
use crate::scalar::{Rational, Scalar};
use crate::steiner::{melzak_branches, relax_topology, smt, DEFAULT_NMAX};

/// Result of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.1}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.seconds
        )
    }
}

type Check = fn() -> Result<String, String>;

const CHECKS: [(&str, Check); 13] = [
    ("regular triangle", regular_triangle),
    ("rectangle fillings", rectangle_fillings),
    ("spanning tree counts", spanning_tree_counts),
    ("Kruskal against brute force", kruskal_brute_force),
    ("EMST inside Delaunay", emst_in_delaunay),
    ("Torricelli and local structure", torricelli_triangles),
    ("Melzak against relaxation", melzak_relaxation),
    ("multitour duality", multitour_duality),
    ("additive round trip", additive_round_trip),
    ("ratio bounds", ratio_bounds),
    ("ratio search", ratio_search_floor),
    ("Kuratowski network", kuratowski_isometry),
    ("twisting number", twisting_bounds),
];

/// Number of checks in the suite.
pub fn check_count() -> usize {
    CHECKS.len()
}

/// Runs check `id` (1-based).
pub fn run_check(id: usize) -> Option<CheckOutcome> {
    let (title, check) = *CHECKS.get(id.checked_sub(1)?)?;
    let start = Instant::now();
    let result = check();
    let seconds = start.elapsed().as_secs_f64();
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(CheckOutcome { id, title, passed, detail, seconds })
}

/// Runs every check in order, calling `report` after each.
pub fn run_all(mut report: impl FnMut(&CheckOutcome)) -> Vec<CheckOutcome> {
    (1..=CHECKS.len())
        .map(|id| {
            let outcome = run_check(id).expect("id in range");
            report(&outcome);
            outcome
        })
        .collect()
}

fn rng_for(check: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + check)
}

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn q(v: i64) -> Rational {
    Rational::from_int(v)
}

fn err(e: impl fmt::Display) -> String {
    e.to_string()
}

fn unit_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point2> {
    (0..n).map(|_| Point2::new(rng.random(), rng.random())).collect()
}

fn regular_triangle_points() -> Vec<Point2> {
    vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, 3f64.sqrt() / 2.0)]
}

/// Distances between the corners of a 3x4 rectangle, in boundary order.
fn rectangle_space() -> FiniteMetricSpace<Rational> {
    let pts = [(0, 0), (3, 0), (3, 4), (0, 4)];
    let m = pts
        .iter()
        .map(|&(ax, ay)| {
            pts.iter()
                .map(|&(bx, by): &(i64, i64)| {
                    let sq = (ax - bx).pow(2) + (ay - by).pow(2);
                    q((sq as f64).sqrt().round() as i64)
                })
                .collect()
        })
        .collect();
    FiniteMetricSpace::new(m).expect("rectangle distances")
}

fn regular_triangle() -> Result<String, String> {
    let pts = regular_triangle_points();
    let (_, mst) = euclidean_mst(&pts).map_err(err)?;
    let tree = smt(&pts, DEFAULT_NMAX).map_err(err)?;
    let filling = mf(&FiniteMetricSpace::regular_simplex(3, q(1)), DEFAULT_FILLING_NMAX).map_err(err)?;
    let sr = tree.length / mst;
    ensure((mst - 2.0).abs() <= 1e-12, || format!("mst = {mst}"))?;
    ensure((tree.length - 3f64.sqrt()).abs() <= 1e-9, || format!("smt = {}", tree.length))?;
    ensure(filling.value == crate::scalar::rational(3, 2), || format!("mf = {}", filling.value))?;
    ensure((sr - 3f64.sqrt() / 2.0).abs() <= 1e-9, || format!("sr = {sr}"))?;
    Ok(format!("mst = {mst}, smt = {:.12}, mf = {}, sr = {sr:.12}", tree.length, filling.value))
}

fn rectangle_fillings() -> Result<String, String> {
    let space = rectangle_space();
    let diagonal = TreeTopology::quartet(0, 2, 1, 3);
    let nonneg = mpf(&space, &diagonal, false).map_err(err)?.value;
    let general = mpf(&space, &diagonal, true).map_err(err)?.value;
    ensure(nonneg == q(10), || format!("mpf = {nonneg}"))?;
    ensure(general == q(9), || format!("mpf- = {general}"))?;
    let closed = four_point_mf(&space).map_err(err)?.value;
    ensure(closed == q(8), || format!("closed form gives {closed}"))?;
    let per_type: Vec<Rational> = enumerate_binary_topologies(4)
        .map(|t| mpf(&space, &t, true).map(|f| f.value))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let least = per_type.iter().min().cloned().expect("three types");
    ensure(per_type.len() == 3 && least == q(8), || format!("types give {per_type:?}"))?;
    let global = mf(&space, DEFAULT_FILLING_NMAX).map_err(err)?.value;
    ensure(global == q(8), || format!("mf = {global}"))?;
    Ok(format!(
        "mpf = {nonneg}, mpf- = {general}, closed form {closed}, types {}",
        per_type.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("/")
    ))
}

fn spanning_tree_counts() -> Result<String, String> {
    for n in 2..=8usize {
        let kn = WeightedGraph::complete(n, |_, _| 1.0);
        let count = spanning_tree_count(&kn).map_err(err)?;
        let expected = BigInt::from(n).pow(n as u32 - 2);
        ensure(count == expected, || format!("K_{n}: {count} != {expected}"))?;
        if n <= 6 {
            let listed = enumerate_spanning_trees(&kn).map_err(err)?.len();
            ensure(BigInt::from(listed) == expected, || format!("K_{n}: enumerated {listed}"))?;
        }
    }
    Ok("K_2..K_8 match n^(n-2); enumeration agrees up to K_6".into())
}

fn random_connected_graph(rng: &mut ChaCha8Rng) -> WeightedGraph<f64> {
    let n = rng.random_range(2..=8);
    let mut triples = Vec::new();
    let mut present = vec![vec![false; n]; n];
    for v in 1..n {
        let u = rng.random_range(0..v);
        present[u][v] = true;
        triples.push((u, v, rng.random_range(1..=40) as f64 / 8.0));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present[u][v] && rng.random_bool(0.4) {
                triples.push((u, v, rng.random_range(1..=40) as f64 / 8.0));
            }
        }
    }
    WeightedGraph::from_triples(n, triples).expect("valid graph")
}

fn kruskal_brute_force() -> Result<String, String> {
    let mut rng = rng_for(4);
    let mut trees = 0usize;
    for trial in 0..200 {
        let g = random_connected_graph(&mut rng);
        let kruskal = kruskal_mst(&g).map_err(err)?.weight;
        let all = enumerate_spanning_trees(&g).map_err(err)?;
        trees += all.len();
        let brute = all
            .iter()
            .map(|t| t.iter().map(|&e| g.edges()[e].weight).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        ensure(kruskal == brute, || format!("graph {trial}: Kruskal {kruskal}, brute force {brute}"))?;
    }
    Ok(format!("200 graphs, {trees} spanning trees enumerated"))
}

fn emst_in_delaunay() -> Result<String, String> {
    let mut rng = rng_for(5);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let n = rng.random_range(3..=40);
        let mut pts = if trial % 3 == 2 {
            // small integer grid: many collinear and cocircular quadruples
            (0..n).map(|_| Point2::new(rng.random_range(0..7) as f64, rng.random_range(0..7) as f64)).collect()
        } else {
            unit_points(&mut rng, n)
        };
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup();
        if pts.len() < 2 {
            continue;
        }
        let dg = delaunay_graph(&pts).map_err(err)?;
        let (net, length) = euclidean_mst(&pts).map_err(err)?;
        for &(u, v) in net.topology.edges() {
            ensure(dg.has_edge(u, v), || format!("set {trial}: MST edge {u}-{v} is not a Delaunay edge"))?;
        }
        let complete = WeightedGraph::complete(pts.len(), |i, j| pts[i].dist(pts[j]));
        let reference = kruskal_mst(&complete).map_err(err)?.weight;
        let rel = (length - reference).abs() / reference;
        worst = worst.max(rel);
        ensure(rel <= 1e-12, || format!("set {trial}: {length} vs {reference}"))?;
    }
    Ok(format!("100 sets, largest relative gap {worst:.1e}"))
}

/// Largest angle of a triangle is at least 120°.
fn has_wide_angle(p: &[Point2]) -> bool {
    (0..3).any(|i| {
        let a = p[(i + 1) % 3] - p[i];
        let b = p[(i + 2) % 3] - p[i];
        a.dot(b) / (a.norm() * b.norm()) <= -0.5
    })
}

fn angles_at(net: &crate::geometry::PlaneNetwork, v: usize) -> Vec<f64> {
    let mut dirs: Vec<f64> = net
        .topology
        .adjacency()[v]
        .iter()
        .map(|&(w, _)| {
            let d = net.positions[w] - net.positions[v];
            d.y.atan2(d.x)
        })
        .collect();
    dirs.sort_by(f64::total_cmp);
    (0..dirs.len())
        .map(|k| if k + 1 < dirs.len() { dirs[k + 1] - dirs[k] } else { dirs[0] + 2.0 * PI - dirs[k] })
        .collect()
}

fn torricelli_triangles() -> Result<String, String> {
    let mut rng = rng_for(6);
    let (mut acute, mut wide) = (0, 0);
    for trial in 0..500 {
        let pts = if trial % 2 == 0 {
            unit_points(&mut rng, 3)
        } else {
            // angle at the origin between 120° and 175°
            let angle = rng.random_range(120.5f64..175.0).to_radians();
            let (r1, r2) = (rng.random_range(0.2..1.0), rng.random_range(0.2..1.0));
            let turn = rng.random_range(0.0..2.0 * PI);
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(r1, 0.0).rotate(turn),
                Point2::new(r2 * angle.cos(), r2 * angle.sin()).rotate(turn),
            ]
        };
        let tree = smt(&pts, DEFAULT_NMAX).map_err(err)?;
        let net = &tree.network;
        if has_wide_angle(&pts) {
            wide += 1;
            let mut sides = [pts[0].dist(pts[1]), pts[1].dist(pts[2]), pts[0].dist(pts[2])];
            sides.sort_by(f64::total_cmp);
            ensure(net.steiner_vertices().is_empty(), || format!("triangle {trial}: unexpected Steiner point"))?;
            ensure(rel_close(tree.length, sides[0] + sides[1], 1e-12), || {
                format!("triangle {trial}: {} vs {}", tree.length, sides[0] + sides[1])
            })?;
        } else {
            acute += 1;
            let steiner = net.steiner_vertices();
            ensure(steiner.len() == 1, || format!("triangle {trial}: {} Steiner points", steiner.len()))?;
            let angles = angles_at(net, steiner[0]);
            ensure(angles.len() == 3, || format!("triangle {trial}: Steiner degree {}", angles.len()))?;
            for a in angles {
                ensure((a - 2.0 * PI / 3.0).abs() <= 1e-6, || format!("triangle {trial}: angle {a}"))?;
            }
            let relaxed = relax_topology(&TreeTopology::star(3), &pts).map_err(err)?.length();
            ensure(rel_close(tree.length, relaxed, 1e-7), || format!("triangle {trial}: {} vs relaxed {relaxed}", tree.length))?;
        }
    }
    Ok(format!("{acute} triangles with a Steiner point, {wide} with an angle of at least 120°"))
}

fn melzak_relaxation() -> Result<String, String> {
    let mut rng = rng_for(7);
    let (mut successes, mut branches) = (0, 0);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let n = 4 + trial % 2;
        let pts = unit_points(&mut rng, n);
        for (index, topo) in enumerate_binary_topologies(n).enumerate() {
            let report = melzak_branches(&topo, &pts).map_err(err)?;
            branches += report.branches;
            if report.successes.is_empty() {
                continue;
            }
            let relaxed = relax_topology(&topo, &pts).map_err(err)?.length();
            for (mask, net) in &report.successes {
                successes += 1;
                worst = worst.max((net.length() - relaxed).abs() / relaxed);
                ensure(rel_close(net.length(), relaxed, 1e-7), || {
                    format!("set {trial}, type {index}, branch {mask}: {} vs {relaxed}", net.length())
                })?;
            }
        }
    }
    Ok(format!("{successes} successful branches out of {branches}, largest relative gap {worst:.1e}"))
}

/// Nonnegative weights on a random binary type; some interior edges vanish.
fn random_tree_f64(rng: &mut ChaCha8Rng, n: usize) -> WeightedTree<f64> {
    let topo = enumerate_binary_topologies(n).get(rng.random_range(0..binary_topology_count(n))).expect("in range");
    let weights = topo
        .edges()
        .iter()
        .map(|&(u, v)| {
            if u < n || v < n {
                rng.random_range(0.1..1.0)
            } else if rng.random_bool(0.3) {
                0.0
            } else {
                rng.random_range(0.0..1.0)
            }
        })
        .collect();
    WeightedTree::new(topo, weights).expect("weights match edges")
}

/// Integer weights: leaf edges in `1..=10`, interior edges in `0..=10`.
fn random_tree_rational(rng: &mut ChaCha8Rng, n: usize) -> WeightedTree<Rational> {
    let topo = enumerate_binary_topologies(n).get(rng.random_range(0..binary_topology_count(n))).expect("in range");
    let weights = topo
        .edges()
        .iter()
        .map(|&(u, v)| {
            let leaf = u < n || v < n;
            if !leaf && rng.random_bool(0.25) {
                q(0)
            } else {
                q(rng.random_range(1..=10))
            }
        })
        .collect();
    WeightedTree::new(topo, weights).expect("weights match edges")
}

fn random_space(rng: &mut ChaCha8Rng, n: usize, kind: usize) -> FiniteMetricSpace<f64> {
    match kind {
        0 => metric_from_weighted_tree(&random_tree_f64(rng, n)).expect("tree metric"),
        1 => FiniteMetricSpace::from_points(&unit_points(rng, n)).expect("distinct points"),
        _ => {
            let mut m = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    let v = rng.random_range(1.0..2.0);
                    m[i][j] = v;
                    m[j][i] = v;
                }
            }
            FiniteMetricSpace::new(m).expect("distances in [1, 2) are metric")
        }
    }
}

fn multitour_duality() -> Result<String, String> {
    let mut rng = rng_for(8);
    let (mut additive, mut exact, mut exact_additive) = (0, 0, 0);
    let mut worst = f64::NEG_INFINITY;
    for trial in 0..200 {
        let n = rng.random_range(3..=6);
        let space = random_space(&mut rng, n, trial % 3);
        let is_additive = space.check_four_point().is_additive();
        let best = mf(&space, DEFAULT_FILLING_NMAX).map_err(err)?;
        let optimal = enumerate_binary_topologies(n).get(best.topology_index).expect("in range");
        let other = enumerate_binary_topologies(n).get(rng.random_range(0..binary_topology_count(n))).expect("in range");
        for (which, topo) in [("optimal", &optimal), ("random", &other)] {
            let bound = eremin_value(&space, topo, DEFAULT_KMAX).map_err(err)?;
            worst = worst.max(bound.lower_bound - bound.mpf_minus);
            ensure(bound.lower_bound <= bound.mpf_minus + 1e-9, || {
                format!("space {trial}, {which} type: multitour {} above mpf- {}", bound.lower_bound, bound.mpf_minus)
            })?;
            if which == "optimal" {
                additive += usize::from(is_additive);
                exact += usize::from(bound.exact);
                exact_additive += usize::from(bound.exact && is_additive);
                ensure(bound.exact || !is_additive, || format!("space {trial}: additive but no tour attains mpf-"))?;
            }
        }
    }
    ensure(exact_additive == additive, || "exactness missing on an additive space".into())?;
    Ok(format!(
        "400 bounds, largest excess {worst:.1e}; exact on {exact} of 200 optimal types, covering all {additive} additive spaces"
    ))
}

fn additive_round_trip() -> Result<String, String> {
    let mut rng = rng_for(9);
    for trial in 0..200 {
        let n = rng.random_range(3..=7);
        let original = random_tree_rational(&mut rng, n);
        let space = metric_from_weighted_tree(&original).map_err(err)?;
        ensure(space.check_four_point().is_additive(), || format!("tree {trial}: metric not classified additive"))?;
        let rebuilt = reconstruct_additive_tree(&space).map_err(err)?;
        let expected = original.contract_zero_edges(&q(0));
        ensure(rebuilt.weighted_splits() == expected.weighted_splits(), || {
            format!("tree {trial}: reconstruction differs from the generating tree")
        })?;
        let value = mf(&space, DEFAULT_FILLING_NMAX).map_err(err)?.value;
        let (half, _) = space.min_half_perimeter();
        ensure(value == half, || format!("tree {trial}: mf {value} but half-perimeter {half}"))?;
    }
    let mut rejected = 0;
    let mut perturbed = 0;
    while perturbed < 200 {
        let n = rng.random_range(4..=7);
        let space = metric_from_weighted_tree(&random_tree_rational(&mut rng, n)).map_err(err)?;
        let mut m = space.to_matrix();
        // leaf edges weigh at least 1, so adding at most 2 keeps every triangle inequality
        for _ in 0..rng.random_range(1..=3) {
            let i = rng.random_range(0..n);
            let j = (i + rng.random_range(1..n)) % n;
            let bump = q(rng.random_range(1..=2));
            m[i][j] = m[i][j].clone() + bump.clone();
            m[j][i] = m[j][i].clone() + bump;
        }
        let Ok(bent) = FiniteMetricSpace::new(m) else {
            rejected += 1;
            continue;
        };
        if bent.check_four_point().is_additive() {
            rejected += 1;
            continue;
        }
        perturbed += 1;
        let value = mf(&bent, DEFAULT_FILLING_NMAX).map_err(err)?.value;
        let (half, _) = bent.min_half_perimeter();
        ensure(value != half, || format!("perturbed space {perturbed}: mf equals the half-perimeter {half}"))?;
    }
    Ok(format!("200 trees rebuilt exactly; mf exceeds the half-perimeter on 200 perturbed spaces ({rejected} draws stayed additive or broke a triangle)"))
}

fn ratio_bounds() -> Result<String, String> {
    let mut rng = rng_for(10);
    let mut least_sr = f64::INFINITY;
    for trial in 0..100 {
        let n = rng.random_range(2..=7);
        let pts = unit_points(&mut rng, n);
        let r = ratio_report(&pts).map_err(|e| format!("set {trial}: {e}"))?;
        least_sr = least_sr.min(r.sr);
        ensure(r.sr > 0.5 && r.sr <= 1.0 + 1e-9, || format!("set {trial}: sr = {}", r.sr))?;
        ensure(r.sgr >= sgr_floor(n) - 1e-9, || format!("set {trial}: sgr = {}", r.sgr))?;
        ensure(r.mf <= r.smt + 1e-9 * r.mst && r.smt <= r.mst + 1e-9 * r.mst, || {
            format!("set {trial}: mf {} smt {} mst {}", r.mf, r.smt, r.mst)
        })?;
    }
    for trial in 0..100 {
        let n = rng.random_range(3..=7);
        let space = random_space(&mut rng, n, trial % 3);
        let sgr = sgr_metric(&space).map_err(err)?;
        ensure(sgr >= sgr_floor(n) - 1e-9 && sgr <= 1.0 + 1e-9, || format!("space {trial}: sgr = {sgr}"))?;
    }
    for n in 3..=8usize {
        let sgr = sgr_metric(&FiniteMetricSpace::regular_simplex(n, q(1))).map_err(err)?;
        let expected = crate::scalar::rational(n as i64, 2 * n as i64 - 2);
        ensure(sgr == expected, || format!("simplex {n}: sgr = {sgr}"))?;
    }
    Ok(format!("100 planar sets (least sr {least_sr:.6}), 100 metric spaces, simplices 3..8 exact"))
}

fn ratio_search_floor() -> Result<String, String> {
    let target = 3f64.sqrt() / 2.0;
    let sr = ratio_search(RatioKind::Sr, 3, 10_000, 2024).map_err(err)?;
    ensure(sr.value <= 0.8661, || format!("sr search stopped at {}", sr.value))?;
    ensure(sr.value >= 0.86602, || format!("sr search went below the bound: {}", sr.value))?;
    let mut found = vec![format!("sr3 {:.7}", sr.value)];
    for n in [3, 4] {
        let ssr = ratio_search(RatioKind::Ssr, n, 2_000, 2024 + n as u64).map_err(err)?;
        ensure(ssr.value >= target - 1e-4, || format!("ssr{n} search found {}", ssr.value))?;
        found.push(format!("ssr{n} {:.7}", ssr.value));
    }
    Ok(found.join(", "))
}

fn random_rational_space(rng: &mut ChaCha8Rng, n: usize, kind: usize) -> FiniteMetricSpace<Rational> {
    if kind == 0 {
        return metric_from_weighted_tree(&random_tree_rational(rng, n)).expect("tree metric");
    }
    let mut m = vec![vec![q(0); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = crate::scalar::rational(rng.random_range(20..=40), 2);
            m[i][j] = v.clone();
            m[j][i] = v;
        }
    }
    FiniteMetricSpace::new(m).expect("distances in [10, 20] are metric")
}

fn kuratowski_isometry() -> Result<String, String> {
    let mut rng = rng_for(12);
    let mut edges = 0;
    for trial in 0..100 {
        let n = rng.random_range(2..=6);
        let space = random_rational_space(&mut rng, n, trial % 2);
        let image = space.kuratowski_embed();
        for i in 0..n {
            for j in 0..n {
                ensure(image.linf_distance(i, j) == *space.d(i, j), || format!("space {trial}: pair {i}-{j} distorted"))?;
            }
        }
        let topo = enumerate_binary_topologies(n).get(rng.random_range(0..binary_topology_count(n))).expect("in range");
        let optimal = mf(&space, DEFAULT_FILLING_NMAX).map_err(err)?.binary;
        for filling in [mpf(&space, &topo, false).map_err(err)?.tree, optimal] {
            let net = kuratowski_network(&space, &filling).map_err(err)?;
            for (i, &b) in filling.topology.boundary().iter().enumerate() {
                ensure(net.points[b] == space.row(i), || format!("space {trial}: boundary point {i} moved"))?;
            }
            edges += net.edge_lengths.len();
            ensure(net.edge_lengths == filling.weights, || format!("space {trial}: induced lengths differ from weights"))?;
        }
    }
    Ok(format!("100 exact isometries; {edges} edge lengths equal their weights"))
}

fn twisting_bounds() -> Result<String, String> {
    let mut rng = rng_for(13);
    let mut max_convex = 0;
    for trial in 0..100 {
        let n = rng.random_range(3..=7);
        let mut angles: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
        angles.sort_by(f64::total_cmp);
        let (a, b) = (rng.random_range(0.5..1.0), rng.random_range(0.5..1.0));
        let pts: Vec<Point2> = angles.iter().map(|t| Point2::new(a * t.cos(), b * t.sin())).collect();
        let levels = convexity_levels(&pts).count();
        ensure(levels == 1, || format!("convex set {trial} has {levels} levels"))?;
        let tree = smt(&pts, DEFAULT_NMAX).map_err(err)?;
        for part in full_components(&tree.network) {
            let tw = twisting_number(&part).map_err(err)?;
            max_convex = max_convex.max(tw);
            ensure(tw <= 5, || format!("convex set {trial}: twisting number {tw}"))?;
        }
    }
    let mut max_general = 0;
    for trial in 0..100 {
        let n = rng.random_range(3..=7);
        let pts = unit_points(&mut rng, n);
        let c = convexity_levels(&pts).count() as i64;
        let tree = smt(&pts, DEFAULT_NMAX).map_err(err)?;
        for part in full_components(&tree.network) {
            let tw = twisting_number(&part).map_err(err)?;
            max_general = max_general.max(tw);
            ensure(tw <= 12 * (c - 1) + 5, || format!("set {trial}: twisting number {tw} with {c} levels"))?;
        }
    }
    Ok(format!("largest twisting number {max_convex} on convex sets, {max_general} on random sets"))
}
