use optnet::geometry::{convexity_levels, euclidean_mst, full_components, twisting_number, Point2};
use optnet::graph::enumerate_binary_topologies;
use optnet::steiner::{
    check_local_structure, melzak_branches, relax_topology, smt, smt_by_relaxation, torricelli_point, DEFAULT_NMAX,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point2> {
    (0..n).map(|_| Point2::new(rng.random_range(0.0..1.0), rng.random_range(0.0..1.0))).collect()
}

#[test]
fn fst_concatenation_matches_relaxation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..40 {
        let n = 3 + trial % 4;
        let pts = random_points(&mut rng, n);
        let a = smt(&pts, DEFAULT_NMAX).unwrap();
        let b = smt_by_relaxation(&pts, DEFAULT_NMAX).unwrap();
        assert!((a.length - b.length).abs() <= 1e-9 * a.length, "trial {trial}: {} vs {}", a.length, b.length);
        let report = check_local_structure(&a.network);
        assert!(report.passes(), "trial {trial}: {:?}", report.violations);
    }
}

#[test]
fn sandwich_between_half_mst_and_mst() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..30 {
        let n = rng.random_range(2..=7);
        let pts = random_points(&mut rng, n);
        let s = smt(&pts, DEFAULT_NMAX).unwrap().length;
        let (_, m) = euclidean_mst(&pts).unwrap();
        assert!(s <= m * (1.0 + 1e-12));
        assert!(s > 0.5 * m);
    }
}

#[test]
fn rigid_motion_and_dilation() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let pts = random_points(&mut rng, 6);
        let base = smt(&pts, DEFAULT_NMAX).unwrap().length;
        let angle = rng.random_range(0.0..std::f64::consts::TAU);
        let moved: Vec<Point2> = pts.iter().map(|p| (p.rotate(angle) + Point2::new(3.0, -2.0)) * 2.5).collect();
        let after = smt(&moved, DEFAULT_NMAX).unwrap().length;
        assert!((after - 2.5 * base).abs() < 1e-9 * after);
    }
}

#[test]
fn triangles_match_torricelli() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..100 {
        let pts = random_points(&mut rng, 3);
        let t = torricelli_point(pts[0], pts[1], pts[2]).unwrap();
        let s = smt(&pts, DEFAULT_NMAX).unwrap();
        assert!((t.smt3 - s.length).abs() < 1e-9 * s.length);
    }
}

#[test]
fn melzak_successes_match_relaxation() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        let n = rng.random_range(4..=5);
        let pts = random_points(&mut rng, n);
        for topo in enumerate_binary_topologies(n) {
            let report = melzak_branches(&topo, &pts).unwrap();
            let relaxed = relax_topology(&topo, &pts).unwrap().length();
            for (_, net) in &report.successes {
                assert!((net.length() - relaxed).abs() <= 1e-7 * relaxed);
            }
        }
    }
}

#[test]
fn twisting_bound_holds_per_component() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..20 {
        let n = rng.random_range(3..=7);
        let pts = random_points(&mut rng, n);
        let tree = smt(&pts, DEFAULT_NMAX).unwrap();
        for part in full_components(&tree.network) {
            let c = convexity_levels(&part.terminals()).count() as i64;
            let tw = twisting_number(&part).unwrap();
            assert!(tw <= 12 * (c - 1) + 5);
        }
    }
}
