mod common;

use packcell::entropy::{nn_half_distances, sample_iid, EmpiricalPointSet, PiecewiseConstantDensity};
use packcell::{convex_intersection, disc_polygon_area, ConvexPolygon, Disc, Point, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn disc_polygon_area_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let poly = common::random_convex(&mut rng, -1.0, 1.0);
        let disc = Disc::new(Point::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)), rng.random_range(0.2..1.2)).unwrap();
        let oracle = common::mc_disc_polygon(&disc, &poly, 400_000, &mut rng);
        // Box area ≤ 4: standard error ≤ 3.2e-3.
        assert!((disc_polygon_area(&disc, &poly) - oracle).abs() < 1.6e-2);
    }
}

#[test]
fn intersection_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10 {
        let p = common::random_convex(&mut rng, 0.0, 1.0);
        let q = common::random_convex(&mut rng, 0.0, 1.0);
        let oracle = common::mc_intersection(&p, &q, 400_000, &mut rng);
        assert!((convex_intersection(&p, &q).area() - oracle).abs() < 4e-3);
    }
}

#[test]
fn tiny_and_huge_discs() {
    let square = ConvexPolygon::rect(Point::new(0.0, 0.0), Point::new(1.0, 1.0));
    let tiny = Disc::new(Point::new(0.5, 0.5), 1e-6).unwrap();
    assert!((disc_polygon_area(&tiny, &square) - tiny.area()).abs() < 1e-20);
    let huge = Disc::new(Point::new(0.5, 0.5), 1e6).unwrap();
    assert!((disc_polygon_area(&huge, &square) - 1.0).abs() < 1e-9);
    let corner = Disc::new(Point::new(0.0, 0.0), 1e-4).unwrap();
    assert!((disc_polygon_area(&corner, &square) - corner.area() / 4.0).abs() < 1e-18);
}

#[test]
fn nearest_neighbors_match_brute_force_on_lattices() {
    // Ties everywhere: exact equality must survive them.
    let pts = packcell::packing::hexagonal_lattice(Point::ORIGIN, 0.1, 2.0);
    let x = EmpiricalPointSet::new(pts, Window::square(Point::ORIGIN, 5.0).unwrap()).unwrap();
    let fast = nn_half_distances(&x).unwrap();
    let brute = common::brute_nn_half(x.points());
    assert!(fast.iter().zip(&brute).all(|(a, b)| a.to_bits() == b.to_bits()));
}

#[test]
fn iid_cell_frequencies_within_three_sigma() {
    let values = vec![0.5, 1.0, 2.0, 0.0, 1.5, 1.0];
    let rho = PiecewiseConstantDensity::normalized(Point::new(0.0, 0.0), Point::new(3.0, 2.0), 3, 2, values).unwrap();
    let n = 100_000;
    let x = sample_iid(&rho, n, 11).unwrap();
    let mut counts = vec![0usize; rho.cell_count()];
    for &p in x.points() {
        counts[rho.cell_index(p).unwrap()] += 1;
    }
    for (k, &c) in counts.iter().enumerate() {
        let prob = rho.values()[k] * rho.cell_area();
        let sigma = (n as f64 * prob * (1.0 - prob)).sqrt();
        assert!((c as f64 - n as f64 * prob).abs() <= 3.0 * sigma.max(1e-9), "cell {k}: {c}");
    }
}
