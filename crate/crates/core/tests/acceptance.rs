//! Acceptance suite. Prints one line per criterion and exits non-zero if any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use packcell::entropy::{
    entropy_estimate, hexagonal_recovery, nn_half_distances, partition_entropy, sample_iid, square_grid,
    EmpiricalPointSet, PiecewiseConstantDensity,
};
use packcell::packing::{hexagonal_lattice, hexagonal_packing, random_critical_packing};
use packcell::partition::{partition_w, verify_partition_rule};
use packcell::proof_checks::{
    check_case3_inequality, check_claim1, check_g_monotone, check_lemma_alpha_extremes, SweepSpec, DEFAULT_GRID,
};
use packcell::{
    cell_area_lower_bound_check, convex_intersection, criticalize, density, disc_polygon_area, CellComplex, Disc, Point,
    Window, HEXAGONAL_DENSITY,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(id: u32, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let pass = out.pass && in_time;
    println!(
        "criterion {id:>2} {:<4} {name}: {} [{:.2}s, budget {}s]",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    pass
}

fn hexagonal_exactness() -> Outcome {
    let p = hexagonal_packing(Point::ORIGIN, 2.0, 12.0).unwrap();
    let w = Window::square(Point::ORIGIN, 30.0).unwrap();
    let complex = CellComplex::new(&p, &w).unwrap();
    let mut worst_ratio: f64 = 0.0;
    let mut worst_area: f64 = 0.0;
    let mut interior = 0;
    for c in complex.cells().iter().filter(|c| !c.artificially_bounded) {
        if c.region.diameter() > 2.5 {
            // Cells touching the lattice edge are larger than the hexagon.
            continue;
        }
        interior += 1;
        let ratio = c.coverage(complex.disc(c.index).unwrap()).unwrap();
        worst_ratio = worst_ratio.max((ratio - HEXAGONAL_DENSITY).abs());
        worst_area = worst_area.max((c.region.area() - 2.0 * SQRT_3).abs());
    }
    Outcome {
        pass: interior > 100 && worst_ratio <= 1e-9 && worst_area <= 1e-9,
        detail: format!("{interior} hexagonal cells, max |ratio - π/(2√3)| = {worst_ratio:.2e}, max |area - 2√3| = {worst_area:.2e}"),
    }
}

fn random_packing_bound() -> Outcome {
    let results: Vec<(usize, usize, usize, f64, f64)> = (0..500u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(k);
            let (packing, w) = if k % 4 == 3 {
                // Jittered triangular lattice: close to the tight case.
                let h = rng.random_range(3.5..6.5);
                let jitter = rng.random_range(0.0..0.15);
                let pts: Vec<Point> = hexagonal_lattice(Point::ORIGIN, 1.0, h)
                    .into_iter()
                    .map(|p| p + Point::new(jitter * rng.random_range(-1.0..1.0), jitter * rng.random_range(-1.0..1.0)))
                    .collect();
                (criticalize(&pts).unwrap(), Window::square(Point::ORIGIN, 2.0 * h + 1.0).unwrap())
            } else {
                let n = rng.random_range(50..=200);
                let w = Window::square(Point::ORIGIN, 10.0).unwrap();
                (random_critical_packing(n, &w, &mut rng).unwrap(), w)
            };
            let n = packing.len();
            let complex = CellComplex::new(&packing, &w).unwrap();
            let mut checked = 0;
            let mut violations = 0;
            let mut max_ratio: f64 = 0.0;
            for c in complex.cells().iter().filter(|c| !c.artificially_bounded) {
                checked += 1;
                let ratio = c.coverage(complex.disc(c.index).unwrap()).unwrap();
                max_ratio = max_ratio.max(ratio);
                if ratio > HEXAGONAL_DENSITY + 1e-9 {
                    violations += 1;
                }
            }
            let mut min_margin = f64::INFINITY;
            for rec in cell_area_lower_bound_check(&packing, &w).unwrap() {
                min_margin = min_margin.min(rec.margin);
                if rec.margin < -1e-9 {
                    violations += 1;
                }
            }
            (n, checked, violations, max_ratio, min_margin)
        })
        .collect();
    let discs: usize = results.iter().map(|r| r.0).sum();
    let checked: usize = results.iter().map(|r| r.1).sum();
    let violations: usize = results.iter().map(|r| r.2).sum();
    let max_ratio = results.iter().map(|r| r.3).fold(0.0, f64::max);
    let min_margin = results.iter().map(|r| r.4).fold(f64::INFINITY, f64::min);
    Outcome {
        pass: violations == 0 && checked > 0,
        detail: format!(
            "500 packings, {discs} discs, {checked} interior cells, {violations} violations, max ratio {max_ratio:.9} (bound {HEXAGONAL_DENSITY:.9}), min area margin {min_margin:.3e}"
        ),
    }
}

fn density_trend() -> Outcome {
    let p = hexagonal_packing(Point::ORIGIN, 2.0, 24.0).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for (side, tol) in [(20.0, 5e-3), (30.0, 3.5e-3), (40.0, 2.5e-3)] {
        let w = Window::square(Point::ORIGIN, side).unwrap();
        let dev = (density(&p, &w).unwrap() - 0.9069).abs();
        pass &= dev <= tol;
        parts.push(format!("side {side}: |Δ| = {dev:.2e} (≤ {tol:.1e})"));
    }
    Outcome {
        pass,
        detail: parts.join(", "),
    }
}

fn geometry_oracle() -> Outcome {
    const SAMPLES: usize = 1_000_000;
    let disc_errors: Vec<f64> = (0..50u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + k);
            let poly = common::random_convex(&mut rng, 0.0, 1.0);
            let disc = Disc::new(
                Point::new(rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)),
                rng.random_range(0.1..0.6),
            )
            .unwrap();
            let oracle = common::mc_disc_polygon(&disc, &poly, SAMPLES, &mut rng);
            (disc_polygon_area(&disc, &poly) - oracle).abs()
        })
        .collect();
    let poly_errors: Vec<f64> = (0..50u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(2000 + k);
            let p = common::random_convex(&mut rng, 0.0, 1.0);
            let q = common::random_convex(&mut rng, 0.0, 1.0);
            let oracle = common::mc_intersection(&p, &q, SAMPLES, &mut rng);
            (convex_intersection(&p, &q).area() - oracle).abs()
        })
        .collect();
    let d = disc_errors.iter().copied().fold(0.0, f64::max);
    let q = poly_errors.iter().copied().fold(0.0, f64::max);
    Outcome {
        pass: d <= 3e-3 && q <= 3e-3,
        detail: format!("max |exact - MC| disc∩polygon {d:.2e}, polygon∩polygon {q:.2e} (≤ 3e-3, 10^6 samples)"),
    }
}

fn nearest_neighbor_oracle() -> Outcome {
    let mut mismatches = 0;
    let mut largest = 0;
    for k in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(3000 + k);
        let n = 250 * (k as usize + 1);
        largest = largest.max(n);
        let pts: Vec<Point> = match k % 4 {
            // Clustered around a few centers.
            1 => (0..n)
                .map(|i| {
                    let c = (i % 5) as f64 * 0.2;
                    Point::new(c + 0.01 * rng.random::<f64>(), c + 0.01 * rng.random::<f64>())
                })
                .collect(),
            // Nearly collinear.
            2 => (0..n).map(|_| Point::new(rng.random::<f64>(), 0.5 + 1e-6 * rng.random::<f64>())).collect(),
            _ => (0..n).map(|_| Point::new(rng.random::<f64>(), rng.random::<f64>())).collect(),
        };
        let domain = Window::rect(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        let x = EmpiricalPointSet::new(pts, domain).unwrap();
        let fast = nn_half_distances(&x).unwrap();
        let brute = common::brute_nn_half(x.points());
        mismatches += fast.iter().zip(&brute).filter(|(a, b)| a.to_bits() != b.to_bits()).count();
    }
    Outcome {
        pass: mismatches == 0,
        detail: format!("20 instances up to N = {largest}, {mismatches} bitwise mismatches"),
    }
}

fn entropy_recovery() -> Outcome {
    let rho = PiecewiseConstantDensity::uniform(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
    let values: Vec<f64> = [100, 400, 1600, 6400, 25600]
        .iter()
        .map(|&n| entropy_estimate(&hexagonal_recovery(&rho, n).unwrap().points).unwrap().abs())
        .collect();
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    let last = *values.last().unwrap();
    Outcome {
        pass: decreasing && last <= 0.02,
        detail: format!(
            "|E| = [{}], decreasing: {decreasing}, final ≤ 0.02",
            values.iter().map(|v| format!("{v:.5}")).collect::<Vec<_>>().join(", ")
        ),
    }
}

fn square_grid_limit() -> Outcome {
    let target = (2.0 / SQRT_3).ln();
    let values: Vec<f64> = [20, 40, 80, 160]
        .iter()
        .map(|&m| entropy_estimate(&square_grid(Point::new(0.0, 0.0), Point::new(1.0, 1.0), m).unwrap()).unwrap())
        .collect();
    let dev = (values[3] - target).abs();
    Outcome {
        pass: dev <= 0.02 && values[3] > 0.0,
        detail: format!(
            "E = [{}], target ln(2/√3) = {target:.6}, |Δ| at m = 160: {dev:.2e}",
            values.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(", ")
        ),
    }
}

fn liminf_probe() -> Outcome {
    let rho = PiecewiseConstantDensity::uniform(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
    let values: Vec<f64> = (0..20u64)
        .into_par_iter()
        .map(|seed| entropy_estimate(&sample_iid(&rho, 10_000, seed).unwrap()).unwrap())
        .collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    Outcome {
        pass: min >= -0.05,
        detail: format!("i.i.d. N = 10^4, 20 seeds, min E = {min:.4} (≥ -0.05)"),
    }
}

fn partition_conservation() -> Outcome {
    let results: Vec<(f64, bool)> = (0..50u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(4000 + k);
            let n = rng.random_range(2..=500);
            let domain = if k % 3 == 2 {
                Window::disc(Point::new(1.0, -2.0), 3.0).unwrap()
            } else {
                Window::rect(Point::new(-1.0, 0.0), Point::new(2.0, 1.5)).unwrap()
            };
            let poly = domain.polygon();
            let (lo, hi) = poly.bbox().unwrap();
            let mut pts = Vec::with_capacity(n);
            while pts.len() < n {
                let p = Point::new(rng.random_range(lo.x..hi.x), rng.random_range(lo.y..hi.y));
                if common::inside_convex(poly.vertices(), p) {
                    pts.push(p);
                }
            }
            let x = EmpiricalPointSet::new(pts, domain).unwrap();
            let result = partition_w(&x).unwrap();
            let report = verify_partition_rule(&result, &x);
            let rel = report.conservation_error.abs() / result.domain_area.max(1.0);
            (rel, report.a)
        })
        .collect();
    let max_err = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let contained = results.iter().filter(|r| r.1).count();

    let grid = square_grid(Point::new(0.0, 0.0), Point::new(2.0, 2.0), 12).unwrap();
    let ew = partition_entropy(&grid).unwrap();
    let identity = (ew + 4f64.ln()).abs();
    Outcome {
        pass: max_err <= 1e-6 && contained == 50 && identity <= 1e-12,
        detail: format!(
            "50 sets, max conservation error {max_err:.2e} (≤ 1e-6), containment {contained}/50, equal-area |E^W + ln|Ω|| = {identity:.1e}"
        ),
    }
}

fn proof_margins() -> Outcome {
    let g = check_g_monotone(&SweepSpec::regime(DEFAULT_GRID)).unwrap();
    let case3 = check_case3_inequality(10_000).unwrap();
    let alpha = check_lemma_alpha_extremes();
    let law_first = 9.376 / 10.96;
    let law_second = 12.8836 / 15.0152;
    let alpha_ok = (alpha.cos_first - law_first).abs() < 1e-15
        && (alpha.cos_second - law_second).abs() < 1e-15
        && (alpha.cos_second - 0.85803).abs() < 1e-5
        && alpha.matches_bounds
        && alpha.margin > 0.0;
    let mut claim_violations = 0;
    let mut claim_endpoints = true;
    for (i, x) in [0.0, 0.05, 0.1, 0.155].into_iter().enumerate() {
        let r = check_claim1(x, 10_000, 5000 + i as u64).unwrap();
        claim_violations += r.violations;
        claim_endpoints &= r.endpoints_feasible;
    }
    Outcome {
        pass: g.min_slope >= -1e-9 && case3.min_margin >= -1e-12 && alpha_ok && claim_violations == 0 && claim_endpoints,
        detail: format!(
            "g min slope {:.3e} over {} points; case-3 min margin {:.3e}; alpha cosines {:.6}/{:.6} < cos(π/6) = {:.6} (law of cosines; the first is 0.855474, not 0.85597); claim-1 violations {claim_violations}",
            g.min_slope, g.evaluated, case3.min_margin, alpha.cos_first, alpha.cos_second, alpha.cos_pi_6
        ),
    }
}

fn main() {
    let s = Duration::from_secs;
    let results = [
        run(1, "hexagonal exactness", s(1), hexagonal_exactness),
        run(2, "coverage bound on random critical packings", s(60), random_packing_bound),
        run(3, "hexagonal density trend", s(5), density_trend),
        run(4, "exact areas vs Monte Carlo", s(30), geometry_oracle),
        run(5, "nearest neighbors vs brute force", s(10), nearest_neighbor_oracle),
        run(6, "hexagonal entropy recovery", s(20), entropy_recovery),
        run(7, "square-grid limit", s(5), square_grid_limit),
        run(8, "i.i.d. liminf probe", s(10), liminf_probe),
        run(9, "partition conservation", s(30), partition_conservation),
        run(10, "inequality margins", s(20), proof_margins),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
