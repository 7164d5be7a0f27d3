//! Independent oracles shared by the integration tests. Nothing here calls
//! into the geometry of the crate beyond plain `Point` arithmetic.
#![allow(dead_code)]

use packcell::{ConvexPolygon, Disc, Point};
use rand::Rng;

/// Strict point-in-convex-polygon test for CCW vertices.
pub fn inside_convex(vertices: &[Point], p: Point) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    (0..n).all(|k| {
        let a = vertices[k];
        let b = vertices[(k + 1) % n];
        (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) >= 0.0
    })
}

pub fn inside_disc(d: &Disc, p: Point) -> bool {
    let (dx, dy) = (p.x - d.center.x, p.y - d.center.y);
    dx * dx + dy * dy <= d.radius * d.radius
}

fn bbox(vertices: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in vertices {
        lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
        hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
    }
    (lo, hi)
}

/// Rejection-sampling estimate of the area of `{p : inside(p)}` within the
/// box `[lo, hi]`.
pub fn monte_carlo_area<R: Rng, F: Fn(Point) -> bool>(lo: Point, hi: Point, samples: usize, rng: &mut R, inside: F) -> f64 {
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    if w <= 0.0 || h <= 0.0 {
        return 0.0;
    }
    let mut hits = 0usize;
    for _ in 0..samples {
        let p = Point::new(lo.x + w * rng.random::<f64>(), lo.y + h * rng.random::<f64>());
        if inside(p) {
            hits += 1;
        }
    }
    w * h * hits as f64 / samples as f64
}

/// Monte Carlo area of `disc ∩ poly` over the tight bounding box.
pub fn mc_disc_polygon<R: Rng>(disc: &Disc, poly: &ConvexPolygon, samples: usize, rng: &mut R) -> f64 {
    let v = poly.vertices();
    let (plo, phi) = bbox(v);
    let c = disc.center;
    let r = disc.radius;
    let lo = Point::new(plo.x.max(c.x - r), plo.y.max(c.y - r));
    let hi = Point::new(phi.x.min(c.x + r), phi.y.min(c.y + r));
    monte_carlo_area(lo, hi, samples, rng, |p| inside_disc(disc, p) && inside_convex(v, p))
}

/// Monte Carlo area of `p ∩ q` over the tight bounding box.
pub fn mc_intersection<R: Rng>(p: &ConvexPolygon, q: &ConvexPolygon, samples: usize, rng: &mut R) -> f64 {
    let (alo, ahi) = bbox(p.vertices());
    let (blo, bhi) = bbox(q.vertices());
    let lo = Point::new(alo.x.max(blo.x), alo.y.max(blo.y));
    let hi = Point::new(ahi.x.min(bhi.x), ahi.y.min(bhi.y));
    monte_carlo_area(lo, hi, samples, rng, |x| inside_convex(p.vertices(), x) && inside_convex(q.vertices(), x))
}

/// Andrew's monotone chain; CCW without collinear points.
pub fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Point, a: Point, b: Point| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Convex polygon from the hull of 3 to 11 uniform points in `[lo, hi]²`.
pub fn random_convex<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> ConvexPolygon {
    loop {
        let k = rng.random_range(3..12);
        let pts = (0..k).map(|_| Point::new(rng.random_range(lo..hi), rng.random_range(lo..hi))).collect();
        let hull = convex_hull(pts);
        if hull.len() >= 3 {
            if let Ok(p) = ConvexPolygon::from_vertices(hull) {
                if p.area() > 1e-3 {
                    return p;
                }
            }
        }
    }
}

/// Half of the nearest-neighbor distance by exhaustive search.
pub fn brute_nn_half(points: &[Point]) -> Vec<f64> {
    points
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let mut best = f64::INFINITY;
            for (j, &q) in points.iter().enumerate() {
                if i != j {
                    let (dx, dy) = (p.x - q.x, p.y - q.y);
                    best = best.min((dx * dx + dy * dy).sqrt());
                }
            }
            0.5 * best
        })
        .collect()
}
