//! Planar primitives: points, half-planes, convex polygons and the exact
//! area of a disc intersected with a convex polygon.
//!
//! Conventions
//! - A half-plane is `{ p : n·p <= c }` with a unit normal `n`.
//! - Polygons are counter-clockwise. The empty polygon (no vertices) is an
//!   ordinary value; clipping chains never need to special-case it.
//! - Orientation and containment predicates use `EPS` scaled by the bounding
//!   box diagonal of the polygon involved.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for orientation and containment predicates.
pub const EPS: f64 = 1e-9;

/// Tolerance on the norm of half-plane normals.
pub const UNIT_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Euclidean distance. Evaluated as `sqrt(dx² + dy²)` so that the value
    /// is symmetric in its arguments bit for bit.
    #[inline]
    pub fn distance(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Closed half-plane `{ p : normal·p <= offset }`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlane {
    normal: Point,
    offset: f64,
}

impl HalfPlane {
    /// Builds a half-plane from any non-zero finite normal; the normal and
    /// offset are rescaled so that the normal has unit length.
    pub fn new(normal: Point, offset: f64) -> Result<Self> {
        let len = normal.norm();
        if !normal.is_finite() || !offset.is_finite() || len == 0.0 {
            return Err(Error::InvalidHalfPlane);
        }
        let h = HalfPlane {
            normal: normal * (1.0 / len),
            offset: offset / len,
        };
        debug_assert!((h.normal.norm_sq() - 1.0).abs() <= UNIT_EPS);
        Ok(h)
    }

    /// Half-plane to the left of the directed line `a -> b`.
    pub fn left_of(a: Point, b: Point) -> Result<Self> {
        let d = b - a;
        let normal = Point::new(d.y, -d.x);
        HalfPlane::new(normal, normal.dot(a))
    }

    #[inline]
    pub fn normal(&self) -> Point {
        self.normal
    }

    #[inline]
    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Positive outside, negative inside.
    #[inline]
    pub fn signed_distance(&self, p: Point) -> f64 {
        self.normal.dot(p) - self.offset
    }

    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        self.signed_distance(p) <= 0.0
    }

    /// The complementary closed half-plane sharing the same boundary line.
    pub fn flipped(&self) -> HalfPlane {
        HalfPlane {
            normal: -self.normal,
            offset: -self.offset,
        }
    }
}

/// Closed disc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: Point,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !center.is_finite() || !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidDisc { radius });
        }
        Ok(Disc { center, radius })
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn contains(&self, p: Point) -> bool {
        self.center.distance(p) <= self.radius
    }
}

/// Half-plane containing `c1` bounded by the line perpendicular to `c1c2`
/// that divides the segment in the ratio `w1 : w2`.
pub(crate) fn weighted_bisector(c1: Point, w1: f64, c2: Point, w2: f64) -> Result<HalfPlane> {
    let axis = c2 - c1;
    let d = axis.norm();
    if d == 0.0 {
        return Err(Error::DegenerateDiscPair);
    }
    let normal = axis * (1.0 / d);
    let t = w1 * d / (w1 + w2);
    Ok(HalfPlane {
        normal,
        offset: normal.dot(c1) + t,
    })
}

/// The line separating `d1` from `d2` at distance `r1·d/(r1+r2)` from the
/// center of `d1`, as the half-plane that contains `d1`.
pub fn separating_line(d1: &Disc, d2: &Disc) -> Result<HalfPlane> {
    weighted_bisector(d1.center, d1.radius, d2.center, d2.radius)
}

/// Convex polygon with counter-clockwise vertices. May be empty.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    pub fn empty() -> Self {
        ConvexPolygon::default()
    }

    /// Validates convexity and counter-clockwise order.
    pub fn from_vertices(vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Ok(ConvexPolygon::empty());
        }
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon("fewer than three vertices"));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidPolygon("non-finite vertex"));
        }
        let poly = ConvexPolygon { vertices };
        let tol = EPS * poly.scale();
        let n = poly.vertices.len();
        for i in 0..n {
            let a = poly.vertices[i];
            let b = poly.vertices[(i + 1) % n];
            let c = poly.vertices[(i + 2) % n];
            if a.distance(b) <= tol {
                return Err(Error::InvalidPolygon("repeated vertex"));
            }
            if (b - a).cross(c - b) < -tol * poly.scale() {
                return Err(Error::InvalidPolygon("not convex and counter-clockwise"));
            }
        }
        if poly.signed_area() <= 0.0 {
            return Err(Error::InvalidPolygon("not counter-clockwise"));
        }
        Ok(poly)
    }

    /// Axis-aligned rectangle `[min.x, max.x] × [min.y, max.y]`.
    pub fn rect(min: Point, max: Point) -> Self {
        if !(min.x < max.x && min.y < max.y) {
            return ConvexPolygon::empty();
        }
        ConvexPolygon {
            vertices: vec![
                min,
                Point::new(max.x, min.y),
                max,
                Point::new(min.x, max.y),
            ],
        }
    }

    /// Regular `sides`-gon inscribed in the circle of the given radius, with
    /// a vertex on the positive x-axis direction from `center`.
    pub fn regular(center: Point, circumradius: f64, sides: usize) -> Self {
        if sides < 3 || circumradius <= 0.0 {
            return ConvexPolygon::empty();
        }
        let vertices = (0..sides)
            .map(|k| {
                let theta = 2.0 * PI * k as f64 / sides as f64;
                center + Point::new(theta.cos(), theta.sin()) * circumradius
            })
            .collect();
        ConvexPolygon { vertices }
    }

    #[inline]
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Directed edges `(v_i, v_{i+1})`.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    fn signed_area(&self) -> f64 {
        if self.vertices.len() < 3 {
            return 0.0;
        }
        // Shoelace relative to the first vertex to limit cancellation.
        let o = self.vertices[0];
        let mut acc = 0.0;
        for w in self.vertices[1..].windows(2) {
            acc += (w[0] - o).cross(w[1] - o);
        }
        0.5 * acc
    }

    pub fn area(&self) -> f64 {
        self.signed_area().max(0.0)
    }

    /// `(min, max)` corners; `None` for the empty polygon.
    pub fn bbox(&self) -> Option<(Point, Point)> {
        let first = *self.vertices.first()?;
        let (mut lo, mut hi) = (first, first);
        for p in &self.vertices[1..] {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        Some((lo, hi))
    }

    /// Length of the bounding box diagonal (0 when empty).
    pub fn scale(&self) -> f64 {
        self.bbox().map_or(0.0, |(lo, hi)| lo.distance(hi))
    }

    /// Largest distance between two points of the polygon.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                best = best.max(a.distance(*b));
            }
        }
        best
    }

    /// Largest distance from `p` to a point of the polygon.
    pub fn max_distance_from(&self, p: Point) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.distance(p))
            .fold(0.0, f64::max)
    }

    /// Containment with the relative tolerance `EPS`.
    pub fn contains(&self, p: Point) -> bool {
        if self.is_empty() {
            return false;
        }
        let tol = EPS * self.scale();
        self.edges().all(|(a, b)| {
            let e = b - a;
            e.cross(p - a) >= -tol * e.norm()
        })
    }

    /// Half-planes whose intersection is the polygon.
    pub fn half_planes(&self) -> Vec<HalfPlane> {
        self.edges()
            .filter_map(|(a, b)| HalfPlane::left_of(a, b).ok())
            .collect()
    }

    /// `self ∩ h`.
    pub fn clip(&self, h: &HalfPlane) -> ConvexPolygon {
        let labels = vec![(); self.vertices.len()];
        let (vertices, _) = clip_labeled(&self.vertices, &labels, h, ());
        ConvexPolygon { vertices }
    }

    /// `self ∩ other`, by clipping against every edge of `other`.
    pub fn intersection(&self, other: &ConvexPolygon) -> ConvexPolygon {
        if self.is_empty() || other.is_empty() {
            return ConvexPolygon::empty();
        }
        if let (Some((a0, a1)), Some((b0, b1))) = (self.bbox(), other.bbox()) {
            if a1.x < b0.x || b1.x < a0.x || a1.y < b0.y || b1.y < a0.y {
                return ConvexPolygon::empty();
            }
        }
        let mut out = self.clone();
        for h in other.half_planes() {
            out = out.clip(&h);
            if out.is_empty() {
                break;
            }
        }
        out
    }

    pub fn translated(&self, by: Point) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&v| v + by).collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&v| v * factor).collect(),
        }
    }
}

/// `poly ∩ h`. Free-function form of [`ConvexPolygon::clip`].
pub fn clip(poly: &ConvexPolygon, h: &HalfPlane) -> ConvexPolygon {
    poly.clip(h)
}

/// `p ∩ q`.
pub fn convex_intersection(p: &ConvexPolygon, q: &ConvexPolygon) -> ConvexPolygon {
    p.intersection(q)
}

pub fn polygon_area(poly: &ConvexPolygon) -> f64 {
    poly.area()
}

/// Wraps vertices produced by [`clip_labeled`], which are convex and
/// counter-clockwise by construction.
pub(crate) fn polygon_from_clip(vertices: Vec<Point>) -> ConvexPolygon {
    ConvexPolygon { vertices }
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    In,
    On,
    Out,
}

/// Sutherland–Hodgman clip of a convex polygon that carries one label per
/// edge (`labels[i]` belongs to the edge `v_i -> v_{i+1}`). Edges created by
/// the cut get `label`; surviving pieces of old edges keep theirs.
pub(crate) fn clip_labeled<L: Copy>(
    vertices: &[Point],
    labels: &[L],
    h: &HalfPlane,
    label: L,
) -> (Vec<Point>, Vec<L>) {
    let n = vertices.len();
    if n < 3 {
        return (Vec::new(), Vec::new());
    }
    let scale = bbox_diagonal(vertices);
    let tol = EPS * scale;
    let dist: Vec<f64> = vertices.iter().map(|&p| h.signed_distance(p)).collect();
    let side = |s: f64| {
        if s < -tol {
            Side::In
        } else if s > tol {
            Side::Out
        } else {
            Side::On
        }
    };

    if dist.iter().all(|&s| s < -tol) {
        return (vertices.to_vec(), labels.to_vec());
    }

    let mut out_v = Vec::with_capacity(n + 1);
    let mut out_l = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (cur, next) = (vertices[i], vertices[j]);
        let (sc, sn) = (dist[i], dist[j]);
        match (side(sc), side(sn)) {
            (Side::In, Side::In) | (Side::In, Side::On) => {
                out_v.push(cur);
                out_l.push(labels[i]);
            }
            (Side::On, Side::In) => {
                out_v.push(cur);
                out_l.push(labels[i]);
            }
            (Side::On, Side::On) | (Side::On, Side::Out) => {
                out_v.push(cur);
                out_l.push(label);
            }
            (Side::In, Side::Out) => {
                out_v.push(cur);
                out_l.push(labels[i]);
                out_v.push(cur + (next - cur) * (sc / (sc - sn)));
                out_l.push(label);
            }
            (Side::Out, Side::In) => {
                out_v.push(cur + (next - cur) * (sc / (sc - sn)));
                out_l.push(labels[i]);
            }
            (Side::Out, Side::On) | (Side::Out, Side::Out) => {}
        }
    }
    normalize(out_v, out_l, EPS * scale)
}

/// Drops near-duplicate consecutive vertices and collapses slivers to the
/// empty polygon.
fn normalize<L: Copy>(vertices: Vec<Point>, labels: Vec<L>, tol: f64) -> (Vec<Point>, Vec<L>) {
    let mut v: Vec<Point> = Vec::with_capacity(vertices.len());
    let mut l: Vec<L> = Vec::with_capacity(labels.len());
    for (p, lab) in vertices.into_iter().zip(labels) {
        if let Some(last) = v.last_mut() {
            if last.distance(p) <= tol {
                // The degenerate edge disappears; the vertex takes the label
                // of the edge that follows it.
                *last = p;
                *l.last_mut().unwrap() = lab;
                continue;
            }
        }
        v.push(p);
        l.push(lab);
    }
    while v.len() > 1 && v[0].distance(*v.last().unwrap()) <= tol {
        v.pop();
        l.pop();
    }
    if v.len() < 3 {
        return (Vec::new(), Vec::new());
    }
    let diag = bbox_diagonal(&v);
    let area = ConvexPolygon {
        vertices: v.clone(),
    }
    .signed_area();
    if area < EPS * diag * diag {
        return (Vec::new(), Vec::new());
    }
    (v, l)
}

fn bbox_diagonal(vertices: &[Point]) -> f64 {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in vertices {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    if vertices.is_empty() {
        0.0
    } else {
        lo.distance(hi)
    }
}

/// Exact area of `disc ∩ poly`.
///
/// The boundary of the intersection is accumulated edge by edge as signed
/// areas of `disc ∩ triangle(center, a, b)`: straight pieces inside the disc
/// contribute triangles, pieces outside contribute circular sectors whose
/// angle is taken in `(-π, π]`.
pub fn disc_polygon_area(disc: &Disc, poly: &ConvexPolygon) -> f64 {
    if poly.is_empty() {
        return 0.0;
    }
    let r = disc.radius;
    let c = disc.center;
    let mut acc = 0.0;
    for (a, b) in poly.edges() {
        acc += triangle_disc_signed_area(a - c, b - c, r);
    }
    acc.clamp(0.0, disc.area().min(poly.area()))
}

/// Signed area of `{|p| <= r} ∩ triangle(0, a, b)`.
fn triangle_disc_signed_area(a: Point, b: Point, r: f64) -> f64 {
    let sector = |u: Point, v: Point| 0.5 * r * r * u.cross(v).atan2(u.dot(v));
    let d = b - a;
    let qa = d.norm_sq();
    if qa == 0.0 {
        return 0.0;
    }
    let qb = a.dot(d);
    let qc = a.norm_sq() - r * r;
    let disc = qb * qb - qa * qc;
    if disc <= 0.0 {
        return sector(a, b);
    }
    let root = disc.sqrt();
    // Stable roots of qa·t² + 2·qb·t + qc = 0.
    let (t1, t2) = if qb > 0.0 {
        let q = -(qb + root);
        (q / qa, if q != 0.0 { qc / q } else { 0.0 })
    } else {
        let q = -qb + root;
        (if q != 0.0 { qc / q } else { 0.0 }, q / qa)
    };
    let (t1, t2) = (t1.min(t2).clamp(0.0, 1.0), t1.max(t2).clamp(0.0, 1.0));
    let p1 = a + d * t1;
    let p2 = a + d * t2;
    sector(a, p1) + 0.5 * p1.cross(p2) + sector(p2, b)
}
