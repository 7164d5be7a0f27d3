//! Packings of discs with unequal radii, their cells and coverage ratios.
//!
//! A packing is admissible when inflating every disc about its center by a
//! factor of two captures no other center (tangency allowed). The cell of a
//! disc is the intersection, over all other discs, of the half-planes
//! returned by [`separating_line`](crate::geometry::separating_line); cells
//! are always taken inside a finite [`Window`].

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cells::SiteSet;
use crate::error::{Error, Result};
use crate::geometry::{disc_polygon_area, ConvexPolygon, Disc, Point, EPS};
use crate::spatial::PointGrid;

/// Density of the hexagonal unit disc packing, `π / (2√3)`.
pub const HEXAGONAL_DENSITY: f64 = PI / (2.0 * 1.732_050_807_568_877_2);

/// Number of sides of the regular polygon standing in for a disc-shaped
/// window or domain.
pub const DISC_WINDOW_SIDES: usize = 256;

/// Inflation factor of the admissibility condition.
pub const INFLATION_FACTOR: f64 = 2.0;

/// Finite region inside which cells, densities and partitions are computed.
///
/// A disc window is represented by the inscribed regular
/// [`DISC_WINDOW_SIDES`]-gon; [`Window::area`] is the area of that polygon.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Window {
    Rect {
        xmin: f64,
        ymin: f64,
        xmax: f64,
        ymax: f64,
    },
    Disc {
        cx: f64,
        cy: f64,
        r: f64,
    },
}

impl Window {
    pub fn rect(min: Point, max: Point) -> Result<Self> {
        Window::Rect {
            xmin: min.x,
            ymin: min.y,
            xmax: max.x,
            ymax: max.y,
        }
        .checked()
    }

    pub fn disc(center: Point, radius: f64) -> Result<Self> {
        Window::Disc {
            cx: center.x,
            cy: center.y,
            r: radius,
        }
        .checked()
    }

    /// Square of the given side centered at `center`.
    pub fn square(center: Point, side: f64) -> Result<Self> {
        let h = Point::new(0.5 * side, 0.5 * side);
        Window::rect(center - h, center + h)
    }

    /// Returns the window if it has finite extent and positive area.
    pub fn checked(self) -> Result<Self> {
        match self {
            Window::Rect {
                xmin,
                ymin,
                xmax,
                ymax,
            } => {
                if ![xmin, ymin, xmax, ymax].iter().all(|v| v.is_finite()) {
                    return Err(Error::InvalidWindow("non-finite bounds"));
                }
                if !(xmin < xmax && ymin < ymax) {
                    return Err(Error::EmptyWindow);
                }
            }
            Window::Disc { cx, cy, r } => {
                if ![cx, cy, r].iter().all(|v| v.is_finite()) {
                    return Err(Error::InvalidWindow("non-finite disc parameters"));
                }
                if r <= 0.0 {
                    return Err(Error::EmptyWindow);
                }
            }
        }
        Ok(self)
    }

    pub fn center(&self) -> Point {
        match *self {
            Window::Rect {
                xmin,
                ymin,
                xmax,
                ymax,
            } => Point::new(0.5 * (xmin + xmax), 0.5 * (ymin + ymax)),
            Window::Disc { cx, cy, .. } => Point::new(cx, cy),
        }
    }

    pub fn polygon(&self) -> ConvexPolygon {
        match *self {
            Window::Rect {
                xmin,
                ymin,
                xmax,
                ymax,
            } => ConvexPolygon::rect(Point::new(xmin, ymin), Point::new(xmax, ymax)),
            Window::Disc { cx, cy, r } => {
                ConvexPolygon::regular(Point::new(cx, cy), r, DISC_WINDOW_SIDES)
            }
        }
    }

    pub fn area(&self) -> f64 {
        self.polygon().area()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.polygon().contains(p)
    }

    /// Concentric copy with linear size multiplied by `factor`.
    pub fn shrunk(&self, factor: f64) -> Window {
        let c = self.center();
        match *self {
            Window::Rect {
                xmin,
                ymin,
                xmax,
                ymax,
            } => Window::Rect {
                xmin: c.x + (xmin - c.x) * factor,
                ymin: c.y + (ymin - c.y) * factor,
                xmax: c.x + (xmax - c.x) * factor,
                ymax: c.y + (ymax - c.y) * factor,
            },
            Window::Disc { cx, cy, r } => Window::Disc {
                cx,
                cy,
                r: r * factor,
            },
        }
    }

    /// Image under `p -> λp`.
    pub fn scaled(&self, lambda: f64) -> Window {
        match *self {
            Window::Rect {
                xmin,
                ymin,
                xmax,
                ymax,
            } => Window::Rect {
                xmin: xmin * lambda,
                ymin: ymin * lambda,
                xmax: xmax * lambda,
                ymax: ymax * lambda,
            },
            Window::Disc { cx, cy, r } => Window::Disc {
                cx: cx * lambda,
                cy: cy * lambda,
                r: r * lambda,
            },
        }
    }

    /// Image under `p -> p + by`.
    pub fn translated(&self, by: Point) -> Window {
        match *self {
            Window::Rect {
                xmin,
                ymin,
                xmax,
                ymax,
            } => Window::Rect {
                xmin: xmin + by.x,
                ymin: ymin + by.y,
                xmax: xmax + by.x,
                ymax: ymax + by.y,
            },
            Window::Disc { cx, cy, r } => Window::Disc {
                cx: cx + by.x,
                cy: cy + by.y,
                r,
            },
        }
    }

    /// Side length (rectangles: the larger side) or diameter.
    pub fn extent(&self) -> f64 {
        match *self {
            Window::Rect {
                xmin,
                ymin,
                xmax,
                ymax,
            } => (xmax - xmin).max(ymax - ymin),
            Window::Disc { r, .. } => 2.0 * r,
        }
    }
}

/// Finite set of discs; each disc is identified by its index.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Packing {
    discs: Vec<Disc>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
    /// `factor · r_i`, the radius of the inflated disc `i`.
    pub inflated_radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    /// Every violating ordered pair, sorted by `(i, j)`.
    pub violations: Vec<Violation>,
}

impl Packing {
    /// Requires at least one disc and pairwise distinct centers. Admissibility
    /// is not assumed; see [`Packing::validate`].
    pub fn new(discs: Vec<Disc>) -> Result<Self> {
        if discs.is_empty() {
            return Err(Error::EmptyPacking);
        }
        let centers: Vec<Point> = discs.iter().map(|d| d.center).collect();
        check_distinct(&centers).map_err(|(i, j)| Error::CoincidentCenters(i, j))?;
        Ok(Packing { discs })
    }

    #[inline]
    pub fn discs(&self) -> &[Disc] {
        &self.discs
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.discs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.discs.is_empty()
    }

    pub fn centers(&self) -> Vec<Point> {
        self.discs.iter().map(|d| d.center).collect()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.discs.iter().map(|d| d.radius).collect()
    }

    /// Checks the twofold inflation condition.
    pub fn validate(&self) -> ValidationReport {
        self.validate_with_factor(INFLATION_FACTOR)
    }

    /// Checks `|O_i O_j| >= factor · r_i - ε` for every ordered pair, with
    /// `ε` relative to `factor · r_i`.
    pub fn validate_with_factor(&self, factor: f64) -> ValidationReport {
        let centers = self.centers();
        let grid = PointGrid::new(&centers);
        let mut violations = Vec::new();
        for (i, d) in self.discs.iter().enumerate() {
            let inflated = factor * d.radius;
            let mut hits = Vec::new();
            grid.for_each_near(d.center, inflated, |j| {
                if j == i {
                    return;
                }
                let distance = d.center.distance(centers[j]);
                if distance < inflated - EPS * inflated {
                    hits.push(Violation {
                        i,
                        j,
                        distance,
                        inflated_radius: inflated,
                    });
                }
            });
            hits.sort_by_key(|v| v.j);
            violations.extend(hits);
        }
        ValidationReport {
            valid: violations.is_empty(),
            violations,
        }
    }

    /// Every radius equals half the distance to the nearest other center
    /// (relative tolerance `EPS`).
    pub fn is_critical(&self) -> bool {
        if self.len() < 2 {
            return false;
        }
        let centers = self.centers();
        let grid = PointGrid::new(&centers);
        self.discs.iter().enumerate().all(|(i, d)| {
            let half = 0.5 * grid.nearest_distance(&centers, i);
            (d.radius - half).abs() <= EPS * half
        })
    }

    /// Image under `p -> λp` (radii scale by `λ`).
    pub fn scaled(&self, lambda: f64) -> Result<Packing> {
        let discs = self
            .discs
            .iter()
            .map(|d| Disc::new(d.center * lambda, d.radius * lambda))
            .collect::<Result<Vec<_>>>()?;
        Packing::new(discs)
    }

    /// Axis-aligned bounding box of all discs.
    pub fn bounding_window(&self) -> Window {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for d in &self.discs {
            lo.x = lo.x.min(d.center.x - d.radius);
            lo.y = lo.y.min(d.center.y - d.radius);
            hi.x = hi.x.max(d.center.x + d.radius);
            hi.y = hi.y.max(d.center.y + d.radius);
        }
        Window::Rect {
            xmin: lo.x,
            ymin: lo.y,
            xmax: hi.x,
            ymax: hi.y,
        }
    }
}

/// First pair of exactly equal points, if any.
pub(crate) fn check_distinct(points: &[Point]) -> std::result::Result<(), (usize, usize)> {
    let mut seen: HashMap<(u64, u64), usize> = HashMap::with_capacity(points.len());
    for (j, p) in points.iter().enumerate() {
        // +0.0 and -0.0 are the same point.
        let key = ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits());
        if let Some(&i) = seen.get(&key) {
            return Err((i, j));
        }
        seen.insert(key, j);
    }
    Ok(())
}

/// Assigns every center the radius `½ · min_{j≠i} |O_i O_j|`.
pub fn criticalize(centers: &[Point]) -> Result<Packing> {
    if centers.len() < 2 {
        return Err(Error::CriticalizationUndefined);
    }
    check_distinct(centers).map_err(|(i, j)| Error::CoincidentCenters(i, j))?;
    let grid = PointGrid::new(centers);
    let discs = (0..centers.len())
        .map(|i| Disc::new(centers[i], 0.5 * grid.nearest_distance(centers, i)))
        .collect::<Result<Vec<_>>>()?;
    Packing::new(discs)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellResult {
    pub index: usize,
    pub region: ConvexPolygon,
    /// True when the window, rather than the packing, supplies an edge.
    pub artificially_bounded: bool,
}

/// All cells of an admissible packing inside one window.
pub struct CellComplex {
    discs: Vec<Disc>,
    sites: SiteSet,
    window: Window,
    window_polygon: ConvexPolygon,
}

impl CellComplex {
    pub fn new(packing: &Packing, window: &Window) -> Result<Self> {
        let window = window.checked()?;
        let report = packing.validate();
        if !report.valid {
            return Err(Error::InvalidPacking {
                violations: report.violations.len(),
            });
        }
        Ok(CellComplex {
            discs: packing.discs().to_vec(),
            sites: SiteSet::new(packing.centers(), packing.radii()),
            window,
            window_polygon: window.polygon(),
        })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.discs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.discs.is_empty()
    }

    pub fn disc(&self, i: usize) -> Result<&Disc> {
        self.discs.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.discs.len(),
        })
    }

    pub fn cell(&self, i: usize) -> Result<CellResult> {
        self.disc(i)?;
        let cell = self.sites.cell(i, &self.window_polygon);
        Ok(CellResult {
            index: i,
            region: cell.region,
            artificially_bounded: cell.window_bounded,
        })
    }

    /// Cells of every disc, in index order.
    pub fn cells(&self) -> Vec<CellResult> {
        (0..self.discs.len())
            .into_par_iter()
            .map(|i| {
                let cell = self.sites.cell(i, &self.window_polygon);
                CellResult {
                    index: i,
                    region: cell.region,
                    artificially_bounded: cell.window_bounded,
                }
            })
            .collect()
    }

    /// `area(D_i ∩ cell_i) / area(cell_i)`.
    pub fn coverage_ratio(&self, i: usize) -> Result<f64> {
        let cell = self.cell(i)?;
        coverage_of(&self.discs[i], &cell)
    }
}

pub(crate) fn coverage_of(disc: &Disc, cell: &CellResult) -> Result<f64> {
    let area = cell.region.area();
    if cell.region.is_empty() || area <= 0.0 {
        return Err(Error::EmptyCell(cell.index));
    }
    Ok(disc_polygon_area(disc, &cell.region) / area)
}

impl CellResult {
    /// Coverage ratio of `disc` (the disc this cell belongs to).
    pub fn coverage(&self, disc: &Disc) -> Result<f64> {
        coverage_of(disc, self)
    }
}

pub fn cell(packing: &Packing, i: usize, window: &Window) -> Result<CellResult> {
    CellComplex::new(packing, window)?.cell(i)
}

pub fn coverage_ratio(packing: &Packing, i: usize, window: &Window) -> Result<f64> {
    CellComplex::new(packing, window)?.coverage_ratio(i)
}

/// Coverage ratio of the unit disc centered at the apex of a right triangle
/// whose leg adjacent to the apex angle `x` has length `dist`:
/// `x / (dist² · tan x)`.
pub fn sector_triangle_ratio(dist: f64, x: f64) -> Result<f64> {
    if !(x > 0.0 && x < FRAC_PI_2) {
        return Err(Error::AngleOutOfRange(x));
    }
    if !(dist >= 1.0) || !dist.is_finite() {
        return Err(Error::SectorLeavesTriangle(dist));
    }
    Ok(x / (dist * dist * x.tan()))
}

/// Fraction of the window covered by the discs.
pub fn density(packing: &Packing, window: &Window) -> Result<f64> {
    let window = window.checked()?;
    let poly = window.polygon();
    let area = poly.area();
    if area <= 0.0 {
        return Err(Error::EmptyWindow);
    }
    let (lo, hi) = poly.bbox().ok_or(Error::EmptyWindow)?;
    let parts: Vec<f64> = packing
        .discs()
        .par_iter()
        .map(|d| {
            let c = d.center;
            let r = d.radius;
            if c.x + r < lo.x || c.x - r > hi.x || c.y + r < lo.y || c.y - r > hi.y {
                0.0
            } else {
                disc_polygon_area(d, &poly)
            }
        })
        .collect();
    // Index-ordered sum keeps the result independent of the thread count.
    Ok(parts.iter().sum::<f64>() / area)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CellAreaRecord {
    pub index: usize,
    pub area: f64,
    /// `2√3 · r_i²`.
    pub bound: f64,
    /// `area - bound`.
    pub margin: f64,
}

/// Compares every cell that is not window-bounded with `2√3 · r_i²`.
/// Window-bounded cells are excluded.
pub fn cell_area_lower_bound_check(packing: &Packing, window: &Window) -> Result<Vec<CellAreaRecord>> {
    let complex = CellComplex::new(packing, window)?;
    Ok(complex
        .cells()
        .into_iter()
        .filter(|c| !c.artificially_bounded)
        .map(|c| {
            let r = packing.discs()[c.index].radius;
            let area = c.region.area();
            let bound = 2.0 * 3f64.sqrt() * r * r;
            CellAreaRecord {
                index: c.index,
                area,
                bound,
                margin: area - bound,
            }
        })
        .collect())
}

/// Points of the triangular lattice with the given spacing, one of them at
/// `center`, inside the axis-aligned square of half-side `half_extent`.
pub fn hexagonal_lattice(center: Point, spacing: f64, half_extent: f64) -> Vec<Point> {
    let row = spacing * 3f64.sqrt() / 2.0;
    let kmax = (half_extent / row).floor() as i64;
    let jmax = (half_extent / spacing).ceil() as i64 + 1;
    let mut out = Vec::new();
    for k in -kmax..=kmax {
        let shift = if k.rem_euclid(2) == 1 { 0.5 * spacing } else { 0.0 };
        for j in -jmax..=jmax {
            let x = j as f64 * spacing + shift;
            if x.abs() <= half_extent {
                out.push(center + Point::new(x, k as f64 * row));
            }
        }
    }
    out
}

/// Hexagonal packing of discs of radius `spacing / 2`.
pub fn hexagonal_packing(center: Point, spacing: f64, half_extent: f64) -> Result<Packing> {
    let discs = hexagonal_lattice(center, spacing, half_extent)
        .into_iter()
        .map(|c| Disc::new(c, 0.5 * spacing))
        .collect::<Result<Vec<_>>>()?;
    Packing::new(discs)
}

/// Random critical packing of exactly `n` discs with centers in `window`.
///
/// Candidate centers are drawn uniformly and greedily thinned: each
/// candidate gets an exclusion radius between `s` and `s · spread`, and is
/// accepted when its distance to every accepted center is at least the mean
/// of the two exclusion radii. `s` and `spread` are drawn per instance.
/// The accepted centers are then criticalized.
pub fn random_critical_packing<R: Rng + ?Sized>(n: usize, window: &Window, rng: &mut R) -> Result<Packing> {
    if n < 2 {
        return Err(Error::CriticalizationUndefined);
    }
    let window = window.checked()?;
    let poly = window.polygon();
    let (lo, hi) = poly.bbox().ok_or(Error::EmptyWindow)?;
    let mut base = (poly.area() / n as f64).sqrt() * rng.random_range(0.3..0.9);
    let spread: f64 = rng.random_range(1.0..4.0);

    let mut centers: Vec<Point> = Vec::with_capacity(n);
    let mut exclusion: Vec<f64> = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while centers.len() < n {
        let p = Point::new(rng.random_range(lo.x..hi.x), rng.random_range(lo.y..hi.y));
        let u: f64 = rng.random();
        let e = base * (1.0 + (spread - 1.0) * u * u);
        attempts += 1;
        if attempts > 200 * n {
            base *= 0.8;
            attempts = 0;
        }
        if !poly.contains(p) {
            continue;
        }
        let ok = centers
            .iter()
            .zip(&exclusion)
            .all(|(q, &eq)| p.distance(*q) >= 0.5 * (e + eq) && p.distance(*q) > 0.0);
        if ok {
            centers.push(p);
            exclusion.push(e);
        }
    }
    criticalize(&centers)
}
