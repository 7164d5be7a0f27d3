//! Partition rules for point sets: Voronoi cells, and the mixed rule
//! `W_i = cell(D_i) ∪ (V_i − ∪_j cell(D_j))` where `D_i` is the disc of
//! radius `r_i` (half the nearest-neighbor distance) around `x_i`.
//!
//! `W_i` is generally not convex, so it is carried as its area together with
//! its two convex constituents. With the cells pairwise interior-disjoint,
//!
//! ```text
//! |W_i ∩ Ω| = |cell_i ∩ Ω| + |V_i ∩ Ω| − Σ_j |V_i ∩ cell_j ∩ Ω|
//! ```

use rayon::prelude::*;
use serde::Serialize;

use crate::cells::SiteSet;
use crate::entropy::{nn_half_distances, EmpiricalPointSet};
use crate::error::{Error, Result};
use crate::geometry::{disc_polygon_area, ConvexPolygon, Disc, Point};
use crate::packing::Window;

/// Compact domain `Ω`; disc domains use the same polygonal stand-in as
/// disc windows.
pub type DomainOmega = Window;

/// `V_i ∩ Ω` for every point, in input order.
pub fn voronoi(x: &EmpiricalPointSet) -> Vec<ConvexPolygon> {
    let omega = x.domain().polygon();
    let sites = SiteSet::new(x.points().to_vec(), vec![1.0; x.len()]);
    (0..x.len())
        .into_par_iter()
        .map(|i| sites.cell(i, &omega).region)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionRecord {
    pub index: usize,
    pub radius: f64,
    pub voronoi_region: ConvexPolygon,
    pub cell_region: ConvexPolygon,
    /// The domain boundary supplies an edge of `cell_region`.
    pub cell_truncated: bool,
    pub w_area: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionResult {
    pub records: Vec<PartitionRecord>,
    pub domain_area: f64,
}

impl PartitionResult {
    pub fn total_w_area(&self) -> f64 {
        self.records.iter().map(|r| r.w_area).sum()
    }
}

/// Mixed cell/Voronoi partition of `Ω`.
pub fn partition_w(x: &EmpiricalPointSet) -> Result<PartitionResult> {
    if x.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    let radii = nn_half_distances(x)?;
    let omega = x.domain().polygon();
    let cell_sites = SiteSet::new(x.points().to_vec(), radii.clone());
    let cells: Vec<_> = (0..x.len())
        .into_par_iter()
        .map(|i| cell_sites.cell(i, &omega))
        .collect();
    let voronoi = voronoi(x);
    let cell_index = BoxIndex::new(cells.iter().map(|c| &c.region), &omega, x.len());

    let records = (0..x.len())
        .into_par_iter()
        .map(|i| {
            let v = &voronoi[i];
            let covered: f64 = cell_index
                .candidates(v)
                .into_iter()
                .map(|j| v.intersection(&cells[j].region).area())
                .sum();
            let cell = &cells[i];
            PartitionRecord {
                index: i,
                radius: radii[i],
                voronoi_region: v.clone(),
                cell_region: cell.region.clone(),
                cell_truncated: cell.window_bounded,
                w_area: cell.region.area() + v.area() - covered,
            }
        })
        .collect();
    Ok(PartitionResult {
        records,
        domain_area: omega.area(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    /// `D_i ∩ Ω ⊂ W_i` for every `i`.
    pub a: bool,
    /// The regions cover `Ω`.
    pub b: bool,
    /// The regions overlap in measure zero.
    pub c: bool,
    /// `Σ_i |W_i ∩ Ω| − |Ω|`.
    pub conservation_error: f64,
    /// Indices failing condition (a).
    pub containment_failures: Vec<usize>,
    /// `max(diam(V_i ∩ Ω), diam(cell_i ∩ Ω))` per point.
    pub d_diameters: Vec<f64>,
    pub max_diameter: f64,
}

/// Tolerance on `Σ |W_i ∩ Ω| = |Ω|`.
pub const CONSERVATION_TOL: f64 = 1e-6;

/// Tolerance on `|D_i ∩ W_i| = |D_i ∩ Ω|`.
pub const CONTAINMENT_TOL: f64 = 1e-9;

/// Checks partition-rule conditions (a)–(c) and reports the diameters
/// behind (d), which is a statement about sequences and has no per-instance
/// verdict.
pub fn verify_partition_rule(result: &PartitionResult, x: &EmpiricalPointSet) -> ConditionReport {
    let omega = x.domain().polygon();
    let tol = CONSERVATION_TOL * result.domain_area.max(1.0);
    let total = result.total_w_area();
    let conservation_error = total - result.domain_area;

    let containment_failures: Vec<usize> = result
        .records
        .iter()
        .filter(|rec| {
            let Ok(disc) = Disc::new(x.points()[rec.index], rec.radius) else {
                return true;
            };
            let inside = disc_polygon_area(&disc, &rec.cell_region);
            let in_domain = disc_polygon_area(&disc, &omega);
            (inside - in_domain).abs() > CONTAINMENT_TOL * disc.area().max(1.0)
        })
        .map(|rec| rec.index)
        .collect();

    let d_diameters: Vec<f64> = result
        .records
        .iter()
        .map(|rec| rec.voronoi_region.diameter().max(rec.cell_region.diameter()))
        .collect();
    let max_diameter = d_diameters.iter().copied().fold(0.0, f64::max);
    let no_negative = result.records.iter().all(|r| r.w_area >= -tol);

    ConditionReport {
        a: containment_failures.is_empty(),
        b: conservation_error >= -tol,
        c: conservation_error <= tol && no_negative,
        conservation_error,
        containment_failures,
        d_diameters,
        max_diameter,
    }
}

/// Maximum region diameter for each point set of a sequence `X_N`.
pub fn diameter_trend(sequence: &[EmpiricalPointSet]) -> Result<Vec<f64>> {
    sequence
        .iter()
        .map(|x| Ok(verify_partition_rule(&partition_w(x)?, x).max_diameter))
        .collect()
}

/// Buckets polygons by bounding box to find candidates for intersection.
struct BoxIndex {
    origin: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl BoxIndex {
    fn new<'a>(polys: impl Iterator<Item = &'a ConvexPolygon>, domain: &ConvexPolygon, n: usize) -> Self {
        let (lo, hi) = domain
            .bbox()
            .unwrap_or((Point::ORIGIN, Point::new(1.0, 1.0)));
        let (w, h) = ((hi.x - lo.x).max(f64::MIN_POSITIVE), (hi.y - lo.y).max(f64::MIN_POSITIVE));
        let cell = (w * h / n.max(1) as f64).sqrt().max(w.max(h) / 1024.0);
        let nx = ((w / cell).ceil() as usize).max(1);
        let ny = ((h / cell).ceil() as usize).max(1);
        let mut index = BoxIndex {
            origin: lo,
            cell,
            nx,
            ny,
            buckets: vec![Vec::new(); nx * ny],
        };
        for (j, p) in polys.enumerate() {
            if let Some((a, b)) = p.bbox() {
                let (x0, y0) = index.bucket(a);
                let (x1, y1) = index.bucket(b);
                for iy in y0..=y1 {
                    for ix in x0..=x1 {
                        index.buckets[iy * nx + ix].push(j);
                    }
                }
            }
        }
        index
    }

    fn bucket(&self, p: Point) -> (usize, usize) {
        let fx = ((p.x - self.origin.x) / self.cell).floor().max(0.0) as usize;
        let fy = ((p.y - self.origin.y) / self.cell).floor().max(0.0) as usize;
        (fx.min(self.nx - 1), fy.min(self.ny - 1))
    }

    /// Sorted, deduplicated indices whose boxes share a bucket with `poly`.
    fn candidates(&self, poly: &ConvexPolygon) -> Vec<usize> {
        let Some((a, b)) = poly.bbox() else {
            return Vec::new();
        };
        let (x0, y0) = self.bucket(a);
        let (x1, y1) = self.bucket(b);
        let mut out = Vec::new();
        for iy in y0..=y1 {
            for ix in x0..=x1 {
                out.extend_from_slice(&self.buckets[iy * self.nx + ix]);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}
