//! Cell decompositions of packings of unequal discs, the `π/(2√3)` coverage
//! bound for admissible packings, and nearest-neighbor entropy estimators
//! built on the same cells.
//!
//! Modules
//! - [`geometry`]: points, half-planes, convex polygons, exact disc/polygon areas.
//! - [`packing`]: admissibility, criticalization, cells, coverage and density.
//! - [`partition`]: Voronoi cells and the mixed cell/Voronoi partition rule.
//! - [`entropy`]: nearest-neighbor entropy estimator and convergence experiments.
//! - [`proof_checks`]: numeric sweeps over the inequalities behind the bound.

// `!(x > 0.0)` is used deliberately so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cells;
pub mod entropy;
pub mod error;
pub mod geometry;
pub mod packing;
pub mod partition;
pub mod proof_checks;
mod spatial;

pub use error::{Error, Result};
pub use geometry::{
    clip, convex_intersection, disc_polygon_area, polygon_area, separating_line, ConvexPolygon,
    Disc, HalfPlane, Point,
};
pub use packing::{
    cell, cell_area_lower_bound_check, coverage_ratio, criticalize, density,
    sector_triangle_ratio, CellComplex, CellResult, Packing, ValidationReport, Window,
    HEXAGONAL_DENSITY,
};
