//! Cells of weighted site sets: the intersection, over all other sites `j`,
//! of the half-plane bounded by the line dividing `o_i o_j` in the ratio
//! `w_i : w_j`. Equal weights give Voronoi cells; disc radii give packing
//! cells.

use crate::geometry::{clip_labeled, polygon_from_clip, weighted_bisector, ConvexPolygon, Point};
use crate::spatial::PointGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum EdgeSource {
    Window,
    Site(usize),
}

pub(crate) struct SiteSet {
    centers: Vec<Point>,
    weights: Vec<f64>,
    grid: PointGrid,
    max_weight: f64,
}

pub(crate) struct SiteCell {
    pub(crate) region: ConvexPolygon,
    pub(crate) window_bounded: bool,
}

impl SiteSet {
    /// Centers must be pairwise distinct and weights positive.
    pub(crate) fn new(centers: Vec<Point>, weights: Vec<f64>) -> Self {
        debug_assert_eq!(centers.len(), weights.len());
        let grid = PointGrid::new(&centers);
        let max_weight = weights.iter().copied().fold(0.0, f64::max);
        SiteSet {
            centers,
            weights,
            grid,
            max_weight,
        }
    }

    /// Cell of site `i` intersected with `window`.
    ///
    /// Sites are scanned ring by ring outward from `o_i`. A site is skipped
    /// when its line lies beyond the farthest vertex of the current region,
    /// and the scan stops once no unvisited site can reach the region.
    pub(crate) fn cell(&self, i: usize, window: &ConvexPolygon) -> SiteCell {
        let o = self.centers[i];
        let wi = self.weights[i];
        let mut vertices = window.vertices().to_vec();
        let mut labels = vec![EdgeSource::Window; vertices.len()];
        let mut reach = window.max_distance_from(o);

        let c = self.grid.cell_of(o);
        let step = self.grid.cell_size();
        for k in 0..=self.grid.max_ring(c) {
            if vertices.is_empty() {
                break;
            }
            if k > 0 {
                let nearest_unvisited = (k - 1) as f64 * step;
                if wi * nearest_unvisited / (wi + self.max_weight) > reach {
                    break;
                }
            }
            self.grid.for_each_in_ring(c, k, |j| {
                if j == i || vertices.is_empty() {
                    return;
                }
                let wj = self.weights[j];
                let d = o.distance(self.centers[j]);
                if wi * d / (wi + wj) > reach {
                    return;
                }
                let Ok(h) = weighted_bisector(o, wi, self.centers[j], wj) else {
                    return;
                };
                let (v, l) = clip_labeled(&vertices, &labels, &h, EdgeSource::Site(j));
                vertices = v;
                labels = l;
                reach = vertices.iter().map(|p| p.distance(o)).fold(0.0, f64::max);
            });
        }

        let window_bounded = labels.contains(&EdgeSource::Window);
        SiteCell {
            region: polygon_from_clip(vertices),
            window_bounded,
        }
    }
}
