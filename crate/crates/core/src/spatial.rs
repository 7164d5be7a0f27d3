//! Uniform grid over a point set with ring-by-ring neighbor enumeration.
//!
//! After all rings `0..=k` around a query cell have been visited, every point
//! not yet seen is at distance at least `k * cell_size` from the query.

use crate::geometry::Point;

#[derive(Debug, Clone)]
pub(crate) struct PointGrid {
    origin: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    // CSR layout: items of bucket b are items[starts[b]..starts[b + 1]].
    starts: Vec<usize>,
    items: Vec<usize>,
}

impl PointGrid {
    /// Roughly two points per bucket.
    pub(crate) fn new(points: &[Point]) -> Self {
        let n = points.len().max(1);
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        if points.is_empty() {
            lo = Point::ORIGIN;
            hi = Point::ORIGIN;
        }
        let (w, h) = (hi.x - lo.x, hi.y - lo.y);
        let mut cell = (2.0 * w * h / n as f64).sqrt();
        if !(cell > 0.0) || !cell.is_finite() {
            cell = 2.0 * w.max(h) / n as f64;
        }
        if !(cell > 0.0) || !cell.is_finite() {
            cell = 1.0;
        }
        let cap = 4 * n + 16;
        let mut nx = (w / cell) as usize + 1;
        let mut ny = (h / cell) as usize + 1;
        while nx * ny > cap {
            cell *= 1.5;
            nx = (w / cell) as usize + 1;
            ny = (h / cell) as usize + 1;
        }

        let mut grid = PointGrid {
            origin: lo,
            cell,
            nx,
            ny,
            starts: vec![0; nx * ny + 1],
            items: vec![0; points.len()],
        };
        let buckets: Vec<usize> = points
            .iter()
            .map(|&p| {
                let (ix, iy) = grid.cell_of(p);
                iy * nx + ix
            })
            .collect();
        for &b in &buckets {
            grid.starts[b + 1] += 1;
        }
        for b in 0..nx * ny {
            grid.starts[b + 1] += grid.starts[b];
        }
        let mut fill = grid.starts.clone();
        for (i, &b) in buckets.iter().enumerate() {
            grid.items[fill[b]] = i;
            fill[b] += 1;
        }
        grid
    }

    #[inline]
    pub(crate) fn cell_size(&self) -> f64 {
        self.cell
    }

    /// Bucket coordinates of `p`, clamped to the grid.
    pub(crate) fn cell_of(&self, p: Point) -> (usize, usize) {
        let fx = ((p.x - self.origin.x) / self.cell).floor();
        let fy = ((p.y - self.origin.y) / self.cell).floor();
        let ix = if fx.is_nan() { 0.0 } else { fx.clamp(0.0, (self.nx - 1) as f64) };
        let iy = if fy.is_nan() { 0.0 } else { fy.clamp(0.0, (self.ny - 1) as f64) };
        (ix as usize, iy as usize)
    }

    /// Largest ring index that still contains buckets around `(cx, cy)`.
    pub(crate) fn max_ring(&self, (cx, cy): (usize, usize)) -> usize {
        cx.max(self.nx - 1 - cx).max(cy).max(self.ny - 1 - cy)
    }

    fn bucket(&self, ix: usize, iy: usize) -> &[usize] {
        let b = iy * self.nx + ix;
        &self.items[self.starts[b]..self.starts[b + 1]]
    }

    /// Visits every item in buckets at Chebyshev distance exactly `k` from
    /// `(cx, cy)`, in a fixed order.
    pub(crate) fn for_each_in_ring(&self, (cx, cy): (usize, usize), k: usize, mut f: impl FnMut(usize)) {
        let (cx, cy, k) = (cx as i64, cy as i64, k as i64);
        let (nx, ny) = (self.nx as i64, self.ny as i64);
        let mut visit = |ix: i64, iy: i64| {
            if ix >= 0 && iy >= 0 && ix < nx && iy < ny {
                for &j in self.bucket(ix as usize, iy as usize) {
                    f(j);
                }
            }
        };
        if k == 0 {
            visit(cx, cy);
            return;
        }
        for ix in cx - k..=cx + k {
            visit(ix, cy - k);
            visit(ix, cy + k);
        }
        for iy in cy - k + 1..=cy + k - 1 {
            visit(cx - k, iy);
            visit(cx + k, iy);
        }
    }

    /// Distance from `points[i]` to its nearest other point; `INFINITY` when
    /// there is none.
    pub(crate) fn nearest_distance(&self, points: &[Point], i: usize) -> f64 {
        let p = points[i];
        let c = self.cell_of(p);
        let last = self.max_ring(c);
        let mut best = f64::INFINITY;
        for k in 0..=last {
            self.for_each_in_ring(c, k, |j| {
                if j != i {
                    best = best.min(p.distance(points[j]));
                }
            });
            if best <= k as f64 * self.cell {
                break;
            }
        }
        best
    }

    /// Visits every item whose point lies within `radius` of `p` (and
    /// possibly a few more).
    pub(crate) fn for_each_near(&self, p: Point, radius: f64, mut f: impl FnMut(usize)) {
        let c = self.cell_of(p);
        let last = self.max_ring(c);
        for k in 0..=last {
            if k >= 2 && (k - 1) as f64 * self.cell > radius {
                break;
            }
            self.for_each_in_ring(c, k, &mut f);
        }
    }
}
