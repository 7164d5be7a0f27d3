//! Nearest-neighbor entropy estimation for planar point sets.
//!
//! For `N` distinct points with nearest-neighbor half-distances `r_i`, the
//! estimator is
//!
//! ```text
//! 𝓔(X) = -(2/N) Σ ln r_i - ln(2√3 N)
//! ```
//!
//! and approximates `E(μ) = ∫ ρ ln ρ` when the empirical measure of `X`
//! approaches `μ = ρ dx`. The partition estimator `𝓔^W` is the exact entropy
//! of the density that spreads mass `1/N` uniformly over each region of the
//! mixed partition (see [`crate::partition`]).

use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::packing::{check_distinct, Window};
use crate::partition::partition_w;
use crate::spatial::PointGrid;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Unordered sequence of `N` distinct points of a compact domain.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalPointSet {
    points: Vec<Point>,
    domain: Window,
}

impl EmpiricalPointSet {
    /// Points must be finite, pairwise distinct and inside the domain
    /// polygon.
    pub fn new(points: Vec<Point>, domain: Window) -> Result<Self> {
        let domain = domain.checked()?;
        let poly = domain.polygon();
        if let Some(i) = points.iter().position(|p| !p.is_finite() || !poly.contains(*p)) {
            return Err(Error::PointOutsideDomain(i));
        }
        check_distinct(&points).map_err(|(i, j)| Error::DuplicatePoints(i, j))?;
        Ok(EmpiricalPointSet { points, domain })
    }

    #[inline]
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    #[inline]
    pub fn domain(&self) -> &Window {
        &self.domain
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Image under `p -> λp + by`, domain included.
    pub fn transformed(&self, lambda: f64, by: Point) -> Result<Self> {
        let points = self.points.iter().map(|&p| p * lambda + by).collect();
        EmpiricalPointSet::new(points, self.domain.scaled(lambda).translated(by))
    }
}

/// `r_i = ½ min_{j≠i} |x_i - x_j|`, computed on a uniform grid. The grid
/// only prunes candidates, so the result equals the exhaustive minimum.
pub fn nn_half_distances(x: &EmpiricalPointSet) -> Result<Vec<f64>> {
    if x.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    let grid = PointGrid::new(&x.points);
    Ok((0..x.len())
        .into_par_iter()
        .map(|i| 0.5 * grid.nearest_distance(&x.points, i))
        .collect())
}

/// `-(2/N) Σ ln r_i - ln(2√3 N)`.
pub fn entropy_estimate(x: &EmpiricalPointSet) -> Result<f64> {
    let radii = nn_half_distances(x)?;
    Ok(estimate_from_radii(&radii))
}

pub(crate) fn estimate_from_radii(radii: &[f64]) -> f64 {
    let n = radii.len() as f64;
    let sum_ln: f64 = radii.iter().map(|r| r.ln()).sum();
    -(2.0 / n) * sum_ln - (2.0 * SQRT_3 * n).ln()
}

/// Density that is constant on the cells of a regular grid over a
/// rectangle. Values are stored row by row, `values[iy * nx + ix]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PiecewiseConstantDensity {
    min: Point,
    max: Point,
    nx: usize,
    ny: usize,
    values: Vec<f64>,
}

impl PiecewiseConstantDensity {
    /// Values must be finite and non-negative. Normalization is not
    /// enforced here; [`exact_entropy`] and the samplers check it.
    pub fn new(min: Point, max: Point, nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min.x < max.x && min.y < max.y) {
            return Err(Error::InvalidDensity("domain must be a non-empty rectangle"));
        }
        if nx == 0 || ny == 0 || values.len() != nx * ny {
            return Err(Error::InvalidDensity("value count must equal nx * ny"));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidDensity("values must be finite and non-negative"));
        }
        Ok(PiecewiseConstantDensity {
            min,
            max,
            nx,
            ny,
            values,
        })
    }

    /// Like [`new`](Self::new), then rescaled to unit mass.
    pub fn normalized(min: Point, max: Point, nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        let mut rho = PiecewiseConstantDensity::new(min, max, nx, ny, values)?;
        let mass = rho.mass();
        if !(mass > 0.0) {
            return Err(Error::InvalidDensity("zero total mass"));
        }
        rho.values.iter_mut().for_each(|v| *v /= mass);
        Ok(rho)
    }

    /// `ρ ≡ 1 / area` on the rectangle.
    pub fn uniform(min: Point, max: Point) -> Result<Self> {
        PiecewiseConstantDensity::normalized(min, max, 1, 1, vec![1.0])
    }

    /// Equal-width vertical strips with relative levels, normalized.
    pub fn vertical_strips(min: Point, max: Point, levels: &[f64]) -> Result<Self> {
        PiecewiseConstantDensity::normalized(min, max, levels.len(), 1, levels.to_vec())
    }

    pub fn domain(&self) -> Window {
        Window::Rect {
            xmin: self.min.x,
            ymin: self.min.y,
            xmax: self.max.x,
            ymax: self.max.y,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cell_count(&self) -> usize {
        self.values.len()
    }

    pub fn cell_area(&self) -> f64 {
        (self.max.x - self.min.x) / self.nx as f64 * (self.max.y - self.min.y) / self.ny as f64
    }

    /// Corners of cell `k`.
    pub fn cell_rect(&self, k: usize) -> (Point, Point) {
        let (ix, iy) = (k % self.nx, k / self.nx);
        let w = (self.max.x - self.min.x) / self.nx as f64;
        let h = (self.max.y - self.min.y) / self.ny as f64;
        let lo = Point::new(self.min.x + ix as f64 * w, self.min.y + iy as f64 * h);
        let hi = Point::new(
            if ix + 1 == self.nx { self.max.x } else { lo.x + w },
            if iy + 1 == self.ny { self.max.y } else { lo.y + h },
        );
        (lo, hi)
    }

    /// Index of the cell containing `p`, if `p` is in the domain.
    pub fn cell_index(&self, p: Point) -> Option<usize> {
        if p.x < self.min.x || p.x > self.max.x || p.y < self.min.y || p.y > self.max.y {
            return None;
        }
        let fx = (p.x - self.min.x) / (self.max.x - self.min.x) * self.nx as f64;
        let fy = (p.y - self.min.y) / (self.max.y - self.min.y) * self.ny as f64;
        let ix = (fx as usize).min(self.nx - 1);
        let iy = (fy as usize).min(self.ny - 1);
        Some(iy * self.nx + ix)
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_area()
    }

    fn check_normalized(&self) -> Result<()> {
        let mass = self.mass();
        if (mass - 1.0).abs() > 1e-6 {
            return Err(Error::UnnormalizedDensity(mass));
        }
        Ok(())
    }
}

/// `∫ ρ ln ρ` with `0 ln 0 = 0`.
pub fn exact_entropy(rho: &PiecewiseConstantDensity) -> Result<f64> {
    rho.check_normalized()?;
    let area = rho.cell_area();
    Ok(rho
        .values
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * v.ln() * area)
        .sum())
}

/// `-(1/N) Σ ln|W_i ∩ Ω| - ln N`, the entropy of the density equal to
/// `1 / (N |W_i ∩ Ω|)` on each region of the mixed partition.
pub fn partition_entropy(x: &EmpiricalPointSet) -> Result<f64> {
    let partition = partition_w(x)?;
    let n = x.len() as f64;
    let mut sum_ln = 0.0;
    for rec in &partition.records {
        if !(rec.w_area > 0.0) {
            return Err(Error::DegeneratePartition(rec.index));
        }
        sum_ln += rec.w_area.ln();
    }
    Ok(-sum_ln / n - n.ln())
}

/// `n` independent draws from `rho`: a cell is chosen with probability
/// `ρ_k |cell_k|`, then a point uniformly inside it. Exact repeats are
/// redrawn.
pub fn sample_iid(rho: &PiecewiseConstantDensity, n: usize, seed: u64) -> Result<EmpiricalPointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_iid_with(rho, n, &mut rng)
}

pub(crate) fn sample_iid_with<R: Rng + ?Sized>(
    rho: &PiecewiseConstantDensity,
    n: usize,
    rng: &mut R,
) -> Result<EmpiricalPointSet> {
    if n < 2 {
        return Err(Error::TooFewPoints);
    }
    rho.check_normalized()?;
    let picker = WeightedIndex::new(&rho.values).map_err(|_| Error::InvalidDensity("zero total mass"))?;
    let mut seen = HashSet::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let k = picker.sample(rng);
        let (lo, hi) = rho.cell_rect(k);
        let p = Point::new(
            lo.x + (hi.x - lo.x) * rng.random::<f64>(),
            lo.y + (hi.y - lo.y) * rng.random::<f64>(),
        );
        if seen.insert((p.x.to_bits(), p.y.to_bits())) {
            points.push(p);
        }
    }
    EmpiricalPointSet::new(points, rho.domain())
}

/// Placement of the lattice inside one constant-density cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionPlacement {
    pub cell: usize,
    pub density: f64,
    /// Lattice spacing (`INFINITY` for zero-density cells).
    pub spacing: f64,
    pub count: usize,
    /// The target spacing is too coarse for a single row or column.
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Recovery {
    pub points: EmpiricalPointSet,
    pub regions: Vec<RegionPlacement>,
}

/// Lays a triangular lattice in every constant-density cell with spacing
/// `a_k = sqrt(2 / (√3 N_target ρ_k))`, so that the local point density is
/// `N_target ρ_k`. Each cell holds `floor(H / (a√3/2))` rows of
/// `floor(W / a)` points, centered in the cell, with alternate rows shifted
/// by half a spacing.
pub fn hexagonal_recovery(rho: &PiecewiseConstantDensity, n_target: usize) -> Result<Recovery> {
    if n_target < 2 {
        return Err(Error::TooFewPoints);
    }
    rho.check_normalized()?;
    let mut points = Vec::new();
    let mut regions = Vec::with_capacity(rho.cell_count());
    for (k, &density) in rho.values.iter().enumerate() {
        if density == 0.0 {
            regions.push(RegionPlacement {
                cell: k,
                density,
                spacing: f64::INFINITY,
                count: 0,
                flagged: false,
            });
            continue;
        }
        let (lo, hi) = rho.cell_rect(k);
        let (w, h) = (hi.x - lo.x, hi.y - lo.y);
        let spacing = (2.0 / (SQRT_3 * n_target as f64 * density)).sqrt();
        let row = spacing * SQRT_3 / 2.0;
        let cols = (w / spacing).floor() as usize;
        let rows = (h / row).floor() as usize;
        if cols == 0 || rows == 0 {
            regions.push(RegionPlacement {
                cell: k,
                density,
                spacing,
                count: 0,
                flagged: true,
            });
            continue;
        }
        // Centers span (cols - ½) spacings horizontally and (rows - 1) rows
        // vertically; the block is centered in the cell.
        let x0 = lo.x + 0.5 * (w - (cols as f64 - 0.5) * spacing);
        let y0 = lo.y + 0.5 * (h - (rows - 1) as f64 * row);
        for r in 0..rows {
            let shift = if r % 2 == 1 { 0.5 * spacing } else { 0.0 };
            let y = y0 + r as f64 * row;
            for c in 0..cols {
                points.push(Point::new(x0 + shift + c as f64 * spacing, y));
            }
        }
        regions.push(RegionPlacement {
            cell: k,
            density,
            spacing,
            count: rows * cols,
            flagged: false,
        });
    }
    Ok(Recovery {
        points: EmpiricalPointSet::new(points, rho.domain())?,
        regions,
    })
}

/// `m × m` square grid at the cell centers of a rectangle.
pub fn square_grid(min: Point, max: Point, m: usize) -> Result<EmpiricalPointSet> {
    let domain = Window::rect(min, max)?;
    let (hx, hy) = ((max.x - min.x) / m as f64, (max.y - min.y) / m as f64);
    let points = (0..m * m)
        .map(|k| {
            let (i, j) = (k % m, k / m);
            Point::new(min.x + (i as f64 + 0.5) * hx, min.y + (j as f64 + 0.5) * hy)
        })
        .collect();
    EmpiricalPointSet::new(points, domain)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    /// Independent draws from the density.
    Iid,
    /// Density-matched triangular lattices ([`hexagonal_recovery`]).
    Hexagonal,
    /// `m × m` square grid over the whole domain, `m = round(√N)`; ignores
    /// the shape of the density.
    SquareGrid,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    /// Scheduled size.
    pub n: usize,
    /// Number of points actually generated.
    pub placed: usize,
    pub estimator: f64,
    pub partition_entropy: f64,
    pub exact_entropy: f64,
    /// `estimator - exact_entropy`.
    pub gap: f64,
    /// `partition_entropy - exact_entropy`.
    pub partition_gap: f64,
}

/// Point set for one row of an experiment.
pub fn generate(rho: &PiecewiseConstantDensity, n: usize, mode: SamplingMode, seed: u64, row: u64) -> Result<EmpiricalPointSet> {
    match mode {
        SamplingMode::Iid => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(row);
            sample_iid_with(rho, n, &mut rng)
        }
        SamplingMode::Hexagonal => Ok(hexagonal_recovery(rho, n)?.points),
        SamplingMode::SquareGrid => {
            let m = ((n as f64).sqrt().round() as usize).max(2);
            let Window::Rect {
                xmin,
                ymin,
                xmax,
                ymax,
            } = rho.domain()
            else {
                unreachable!("densities live on rectangles")
            };
            square_grid(Point::new(xmin, ymin), Point::new(xmax, ymax), m)
        }
    }
}

/// Both estimators and the exact entropy for every size in `schedule`.
/// Row `k` of an i.i.d. experiment uses stream `k` of the seeded generator.
pub fn gamma_experiment(
    rho: &PiecewiseConstantDensity,
    schedule: &[usize],
    mode: SamplingMode,
    seed: u64,
) -> Result<Vec<ConvergenceRow>> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSchedule);
    }
    let exact = exact_entropy(rho)?;
    schedule
        .par_iter()
        .enumerate()
        .map(|(row, &n)| {
            let x = generate(rho, n, mode, seed, row as u64)?;
            let estimator = entropy_estimate(&x)?;
            let partition = partition_entropy(&x)?;
            Ok(ConvergenceRow {
                n,
                placed: x.len(),
                estimator,
                partition_entropy: partition,
                exact_entropy: exact,
                gap: estimator - exact,
                partition_gap: partition - exact,
            })
        })
        .collect()
}
