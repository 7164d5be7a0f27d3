//! Numeric sweeps over the closed-form inequalities used to bound the
//! coverage ratio of a single cell.
//!
//! Every report carries a margin that the caller compares against a
//! tolerance. These are sampled checks on finite grids, not certificates.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{separating_line, Disc, Point};
use crate::packing::{Packing, HEXAGONAL_DENSITY};

/// Header attached to every report.
pub const EVIDENCE_NOTE: &str = "numeric evidence from a finite sweep; not a proof";

/// Default central-difference step.
pub const DEFAULT_STEP: f64 = 1e-6;

/// Default grid resolution per axis.
pub const DEFAULT_GRID: usize = 400;

/// `g(x) = x (1 + cos(2x - 2α)) / sin 2x`.
pub fn g_value(x: f64, alpha: f64) -> Result<f64> {
    if !(x > 0.0 && x < FRAC_PI_2) {
        return Err(Error::AngleOutOfRange(x));
    }
    let s = (2.0 * x).sin();
    if s == 0.0 {
        return Err(Error::AngleOutOfRange(x));
    }
    Ok(x * (1.0 + (2.0 * x - 2.0 * alpha).cos()) / s)
}

/// Grid over the angle pair `(x, α)`.
///
/// The `x` samples are `x_max - (x_max - x_min)·k/grid`, `k = 0..grid`
/// (including `x_max`, excluding `x_min`); the `α` samples are
/// `α_min + (α_max - α_min)·k/grid` (including `α_min`, excluding `α_max`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub grid: usize,
    pub step: f64,
}

impl SweepSpec {
    /// `x ∈ (0, π/6]`, `α ∈ [π/6, π/2)`, the regime `x ≤ π/6 ≤ α`.
    pub fn regime(grid: usize) -> Self {
        SweepSpec {
            x_min: 0.0,
            x_max: FRAC_PI_6,
            alpha_min: FRAC_PI_6,
            alpha_max: FRAC_PI_2,
            grid,
            step: DEFAULT_STEP,
        }
    }

    /// `x ∈ (0, π/2 - 0.01]`, `α ∈ [0.01, π/6)`: mostly `x > α`, outside
    /// the regime.
    pub fn outside_regime(grid: usize) -> Self {
        SweepSpec {
            x_min: 0.0,
            x_max: FRAC_PI_2 - 0.01,
            alpha_min: 0.01,
            alpha_max: FRAC_PI_6,
            grid,
            step: DEFAULT_STEP,
        }
    }

    /// Whether every sample satisfies `x ≤ π/6 ≤ α`.
    pub fn in_regime(&self) -> bool {
        let tol = 1e-12;
        self.x_max <= FRAC_PI_6 + tol && self.alpha_min >= FRAC_PI_6 - tol
    }

    fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        let span = self.x_max - self.x_min;
        (0..self.grid).map(move |k| self.x_max - span * k as f64 / self.grid as f64)
    }

    fn alphas(&self) -> impl Iterator<Item = f64> + '_ {
        let span = self.alpha_max - self.alpha_min;
        (0..self.grid).map(move |k| self.alpha_min + span * k as f64 / self.grid as f64)
    }

    fn check(&self) -> Result<()> {
        if self.grid == 0 {
            return Err(Error::InvalidSweep("grid must be positive"));
        }
        if !(self.step > 0.0) {
            return Err(Error::InvalidSweep("step must be positive"));
        }
        if !(self.x_min >= 0.0 && self.x_min < self.x_max && self.alpha_min <= self.alpha_max) {
            return Err(Error::InvalidSweep("empty parameter range"));
        }
        let smallest = self.x_min + (self.x_max - self.x_min) / self.grid as f64;
        if smallest - self.step <= 0.0 || self.x_max + self.step >= FRAC_PI_2 {
            return Err(Error::InvalidSweep("difference stencil leaves (0, π/2)"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GMonotoneReport {
    pub note: &'static str,
    pub spec: SweepSpec,
    pub in_regime: bool,
    pub evaluated: usize,
    pub min_slope: f64,
    /// `(x, α)` at the minimum slope.
    pub argmin: (f64, f64),
    pub negative_slopes: usize,
}

/// Central-difference slopes `∂g/∂x` over the sweep grid.
pub fn check_g_monotone(spec: &SweepSpec) -> Result<GMonotoneReport> {
    spec.check()?;
    let alphas: Vec<f64> = spec.alphas().collect();
    let h = spec.step;
    let per_alpha: Vec<(f64, (f64, f64), usize)> = alphas
        .par_iter()
        .map(|&alpha| {
            let mut best = (f64::INFINITY, (0.0, alpha), 0usize);
            for x in spec.xs() {
                let slope = (g_value(x + h, alpha).unwrap() - g_value(x - h, alpha).unwrap()) / (2.0 * h);
                if slope < 0.0 {
                    best.2 += 1;
                }
                if slope < best.0 {
                    best.0 = slope;
                    best.1 = (x, alpha);
                }
            }
            best
        })
        .collect();
    let mut min_slope = f64::INFINITY;
    let mut argmin = (0.0, 0.0);
    let mut negative_slopes = 0;
    for (slope, at, negatives) in per_alpha {
        negative_slopes += negatives;
        if slope < min_slope {
            min_slope = slope;
            argmin = at;
        }
    }
    Ok(GMonotoneReport {
        note: EVIDENCE_NOTE,
        spec: *spec,
        in_regime: spec.in_regime(),
        evaluated: spec.grid * spec.grid,
        min_slope,
        argmin,
        negative_slopes,
    })
}

/// Interval bounds for a disc whose separating line is at distance `1 + x`
/// from the center of a unit disc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Claim1Bounds {
    pub radius_min: f64,
    pub radius_max: f64,
    pub distance_min: f64,
    pub distance_max: f64,
}

impl Claim1Bounds {
    /// `(1-x)/(1+x) ≤ r' ≤ (1+x)/(1-x)` and `2 ≤ |OO'| ≤ 2(1+x)/(1-x)`.
    pub fn new(x: f64) -> Self {
        Claim1Bounds {
            radius_min: (1.0 - x) / (1.0 + x),
            radius_max: (1.0 + x) / (1.0 - x),
            distance_min: 2.0,
            distance_max: 2.0 * (1.0 + x) / (1.0 - x),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim1Report {
    pub note: &'static str,
    pub x: f64,
    pub bounds: Claim1Bounds,
    pub trials: usize,
    /// Constructed pairs that form an admissible packing.
    pub feasible: usize,
    /// Constructed pairs rejected by the admissibility check.
    pub infeasible: usize,
    pub violations: usize,
    /// Both interval endpoints for `r'` yield admissible pairs.
    pub endpoints_feasible: bool,
    pub observed_radius: Option<(f64, f64)>,
    pub observed_distance: Option<(f64, f64)>,
    /// Largest `| dist(O, ℓ) - (1 + x) |` over all constructions.
    pub construction_error: f64,
}

/// Relative slack when comparing realized values with the claimed intervals;
/// it matches the tolerance of the admissibility check.
const CLAIM1_TOL: f64 = 1e-8;

/// Random pairs `(D, D')` with `D` the unit disc at the origin and `D'`
/// placed, in a random direction, so that the separating line is at
/// distance exactly `1 + x` from the origin: `|OO'| = (1 + x)(1 + r')`.
/// Radii `r'` are drawn from `[r_min / 2, 2 r_max]`; pairs violating the
/// inflation condition are counted as infeasible. The two interval
/// endpoints are always tried in addition to the random trials.
pub fn check_claim1(x: f64, trials: usize, seed: u64) -> Result<Claim1Report> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::InvalidSweep("x must lie in [0, 1)"));
    }
    let bounds = Claim1Bounds::new(x);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Disc::new(Point::ORIGIN, 1.0)?;

    let construct = |radius: f64, theta: f64| -> Result<(bool, f64, f64)> {
        let d = (1.0 + x) * (1.0 + radius);
        let other = Disc::new(Point::new(d * theta.cos(), d * theta.sin()), radius)?;
        let line = separating_line(&unit, &other)?;
        let err = (line.offset() - line.normal().dot(unit.center) - (1.0 + x)).abs();
        let feasible = Packing::new(vec![unit, other])?.validate().valid;
        Ok((feasible, unit.center.distance(other.center), err))
    };

    let mut report = Claim1Report {
        note: EVIDENCE_NOTE,
        x,
        bounds,
        trials,
        feasible: 0,
        infeasible: 0,
        violations: 0,
        endpoints_feasible: true,
        observed_radius: None,
        observed_distance: None,
        construction_error: 0.0,
    };
    let record = |report: &mut Claim1Report, radius: f64, feasible: bool, dist: f64, err: f64| {
        report.construction_error = report.construction_error.max(err);
        if !feasible {
            report.infeasible += 1;
            return;
        }
        report.feasible += 1;
        let slack = CLAIM1_TOL;
        let r_ok = radius >= bounds.radius_min * (1.0 - slack) && radius <= bounds.radius_max * (1.0 + slack);
        let d_ok = dist >= bounds.distance_min * (1.0 - slack) && dist <= bounds.distance_max * (1.0 + slack);
        if !(r_ok && d_ok) {
            report.violations += 1;
        }
        let widen = |cur: Option<(f64, f64)>, v: f64| Some(cur.map_or((v, v), |(a, b)| (a.min(v), b.max(v))));
        report.observed_radius = widen(report.observed_radius, radius);
        report.observed_distance = widen(report.observed_distance, dist);
    };

    for radius in [bounds.radius_min, bounds.radius_max] {
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        let (feasible, dist, err) = construct(radius, theta)?;
        report.endpoints_feasible &= feasible;
        record(&mut report, radius, feasible, dist, err);
    }
    let (lo, hi) = (0.5 * bounds.radius_min, 2.0 * bounds.radius_max);
    for _ in 0..trials {
        let radius = rng.random_range(lo..hi);
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        let (feasible, dist, err) = construct(radius, theta)?;
        record(&mut report, radius, feasible, dist, err);
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlphaExtremesReport {
    pub note: &'static str,
    /// Angle at `P` with `|PQ| = 2.74`, `|PR| = 2`, `|QR| = 1.46`.
    pub cos_first: f64,
    /// Angle at `P` with `|PQ| = |PR| = 2.74`, `|QR| = 1.46`.
    pub cos_second: f64,
    pub bound_first: f64,
    pub bound_second: f64,
    pub cos_pi_6: f64,
    /// Each cosine rounded up to three decimals equals its three-decimal bound.
    pub matches_bounds: bool,
    /// `cos(π/6)` minus the larger cosine.
    pub margin: f64,
}

/// Law of cosines: cosine of the angle between sides `b` and `c` opposite `a`.
fn cos_opposite(a: f64, b: f64, c: f64) -> f64 {
    (b * b + c * c - a * a) / (2.0 * b * c)
}

pub fn check_lemma_alpha_extremes() -> AlphaExtremesReport {
    let cos_first = cos_opposite(1.46, 2.74, 2.0);
    let cos_second = cos_opposite(1.46, 2.74, 2.74);
    let (bound_first, bound_second) = (0.856, 0.859);
    let round_up = |v: f64| (v * 1000.0).ceil() / 1000.0;
    let cos_pi_6 = FRAC_PI_6.cos();
    AlphaExtremesReport {
        note: EVIDENCE_NOTE,
        cos_first,
        cos_second,
        bound_first,
        bound_second,
        cos_pi_6,
        matches_bounds: round_up(cos_first) == bound_first && round_up(cos_second) == bound_second,
        margin: cos_pi_6 - cos_first.max(cos_second),
    }
}

/// Left-hand side of `cos²α + sin 2α cos α + 2 sin α cos 2α ≥ 1`.
pub fn case3_lhs(alpha: f64) -> f64 {
    let (s, c) = alpha.sin_cos();
    c * c + (2.0 * alpha).sin() * c + 2.0 * s * (2.0 * alpha).cos()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Case3Report {
    pub note: &'static str,
    pub evaluated: usize,
    /// Minimum of `LHS - 1`.
    pub min_margin: f64,
    pub argmin: f64,
}

/// Samples `α_k = (π/6)·k/grid`, `k = 1..=grid`.
pub fn check_case3_inequality(grid: usize) -> Result<Case3Report> {
    if grid == 0 {
        return Err(Error::InvalidSweep("grid must be positive"));
    }
    let mut report = Case3Report {
        note: EVIDENCE_NOTE,
        evaluated: grid,
        min_margin: f64::INFINITY,
        argmin: 0.0,
    };
    for k in 1..=grid {
        let alpha = FRAC_PI_6 * k as f64 / grid as f64;
        let margin = case3_lhs(alpha) - 1.0;
        if margin < report.min_margin {
            report.min_margin = margin;
            report.argmin = alpha;
        }
    }
    Ok(report)
}

/// Coverage ratio of the unit disc in the right triangle `O A₁ A₂` with apex
/// angle `x` at `O` and hypotenuse `|OA₂|`: `x / (|OA₂|² sin x cos x)`.
/// Valid as a coverage ratio only when `|OA₁| = |OA₂| cos x ≥ 1`.
pub fn hypotenuse_ratio(oa2: f64, x: f64) -> f64 {
    x / (oa2 * oa2 * x.sin() * x.cos())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Oa2Report {
    pub note: &'static str,
    pub trials: usize,
    /// Largest `|OA₂|` among configurations with ratio above `π/(2√3)`.
    pub max_oa2_above_bound: f64,
    pub violations: usize,
    /// Largest ratio among configurations with `|OA₂| ≥ 2/√3`.
    pub max_ratio_beyond: f64,
    pub contrapositive_violations: usize,
    /// `2/√3 - max_oa2_above_bound`.
    pub margin: f64,
}

/// Two randomized families with `x ∈ (0, π/6]`:
/// configurations built to have ratio `f ∈ (π/(2√3), 1.5·π/(2√3)]` by
/// inverting [`hypotenuse_ratio`] must have `|OA₂| ≤ 2/√3`; configurations
/// with `|OA₂| ∈ [2/√3, 2]` must have `f ≤ π/(2√3)`.
pub fn check_oa2_bound(trials: usize, seed: u64) -> Oa2Report {
    let bound_oa2 = 2.0 / 3f64.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Oa2Report {
        note: EVIDENCE_NOTE,
        trials,
        max_oa2_above_bound: 0.0,
        violations: 0,
        max_ratio_beyond: 0.0,
        contrapositive_violations: 0,
        margin: 0.0,
    };
    for _ in 0..trials {
        let x = FRAC_PI_6 * (1.0 - rng.random::<f64>());
        let f = HEXAGONAL_DENSITY * (1.0 + 0.5 * (1.0 - rng.random::<f64>()));
        let oa2 = (x / (f * x.sin() * x.cos())).sqrt();
        report.max_oa2_above_bound = report.max_oa2_above_bound.max(oa2);
        if oa2 > bound_oa2 + 1e-9 {
            report.violations += 1;
        }

        let oa2 = rng.random_range(bound_oa2..2.0);
        let f = hypotenuse_ratio(oa2, x);
        report.max_ratio_beyond = report.max_ratio_beyond.max(f);
        if f > HEXAGONAL_DENSITY * (1.0 + 1e-12) {
            report.contrapositive_violations += 1;
        }
    }
    report.margin = bound_oa2 - report.max_oa2_above_bound;
    report
}
