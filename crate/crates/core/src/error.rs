use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate disc pair: centers coincide")]
    DegenerateDiscPair,
    #[error("invalid disc: radius {radius} must be finite and positive")]
    InvalidDisc { radius: f64 },
    #[error("invalid half-plane: normal must be finite and non-zero")]
    InvalidHalfPlane,
    #[error("invalid polygon: {0}")]
    InvalidPolygon(&'static str),
    #[error("invalid window: {0}")]
    InvalidWindow(&'static str),
    #[error("coincident centers at indices {0} and {1}")]
    CoincidentCenters(usize, usize),
    #[error("criticalization undefined for fewer than two centers")]
    CriticalizationUndefined,
    #[error("packing is empty")]
    EmptyPacking,
    #[error("invalid packing: {violations} ordered pairs violate the inflation condition")]
    InvalidPacking { violations: usize },
    #[error("index {index} out of range for {len} items")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("empty cell for disc {0}")]
    EmptyCell(usize),
    #[error("empty window")]
    EmptyWindow,
    #[error("angle {0} outside the open interval (0, π/2)")]
    AngleOutOfRange(f64),
    #[error("sector leaves triangle: leg {0} is shorter than the unit radius")]
    SectorLeavesTriangle(f64),
    #[error("duplicate points at indices {0} and {1}")]
    DuplicatePoints(usize, usize),
    #[error("point {0} lies outside the domain")]
    PointOutsideDomain(usize),
    #[error("r_i undefined for a single point")]
    TooFewPoints,
    #[error("invalid density: {0}")]
    InvalidDensity(&'static str),
    #[error("density is not normalized: total mass {0}")]
    UnnormalizedDensity(f64),
    #[error("degenerate partition: region {0} has non-positive area")]
    DegeneratePartition(usize),
    #[error("schedule must be non-empty and strictly increasing")]
    InvalidSchedule,
    #[error("invalid sweep: {0}")]
    InvalidSweep(&'static str),
}
