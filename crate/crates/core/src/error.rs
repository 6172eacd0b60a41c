use thiserror::Error;

use crate::geom::Point2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("degenerate segment at {0}")]
    DegenerateSegment(Point2),
    #[error("polyline needs at least two vertices")]
    PolylineTooShort,
    #[error("polygon needs at least three vertices")]
    PolygonTooSmall,
    #[error("polygon is not simple")]
    NotSimple,
    #[error("hole {0}: {1}")]
    InvalidHole(usize, &'static str),
    #[error("slit {0}: {1}")]
    InvalidSlit(usize, &'static str),
    #[error("segments {0} and {1} cross")]
    CrossingSegments(usize, usize),
    #[error("segments {0} and {1} overlap")]
    OverlappingSegments(usize, usize),
    #[error("interior of the region is disconnected")]
    DisconnectedInterior,
    #[error("point {0} is not on the boundary")]
    NotOnBoundary(Point2),
    #[error("point {0} is outside the region")]
    OutsideRegion(Point2),
    #[error("point {0} lies on a two-sided boundary piece; a side hint is required")]
    HintRequired(Point2),
    #[error("no interior point within {delta} of {point}")]
    OffsetFailed { point: Point2, delta: f64 },
    #[error("strip needs at least two rulings")]
    StripTooShort,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathError {
    #[error("invalid scene: {0}")]
    SceneInvalid(String),
    #[error("terminal {0} is not in the free region")]
    BadTerminal(Point2),
    #[error("terminal {point} is inside the floor disk of radius {r_min}")]
    TerminalInsideFloor { point: Point2, r_min: f64 },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("points {0} and {1} cannot be joined")]
    Unreachable(Point2, Point2),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("invalid construction parameters: {0}")]
    SpecInvalid(String),
    #[error("path leaves the radius band [{lo}, {hi}] at {at}")]
    PathNotConfined { lo: f64, hi: f64, at: Point2 },
    #[error("point {0} is outside the cone around the axis")]
    OutsideCone(String),
    #[error("no labyrinth of at most {0} coils reaches the target length")]
    NotReachedWithinBound(usize),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RigidityError {
    #[error("profiles have sizes {0} and {1}")]
    SizeMismatch(usize, usize),
    #[error("domain boundary has more than one component")]
    MultipleBoundaryComponents,
    #[error("alignment residual {0} exceeds tolerance")]
    NotAligned(f64),
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Metric(#[from] MetricError),
}
