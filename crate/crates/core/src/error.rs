use thiserror::Error;

/// Errors raised by domain construction, metric evaluation and the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid gap: {0}")]
    InvalidGap(String),
    #[error("domain has no gaps, so its complement of the real axis is disconnected")]
    NoGaps,
    #[error("gaps {first} and {second} have intersecting interiors")]
    OverlappingGaps { first: String, second: String },
    #[error("the boundary set is empty")]
    EmptyBoundary,
    #[error("domain has fewer than two finite boundary points")]
    NonHyperbolicType,
    #[error("point ({re}, {im}) lies on the boundary")]
    PointOnBoundary { re: f64, im: f64 },
    #[error("path touches the boundary")]
    PathTouchesBoundary,
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("gap index {index} is out of range ({available} gaps materialized)")]
    GapIndex { index: usize, available: usize },
    #[error("gaps {0} and {1} share an endpoint")]
    AdjacentGaps(usize, usize),
    #[error("no grid path joins the requested endpoints")]
    Disconnected,
    #[error("malformed domain spec: {0}")]
    Spec(String),
}

impl Error {
    /// Stable machine-readable name, used in error reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidGap(_) => "InvalidGap",
            Error::NoGaps => "NoGaps",
            Error::OverlappingGaps { .. } => "OverlappingGaps",
            Error::EmptyBoundary => "EmptyBoundary",
            Error::NonHyperbolicType => "NonHyperbolicType",
            Error::PointOnBoundary { .. } => "PointOnBoundary",
            Error::PathTouchesBoundary => "PathTouchesBoundary",
            Error::InvalidPath(_) => "InvalidPath",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::InvalidGenerator(_) => "InvalidGenerator",
            Error::GapIndex { .. } => "GapIndex",
            Error::AdjacentGaps(..) => "AdjacentGaps",
            Error::Disconnected => "Disconnected",
            Error::Spec(_) => "Spec",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
