use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate point: indices {0} and {1} have identical coordinates")]
    DuplicatePoint(usize, usize),
    #[error("colouring is empty")]
    NonSurjectiveColouring,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("triangulation is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("dimension {dim} exceeds the cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("no stack includes the simplex and excludes E")]
    NoStack,
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("size limit exceeded: {0}")]
    SizeLimitExceeded(String),
    #[error("direction is not transverse to the simplex")]
    NotTransverse,
    #[error("vector field is not a partition: {0}")]
    PartitionFailure(String),
    #[error("intersection is not an interval: {0}")]
    NotInterval(String),
    #[error("complement is not a union of intervals: {0}")]
    NotUnionOfIntervals(String),
    #[error("collapse precondition fails: {0}")]
    NotCollapsible(String),
    #[error("collapse got stuck: {0}")]
    StuckCollapse(String),
    #[error("colouring is not a refinement: {0}")]
    NotRefinement(String),
    #[error("simplex missing from the finer triangulation: {0:?}")]
    MissingSimplex(Vec<usize>),
    #[error("sphere misses the plane of colour {0}")]
    NoIntersection(usize),
    #[error("gamma is not closed under faces: {0:?}")]
    InvalidGamma(Vec<usize>),
    #[error("filtration is not monotone at {0:?}")]
    NonMonotoneFiltration(Vec<usize>),
    #[error("input is not in general position: {0}")]
    GeneralPosition(String),
    #[error("collapse theorem falsified: {0}")]
    Falsified(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag, used in CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DuplicatePoint(..) => "DuplicatePoint",
            Error::NonSurjectiveColouring => "NonSurjectiveColouring",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::NotSimplicial(_) => "NotSimplicial",
            Error::DimensionTooLarge { .. } => "DimensionTooLarge",
            Error::NoStack => "NoStack",
            Error::NumericalFailure(_) => "NumericalFailure",
            Error::SizeLimitExceeded(_) => "SizeLimitExceeded",
            Error::NotTransverse => "NotTransverse",
            Error::PartitionFailure(_) => "PartitionFailure",
            Error::NotInterval(_) => "NotInterval",
            Error::NotUnionOfIntervals(_) => "NotUnionOfIntervals",
            Error::NotCollapsible(_) => "NotCollapsible",
            Error::StuckCollapse(_) => "StuckCollapse",
            Error::NotRefinement(_) => "NotRefinement",
            Error::MissingSimplex(_) => "MissingSimplex",
            Error::NoIntersection(_) => "NoIntersection",
            Error::InvalidGamma(_) => "InvalidGamma",
            Error::NonMonotoneFiltration(_) => "NonMonotoneFiltration",
            Error::GeneralPosition(_) => "GeneralPosition",
            Error::Falsified(_) => "Falsified",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
