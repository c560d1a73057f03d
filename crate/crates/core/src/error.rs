use thiserror::Error;

/// Errors raised by the geometric and graph routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid norm: {0}")]
    InvalidNorm(String),
    #[error("cannot parse norm spec `{0}`")]
    NormParse(String),
    #[error("zero vector given where a nonzero direction is required")]
    ZeroVector,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("non-finite coordinate at point {0}")]
    NonFinite(usize),
    #[error("duplicate points {0} and {1}")]
    DuplicatePoints(usize, usize),
    #[error("degenerate segment (coincident endpoints)")]
    DegenerateSegment,
    #[error("degenerate triangle (collinear vertices)")]
    DegenerateTriangle,
    #[error("furthest neighbor of point {point} is not unique ({first} and {second})")]
    FurthestTie {
        point: usize,
        first: usize,
        second: usize,
    },
    #[error("{count} tied distance pairs present; distances must be pairwise distinct")]
    TiesPresent { count: usize },
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("norm is not strictly convex")]
    NotStrictlyConvex,
    #[error("perturbation budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("instance too large for exhaustive search: n = {n}, limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidNorm(_) => "InvalidNorm",
            Error::NormParse(_) => "NormParse",
            Error::ZeroVector => "ZeroVector",
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::NonFinite(_) => "NonFinite",
            Error::DuplicatePoints(..) => "DuplicatePoints",
            Error::DegenerateSegment => "DegenerateSegment",
            Error::DegenerateTriangle => "DegenerateTriangle",
            Error::FurthestTie { .. } => "FurthestTie",
            Error::TiesPresent { .. } => "TiesPresent",
            Error::StructureViolation(_) => "StructureViolation",
            Error::NotStrictlyConvex => "NotStrictlyConvex",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::TooLarge { .. } => "TooLarge",
            Error::Io(_) => "IoError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
