use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix entry ({row}, {col}) is negative: {value}")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("column {col} has no positive entry (resource {col} exploitable by no species)")]
    ZeroColumn { col: usize },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("matrix shape is invalid: {0}")]
    BadShape(String),

    #[error("expected {expected} species, got {got}")]
    SpeciesCount { expected: usize, got: usize },

    #[error("point is not on the simplex: {0}")]
    NotOnSimplex(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("species {species} has a zero diagonal entry; stability of its vertex is undefined")]
    ZeroDiagonal { species: usize },

    #[error("integration step too large: coordinate {value:e} at t = {time}")]
    StepTooLarge { time: f64, value: f64 },

    #[error("unknown matrix name '{0}'")]
    UnknownName(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse configuration: {0}")]
    Parse(String),

    #[error("invalid configuration: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable tag used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NegativeEntry { .. } => "NEGATIVE_ENTRY",
            Error::ZeroColumn { .. } => "ZERO_COLUMN",
            Error::NonFiniteEntry { .. } => "NON_FINITE_ENTRY",
            Error::BadShape(_) => "BAD_SHAPE",
            Error::SpeciesCount { .. } => "SPECIES_COUNT",
            Error::NotOnSimplex(_) => "NOT_ON_SIMPLEX",
            Error::Degenerate(_) => "DEGENERATE",
            Error::ZeroDiagonal { .. } => "ZERO_DIAGONAL",
            Error::StepTooLarge { .. } => "STEP_TOO_LARGE",
            Error::UnknownName(_) => "UNKNOWN_NAME",
            Error::InvalidParameter(_) => "INVALID_PARAMETER",
            Error::Parse(_) => "PARSE_ERROR",
            Error::Validation(_) => "VALIDATION_ERROR",
            Error::Io(_) => "IO_ERROR",
            Error::Json(_) => "JSON_ERROR",
        }
    }
}
