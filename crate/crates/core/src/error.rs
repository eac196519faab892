use std::fmt;

/// A single configuration problem, tagged with the dotted path of the field.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value at node {index}")]
    NonFinite { index: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("spectral coefficients are not Hermitian (max defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("axis {axis} out of range for a {dim}-dimensional grid")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("density must be strictly positive (min {min:e})")]
    NonPositiveDensity { min: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("basis of size {requested} exceeds the {available} dealiased vector modes on this grid")]
    BasisTooLarge { requested: usize, available: usize },

    #[error("mass operator is not positive definite")]
    SingularMass,

    #[error("step rejected at t={time}: {reason}; retry with dt <= {suggested_dt:e}")]
    StepRejected {
        time: f64,
        reason: String,
        suggested_dt: f64,
    },

    #[error("invalid configuration: {}", join_violations(.0))]
    Config(Vec<Violation>),

    #[error("record stream corrupt at byte {offset}: {message}")]
    CorruptStream { offset: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl Error {
    /// Short machine-readable tag used by the CLI error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGrid(_) => "invalid_grid",
            Error::NonFinite { .. } => "non_finite",
            Error::GridMismatch => "grid_mismatch",
            Error::NotHermitian { .. } => "not_hermitian",
            Error::AxisOutOfRange { .. } => "axis_out_of_range",
            Error::NonPositiveDensity { .. } => "non_positive_density",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::BasisTooLarge { .. } => "basis_too_large",
            Error::SingularMass => "singular_mass",
            Error::StepRejected { .. } => "step_rejected",
            Error::Config(_) => "config",
            Error::CorruptStream { .. } => "corrupt_stream",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
