use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("extent {xi} outside admissible interval ({lo}, {hi})")]
    ExtentOutOfRange { xi: f64, lo: f64, hi: f64 },

    #[error("target fractions give inconsistent extents (max discrepancy {discrepancy:e})")]
    InconsistentTarget { discrepancy: f64 },

    #[error("singular denominator: {0}")]
    SingularDenominator(String),

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("degenerate model: {0}")]
    DegenerateModel(String),

    #[error("fit failed, {coefficient} is not identifiable: {detail}")]
    Fit { coefficient: &'static str, detail: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("start point outside the region |grad Q| >= 1 (measured {grad_norm:e})")]
    Region { grad_norm: f64 },

    #[error("integrand denominator changes sign near P = {at:e} Pa")]
    SingularIntegrand { at: f64 },

    #[error("invariant not available: {0}")]
    NotSeparable(String),

    #[error("level not attained at T = {temperature} K")]
    LevelNotAttained { temperature: f64 },

    #[error("feasible path construction failed: {0}")]
    ConstructionFailed(String),

    #[error("branch is singular at the starting root (q'(v0) = {derivative:e})")]
    BranchSingular { derivative: f64 },

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) => 2,
            Error::DegenerateState(_)
            | Error::ExtentOutOfRange { .. }
            | Error::Domain(_)
            | Error::Region { .. }
            | Error::LevelNotAttained { .. }
            | Error::InconsistentTarget { .. } => 3,
            _ => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
