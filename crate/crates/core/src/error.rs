use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

/// Errors produced anywhere in the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A potential was evaluated outside its effective domain.
    Domain { what: &'static str, value: f64 },
    /// Two fields living on different grids were combined.
    GridMismatch,
    /// A field or value contains NaN or an infinity.
    NonFinite { what: &'static str },
    /// A time-norm was requested for a trajectory without samples.
    EmptyTrajectory,
    /// Zero pivot during a banded factorization.
    SingularMatrix { row: usize },
    /// A linear solve finished with a residual above tolerance.
    LinearSolve { residual: f64 },
    /// Newton failed to reach tolerance within the iteration and damping budget.
    StepFailure { t: f64, residual: f64, iterations: usize },
    /// A parameter or configuration value is out of range.
    InvalidConfig(String),
    /// The requested study violates a hypothesis of the underlying error estimate.
    HypothesisViolation(String),
    /// Too few data points for a fit.
    InsufficientData { needed: usize, got: usize },
    /// A member solve of a parameter sweep failed.
    SweepMember { param: f64, source: Box<Error> },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => {
                write!(f, "{what} is undefined at r = {value}")
            }
            Error::GridMismatch => write!(f, "fields live on different grids"),
            Error::NonFinite { what } => write!(f, "{what} contains non-finite values"),
            Error::EmptyTrajectory => write!(f, "trajectory has no samples"),
            Error::SingularMatrix { row } => write!(f, "zero pivot in row {row}"),
            Error::LinearSolve { residual } => {
                write!(f, "linear solve residual {residual:e} above tolerance")
            }
            Error::StepFailure {
                t,
                residual,
                iterations,
            } => write!(
                f,
                "Newton failed at t = {t} after {iterations} iterations (residual {residual:e})"
            ),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::HypothesisViolation(msg) => write!(f, "hypothesis violated: {msg}"),
            Error::InsufficientData { needed, got } => {
                write!(f, "need at least {needed} data points, got {got}")
            }
            Error::SweepMember { param, source } => {
                write!(f, "sweep member with parameter {param} failed: {source}")
            }
        }
    }
}

impl core::error::Error for Error {}
