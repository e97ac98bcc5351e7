use crate::hamiltonian::Regime;

/// Errors produced by the analytic paths, the Fock-basis oracle and the
/// scan/report layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("time must be finite, got {0}")]
    NonFiniteTime(f64),

    /// cosh/sinh of the hyperbolic branch would exceed the representable range.
    #[error("hyperbolic growth overflow: gamma*t = {gamma_t} exceeds {limit}")]
    HyperbolicOverflow { gamma_t: f64, limit: f64 },

    #[error("modified Bessel function overflows at nu = {nu}, x = {x}")]
    BesselOverflow { nu: f64, x: f64 },

    #[error("operation requires the {expected:?} regime, parameters are {found:?}")]
    RegimeMismatch { expected: Regime, found: Regime },

    #[error("lambda/omega = {ratio} is outside the weak-coupling envelope (<= {limit})")]
    OutsideEnvelope { ratio: f64, limit: f64 },

    #[error("truncated basis of {n_trunc} levels leaves tail mass {tail_mass:e}")]
    TruncationInsufficient { n_trunc: usize, tail_mass: f64 },

    #[error(
        "oracle did not converge by n = {n_max}: observable drift {drift:e}, tail mass {tail_mass:e}"
    )]
    ConvergenceFailure {
        n_max: usize,
        drift: f64,
        tail_mass: f64,
    },

    #[error("tridiagonal eigensolver failed (info = {info})")]
    Eigensolver { info: i32 },

    #[error("oracle grid of {points} points exceeds the limit of {limit}")]
    GridTooLarge { points: usize, limit: usize },

    #[error("unknown figure `{0}` (expected 1..=9)")]
    UnknownFigure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Numeric code written to the `error_code` column of scan output.
    /// Zero is reserved for "no error".
    pub fn code(&self) -> u8 {
        match self {
            Error::HyperbolicOverflow { .. } | Error::BesselOverflow { .. } => 1,
            Error::TruncationInsufficient { .. } => 2,
            Error::ConvergenceFailure { .. } => 3,
            Error::Eigensolver { .. } => 4,
            _ => 9,
        }
    }

    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
