use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("capacity exceeded: {requested} spins requested, enumeration limit is {limit}")]
    Capacity { requested: usize, limit: usize },

    #[error("unsupported problem: {0}")]
    Unsupported(String),

    #[error("decode failed: tile {tile} violates its parity constraint")]
    Decode { tile: usize },

    #[error("SQUID inductance diverges at external flux {phi_ext:e} Wb (half-integer flux quantum)")]
    Divergence { phi_ext: f64 },

    #[error("infeasible calibration: {0}")]
    InfeasibleCalibration(String),

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    Eigensolver { iterations: usize, residual: f64 },

    #[error("integration blew up at t = {t} (dt = {dt})")]
    IntegrationBlowup { t: f64, dt: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("ambiguous phase {phase} rad: equidistant from 0 and pi")]
    AmbiguousPhase { phase: f64 },

    #[error("{source_name}: field `{field}`: {message}")]
    Parse {
        source_name: String,
        field: String,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for failures of a numerical routine rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Divergence { .. }
                | Error::Eigensolver { .. }
                | Error::IntegrationBlowup { .. }
        )
    }
}
