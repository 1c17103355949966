use thiserror::Error;

/// Errors produced by the solvers and the sweep machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{function} domain error: {reason}")]
    Domain {
        function: &'static str,
        reason: String,
    },

    #[error(
        "minimizer did not converge after {iterations} iterations \
         (best lambda = {best_lambda}, |dE/dlambda| = {gradient_residual:e})"
    )]
    MinimizerNotConverged {
        iterations: usize,
        best_lambda: f64,
        best_energy: f64,
        gradient_residual: f64,
    },

    #[error("exact diagonalization not converged at cutoff {n_max}: {reason}")]
    ExactNotConverged {
        n_max: usize,
        reason: String,
        history: Vec<(usize, f64)>,
    },

    #[error("sweep row {row} ({axis} = {value}): {source}")]
    SweepRow {
        row: usize,
        axis: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

impl Error {
    /// Short machine-readable tag for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::Domain { .. } => "domain",
            Error::MinimizerNotConverged { .. } => "minimizer_not_converged",
            Error::ExactNotConverged { .. } => "exact_not_converged",
            Error::SweepRow { .. } => "sweep_row",
            Error::Io { .. } => "io",
        }
    }

    /// Whether the error stems from the caller's input rather than from a
    /// numerical failure.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::InvalidParameter { .. })
    }
}
