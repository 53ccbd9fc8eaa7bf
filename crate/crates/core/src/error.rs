use thiserror::Error;

use crate::linalg::PartialSchur;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The shifted QR iteration hit its cap. The partially reduced Schur
    /// form is kept so callers can inspect what did converge.
    #[error("eigensolver did not converge after {iterations} iterations ({unconverged} eigenvalues left)")]
    NoConvergence {
        iterations: usize,
        unconverged: usize,
        partial: Box<PartialSchur>,
    },

    #[error("singular value iteration did not converge")]
    SvdNoConvergence,

    #[error("eigenpair residual {residual:e} exceeds {bound:e}")]
    Residual { residual: f64, bound: f64 },

    #[error("insufficient data: {0}")]
    Insufficient(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// A failure inside one Monte Carlo trial.
    #[error("trial {trial} (master seed {master_seed}): {source}")]
    Trial {
        trial: u64,
        master_seed: u64,
        source: Box<Error>,
    },
}

impl Error {
    /// True for failures of a numerical kernel, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Trial { source, .. } => source.is_numerical(),
            e => matches!(
                e,
                Error::NoConvergence { .. } | Error::SvdNoConvergence | Error::Residual { .. }
            ),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
