use std::path::PathBuf;

use thiserror::Error;

/// Every failure the engine can report.
#[derive(Debug, Error)]
pub enum Error {
    /// An input outside the domain of a production function or curve.
    #[error("domain error: {0}")]
    Domain(String),

    /// A ratio whose denominator vanished.
    #[error("singularity: {0}")]
    Singularity(String),

    /// An agent path that went negative inside the horizon.
    #[error("agent path error: {0}")]
    Path(String),

    /// The AI residual of a calibration is not positive.
    #[error("calibration infeasible: {0}")]
    CalibrationInfeasible(String),

    /// Least-squares design matrix is rank deficient.
    #[error("singular fit: {0}")]
    SingularFit(String),

    /// Fit input is structurally unable to determine the parameters.
    #[error("ill-posed fit: {0}")]
    IllPosed(String),

    /// Two series that must align do not.
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("parse error in {path} at line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// A model error raised while simulating one step.
    #[error("step t={t}: {source}")]
    AtStep {
        t: u32,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serde(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Strips any step annotation.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtStep { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
