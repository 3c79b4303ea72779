use std::path::PathBuf;

use thiserror::Error;

use crate::experiment::ObservableSeries;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: ||H - H^dag||_F = {asymmetry:.3e} (||H||_F = {norm:.3e})")]
    NotHermitian { asymmetry: f64, norm: f64 },

    #[error("degenerate ground space: lowest eigenvalues {lowest} and {next} differ by less than {gap_tol:e}")]
    DegenerateGround { lowest: f64, next: f64, gap_tol: f64 },

    #[error("matrix is not unitary: ||U^dag U - I||_F = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid layout: {0}")]
    Layout(String),

    #[error("invalid gate: {0}")]
    Gate(String),

    #[error("states have different layouts or qubit orders")]
    LayoutMismatch,

    #[error("invalid qubit swap: {0}")]
    Swap(String),

    #[error("scratch budget exhausted: {capacity} scratch states already in use")]
    ScratchExhausted { capacity: usize },

    #[error("invalid model: {0}")]
    Model(String),

    #[error("norm drifted to {norm} at period {period}; run aborted")]
    NormDrift {
        norm: f64,
        period: u64,
        /// Everything recorded up to and including the last valid record.
        partial: Box<ObservableSeries>,
    },

    #[error("not thermalized: E(t)/E(0) never reached e^-{level} within t_max = {t_max}")]
    NotThermalized { level: u32, t_max: f64 },

    #[error("fit: {0}")]
    Fit(String),

    #[error("invalid config field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("{path} already exists (pass --force to overwrite)")]
    Exists { path: PathBuf },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
