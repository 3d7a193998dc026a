use thiserror::Error;

/// Crate-wide error type.
///
/// Variants are grouped by how the CLI maps them to exit codes:
/// domain/feasibility problems exit 2, I/O exits 3, parse errors exit 4.
#[derive(Error, Debug)]
pub enum Error {
    #[error("bloch vector has length {len} > 1 (tolerance {tol})")]
    BlochTooLong { len: f64, tol: f64 },

    #[error("matrix is not hermitian (max asymmetry {dev})")]
    NotHermitian { dev: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eig})")]
    NotPsd { min_eig: f64 },

    #[error("{what} = {value} outside domain [{lo}, {hi}]")]
    Domain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("instrument parameters invalid: |t| + |alpha| = {excess} exceeds 1")]
    InvalidInstrument { excess: f64 },

    #[error("measurement parameters invalid: bloch part {len} exceeds outcome weight {cap}")]
    InvalidMeasurement { len: f64, cap: f64 },

    #[error("outcome has probability {prob} below threshold; post-measurement state undefined")]
    UnreachableOutcome { prob: f64 },

    #[error("witness pair (a_ab={a_ab}, a_ac={a_ac}) is inconsistent: eta_lower {lo} exceeds eta_upper {hi}")]
    InconsistentPair {
        a_ab: f64,
        a_ac: f64,
        lo: f64,
        hi: f64,
    },

    #[error("target {target} infeasible: must lie in [{lo}, {hi}]")]
    InfeasibleTarget { target: f64, lo: f64, hi: f64 },

    #[error("chain length {k} exceeds supported maximum {max}")]
    ChainTooLong { k: usize, max: usize },

    #[error("grid specification invalid: {reason}")]
    BadGrid { reason: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 domain/feasibility, 3 io, 4 parse.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 3,
            Error::Parse(_) | Error::BadGrid { .. } => 4,
            _ => 2,
        }
    }
}
