use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("site count must be even and at least 4 (modes pair as (k, -k)), got N = {0}")]
    InvalidSiteCount(usize),

    #[error("invalid chain parameter: {0}")]
    InvalidParams(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("echo value {0} outside [0, 1]")]
    EchoOutOfRange(f64),

    #[error("qubit state not normalized: |c_g|^2 + |c_e|^2 = {0}")]
    UnnormalizedQubit(f64),

    #[error("cutoff {k_c} selects no momentum mode (nearest integer to N*K_c*a/2pi is 0)")]
    EmptyCutoff { k_c: f64 },

    #[error("time step {dt} too coarse: max quasienergy {eps_max} gives {phase} rad per step (limit 0.5)")]
    Undersampled { dt: f64, eps_max: f64, phase: f64 },

    #[error("invalid scaling: {0}")]
    InvalidScaling(String),

    #[error("dense spin Hamiltonian limited to N <= {max}, got N = {n}")]
    TooManySites { n: usize, max: usize },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable tag for CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSiteCount(_) => "invalid_site_count",
            Error::InvalidParams(_) => "invalid_params",
            Error::InvalidGrid(_) => "invalid_grid",
            Error::EchoOutOfRange(_) => "echo_out_of_range",
            Error::UnnormalizedQubit(_) => "unnormalized_qubit",
            Error::EmptyCutoff { .. } => "empty_cutoff",
            Error::Undersampled { .. } => "undersampled",
            Error::InvalidScaling(_) => "invalid_scaling",
            Error::TooManySites { .. } => "too_many_sites",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
            Error::Json { .. } => "json",
        }
    }
}
