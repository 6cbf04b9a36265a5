use thiserror::Error;

/// Errors produced anywhere in the shock-profile pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid flux model: {0}")]
    InvalidModel(String),

    #[error("entropy condition fails: g({worst_u:.6e}) = {worst_g:.6e} is not negative")]
    InvalidShock { worst_u: f64, worst_g: f64 },

    #[error("degenerate shock with s = f'(u-) is not supported")]
    DegenerateMinus,

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("fit window {side} holds {nodes} table nodes, need at least {required}")]
    WindowTooNarrow {
        side: &'static str,
        nodes: usize,
        required: usize,
    },

    #[error("initial data is not positive at x = {x} (value {value})")]
    NonPositiveData { x: f64, value: f64 },

    #[error("time step {dt:.6e} exceeds the stable bound {limit:.6e}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("non-finite value in cell {cell} at t = {t}")]
    BlowUp { cell: usize, t: f64 },

    #[error("non-finite weight at xi = {xi}")]
    NonFiniteWeight { xi: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("config validation error at `{path}`: {message}")]
    Validation { path: String, message: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
