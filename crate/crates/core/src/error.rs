use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid grid, model or scheme parameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// A caller violated an operation's precondition (e.g. a point outside its cell).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("CFL violation: dt = {dt:e} gives Courant number {courant:.4} > {limit:.4}")]
    Cfl { dt: f64, courant: f64, limit: f64 },

    /// A time step could not be completed; the caller may retry with a smaller dt.
    #[error("step failure at t = {t}: {reason}")]
    Step { t: f64, reason: String },

    #[error("linear solver failure: {0}")]
    Solver(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("malformed data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
