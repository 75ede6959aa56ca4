use thiserror::Error;

/// Errors surfaced by the simulation library.
#[derive(Error, Debug)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is singular or ill-conditioned (condition estimate {cond:.3e})")]
    Singular { cond: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("buffer overflow at relay {relay}")]
    BufferOverflow { relay: usize },

    #[error("buffer underflow at relay {relay}")]
    BufferUnderflow { relay: usize },

    #[error("no admissible link for any relay")]
    Starvation,

    #[error("degenerate slot: no feasible selection")]
    DegenerateSlot,

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
