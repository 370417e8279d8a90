//! Error type shared by every module in the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument violated a precondition (non-unit axis, empty subset, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A request would exceed a hard resource bound (net too large, ...).
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// The synthesizer ran out of recursion depth before reaching the
    /// requested precision. Carries the best distance it did achieve.
    #[error(
        "synthesis failed: best distance {best:.6e} exceeds requested {requested:.6e} \
         after depth {max_depth}"
    )]
    SynthesisFailure {
        best: f64,
        requested: f64,
        max_depth: u8,
    },

    /// Ensemble generation exhausted its attempt budget with fewer unique
    /// sequences than requested.
    #[error(
        "ensemble shortfall: found {found} of {requested} unique sequences in {attempts} attempts"
    )]
    EnsembleShortfall {
        found: usize,
        requested: usize,
        attempts: usize,
    },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
