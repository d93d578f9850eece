//! Error type shared by every module of the crate.

/// Failure modes of the front solver and its analysis routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A bracketing search was given an interval without a sign change.
    #[error("no sign change of the discriminant in [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    /// A growth-rate maximization found no unstable wavenumbers.
    #[error("no instability in [{lo}, {hi}]")]
    NoInstability { lo: f64, hi: f64 },

    /// An iterative or adaptive scheme failed to reach its tolerance.
    #[error("failed to converge: {0}")]
    Convergence(String),

    /// The fronts came closer than allowed: 2h - psi + phi must stay
    /// positive for the contour-dynamics system to make sense.
    #[error("chord-arc condition violated at t = {time} (margin {margin})")]
    ChordArc { time: f64, margin: f64 },

    /// Requested time step exceeds the linear stability limit.
    #[error("time step {dt} exceeds the stable limit {dt_max}")]
    Cfl { dt: f64, dt_max: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
