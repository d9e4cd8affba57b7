//! Error type shared by all operations.

use core::fmt;

/// Errors surfaced by grid construction, field generation, metric assembly
/// and flow stepping. Everything else in the crate is total on valid inputs.
#[derive(Debug, Clone, PartialEq)]
pub enum KrfError {
    /// Resolution is not an even number in [16, 256] with prime factors {2, 3}.
    InvalidResolution { n_res: usize },
    /// Complex dimension outside {1, 2}.
    InvalidDimension { n: usize },
    /// Band limit exceeds the dealias-safe third of the spectrum.
    FrequencyTooHigh { k: usize, max: usize },
    /// Requested amplitude must be strictly positive.
    AmplitudeNotPositive,
    /// The assembled metric failed the positivity margin: the potential has
    /// left the Kähler cone (or the flow is about to).
    PositivityLoss {
        /// Flat grid index of the first offending point.
        point: usize,
        /// Smallest eigenvalue found there.
        eigenvalue: f64,
        /// Runge-Kutta stage (0..4) when raised inside a step; 0 otherwise.
        stage: usize,
    },
    /// c·g̃ is not ∂∂̄-exact on the torus, so the Ricci potential construction
    /// only supports c = 0.
    NonexactClass,
    /// A fit was requested on an empty sample series.
    EmptySeries,
    /// Too many grid points had numerically degenerate eigenpairs.
    DiagonalizationFailure { excluded: usize, total: usize },
    /// Configuration rejected before any computation ran.
    InvalidConfig(&'static str),
}

impl fmt::Display for KrfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KrfError::InvalidResolution { n_res } => write!(
                f,
                "resolution must be power of two (or 3*2^k), 16..=256, got {n_res}"
            ),
            KrfError::InvalidDimension { n } => {
                write!(f, "complex dimension must be 1 or 2, got {n}")
            }
            KrfError::FrequencyTooHigh { k, max } => {
                write!(f, "band limit {k} exceeds dealias-safe maximum {max}")
            }
            KrfError::AmplitudeNotPositive => write!(f, "amplitude must be positive"),
            KrfError::PositivityLoss {
                point,
                eigenvalue,
                stage,
            } => write!(
                f,
                "metric positivity lost at point {point} (eigenvalue {eigenvalue:e}, stage {stage})"
            ),
            KrfError::NonexactClass => write!(
                f,
                "c != 0 requested: c*g is not ddbar-exact on the torus, no Ricci potential exists"
            ),
            KrfError::EmptySeries => write!(f, "at least one sample required"),
            KrfError::DiagonalizationFailure { excluded, total } => write!(
                f,
                "simultaneous diagonalization failed at {excluded}/{total} points (> 1%)"
            ),
            KrfError::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl core::error::Error for KrfError {}
