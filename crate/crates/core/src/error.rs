use thiserror::Error;

/// Errors produced by the library.
///
/// [`Error::is_validation`] separates misuse (bad arguments, inconsistent
/// configuration) from genuine numerical failures (non-convergence, truncation
/// loss); the CLI maps the former to exit code 1 and the latter to exit code 2.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument rejected before any computation ran.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Basis truncation too small for the requested state index.
    #[error("truncation order {available} cannot hold state index {requested}")]
    Truncation { requested: usize, available: usize },

    /// A series failed to meet its tolerance before the hard cap.
    #[error("series did not converge within {cap} terms (tol = {tol:.3e})")]
    NonConvergence { cap: usize, tol: f64 },

    /// Ladder function zeros do not match the requested family.
    #[error("ladder function inconsistent with family {family}: {reason}")]
    FamilyMismatch {
        family: &'static str,
        reason: String,
    },

    /// No closed-form route exists for this combination.
    #[error("no closed form for this (system, family, ladder) combination")]
    UnsupportedClosedForm,

    /// Too much probability falls outside the requested grid.
    #[error("grid too narrow: {outside:.3e} of the probability lies outside")]
    GridTooNarrow { outside: f64 },

    /// Mean energy sits on a spectrum level, so no bounding pair exists.
    #[error("mean energy {energy} coincides with spectrum level {level}")]
    LevelCoincidence { energy: f64, level: f64 },

    /// The level scan exceeded its cap without bracketing the mean energy.
    #[error("mean energy {energy} above the level-scan cap")]
    LevelScanExhausted { energy: f64 },

    /// Sample vectors of unequal length.
    #[error("mismatched lengths: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// Expansion dropped too much weight in truncation; operator
    /// expectations would couple to the missing coefficients.
    #[error("truncation guard band violated: dropped weight {weight:.3e}")]
    GuardBand { weight: f64 },
}

impl Error {
    /// True for errors that reflect invalid input rather than a numerical
    /// failure encountered mid-computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::Truncation { .. }
                | Error::FamilyMismatch { .. }
                | Error::UnsupportedClosedForm
                | Error::LengthMismatch { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
