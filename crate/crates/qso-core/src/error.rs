//! The crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong while validating inputs or running the
/// analysis pipeline.
///
/// Variants split into two families, and the CLI maps them to distinct exit
/// codes: *input* errors (malformed states, coefficients, scenarios) and
/// *numerical* refusals (the spectral machinery declining to produce a
/// closed-form answer).  [`QsoError::is_input_error`] tells them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QsoError {
    /// State vectors must have even length `2m` with at least two loci.
    #[error("state vector must have even length >= 4, got {len}")]
    BadDimension {
        /// Length of the offending vector.
        len: usize,
    },

    /// The coordinates are not a probability vector (within validation slack).
    #[error("not a point of the simplex: {reason}")]
    NotASimplexPoint {
        /// Human-readable description of the violation.
        reason: String,
    },

    /// Two objects that must agree on the number of loci do not.
    #[error("dimension mismatch: expected {expected} loci, got {got}")]
    DimensionMismatch {
        /// Loci expected by the first operand.
        expected: usize,
        /// Loci carried by the second operand.
        got: usize,
    },

    /// Coefficients must lie in `[0, 1]`.
    #[error("coefficient a[{i}][{j}] = {value} lies outside [0, 1]")]
    CoefficientOutOfRange {
        /// Row (locus) index, 0-based.
        i: usize,
        /// Column (locus) index, 0-based.
        j: usize,
        /// The offending value.
        value: f64,
    },

    /// Zero-mass reduction removed every locus.  Cannot happen for a valid
    /// simplex point (the pair sums add to one); reported rather than
    /// panicking so corrupt inputs surface cleanly.
    #[error("every locus carries zero mass; nothing to analyse")]
    AllLociZero,

    /// The unit eigenvalue of the fiber matrix is not numerically simple, so
    /// the closed-form limit does not exist.  Simulate instead.
    #[error(
        "eigenvalue 1 is not simple (kernel dimension {kernel_dim}); \
         no closed-form limit exists - simulate instead"
    )]
    NonSimpleEigenvalueOne {
        /// Numerical dimension of the eigenspace for eigenvalue 1.
        kernel_dim: usize,
    },

    /// Some loci exchange no mass with the rest (their off-diagonal
    /// coefficient rows are all zero), so their pairs never move and the
    /// closed-form limit machinery does not apply.  Simulate instead.
    #[error(
        "frozen loci {loci:?}: all off-diagonal coefficients vanish there; \
         no closed-form limit exists - simulate instead"
    )]
    FrozenLoci {
        /// 0-based indices of the frozen loci, in the original numbering.
        loci: Vec<usize>,
    },

    /// The iterative eigensolver did not converge (or met non-finite data).
    #[error("eigensolver failed to converge")]
    EigensolverFailure,

    /// The left eigenvector is numerically orthogonal to the fiber vector,
    /// so it cannot be normalized against it.
    #[error("degenerate normalization: left eigenvector orthogonal to the fiber")]
    DegenerateNormalization,

    /// A scenario or suite file failed to parse or validate.
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

impl QsoError {
    /// `true` for errors caused by bad input (CLI exit code 1), `false` for
    /// numerical refusals and solver failures (CLI exit code 3).
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            QsoError::NonSimpleEigenvalueOne { .. }
                | QsoError::FrozenLoci { .. }
                | QsoError::EigensolverFailure
                | QsoError::DegenerateNormalization
        )
    }
}
