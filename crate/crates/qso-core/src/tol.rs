//! Numerical tolerances used across the crate.
//!
//! Every threshold that decides something (is this a simplex point? is this
//! eigenvalue the unit one? is this singular value zero?) lives here, with a
//! note on why it has the value it has.  Tests elsewhere assert against these
//! constants rather than re-typing literals.

/// Slack accepted when validating user-supplied states and fibers.
///
/// Inputs typically come from JSON written by other tools; f64 round-trips
/// and upstream arithmetic can miss the exact simplex by a few ulps per
/// coordinate.  1e-9 is far looser than any rounding we produce ourselves
/// and far tighter than any genuine modelling error.
pub const VALIDATION_EPS: f64 = 1e-9;

/// Maximum sup-norm disagreement tolerated between the two evaluation forms
/// of the operator (difference form vs. explicitly stochastic form).
///
/// The forms are algebraically identical; they differ only in rounding of a
/// handful of products of coordinates that are at most one.  Observed
/// disagreement is a few 1e-16; 1e-13 leaves three orders of headroom.
pub const FORM_EQ_EPS: f64 = 1e-13;

/// A locus whose pair sum is at or below this carries no mass and is dropped
/// before any spectral work.
///
/// Pair sums are conserved exactly by the dynamics, so a "zero" fiber entry
/// is either exactly zero or the residue of input noise; 1e-12 sits above
/// accumulated rounding and below anything dynamically meaningful.
pub const ZERO_LOCUS_EPS: f64 = 1e-12;

/// An eigenvalue counts as "the unit eigenvalue" when its distance to 1 in
/// the complex plane is at most this.  Used to decide whether 1 is simple.
pub const EIGEN_ONE_EPS: f64 = 1e-9;

/// Relative rank threshold for null-space extraction: singular values at or
/// below `RANK_REL_EPS * sigma_max` are treated as zero.
///
/// The matrices involved are tiny (m <= ~64) and well scaled, so genuine
/// kernel directions produce singular values near machine epsilon while the
/// smallest nonzero one is many orders larger; 1e-10 cleanly separates them.
pub const RANK_REL_EPS: f64 = 1e-10;

/// Default convergence tolerance for trajectory simulation: stop when the
/// sup-norm one-step change drops below this.
pub const DEFAULT_CONV_TOL: f64 = 1e-12;

/// Default cap on simulated generations.
pub const DEFAULT_MAX_ITERS: u64 = 1_000_000;
