//! Validated points of the probability simplex in paired-coordinate layout.
//!
//! A state over `m` loci is a vector of `2m` nonnegative coordinates summing
//! to one.  Coordinates come in pairs: slots `2i` and `2i + 1` (0-based) hold
//! the two frequencies attached to locus `i`.  In the 1-based notation used
//! in the formula comments these are x_{2i-1} ("odd") and x_{2i} ("even").

use serde::Serialize;

use crate::error::QsoError;
use crate::tol::VALIDATION_EPS;

/// A validated point of the simplex S^{2m-1}, stored as `2m` coordinates.
///
/// Construction clamps rounding-level negatives to zero and rescales so the
/// coordinates sum to one; after that the point is immutable.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SimplexPoint {
    coords: Vec<f64>,
}

impl SimplexPoint {
    /// Validate raw coordinates and build a point.  See [`validate_state`].
    pub fn new(raw: Vec<f64>) -> Result<Self, QsoError> {
        validate_state(raw)
    }

    /// Assemble a point from per-locus pair sums `c` and odd parts `u`,
    /// i.e. coordinates `(u_0, c_0 - u_0, u_1, c_1 - u_1, ...)`.
    ///
    /// Requires `0 <= u_i <= c_i` and `sum c_i = 1`, each within
    /// [`VALIDATION_EPS`]; the assembled point is then validated as usual.
    pub fn from_pair_parts(c: &[f64], u: &[f64]) -> Result<Self, QsoError> {
        if c.len() != u.len() {
            return Err(QsoError::DimensionMismatch { expected: c.len(), got: u.len() });
        }
        for (i, (&ci, &ui)) in c.iter().zip(u).enumerate() {
            if !ci.is_finite() || !ui.is_finite() {
                return Err(QsoError::NotASimplexPoint {
                    reason: format!("non-finite entry at locus {i}"),
                });
            }
            if ui < -VALIDATION_EPS || ui > ci + VALIDATION_EPS {
                return Err(QsoError::NotASimplexPoint {
                    reason: format!("u[{i}] = {ui} outside [0, c[{i}] = {ci}]"),
                });
            }
        }
        let mut coords = Vec::with_capacity(2 * c.len());
        for (&ci, &ui) in c.iter().zip(u) {
            coords.push(ui);
            coords.push(ci - ui);
        }
        validate_state(coords)
    }

    /// Number of loci `m` (half the coordinate count).
    pub fn m(&self) -> usize {
        self.coords.len() / 2
    }

    /// The `2m` coordinates.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Consume the point, returning its coordinates.
    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// The coordinate pair `(x_{2i-1}, x_{2i})` of locus `i` (0-based).
    pub fn pair(&self, i: usize) -> (f64, f64) {
        (self.coords[2 * i], self.coords[2 * i + 1])
    }

    /// Wrap operator output without re-validation.
    ///
    /// One generation of the map keeps the state on the simplex up to
    /// rounding; this constructor clamps the sub-epsilon negatives that
    /// rounding can produce but performs no global rescale, so conserved
    /// pair sums are left untouched.  Callers must pass arithmetic output
    /// of a map that preserves the simplex.
    pub(crate) fn from_operator_output(mut coords: Vec<f64>) -> Self {
        debug_assert!(coords.len() >= 4 && coords.len() % 2 == 0);
        for v in &mut coords {
            debug_assert!(*v > -1e-12, "operator output left the simplex: {v}");
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        SimplexPoint { coords }
    }
}

/// Validate raw coordinates as a simplex state.
///
/// Accepts any vector of even length at least 4 whose entries are at least
/// `-VALIDATION_EPS` and whose sum is within `VALIDATION_EPS` of one.  Tiny
/// negatives are clamped to zero and the result is rescaled so the sum is
/// exactly one (to rounding).
pub fn validate_state(raw: Vec<f64>) -> Result<SimplexPoint, QsoError> {
    let len = raw.len();
    if len < 4 || len % 2 != 0 {
        return Err(QsoError::BadDimension { len });
    }
    let mut sum = 0.0;
    for (i, &v) in raw.iter().enumerate() {
        if !v.is_finite() {
            return Err(QsoError::NotASimplexPoint {
                reason: format!("non-finite coordinate at index {i}"),
            });
        }
        if v < -VALIDATION_EPS {
            return Err(QsoError::NotASimplexPoint {
                reason: format!("coordinate {i} is negative: {v}"),
            });
        }
        sum += v;
    }
    if (sum - 1.0).abs() > VALIDATION_EPS {
        return Err(QsoError::NotASimplexPoint {
            reason: format!("coordinates sum to {sum}, expected 1"),
        });
    }
    let mut coords = raw;
    for v in &mut coords {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let clamped_sum: f64 = coords.iter().sum();
    for v in &mut coords {
        *v /= clamped_sum;
    }
    Ok(SimplexPoint { coords })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_interior_point_and_renormalizes() {
        let x = validate_state(vec![0.25, 0.25, 0.25, 0.25 + 3e-10]).unwrap();
        assert_eq!(x.m(), 2);
        let s: f64 = x.coords().iter().sum();
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn clamps_rounding_level_negatives() {
        let x = validate_state(vec![0.5, -1e-12, 0.0, 0.5 + 1e-12]).unwrap();
        assert!(x.coords().iter().all(|&v| v >= 0.0));
        let s: f64 = x.coords().iter().sum();
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        // Sum off by more than the slack.
        assert!(matches!(
            validate_state(vec![0.5, 0.5, 0.1, 0.0]),
            Err(QsoError::NotASimplexPoint { .. })
        ));
        // Genuinely negative coordinate.
        assert!(matches!(
            validate_state(vec![0.6, -0.1, 0.25, 0.25]),
            Err(QsoError::NotASimplexPoint { .. })
        ));
        // Odd length.
        assert!(matches!(
            validate_state(vec![0.5, 0.25, 0.25]),
            Err(QsoError::BadDimension { len: 3 })
        ));
        // One locus is below the supported range.
        assert!(matches!(
            validate_state(vec![0.5, 0.5]),
            Err(QsoError::BadDimension { len: 2 })
        ));
        // NaN.
        assert!(matches!(
            validate_state(vec![f64::NAN, 0.5, 0.25, 0.25]),
            Err(QsoError::NotASimplexPoint { .. })
        ));
    }

    #[test]
    fn pair_parts_roundtrip() {
        // Dyadic values: assembly and validation are exact here.
        let x = SimplexPoint::from_pair_parts(&[0.25, 0.75], &[0.125, 0.75]).unwrap();
        assert_eq!(x.coords(), &[0.125, 0.125, 0.75, 0.0]);
        assert_eq!(x.pair(0), (0.125, 0.125));
        assert_eq!(x.pair(1), (0.75, 0.0));
    }

    #[test]
    fn pair_parts_rejects_u_outside_box() {
        let e = SimplexPoint::from_pair_parts(&[0.3, 0.7], &[0.4, 0.1]);
        assert!(matches!(e, Err(QsoError::NotASimplexPoint { .. })));
        let e = SimplexPoint::from_pair_parts(&[0.3, 0.7], &[-0.1, 0.5]);
        assert!(matches!(e, Err(QsoError::NotASimplexPoint { .. })));
    }

    #[test]
    fn vertices_are_valid() {
        let x = validate_state(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(x.pair(0), (1.0, 0.0));
    }
}
