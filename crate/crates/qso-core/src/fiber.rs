//! Conserved pair sums and zero-mass reduction.
//!
//! Every generation conserves the per-locus pair sums `c_i = x_{2i-1} +
//! x_{2i}`, so the simplex foliates into invariant *fibers* indexed by a
//! point `c` of the locus simplex S^{m-1}.  On a fiber the whole state is
//! determined by the odd coordinates `u_i = x_{2i-1}` (the even ones are
//! `c_i - u_i`), and the dynamics of `u` turns out to be linear — see
//! [`crate::linear`].
//!
//! Loci with `c_i = 0` carry no mass: both their coordinates are pinned to
//! zero and they contribute nothing to anyone else's update.  They are
//! dropped before spectral work so that positivity arguments apply to what
//! remains.

use serde::Serialize;

use crate::coeffs::CoefficientMatrix;
use crate::error::QsoError;
use crate::simplex::SimplexPoint;
use crate::tol::{VALIDATION_EPS, ZERO_LOCUS_EPS};

/// A fiber: the conserved pair-sum vector `c` plus its zero-mass locus set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fiber {
    c: Vec<f64>,
    zero_set: Vec<usize>,
}

impl Fiber {
    /// Validate `c` as a point of the locus simplex S^{m-1}.
    ///
    /// Same slack policy as state validation: entries at least
    /// `-VALIDATION_EPS`, sum within `VALIDATION_EPS` of one, then clamp
    /// and rescale.
    pub fn new(c: Vec<f64>) -> Result<Self, QsoError> {
        if c.is_empty() {
            return Err(QsoError::BadDimension { len: 0 });
        }
        let mut sum = 0.0;
        for (i, &v) in c.iter().enumerate() {
            if !v.is_finite() {
                return Err(QsoError::NotASimplexPoint {
                    reason: format!("non-finite pair sum at locus {i}"),
                });
            }
            if v < -VALIDATION_EPS {
                return Err(QsoError::NotASimplexPoint {
                    reason: format!("pair sum {i} is negative: {v}"),
                });
            }
            sum += v;
        }
        if (sum - 1.0).abs() > VALIDATION_EPS {
            return Err(QsoError::NotASimplexPoint {
                reason: format!("pair sums total {sum}, expected 1"),
            });
        }
        let mut c = c;
        for v in &mut c {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let total: f64 = c.iter().sum();
        for v in &mut c {
            *v /= total;
        }
        Ok(Fiber::from_raw(c))
    }

    /// Wrap already-trusted pair sums without rescaling.  Used internally
    /// where exact values must be preserved (conservation is exact and a
    /// rescale would perturb every downstream residual).
    pub(crate) fn from_raw(c: Vec<f64>) -> Self {
        let zero_set = c
            .iter()
            .enumerate()
            .filter(|(_, &v)| v <= ZERO_LOCUS_EPS)
            .map(|(i, _)| i)
            .collect();
        Fiber { c, zero_set }
    }

    /// Number of loci.
    pub fn m(&self) -> usize {
        self.c.len()
    }

    /// The pair sums.
    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// 0-based indices of loci whose pair sum is (numerically) zero.
    pub fn zero_set(&self) -> &[usize] {
        &self.zero_set
    }

    /// Whether every locus carries mass.
    pub fn strictly_positive(&self) -> bool {
        self.zero_set.is_empty()
    }
}

/// The odd coordinates of a state, relative to a fiber: `u_i = x_{2i-1}`,
/// constrained to the box `0 <= u_i <= c_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ReducedState {
    u: Vec<f64>,
}

impl ReducedState {
    /// Validate `u` against the box of `fiber` (with the usual slack; values
    /// are clamped into the box afterwards).
    pub fn new(u: Vec<f64>, fiber: &Fiber) -> Result<Self, QsoError> {
        if u.len() != fiber.m() {
            return Err(QsoError::DimensionMismatch { expected: fiber.m(), got: u.len() });
        }
        for (i, (&ui, &ci)) in u.iter().zip(fiber.c()).enumerate() {
            if !ui.is_finite() || ui < -VALIDATION_EPS || ui > ci + VALIDATION_EPS {
                return Err(QsoError::NotASimplexPoint {
                    reason: format!("u[{i}] = {ui} outside [0, c[{i}] = {ci}]"),
                });
            }
        }
        let u = u
            .into_iter()
            .zip(fiber.c())
            .map(|(ui, &ci)| ui.clamp(0.0, ci))
            .collect();
        Ok(ReducedState { u })
    }

    pub(crate) fn from_raw(u: Vec<f64>) -> Self {
        ReducedState { u }
    }

    /// Number of loci.
    pub fn m(&self) -> usize {
        self.u.len()
    }

    /// The odd coordinates.
    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// Consume, returning the coordinates.
    pub fn into_u(self) -> Vec<f64> {
        self.u
    }
}

/// Split a state into its fiber and its odd coordinates.
///
/// `c_i = x_{2i-1} + x_{2i}` and `u_i = x_{2i-1}`, both read off exactly;
/// no rescaling happens here.
pub fn fiber_of(x: &SimplexPoint) -> (Fiber, ReducedState) {
    let m = x.m();
    let mut c = Vec::with_capacity(m);
    let mut u = Vec::with_capacity(m);
    for i in 0..m {
        let (xo, xe) = x.pair(i);
        c.push(xo + xe);
        u.push(xo);
    }
    (Fiber::from_raw(c), ReducedState::from_raw(u))
}

/// A system with its zero-mass loci removed.
///
/// `kept[r]` is the original index of reduced locus `r`.  Dropping a
/// zero-mass locus is exact: its coordinates are pinned at zero and every
/// cross term it appears in vanishes, so trajectories of the reduced system
/// re-embed to trajectories of the full one.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedSystem {
    /// Coefficients restricted to the kept loci.
    pub a: CoefficientMatrix,
    /// Fiber restricted to the kept loci (not rescaled).
    pub fiber: Fiber,
    /// Odd coordinates restricted to the kept loci.
    pub u: ReducedState,
    /// Map from reduced locus index to original locus index.
    pub kept: Vec<usize>,
    /// Locus count of the original system.
    pub original_m: usize,
}

impl ReducedSystem {
    /// Scatter per-locus values back to original indexing, writing `fill`
    /// at dropped loci.
    pub fn reembed(&self, reduced: &[f64], fill: f64) -> Vec<f64> {
        assert_eq!(reduced.len(), self.kept.len());
        let mut out = vec![fill; self.original_m];
        for (r, &orig) in self.kept.iter().enumerate() {
            out[orig] = reduced[r];
        }
        out
    }
}

/// Drop the zero-mass loci of `fiber` from the system `(a, fiber, u)`.
///
/// Errors with [`QsoError::AllLociZero`] if nothing remains (impossible for
/// a fiber that came from a valid state) and with
/// [`QsoError::DimensionMismatch`] if the pieces disagree on `m`.
pub fn reduce_zero_loci(
    a: &CoefficientMatrix,
    fiber: &Fiber,
    u: &ReducedState,
) -> Result<ReducedSystem, QsoError> {
    let m = fiber.m();
    if a.m() != m {
        return Err(QsoError::DimensionMismatch { expected: a.m(), got: m });
    }
    if u.m() != m {
        return Err(QsoError::DimensionMismatch { expected: m, got: u.m() });
    }
    let kept: Vec<usize> = (0..m).filter(|i| !fiber.zero_set().contains(i)).collect();
    if kept.is_empty() {
        return Err(QsoError::AllLociZero);
    }
    let rows = kept
        .iter()
        .map(|&i| kept.iter().map(|&j| a.get(i, j)).collect())
        .collect();
    let c = kept.iter().map(|&i| fiber.c()[i]).collect();
    let ur = kept.iter().map(|&i| u.u()[i]).collect();
    Ok(ReducedSystem {
        a: CoefficientMatrix::new(rows).expect("restriction of a valid matrix is valid"),
        fiber: Fiber::from_raw(c),
        u: ReducedState::from_raw(ur),
        kept,
        original_m: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::apply_w;

    fn point(coords: &[f64]) -> SimplexPoint {
        SimplexPoint::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn splits_canonical_state() {
        let (c, u) = fiber_of(&point(&[0.5, 0.0, 0.0, 0.5]));
        assert_eq!(c.c(), &[0.5, 0.5]);
        assert_eq!(u.u(), &[0.5, 0.0]);
        assert!(c.strictly_positive());
    }

    #[test]
    fn detects_zero_mass_loci() {
        // State validation rescales by the decimal sum (one ulp above 1),
        // so the pair sums match the literals to a rounding error only.
        let (c, u) = fiber_of(&point(&[0.2, 0.1, 0.0, 0.0, 0.3, 0.4]));
        for (got, want) in c.c().iter().zip(&[0.3, 0.0, 0.7]) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
        assert_eq!(c.zero_set(), &[1]);
        for (got, want) in u.u().iter().zip(&[0.2, 0.0, 0.3]) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
    }

    #[test]
    fn pair_sums_are_conserved_along_a_step() {
        let a = CoefficientMatrix::new(vec![
            vec![0.0, 0.8, 0.3],
            vec![0.2, 0.0, 0.9],
            vec![0.7, 0.4, 0.0],
        ])
        .unwrap();
        let x = point(&[0.15, 0.05, 0.3, 0.1, 0.25, 0.15]);
        let (c0, _) = fiber_of(&x);
        let y = apply_w(&a, &x).unwrap();
        let (c1, _) = fiber_of(&y);
        for i in 0..3 {
            assert!((c0.c()[i] - c1.c()[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn reduction_drops_exactly_the_zero_set() {
        let a = CoefficientMatrix::new(vec![
            vec![0.0, 0.8, 0.3],
            vec![0.2, 0.0, 0.9],
            vec![0.7, 0.4, 0.0],
        ])
        .unwrap();
        let x = point(&[0.2, 0.1, 0.0, 0.0, 0.3, 0.4]);
        let (c, u) = fiber_of(&x);
        let red = reduce_zero_loci(&a, &c, &u).unwrap();
        assert_eq!(red.kept, vec![0, 2]);
        for (got, want) in red.fiber.c().iter().zip(&[0.3, 0.7]) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
        for (got, want) in red.u.u().iter().zip(&[0.2, 0.3]) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
        // Restriction keeps the surviving cross coefficients.
        assert_eq!(red.a.get(0, 1), 0.3);
        assert_eq!(red.a.get(1, 0), 0.7);
        // Re-embedding scatters values back and fills the hole.
        assert_eq!(red.reembed(&[9.0, 7.0], 0.0), vec![9.0, 0.0, 7.0]);
    }

    #[test]
    fn reduction_is_identity_on_positive_fibers() {
        let a = CoefficientMatrix::zeros(2).unwrap();
        let x = point(&[0.5, 0.0, 0.0, 0.5]);
        let (c, u) = fiber_of(&x);
        let red = reduce_zero_loci(&a, &c, &u).unwrap();
        assert_eq!(red.kept, vec![0, 1]);
        assert_eq!(red.fiber, c);
        assert_eq!(red.u, u);
    }

    #[test]
    fn reduced_trajectories_match_full_ones() {
        // Locus 1 carries no mass; iterating the full system and the reduced
        // system must agree exactly on the surviving coordinates.
        let a = CoefficientMatrix::new(vec![
            vec![0.0, 0.5, 0.6],
            vec![0.5, 0.0, 0.2],
            vec![0.9, 0.1, 0.0],
        ])
        .unwrap();
        let x = point(&[0.2, 0.1, 0.0, 0.0, 0.3, 0.4]);
        let (c, u) = fiber_of(&x);
        let red = reduce_zero_loci(&a, &c, &u).unwrap();
        let x_red = SimplexPoint::from_pair_parts(red.fiber.c(), red.u.u()).unwrap();

        let mut full = x.clone();
        let mut small = x_red.clone();
        for _ in 0..50 {
            full = apply_w(&a, &full).unwrap();
            small = apply_w(&red.a, &small).unwrap();
        }
        for (r, &orig) in red.kept.iter().enumerate() {
            let (fo, fe) = full.pair(orig);
            let (so, se) = small.pair(r);
            assert!((fo - so).abs() < 1e-13, "odd coord of locus {orig}");
            assert!((fe - se).abs() < 1e-13, "even coord of locus {orig}");
        }
        // The dropped pair stays exactly at zero in the full system.
        assert_eq!(full.pair(1), (0.0, 0.0));
    }

    #[test]
    fn fiber_validation_mirrors_state_validation() {
        assert!(Fiber::new(vec![0.3, 0.7]).is_ok());
        assert!(matches!(
            Fiber::new(vec![0.3, 0.3]),
            Err(QsoError::NotASimplexPoint { .. })
        ));
        assert!(matches!(Fiber::new(vec![]), Err(QsoError::BadDimension { len: 0 })));
        // One locus is fine for a fiber (it can arise from reduction).
        let f = Fiber::new(vec![1.0]).unwrap();
        assert!(f.strictly_positive());
    }

    #[test]
    fn reduced_state_box_is_enforced() {
        let f = Fiber::new(vec![0.3, 0.7]).unwrap();
        assert!(ReducedState::new(vec![0.3, 0.0], &f).is_ok());
        assert!(ReducedState::new(vec![0.4, 0.0], &f).is_err());
        assert!(ReducedState::new(vec![0.1], &f).is_err());
    }
}
