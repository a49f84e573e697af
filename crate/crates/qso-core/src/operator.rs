//! The quadratic evolution operator and its two evaluation forms.
//!
//! One generation maps a state `x` to `x'` pairwise:
//!
//! ```text
//! x'_{2i-1} = x_{2i-1} + d_i        (odd slot of locus i)
//! x'_{2i}   = x_{2i}   - d_i        (even slot of locus i)
//!
//! d_i = Σ_{j≠i} a_ij · (x_{2i} x_{2j-1} - x_{2i-1} x_{2j})
//! ```
//!
//! The vector `d` is the per-locus *disequilibrium*: it measures how far
//! each pair is from cross-locus balance, and it is exactly the one-step
//! increment of the odd coordinates.  Mass only moves within a pair, so the
//! pair sums `x_{2i-1} + x_{2i}` are conserved — that is what makes the
//! whole analysis in [`crate::fiber`] and [`crate::spectral`] possible.
//!
//! The same map can be rewritten so every monomial carries a nonnegative
//! coefficient (grouping with the simplex identity `Σ_k x_k = 1`), which is
//! the form that exhibits the map as a quadratic *stochastic* operator:
//!
//! ```text
//! x'_{2i-1} = x_{2i-1} Σ_j (x_{2j-1} + (1 - a_ij) x_{2j}) + x_{2i} Σ_j a_ij x_{2j-1}
//! x'_{2i}   = x_{2i}   Σ_j (x_{2j}   + (1 - a_ij) x_{2j-1}) + x_{2i-1} Σ_j a_ij x_{2j}
//! ```
//!
//! Both evaluations are implemented ([`apply_w`] and
//! [`apply_w_stochastic_form`]) and must agree to within
//! [`crate::tol::FORM_EQ_EPS`]; the verification battery checks exactly
//! that.  In the `j = i` terms of the rewritten form the self-coefficient
//! cancels identically — the diagonal of the coefficient matrix is never
//! read by either form.

use crate::coeffs::CoefficientMatrix;
use crate::error::QsoError;
use crate::simplex::SimplexPoint;

/// Per-locus disequilibrium vector, length `m`.  `d[i]` is exactly the
/// one-step increment `x'_{2i-1} - x_{2i-1}`.
pub type LdVector = Vec<f64>;

fn check_dims(a: &CoefficientMatrix, x: &SimplexPoint) -> Result<(), QsoError> {
    if a.m() != x.m() {
        return Err(QsoError::DimensionMismatch { expected: a.m(), got: x.m() });
    }
    Ok(())
}

/// The disequilibrium `d` at state `coords` (length `2m`, trusted).
fn ld_raw(a: &CoefficientMatrix, coords: &[f64]) -> LdVector {
    let m = a.m();
    debug_assert_eq!(coords.len(), 2 * m);
    let mut d = vec![0.0; m];
    for i in 0..m {
        let (xo, xe) = (coords[2 * i], coords[2 * i + 1]);
        let mut acc = 0.0;
        for j in 0..m {
            if j == i {
                continue; // self-term vanishes identically
            }
            let (yo, ye) = (coords[2 * j], coords[2 * j + 1]);
            acc += a.get(i, j) * (xe * yo - xo * ye);
        }
        d[i] = acc;
    }
    d
}

/// Compute the per-locus disequilibrium vector at `x`.
///
/// `d_i = Σ_{j≠i} a_ij (x_{2i} x_{2j-1} - x_{2i-1} x_{2j})`; it vanishes
/// exactly at fixed points and tends to zero along every trajectory.
pub fn linkage_disequilibrium(
    a: &CoefficientMatrix,
    x: &SimplexPoint,
) -> Result<LdVector, QsoError> {
    check_dims(a, x)?;
    Ok(ld_raw(a, x.coords()))
}

/// One generation of the map in the difference form, on raw coordinates.
///
/// No validation and no clamping is performed: the caller gets the plain
/// arithmetic result (coordinates may undershoot zero by rounding).  `coords`
/// must have length `2 * a.m()`.  Useful for residual checks that must see
/// the untouched output; library users normally want [`apply_w`].
pub fn apply_w_raw(a: &CoefficientMatrix, coords: &[f64]) -> Vec<f64> {
    assert_eq!(coords.len(), 2 * a.m(), "state length must be 2m");
    let d = ld_raw(a, coords);
    let mut out = coords.to_vec();
    for i in 0..a.m() {
        out[2 * i] += d[i];
        out[2 * i + 1] -= d[i];
    }
    out
}

/// One generation of the map in the explicitly stochastic form, on raw
/// coordinates.  Same contract as [`apply_w_raw`].
pub fn apply_w_stochastic_form_raw(a: &CoefficientMatrix, coords: &[f64]) -> Vec<f64> {
    let m = a.m();
    assert_eq!(coords.len(), 2 * m, "state length must be 2m");
    let mut out = vec![0.0; 2 * m];
    for i in 0..m {
        let (xo, xe) = (coords[2 * i], coords[2 * i + 1]);
        // Odd slot: x_o Σ_j (y_o + (1-a_ij) y_e) + x_e Σ_j a_ij y_o
        // Even slot: x_e Σ_j (y_e + (1-a_ij) y_o) + x_o Σ_j a_ij y_e
        // In the j = i term the self-coefficient cancels, so it is taken as
        // zero and the diagonal entry is never read.
        let (mut s1, mut s2, mut t1, mut t2) = (0.0, 0.0, 0.0, 0.0);
        for j in 0..m {
            let (yo, ye) = (coords[2 * j], coords[2 * j + 1]);
            if j == i {
                s1 += yo + ye;
                t1 += ye + yo;
            } else {
                let aij = a.get(i, j);
                s1 += yo + (1.0 - aij) * ye;
                s2 += aij * yo;
                t1 += ye + (1.0 - aij) * yo;
                t2 += aij * ye;
            }
        }
        out[2 * i] = xo * s1 + xe * s2;
        out[2 * i + 1] = xe * t1 + xo * t2;
    }
    out
}

/// Apply one generation of the operator (difference form).
pub fn apply_w(a: &CoefficientMatrix, x: &SimplexPoint) -> Result<SimplexPoint, QsoError> {
    check_dims(a, x)?;
    Ok(SimplexPoint::from_operator_output(apply_w_raw(a, x.coords())))
}

/// Apply one generation of the operator (stochastic form).
///
/// Algebraically identical to [`apply_w`]; kept as a separate code path so
/// the two can cross-check each other.
pub fn apply_w_stochastic_form(
    a: &CoefficientMatrix,
    x: &SimplexPoint,
) -> Result<SimplexPoint, QsoError> {
    check_dims(a, x)?;
    Ok(SimplexPoint::from_operator_output(apply_w_stochastic_form_raw(a, x.coords())))
}

/// Iterate the operator from `x0` until the sup-norm one-step change drops
/// below `tol` or `max_iters` generations have run.
///
/// Returns the final state, the number of generations performed, and whether
/// the tolerance was met.  The one-step change equals the disequilibrium
/// sup-norm, so "converged" means the state is a numerical fixed point.
pub fn simulate_to_convergence(
    a: &CoefficientMatrix,
    x0: &SimplexPoint,
    max_iters: u64,
    tol: f64,
) -> Result<(SimplexPoint, u64, bool), QsoError> {
    check_dims(a, x0)?;
    let m = a.m();
    let mut coords = x0.coords().to_vec();
    let mut n = 0u64;
    loop {
        let d = ld_raw(a, &coords);
        let step = d.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if step < tol {
            return Ok((SimplexPoint::from_operator_output(coords), n, true));
        }
        if n >= max_iters {
            return Ok((SimplexPoint::from_operator_output(coords), n, false));
        }
        for i in 0..m {
            coords[2 * i] += d[i];
            coords[2 * i + 1] -= d[i];
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn coeffs(rows: &[&[f64]]) -> CoefficientMatrix {
        CoefficientMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn point(coords: &[f64]) -> SimplexPoint {
        SimplexPoint::new(coords.to_vec()).unwrap()
    }

    /// Two-locus closed form, written independently of the library code:
    /// with state (x, y, u, v), a = a[0][1], b = a[1][0]:
    ///   x' = x + a (y u - x v),  y' = y - a (y u - x v),
    ///   u' = u - b (y u - x v),  v' = v + b (y u - x v).
    fn two_locus_oracle(a: f64, b: f64, s: &[f64]) -> [f64; 4] {
        let (x, y, u, v) = (s[0], s[1], s[2], s[3]);
        let q = y * u - x * v;
        [x + a * q, y - a * q, u - b * q, v + b * q]
    }

    #[test]
    fn canonical_two_locus_step() {
        // Hand-computed: x = (1/2, 0, 0, 1/2), a = b = 1/2 gives
        // q = 0*0 - 1/4 = -1/4, so x' = (3/8, 1/8, 1/8, 3/8).
        let a = coeffs(&[&[0.0, 0.5], &[0.5, 0.0]]);
        let x = point(&[0.5, 0.0, 0.0, 0.5]);
        let y = apply_w(&a, &x).unwrap();
        assert_eq!(y.coords(), &[0.375, 0.125, 0.125, 0.375]);
    }

    #[test]
    fn canonical_two_locus_disequilibrium() {
        let a = coeffs(&[&[0.0, 0.5], &[0.5, 0.0]]);
        let x = point(&[0.5, 0.0, 0.0, 0.5]);
        let d = linkage_disequilibrium(&a, &x).unwrap();
        assert_eq!(d, vec![-0.125, 0.125]);
        // d is exactly the odd-coordinate increment.
        let y = apply_w(&a, &x).unwrap();
        assert_eq!(y.coords()[0] - x.coords()[0], d[0]);
        assert_eq!(y.coords()[2] - x.coords()[2], d[1]);
    }

    #[test]
    fn zero_coefficients_give_identity() {
        let a = CoefficientMatrix::zeros(3).unwrap();
        let x = point(&[0.1, 0.2, 0.3, 0.1, 0.25, 0.05]);
        let y = apply_w(&a, &x).unwrap();
        assert_eq!(y.coords(), x.coords());
        let d = linkage_disequilibrium(&a, &x).unwrap();
        assert_eq!(d, vec![0.0; 3]);
    }

    #[test]
    fn frozen_locus_pair_is_untouched() {
        // Locus 1 has an all-zero off-diagonal row: its pair must not move,
        // even though other loci still interact with it.
        let a = coeffs(&[&[0.0, 0.0, 0.7], &[0.0, 0.0, 0.0], &[0.4, 0.9, 0.0]]);
        let x = point(&[0.15, 0.05, 0.3, 0.1, 0.25, 0.15]);
        let y = apply_w(&a, &x).unwrap();
        assert_eq!(y.pair(1), x.pair(1));
        assert_ne!(y.pair(2), x.pair(2));
    }

    #[test]
    fn matches_two_locus_closed_form() {
        let cases = [
            (0.3, 0.8, [0.2, 0.3, 0.4, 0.1]),
            (1.0, 0.0, [0.25, 0.25, 0.25, 0.25]),
            (0.05, 0.97, [0.7, 0.1, 0.05, 0.15]),
        ];
        for (av, bv, s) in cases {
            let a = coeffs(&[&[0.0, av], &[bv, 0.0]]);
            let got = apply_w_raw(&a, &s);
            let want = two_locus_oracle(av, bv, &s);
            for k in 0..4 {
                assert!(
                    (got[k] - want[k]).abs() < 1e-16,
                    "a={av}, b={bv}, k={k}: {} vs {}",
                    got[k],
                    want[k]
                );
            }
        }
    }

    #[test]
    fn diagonal_is_never_read() {
        // Same off-diagonal entries, wildly different diagonals: identical output.
        let a1 = coeffs(&[&[0.0, 0.3], &[0.6, 0.0]]);
        let a2 = coeffs(&[&[1.0, 0.3], &[0.6, 1.0]]);
        let x = [0.3, 0.2, 0.1, 0.4];
        assert_eq!(apply_w_raw(&a1, &x), apply_w_raw(&a2, &x));
        assert_eq!(
            apply_w_stochastic_form_raw(&a1, &x),
            apply_w_stochastic_form_raw(&a2, &x)
        );
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = CoefficientMatrix::zeros(3).unwrap();
        let x = point(&[0.5, 0.0, 0.0, 0.5]);
        assert!(matches!(
            apply_w(&a, &x),
            Err(QsoError::DimensionMismatch { expected: 3, got: 2 })
        ));
        assert!(linkage_disequilibrium(&a, &x).is_err());
    }

    #[test]
    fn converges_on_the_canonical_case() {
        let a = coeffs(&[&[0.0, 0.5], &[0.5, 0.0]]);
        let x = point(&[0.5, 0.0, 0.0, 0.5]);
        let (end, n, converged) = simulate_to_convergence(&a, &x, 10_000, 1e-12).unwrap();
        assert!(converged, "did not converge in {n} steps");
        for &v in end.coords() {
            assert!((v - 0.25).abs() < 1e-10, "coordinate {v} far from 1/4");
        }
    }

    /// Random strictly-interior states paired with arbitrary coefficients.
    fn arb_system(max_m: usize) -> impl Strategy<Value = (CoefficientMatrix, SimplexPoint)> {
        (2..=max_m).prop_flat_map(|m| {
            (
                proptest::collection::vec(0.0..=1.0f64, m * m),
                proptest::collection::vec(1e-3..1.0f64, 2 * m),
            )
                .prop_map(move |(flat, raw)| {
                    let rows = flat.chunks(m).map(|r| r.to_vec()).collect();
                    let total: f64 = raw.iter().sum();
                    let coords = raw.iter().map(|v| v / total).collect();
                    (
                        CoefficientMatrix::new(rows).unwrap(),
                        SimplexPoint::new(coords).unwrap(),
                    )
                })
        })
    }

    proptest! {
        #[test]
        fn preserves_the_simplex((a, x) in arb_system(8)) {
            let raw = apply_w_raw(&a, x.coords());
            let sum: f64 = raw.iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-13);
            for &v in &raw {
                prop_assert!(v >= -1e-13);
            }
        }

        #[test]
        fn conserves_pair_sums((a, x) in arb_system(8)) {
            let raw = apply_w_raw(&a, x.coords());
            for i in 0..a.m() {
                let before = x.coords()[2 * i] + x.coords()[2 * i + 1];
                let after = raw[2 * i] + raw[2 * i + 1];
                prop_assert!((before - after).abs() < 1e-15, "pair {i}: {before} vs {after}");
            }
        }

        #[test]
        fn both_forms_agree((a, x) in arb_system(8)) {
            let d = apply_w_raw(&a, x.coords());
            let s = apply_w_stochastic_form_raw(&a, x.coords());
            for k in 0..d.len() {
                prop_assert!((d[k] - s[k]).abs() <= crate::tol::FORM_EQ_EPS);
            }
        }

        #[test]
        fn disequilibrium_is_the_odd_increment((a, x) in arb_system(8)) {
            // raw[2i] = fl(x + d), so recovering d by subtraction costs at
            // most one rounding of a value below 1.
            let d = linkage_disequilibrium(&a, &x).unwrap();
            let raw = apply_w_raw(&a, x.coords());
            for i in 0..a.m() {
                let inc = raw[2 * i] - x.coords()[2 * i];
                prop_assert!((inc - d[i]).abs() <= 1e-15, "locus {i}: {inc} vs {}", d[i]);
            }
        }
    }
}
