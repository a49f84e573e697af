//! Fixed points of the dynamics, characterized through the matrix `H_c`.
//!
//! A state is fixed exactly when its per-locus increments vanish, which on
//! the fiber with pair sums `c` says `H_c u = 0` with
//!
//! ```text
//! H[i][i] = Σ_{j≠i} a_ij c_j           H[i][k] = -c_i a_ik   (k ≠ i)
//! ```
//!
//! so `H_c = I - B_c` entry by entry, and the fixed points on the fiber are
//! the kernel of `H_c` intersected with the box `0 ≤ u_i ≤ c_i`.  Since
//! `H_c c = 0` always, the kernel contains the line through `c`; when it is
//! exactly one-dimensional the fixed-point set is the segment
//! `{ β c : β ∈ [0, 1] }` traversed by [`FixedPointSet::point_at`].

use serde::Serialize;

use crate::coeffs::CoefficientMatrix;
use crate::error::QsoError;
use crate::fiber::{fiber_of, Fiber};
use crate::simplex::SimplexPoint;
use crate::spectral::null_space;
use crate::tol::RANK_REL_EPS;

/// The matrix `H_c` together with the fiber it lives on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HcMatrix {
    h: Vec<Vec<f64>>, // row-major
    fiber: Fiber,
}

impl HcMatrix {
    /// Number of loci (the matrix is `m x m`).
    pub fn m(&self) -> usize {
        self.h.len()
    }

    /// The rows of `H_c`.
    pub fn h(&self) -> &[Vec<f64>] {
        &self.h
    }

    /// Entry `H[i][k]`.
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.h[i][k]
    }

    /// The fiber this matrix describes.
    pub fn fiber(&self) -> &Fiber {
        &self.fiber
    }

    /// Matrix-vector product `H u`.
    pub fn matvec(&self, u: &[f64]) -> Vec<f64> {
        assert_eq!(u.len(), self.m());
        self.h
            .iter()
            .map(|row| row.iter().zip(u).map(|(&hik, &uk)| hik * uk).sum())
            .collect()
    }

    /// Copy into a dense nalgebra matrix.
    pub fn to_dmatrix(&self) -> nalgebra::DMatrix<f64> {
        let m = self.m();
        nalgebra::DMatrix::from_fn(m, m, |i, k| self.h[i][k])
    }
}

/// Build `H_c` for coefficients `a` on fiber `c`.
pub fn build_hc(a: &CoefficientMatrix, fiber: &Fiber) -> Result<HcMatrix, QsoError> {
    let m = a.m();
    if fiber.m() != m {
        return Err(QsoError::DimensionMismatch { expected: m, got: fiber.m() });
    }
    let c = fiber.c();
    let mut h = vec![vec![0.0; m]; m];
    for i in 0..m {
        let mut diag = 0.0;
        for k in 0..m {
            if k == i {
                continue;
            }
            h[i][k] = -(c[i] * a.get(i, k));
            diag += a.get(i, k) * c[k];
        }
        h[i][i] = diag;
    }
    Ok(HcMatrix { h, fiber: fiber.clone() })
}

/// The fixed points of the dynamics on one fiber.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointSet {
    hc: HcMatrix,
    kernel: Vec<Vec<f64>>,
    is_segment: bool,
}

impl FixedPointSet {
    /// The matrix `H_c` the set was computed from.
    pub fn hc(&self) -> &HcMatrix {
        &self.hc
    }

    /// The fiber the fixed points live on.
    pub fn fiber(&self) -> &Fiber {
        self.hc.fiber()
    }

    /// Dimension of the numerical kernel of `H_c`.
    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    /// Orthonormal basis of the kernel, most-null direction first.
    pub fn kernel_basis(&self) -> &[Vec<f64>] {
        &self.kernel
    }

    /// Whether the fixed points form the segment `{ β c : β ∈ [0, 1] }`:
    /// the kernel is one-dimensional and spanned by the fiber vector.
    pub fn is_segment(&self) -> bool {
        self.is_segment
    }

    /// The fixed point `β c` assembled back into a full state, with pair
    /// parts `(β c_i, (1 - β) c_i)`.  Errors when `β` leaves `[0, 1]`.
    pub fn point_at(&self, beta: f64) -> Result<SimplexPoint, QsoError> {
        let c = self.fiber().c();
        let u: Vec<f64> = c.iter().map(|&ci| beta * ci).collect();
        SimplexPoint::from_pair_parts(c, &u)
    }
}

/// Compute the fixed-point set of the dynamics on one fiber.
pub fn fixed_points_on_fiber(
    a: &CoefficientMatrix,
    fiber: &Fiber,
) -> Result<FixedPointSet, QsoError> {
    let hc = build_hc(a, fiber)?;
    let kernel = null_space(&hc.to_dmatrix(), RANK_REL_EPS)?;
    let is_segment = kernel.len() == 1 && {
        let c = fiber.c();
        let cn = c.iter().map(|&v| v * v).sum::<f64>().sqrt();
        let overlap: f64 = kernel[0].iter().zip(c).map(|(&k, &ci)| k * ci).sum();
        cn > 0.0 && (overlap.abs() / cn - 1.0).abs() < 1e-8
    };
    Ok(FixedPointSet { hc, kernel, is_segment })
}

/// The fixed-point residual `‖H_c u‖_∞` of a state on its own fiber.
pub fn fixed_point_residual(a: &CoefficientMatrix, x: &SimplexPoint) -> Result<f64, QsoError> {
    if a.m() != x.m() {
        return Err(QsoError::DimensionMismatch { expected: a.m(), got: x.m() });
    }
    let (fiber, u) = fiber_of(x);
    let hc = build_hc(a, &fiber)?;
    Ok(hc.matvec(u.u()).iter().fold(0.0f64, |acc, v| acc.max(v.abs())))
}

/// Whether `x` is a fixed point, judged by `‖H_c u‖_∞ ≤ tol`.
pub fn is_fixed_point(a: &CoefficientMatrix, x: &SimplexPoint, tol: f64) -> Result<bool, QsoError> {
    Ok(fixed_point_residual(a, x)? <= tol)
}
