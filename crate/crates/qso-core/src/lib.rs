//! Dynamics of a many-locus trait-frequency system and its exact linear
//! decomposition.
//!
//! A population state over `m` loci is a point of the simplex S^{2m-1}:
//! coordinates come in per-locus pairs `(x_{2i-1}, x_{2i})` holding the two
//! frequencies at locus `i`.  One generation applies a quadratic map built
//! from pairwise interaction coefficients `a_ij ∈ [0, 1]`; the pair sums
//! `c_i = x_{2i-1} + x_{2i}` never change, so every trajectory lives on a
//! fiber indexed by `c`, and on that fiber the quadratic dynamics *is* a
//! linear map `u ↦ B_c u` on the odd coordinates.  That makes the long-run
//! behaviour solvable in closed form: eigenvalues, trajectory limits, and
//! the full fixed-point set all come out of `B_c` and its companion
//! `H_c = I - B_c`.
//!
//! The crate is organized module-per-concept:
//!
//! * [`simplex`] — validated states in paired-coordinate layout;
//! * [`coeffs`] — the interaction coefficient matrix and its structural flags;
//! * [`operator`] — the quadratic map in both written forms, disequilibrium,
//!   and iteration to convergence;
//! * [`cubic`] — the heredity interaction table, a cubic stochastic tensor
//!   reproducing the map as a quadratic form;
//! * [`fiber`] — pair sums, fibers, and exact removal of zero-mass loci;
//! * [`linear`] — the fiber matrix `B_c` and the conjugacy with the
//!   nonlinear map;
//! * [`spectral`] — eigenvalues, the left Perron vector, and closed-form
//!   trajectory limits;
//! * [`fixed_points`] — the fixed-point set through the kernel of `H_c`;
//! * [`scenario`] — JSON scenario files for the command-line tool;
//! * [`harness`] — the cross-verification battery comparing the nonlinear
//!   and linear/spectral routes;
//! * [`tol`] — the numerical tolerances shared by all of the above.
//!
//! # Example
//!
//! ```
//! use qso_core::{apply_w, predict_limit, CoefficientMatrix, SimplexPoint};
//!
//! // Two loci, symmetric interaction 1/2, all mass on the "mixed" corners.
//! let a = CoefficientMatrix::new(vec![vec![0.0, 0.5], vec![0.5, 0.0]])?;
//! let x0 = SimplexPoint::new(vec![0.5, 0.0, 0.0, 0.5])?;
//!
//! // One generation of the quadratic dynamics...
//! let x1 = apply_w(&a, &x0)?;
//! assert_eq!(x1.coords(), &[0.375, 0.125, 0.125, 0.375]);
//!
//! // ...and the exact limit of the whole trajectory, no iteration needed.
//! let prediction = predict_limit(&a, &x0)?;
//! assert!((prediction.beta() - 0.5).abs() < 1e-13);
//! for &v in prediction.limit().coords() {
//!     assert!((v - 0.25).abs() < 1e-13);
//! }
//! # Ok::<(), qso_core::QsoError>(())
//! ```

#![deny(missing_docs)]

pub mod coeffs;
pub mod cubic;
pub mod error;
pub mod fiber;
pub mod fixed_points;
pub mod harness;
pub mod linear;
pub mod operator;
pub mod scenario;
pub mod simplex;
pub mod spectral;
pub mod tol;

pub use coeffs::CoefficientMatrix;
pub use cubic::{build_cubic_matrix, CubicMatrix};
pub use error::QsoError;
pub use fiber::{fiber_of, reduce_zero_loci, Fiber, ReducedState, ReducedSystem};
pub use fixed_points::{
    build_hc, fixed_point_residual, fixed_points_on_fiber, is_fixed_point, FixedPointSet,
    HcMatrix,
};
pub use harness::{builtin_suite, run_scenario, run_suite, VerifyConfig, VerifyReport};
pub use linear::{
    build_bc, iterate_linear, linear_trajectory, restrict_consistency_check, ReducedMatrix,
};
pub use operator::{
    apply_w, apply_w_stochastic_form, linkage_disequilibrium, simulate_to_convergence, LdVector,
};
pub use scenario::{load_scenarios, parse_scenarios, Scenario};
pub use simplex::{validate_state, SimplexPoint};
pub use spectral::{
    analyze, analyze_on_fiber_of, left_perron_of, predict_limit, Eigenvalue, LimitPrediction,
    Spectrum,
};
