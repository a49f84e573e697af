//! Spectral analysis of the fiber matrix and closed-form trajectory limits.
//!
//! On a fiber with strictly positive pair sums and coefficients whose every
//! row has a positive off-diagonal sum, the matrix `B` from [`crate::linear`]
//! has spectrum inside the closed unit disk, and the eigenvalue 1 is simple
//! with right eigenvector `c`.  Writing `w` for the matching left eigenvector
//! normalized so that `wᵀ c = 1`, powers of `B` converge to the rank-one
//! projection `c wᵀ`, and therefore
//!
//! ```text
//! u_n = Bⁿ u_0  →  (wᵀ u_0) c        as n → ∞.
//! ```
//!
//! The scalar `β = wᵀ u_0` is conserved along trajectories, and the limit of
//! the full nonlinear dynamics started at `x⁰` is the point with pair parts
//! `(β c_i, (1 - β) c_i)`.  [`predict_limit`] computes all of this, after
//! first dropping zero-mass loci; it refuses (with a descriptive error
//! rather than a wrong answer) when a reduced locus is frozen or when the
//! eigenvalue 1 fails to be numerically simple.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::coeffs::CoefficientMatrix;
use crate::error::QsoError;
use crate::fiber::{fiber_of, reduce_zero_loci, Fiber};
use crate::linear::{build_bc, ReducedMatrix};
use crate::simplex::SimplexPoint;
use crate::tol::{DEFAULT_MAX_ITERS, EIGEN_ONE_EPS, RANK_REL_EPS};

/// One eigenvalue, kept as a plain `(re, im)` pair so results serialize
/// without a complex-number convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenvalue {
    /// Real part.
    pub re: f64,
    /// Imaginary part.
    pub im: f64,
}

impl Eigenvalue {
    /// Modulus `|λ|`.
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }

    /// Distance `|λ - 1|` in the complex plane.
    pub fn distance_to_one(&self) -> f64 {
        (self.re - 1.0).hypot(self.im)
    }
}

/// Sort descending by modulus; ties broken by descending real part, then
/// descending imaginary part.
pub(crate) fn sort_eigenvalues(eigs: &mut [Eigenvalue]) {
    eigs.sort_by(|x, y| {
        y.modulus()
            .total_cmp(&x.modulus())
            .then(y.re.total_cmp(&x.re))
            .then(y.im.total_cmp(&x.im))
    });
}

/// Eigenvalue data for one fiber matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    eigenvalues: Vec<Eigenvalue>,
    spectral_gap: f64,
    eigenvalue_one_count: usize,
    left_perron: Option<Vec<f64>>,
}

impl Spectrum {
    /// Eigenvalues sorted by descending modulus (ties by descending real,
    /// then imaginary, part).
    pub fn eigenvalues(&self) -> &[Eigenvalue] {
        &self.eigenvalues
    }

    /// Moduli in the same order as [`Self::eigenvalues`].
    pub fn moduli(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(Eigenvalue::modulus).collect()
    }

    /// `1 - max |λ|` over every eigenvalue except the single one closest
    /// to 1.  By convention `1.0` for a `1 x 1` matrix.
    pub fn spectral_gap(&self) -> f64 {
        self.spectral_gap
    }

    /// How many eigenvalues lie within [`EIGEN_ONE_EPS`] of 1.
    pub fn eigenvalue_one_count(&self) -> usize {
        self.eigenvalue_one_count
    }

    /// Whether the eigenvalue 1 is numerically simple.
    pub fn is_eigenvalue_one_simple(&self) -> bool {
        self.eigenvalue_one_count == 1
    }

    /// The left eigenvector `w` for eigenvalue 1, normalized so `wᵀ c = 1`.
    /// `None` when the eigenvalue is not simple or the normalization is
    /// degenerate.
    pub fn left_perron(&self) -> Option<&[f64]> {
        self.left_perron.as_deref()
    }
}

/// Orthonormal spanning set for the (numerical) null space of `mat`:
/// the right singular directions whose singular value is at most
/// `rel_eps` times the largest one.  Always returns at least one
/// direction — the one with the smallest singular value — so callers can
/// inspect the most-null direction even when the threshold test is empty.
pub(crate) fn null_space(
    mat: &DMatrix<f64>,
    rel_eps: f64,
) -> Result<Vec<Vec<f64>>, QsoError> {
    let svd = mat
        .clone()
        .try_svd(false, true, f64::EPSILON, 0)
        .ok_or(QsoError::EigensolverFailure)?;
    let vt = svd.v_t.ok_or(QsoError::EigensolverFailure)?;
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[i].total_cmp(&sv[j]));
    let mut dirs: Vec<Vec<f64>> = order
        .iter()
        .filter(|&&i| sv[i] <= rel_eps * smax)
        .map(|&i| vt.row(i).iter().cloned().collect())
        .collect();
    if dirs.is_empty() {
        dirs.push(vt.row(order[0]).iter().cloned().collect());
    }
    Ok(dirs)
}

/// Dimension of the numerical null space of `Bᵀ - I`, i.e. the geometric
/// multiplicity of the eigenvalue 1.
fn kernel_dim_of_bt_minus_i(b: &ReducedMatrix) -> Result<usize, QsoError> {
    let m = b.m();
    let mat = b.to_dmatrix().transpose() - DMatrix::<f64>::identity(m, m);
    let svd = mat
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or(QsoError::EigensolverFailure)?;
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    let dim = sv.iter().filter(|&&s| s <= RANK_REL_EPS * smax).count();
    Ok(dim.max(1))
}

/// The left eigenvector of `b` for eigenvalue 1, normalized so `wᵀ c = 1`.
pub fn left_perron_of(b: &ReducedMatrix) -> Result<Vec<f64>, QsoError> {
    let m = b.m();
    let mat = b.to_dmatrix().transpose() - DMatrix::<f64>::identity(m, m);
    let dirs = null_space(&mat, RANK_REL_EPS)?;
    let v = &dirs[0];
    let s: f64 = v.iter().zip(b.fiber().c()).map(|(&vi, &ci)| vi * ci).sum();
    if s.abs() < 1e-12 {
        return Err(QsoError::DegenerateNormalization);
    }
    Ok(v.iter().map(|&vi| vi / s).collect())
}

fn gap_from_sorted(eigs: &[Eigenvalue]) -> f64 {
    if eigs.len() <= 1 {
        return 1.0;
    }
    let closest = eigs
        .iter()
        .enumerate()
        .min_by(|(_, x), (_, y)| x.distance_to_one().total_cmp(&y.distance_to_one()))
        .map(|(i, _)| i)
        .unwrap();
    let rest_max = eigs
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != closest)
        .map(|(_, e)| e.modulus())
        .fold(0.0f64, f64::max);
    1.0 - rest_max
}

/// Eigen-analysis of one fiber matrix.  Never refuses: the counts and gap
/// describe whatever spectrum is present, and the left Perron vector is
/// included only when the eigenvalue 1 is simple and normalizable.
pub fn analyze(b: &ReducedMatrix) -> Spectrum {
    let mut eigs: Vec<Eigenvalue> = b
        .to_dmatrix()
        .complex_eigenvalues()
        .iter()
        .map(|z| Eigenvalue { re: z.re, im: z.im })
        .collect();
    sort_eigenvalues(&mut eigs);
    let one_count = eigs
        .iter()
        .filter(|e| e.distance_to_one() <= EIGEN_ONE_EPS)
        .count();
    let left = if one_count == 1 { left_perron_of(b).ok() } else { None };
    Spectrum {
        spectral_gap: gap_from_sorted(&eigs),
        eigenvalues: eigs,
        eigenvalue_one_count: one_count,
        left_perron: left,
    }
}

/// Build the fiber matrix for `a` on the fiber of `x` (no zero-locus
/// reduction) and analyze it.
pub fn analyze_on_fiber_of(
    a: &CoefficientMatrix,
    x: &SimplexPoint,
) -> Result<Spectrum, QsoError> {
    if a.m() != x.m() {
        return Err(QsoError::DimensionMismatch { expected: a.m(), got: x.m() });
    }
    let (fiber, _) = fiber_of(x);
    Ok(analyze(&build_bc(a, &fiber)?))
}

/// The closed-form limit of the trajectory started at one state, together
/// with everything the derivation produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitPrediction {
    limit: SimplexPoint,
    beta: f64,
    fiber: Fiber,
    left_perron: Vec<f64>,
    spectrum: Spectrum,
    zero_loci: Vec<usize>,
}

impl LimitPrediction {
    /// The predicted limit point on the original simplex.
    pub fn limit(&self) -> &SimplexPoint {
        &self.limit
    }

    /// The conserved scalar `β = wᵀ u⁰`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The fiber of the initial state.
    pub fn fiber(&self) -> &Fiber {
        &self.fiber
    }

    /// The left Perron vector re-embedded to the original loci (zero-mass
    /// loci carry weight 0).
    pub fn left_perron(&self) -> &[f64] {
        &self.left_perron
    }

    /// Spectrum of the fiber matrix on the reduced system.
    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// Loci dropped by the zero-mass reduction.
    pub fn zero_loci(&self) -> &[usize] {
        &self.zero_loci
    }

    /// The spectral gap of the reduced fiber matrix.
    pub fn spectral_gap(&self) -> f64 {
        self.spectrum.spectral_gap()
    }

    /// How many generations bring the linear dynamics within `tol` of the
    /// limit, estimated from the gap as `⌈ln tol / ln(1 - gap)⌉` and capped
    /// at [`DEFAULT_MAX_ITERS`].
    pub fn iterations_to(&self, tol: f64) -> u64 {
        let gap = self.spectrum.spectral_gap();
        if gap >= 1.0 {
            return 1;
        }
        if gap <= 0.0 || !(0.0..1.0).contains(&tol) {
            return DEFAULT_MAX_ITERS;
        }
        let n = (tol.ln() / (1.0 - gap).ln()).ceil();
        if !n.is_finite() || n >= DEFAULT_MAX_ITERS as f64 {
            DEFAULT_MAX_ITERS
        } else {
            (n as u64).max(1)
        }
    }
}

/// Predict the trajectory limit from `x0` in closed form.
///
/// Pipeline: split off the fiber, drop zero-mass loci, refuse if any
/// remaining locus is frozen (unless only one locus remains, where the
/// dynamics is the identity and the prediction is exact), build `B`,
/// check that the eigenvalue 1 is simple, then assemble `β c` back into a
/// full simplex point.
pub fn predict_limit(
    a: &CoefficientMatrix,
    x0: &SimplexPoint,
) -> Result<LimitPrediction, QsoError> {
    if a.m() != x0.m() {
        return Err(QsoError::DimensionMismatch { expected: a.m(), got: x0.m() });
    }
    let (fiber, u0) = fiber_of(x0);
    let reduced = reduce_zero_loci(a, &fiber, &u0)?;
    if reduced.kept.len() >= 2 {
        let frozen = reduced.a.frozen_loci();
        if !frozen.is_empty() {
            return Err(QsoError::FrozenLoci {
                loci: frozen.iter().map(|&i| reduced.kept[i]).collect(),
            });
        }
    }
    let b = build_bc(&reduced.a, &reduced.fiber)?;
    let spectrum = analyze(&b);
    if !spectrum.is_eigenvalue_one_simple() {
        return Err(QsoError::NonSimpleEigenvalueOne {
            kernel_dim: kernel_dim_of_bt_minus_i(&b)?,
        });
    }
    let w = match spectrum.left_perron() {
        Some(w) => w.to_vec(),
        None => return Err(QsoError::DegenerateNormalization),
    };
    let beta: f64 = w.iter().zip(reduced.u.u()).map(|(&wi, &ui)| wi * ui).sum();
    let u_lim: Vec<f64> = reduced.fiber.c().iter().map(|&ci| beta * ci).collect();
    let limit = SimplexPoint::from_pair_parts(fiber.c(), &reduced.reembed(&u_lim, 0.0))?;
    Ok(LimitPrediction {
        limit,
        beta,
        zero_loci: fiber.zero_set().to_vec(),
        left_perron: reduced.reembed(&w, 0.0),
        fiber,
        spectrum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::apply_w;
    use proptest::prelude::*;

    fn coeffs(rows: &[&[f64]]) -> CoefficientMatrix {
        CoefficientMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    /// Three loci, a[0][1] = a[1][0] = p, every other off-diagonal entry q.
    fn two_parameter_coeffs(p: f64, q: f64) -> CoefficientMatrix {
        coeffs(&[&[0.0, p, q], &[p, 0.0, q], &[q, q, 0.0]])
    }

    #[test]
    fn canonical_two_locus_spectrum() {
        let a = coeffs(&[&[0.0, 0.5], &[0.5, 0.0]]);
        let f = Fiber::new(vec![0.5, 0.5]).unwrap();
        let spec = analyze(&build_bc(&a, &f).unwrap());
        let eigs = spec.eigenvalues();
        assert_eq!(eigs.len(), 2);
        assert!((eigs[0].re - 1.0).abs() < 1e-12 && eigs[0].im.abs() < 1e-12);
        assert!((eigs[1].re - 0.5).abs() < 1e-12 && eigs[1].im.abs() < 1e-12);
        assert!((spec.spectral_gap() - 0.5).abs() < 1e-12);
        assert!(spec.is_eigenvalue_one_simple());
        let w = spec.left_perron().unwrap();
        assert!((w[0] - 1.0).abs() < 1e-12 && (w[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_parameter_family_has_closed_form_eigenvalues() {
        // On the fiber (al, be, ga) the spectrum is {1, 1-q, 1-p+(p-q) ga}:
        // independent of how mass splits between the first two loci.
        let (p, q) = (0.5, 0.25);
        let f = Fiber::new(vec![0.2, 0.3, 0.5]).unwrap();
        let spec = analyze(&build_bc(&two_parameter_coeffs(p, q), &f).unwrap());
        let moduli = spec.moduli();
        assert!((moduli[0] - 1.0).abs() < 1e-10);
        assert!((moduli[1] - 0.75).abs() < 1e-10);
        assert!((moduli[2] - 0.625).abs() < 1e-10);
        assert!((spec.spectral_gap() - 0.25).abs() < 1e-10);
    }

    #[test]
    fn two_parameter_eigenvalues_ignore_the_first_two_masses() {
        let (p, q) = (0.9, 0.3);
        let ga = 0.4;
        let a = two_parameter_coeffs(p, q);
        let f1 = Fiber::new(vec![0.1, 0.5, ga]).unwrap();
        let f2 = Fiber::new(vec![0.45, 0.15, ga]).unwrap();
        let m1 = analyze(&build_bc(&a, &f1).unwrap()).moduli();
        let m2 = analyze(&build_bc(&a, &f2).unwrap()).moduli();
        for (x, y) in m1.iter().zip(&m2) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
        assert!((m1[1] - (1.0 - q)).abs() < 1e-12);
        assert!((m1[2] - (1.0 - p + (p - q) * ga)).abs() < 1e-12);
    }

    #[test]
    fn left_perron_is_all_ones_for_symmetric_coefficients() {
        let a = coeffs(&[&[0.0, 0.7, 0.2], &[0.7, 0.0, 0.4], &[0.2, 0.4, 0.0]]);
        let f = Fiber::new(vec![0.25, 0.35, 0.4]).unwrap();
        let spec = analyze(&build_bc(&a, &f).unwrap());
        let w = spec.left_perron().unwrap();
        for (i, &wi) in w.iter().enumerate() {
            assert!((wi - 1.0).abs() < 1e-12, "w[{i}] = {wi}");
        }
    }

    #[test]
    fn eigenvalue_sort_order() {
        let mut eigs = vec![
            Eigenvalue { re: 0.3, im: -0.4 },
            Eigenvalue { re: -0.5, im: 0.0 },
            Eigenvalue { re: 0.3, im: 0.4 },
            Eigenvalue { re: 1.0, im: 0.0 },
            Eigenvalue { re: 0.5, im: 0.0 },
        ];
        sort_eigenvalues(&mut eigs);
        // 1.0 first; then the three of modulus 0.5 ordered by descending
        // real part, conjugates with +im first; 0.3±0.4i share a modulus
        // with ±0.5 exactly (3-4-5 triangles).
        assert_eq!(eigs[0], Eigenvalue { re: 1.0, im: 0.0 });
        assert_eq!(eigs[1], Eigenvalue { re: 0.5, im: 0.0 });
        assert_eq!(eigs[2], Eigenvalue { re: 0.3, im: 0.4 });
        assert_eq!(eigs[3], Eigenvalue { re: 0.3, im: -0.4 });
        assert_eq!(eigs[4], Eigenvalue { re: -0.5, im: 0.0 });
    }

    #[test]
    fn canonical_prediction() {
        let a = coeffs(&[&[0.0, 0.5], &[0.5, 0.0]]);
        let x0 = SimplexPoint::new(vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let p = predict_limit(&a, &x0).unwrap();
        assert!((p.beta() - 0.5).abs() < 1e-13);
        assert!((p.spectral_gap() - 0.5).abs() < 1e-12);
        for &v in p.limit().coords() {
            assert!((v - 0.25).abs() < 1e-13);
        }
        assert!(p.zero_loci().is_empty());
    }

    #[test]
    fn prediction_matches_a_long_nonlinear_run() {
        let a = coeffs(&[&[0.0, 0.9, 0.2], &[0.1, 0.0, 0.7], &[0.4, 0.6, 0.0]]);
        let x0 = SimplexPoint::new(vec![0.15, 0.05, 0.3, 0.1, 0.25, 0.15]).unwrap();
        let p = predict_limit(&a, &x0).unwrap();
        let mut x = x0;
        for _ in 0..200 {
            x = apply_w(&a, &x).unwrap();
        }
        for (i, (&got, &want)) in x.coords().iter().zip(p.limit().coords()).enumerate() {
            assert!((got - want).abs() < 1e-9, "coord {i}: {got} vs {want}");
        }
    }

    #[test]
    fn zero_mass_loci_are_dropped_and_stay_at_zero() {
        let a = coeffs(&[&[0.0, 0.9, 0.2], &[0.1, 0.0, 0.7], &[0.4, 0.6, 0.0]]);
        let x0 = SimplexPoint::new(vec![0.2, 0.1, 0.0, 0.0, 0.3, 0.4]).unwrap();
        let p = predict_limit(&a, &x0).unwrap();
        assert_eq!(p.zero_loci(), &[1]);
        assert_eq!(p.limit().coords()[2], 0.0);
        assert_eq!(p.limit().coords()[3], 0.0);
        assert_eq!(p.left_perron()[1], 0.0);
        // And the reduced prediction still matches the nonlinear limit.
        let mut x = x0;
        for _ in 0..400 {
            x = apply_w(&a, &x).unwrap();
        }
        for (&got, &want) in x.coords().iter().zip(p.limit().coords()) {
            assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn single_surviving_locus_is_exact_identity() {
        let a = coeffs(&[&[0.0, 0.8], &[0.3, 0.0]]);
        let x0 = SimplexPoint::new(vec![0.6, 0.4, 0.0, 0.0]).unwrap();
        let p = predict_limit(&a, &x0).unwrap();
        assert_eq!(p.zero_loci(), &[1]);
        assert!((p.beta() - 0.6).abs() < 1e-15);
        assert_eq!(p.spectral_gap(), 1.0);
        assert_eq!(p.iterations_to(1e-9), 1);
        for (&got, &want) in p.limit().coords().iter().zip(x0.coords()) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn frozen_locus_is_refused_with_original_indices() {
        // Locus 0 has zero off-diagonal row; locus 2 carries no mass, so
        // the reduction maps reduced index 0 back to original index 0.
        let a = coeffs(&[&[0.0, 0.0, 0.5], &[0.6, 0.0, 0.1], &[0.2, 0.3, 0.0]]);
        let x0 = SimplexPoint::new(vec![0.3, 0.2, 0.25, 0.25, 0.0, 0.0]).unwrap();
        match predict_limit(&a, &x0) {
            Err(QsoError::FrozenLoci { loci }) => assert_eq!(loci, vec![0]),
            other => panic!("expected FrozenLoci, got {other:?}"),
        }
    }

    #[test]
    fn decoupled_blocks_are_refused_as_non_simple() {
        let a = coeffs(&[
            &[0.0, 0.5, 0.0, 0.0],
            &[0.5, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.5],
            &[0.0, 0.0, 0.5, 0.0],
        ]);
        let x0 = SimplexPoint::new(vec![0.125; 8]).unwrap();
        match predict_limit(&a, &x0) {
            Err(QsoError::NonSimpleEigenvalueOne { kernel_dim }) => assert_eq!(kernel_dim, 2),
            other => panic!("expected NonSimpleEigenvalueOne, got {other:?}"),
        }
    }

    #[test]
    fn beta_is_conserved_along_the_nonlinear_trajectory() {
        let a = coeffs(&[&[0.0, 0.9, 0.2], &[0.1, 0.0, 0.7], &[0.4, 0.6, 0.0]]);
        let x0 = SimplexPoint::new(vec![0.15, 0.05, 0.3, 0.1, 0.25, 0.15]).unwrap();
        let p = predict_limit(&a, &x0).unwrap();
        let w = p.left_perron();
        let beta_of = |x: &SimplexPoint| -> f64 {
            (0..3).map(|i| w[i] * x.coords()[2 * i]).sum()
        };
        let mut x = x0;
        for _ in 0..50 {
            x = apply_w(&a, &x).unwrap();
            assert!((beta_of(&x) - p.beta()).abs() < 1e-12);
        }
    }

    #[test]
    fn iteration_estimate_grows_as_the_gap_shrinks() {
        let a = coeffs(&[&[0.0, 0.5], &[0.5, 0.0]]);
        let x0 = SimplexPoint::new(vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let p = predict_limit(&a, &x0).unwrap();
        // gap = 1/2: 2^{-30} < 1e-9 <= 2^{-29}, so the estimate is 30.
        assert_eq!(p.iterations_to(1e-9), 30);
        assert!(p.iterations_to(1e-12) > p.iterations_to(1e-9));
        assert_eq!(p.iterations_to(-1.0), DEFAULT_MAX_ITERS);
    }

    fn arb_positive_system(
        max_m: usize,
    ) -> impl Strategy<Value = (CoefficientMatrix, SimplexPoint)> {
        (2..=max_m).prop_flat_map(|m| {
            (
                proptest::collection::vec(0.05..=1.0f64, m * m),
                proptest::collection::vec(1e-2..1.0f64, 2 * m),
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
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn eigenvalue_sum_matches_the_trace((a, x) in arb_positive_system(6)) {
            let (fiber, _) = fiber_of(&x);
            let b = build_bc(&a, &fiber).unwrap();
            let spec = analyze(&b);
            let trace: f64 = (0..a.m()).map(|i| b.get(i, i)).sum();
            let re_sum: f64 = spec.eigenvalues().iter().map(|e| e.re).sum();
            let im_sum: f64 = spec.eigenvalues().iter().map(|e| e.im).sum();
            prop_assert!((re_sum - trace).abs() < 1e-10);
            prop_assert!(im_sum.abs() < 1e-10);
        }

        #[test]
        fn positive_systems_predict_cleanly((a, x) in arb_positive_system(6)) {
            let p = predict_limit(&a, &x).unwrap();
            prop_assert!((0.0 - 1e-9..=1.0 + 1e-9).contains(&p.beta()));
            prop_assert!(p.spectral_gap() > 0.0);
            prop_assert!(p.spectrum().is_eigenvalue_one_simple());
            // One generation applied to the limit moves nothing.
            let step = apply_w(&a, p.limit()).unwrap();
            for (f, l) in step.coords().iter().zip(p.limit().coords()) {
                prop_assert!((f - l).abs() < 1e-12);
            }
        }
    }
}
