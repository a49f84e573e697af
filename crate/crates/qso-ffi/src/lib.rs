//! C ABI for the dynamics toolkit.
//!
//! The surface is a classic opaque-handle design: [`qso_model_new`] builds a
//! model from a flat row-major coefficient matrix and every other call takes
//! the handle plus caller-allocated output buffers.  All functions return a
//! [`QsoStatus`]; output buffers are written only when the status is
//! `QSO_STATUS_OK`.  States use the same layout as the Rust crate: `2m`
//! coordinates in per-locus pairs, summing to one.
//!
//! Panics never cross the boundary — any internal panic is caught and
//! reported as `QSO_STATUS_PANIC`.  The C header is generated into
//! `include/qso.h` by the build script.

use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use qso_core::{
    analyze_on_fiber_of, apply_w, is_fixed_point, linkage_disequilibrium, predict_limit,
    simulate_to_convergence, CoefficientMatrix, QsoError, SimplexPoint,
};

/// Status code returned by every library call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsoStatus {
    /// Success: output buffers hold the result.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A dimension was unusable (fewer than two loci, or a malformed state
    /// length).
    BadDimension = 2,
    /// The state is not a point of the simplex (negative coordinate or sum
    /// away from one).
    NotASimplexPoint = 3,
    /// Two arguments disagree about the number of loci.
    DimensionMismatch = 4,
    /// A coefficient lies outside `[0, 1]` or is not finite.
    CoefficientOutOfRange = 5,
    /// Every locus has zero mass; no fiber exists.
    AllLociZero = 6,
    /// A locus exchanges nothing with the others, so the closed-form limit
    /// is not determined by the spectral route.
    FrozenLoci = 7,
    /// Eigenvalue one of the fiber matrix is not simple; no unique
    /// projection exists.
    NonSimpleEigenvalueOne = 8,
    /// The eigensolver did not produce a usable decomposition.
    EigensolverFailure = 9,
    /// The left eigenvector could not be normalized against the fiber.
    DegenerateNormalization = 10,
    /// A scenario was malformed (unused by this surface, reserved).
    InvalidScenario = 11,
    /// An internal panic was caught at the boundary.
    Panic = 12,
}

fn status_of(e: &QsoError) -> QsoStatus {
    match e {
        QsoError::BadDimension { .. } => QsoStatus::BadDimension,
        QsoError::NotASimplexPoint { .. } => QsoStatus::NotASimplexPoint,
        QsoError::DimensionMismatch { .. } => QsoStatus::DimensionMismatch,
        QsoError::CoefficientOutOfRange { .. } => QsoStatus::CoefficientOutOfRange,
        QsoError::AllLociZero => QsoStatus::AllLociZero,
        QsoError::FrozenLoci { .. } => QsoStatus::FrozenLoci,
        QsoError::NonSimpleEigenvalueOne { .. } => QsoStatus::NonSimpleEigenvalueOne,
        QsoError::EigensolverFailure => QsoStatus::EigensolverFailure,
        QsoError::DegenerateNormalization => QsoStatus::DegenerateNormalization,
        QsoError::InvalidScenario(_) => QsoStatus::InvalidScenario,
    }
}

/// An opaque model handle: the validated coefficient matrix.
pub struct QsoModel {
    a: CoefficientMatrix,
}

fn guarded<F: FnOnce() -> QsoStatus>(f: F) -> QsoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => QsoStatus::Panic,
    }
}

/// Read and validate a state of `2m` coordinates.
///
/// # Safety
/// `state` must point to `2m` readable doubles.
unsafe fn read_state(state: *const f64, m: usize) -> Result<SimplexPoint, QsoError> {
    let raw = std::slice::from_raw_parts(state, 2 * m);
    SimplexPoint::new(raw.to_vec())
}

/// Build a model from an `m x m` row-major coefficient matrix.
///
/// Entries must be finite and lie in `[0, 1]`; the diagonal is stored but
/// never read by the dynamics.  At least two loci are required.  On success
/// `*out_model` owns the handle; release it with `qso_model_free`.
///
/// # Safety
/// `coefficients` must point to `m * m` readable doubles and `out_model` to
/// a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn qso_model_new(
    m: usize,
    coefficients: *const f64,
    out_model: *mut *mut QsoModel,
) -> QsoStatus {
    guarded(|| {
        if coefficients.is_null() || out_model.is_null() {
            return QsoStatus::NullPointer;
        }
        if m < 2 {
            return QsoStatus::BadDimension;
        }
        let flat = unsafe { std::slice::from_raw_parts(coefficients, m * m) };
        let rows: Vec<Vec<f64>> = flat.chunks(m).map(<[f64]>::to_vec).collect();
        match CoefficientMatrix::new(rows) {
            Ok(a) => {
                unsafe { *out_model = Box::into_raw(Box::new(QsoModel { a })) };
                QsoStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Release a model created by `qso_model_new`.  A null handle is a no-op.
///
/// # Safety
/// `model` must be null or a handle from `qso_model_new` that has not been
/// freed already.
#[no_mangle]
pub unsafe extern "C" fn qso_model_free(model: *mut QsoModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Number of loci of the model; zero when the handle is null.
///
/// # Safety
/// `model` must be null or a live handle from `qso_model_new`.
#[no_mangle]
pub unsafe extern "C" fn qso_model_loci(model: *const QsoModel) -> usize {
    if model.is_null() {
        0
    } else {
        unsafe { &*model }.a.m()
    }
}

/// Apply one generation of the dynamics to `state` (length `2m`), writing
/// the next state to `out_state` (length `2m`; may alias `state`).
///
/// # Safety
/// `model` must be a live handle; `state` must point to `2m` readable and
/// `out_state` to `2m` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qso_apply(
    model: *const QsoModel,
    state: *const f64,
    out_state: *mut f64,
) -> QsoStatus {
    guarded(|| {
        if model.is_null() || state.is_null() || out_state.is_null() {
            return QsoStatus::NullPointer;
        }
        let a = &unsafe { &*model }.a;
        let x = match unsafe { read_state(state, a.m()) } {
            Ok(x) => x,
            Err(e) => return status_of(&e),
        };
        match apply_w(a, &x) {
            Ok(y) => {
                let out = unsafe { std::slice::from_raw_parts_mut(out_state, 2 * a.m()) };
                out.copy_from_slice(y.coords());
                QsoStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Per-locus interaction imbalance at `state`: `out_ld` (length `m`)
/// receives the increments the next generation would add to the odd
/// coordinates.  All entries are zero exactly at the fixed points.
///
/// # Safety
/// `model` must be a live handle; `state` must point to `2m` readable and
/// `out_ld` to `m` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qso_linkage_disequilibrium(
    model: *const QsoModel,
    state: *const f64,
    out_ld: *mut f64,
) -> QsoStatus {
    guarded(|| {
        if model.is_null() || state.is_null() || out_ld.is_null() {
            return QsoStatus::NullPointer;
        }
        let a = &unsafe { &*model }.a;
        let x = match unsafe { read_state(state, a.m()) } {
            Ok(x) => x,
            Err(e) => return status_of(&e),
        };
        match linkage_disequilibrium(a, &x) {
            Ok(ld) => {
                let out = unsafe { std::slice::from_raw_parts_mut(out_ld, a.m()) };
                out.copy_from_slice(&ld);
                QsoStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Iterate the dynamics from `state` until the one-step change drops below
/// `tol` in sup norm or `max_iters` generations have run.  `out_state`
/// (length `2m`) receives the final state; `out_iterations` and
/// `out_converged` are optional and may be null.
///
/// # Safety
/// `model` must be a live handle; `state` must point to `2m` readable and
/// `out_state` to `2m` writable doubles; `out_iterations` and
/// `out_converged` must each be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qso_simulate(
    model: *const QsoModel,
    state: *const f64,
    max_iters: u64,
    tol: f64,
    out_state: *mut f64,
    out_iterations: *mut u64,
    out_converged: *mut bool,
) -> QsoStatus {
    guarded(|| {
        if model.is_null() || state.is_null() || out_state.is_null() {
            return QsoStatus::NullPointer;
        }
        let a = &unsafe { &*model }.a;
        let x0 = match unsafe { read_state(state, a.m()) } {
            Ok(x) => x,
            Err(e) => return status_of(&e),
        };
        match simulate_to_convergence(a, &x0, max_iters, tol) {
            Ok((end, iterations, converged)) => {
                let out = unsafe { std::slice::from_raw_parts_mut(out_state, 2 * a.m()) };
                out.copy_from_slice(end.coords());
                if !out_iterations.is_null() {
                    unsafe { *out_iterations = iterations };
                }
                if !out_converged.is_null() {
                    unsafe { *out_converged = converged };
                }
                QsoStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Compute the exact trajectory limit from `state` in closed form.
/// `out_limit` (length `2m`) receives the limit; `out_beta` and `out_gap`
/// are optional and receive the conserved projection coefficient and the
/// spectral gap.  Returns `QSO_STATUS_FROZEN_LOCI` or
/// `QSO_STATUS_NON_SIMPLE_EIGENVALUE_ONE` when no closed form exists.
///
/// # Safety
/// `model` must be a live handle; `state` must point to `2m` readable and
/// `out_limit` to `2m` writable doubles; `out_beta` and `out_gap` must each
/// be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qso_predict_limit(
    model: *const QsoModel,
    state: *const f64,
    out_limit: *mut f64,
    out_beta: *mut f64,
    out_gap: *mut f64,
) -> QsoStatus {
    guarded(|| {
        if model.is_null() || state.is_null() || out_limit.is_null() {
            return QsoStatus::NullPointer;
        }
        let a = &unsafe { &*model }.a;
        let x0 = match unsafe { read_state(state, a.m()) } {
            Ok(x) => x,
            Err(e) => return status_of(&e),
        };
        match predict_limit(a, &x0) {
            Ok(prediction) => {
                let out = unsafe { std::slice::from_raw_parts_mut(out_limit, 2 * a.m()) };
                out.copy_from_slice(prediction.limit().coords());
                if !out_beta.is_null() {
                    unsafe { *out_beta = prediction.beta() };
                }
                if !out_gap.is_null() {
                    unsafe { *out_gap = prediction.spectral_gap() };
                }
                QsoStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Eigenvalues of the fiber matrix at `state`, sorted by descending
/// modulus.  `out_re` and `out_im` (length `m` each) receive the real and
/// imaginary parts.  The fiber is taken as-is: zero-mass loci keep their
/// rows.
///
/// # Safety
/// `model` must be a live handle; `state` must point to `2m` readable
/// doubles; `out_re` and `out_im` must each point to `m` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qso_spectrum(
    model: *const QsoModel,
    state: *const f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QsoStatus {
    guarded(|| {
        if model.is_null() || state.is_null() || out_re.is_null() || out_im.is_null() {
            return QsoStatus::NullPointer;
        }
        let a = &unsafe { &*model }.a;
        let x = match unsafe { read_state(state, a.m()) } {
            Ok(x) => x,
            Err(e) => return status_of(&e),
        };
        match analyze_on_fiber_of(a, &x) {
            Ok(spectrum) => {
                let re = unsafe { std::slice::from_raw_parts_mut(out_re, a.m()) };
                let im = unsafe { std::slice::from_raw_parts_mut(out_im, a.m()) };
                for (k, e) in spectrum.eigenvalues().iter().enumerate() {
                    re[k] = e.re;
                    im[k] = e.im;
                }
                QsoStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Test whether `state` is a fixed point of the dynamics, within `tol` on
/// the per-locus increments.  Writes the verdict to `out_fixed`.
///
/// # Safety
/// `model` must be a live handle; `state` must point to `2m` readable
/// doubles; `out_fixed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qso_is_fixed_point(
    model: *const QsoModel,
    state: *const f64,
    tol: f64,
    out_fixed: *mut bool,
) -> QsoStatus {
    guarded(|| {
        if model.is_null() || state.is_null() || out_fixed.is_null() {
            return QsoStatus::NullPointer;
        }
        let a = &unsafe { &*model }.a;
        let x = match unsafe { read_state(state, a.m()) } {
            Ok(x) => x,
            Err(e) => return status_of(&e),
        };
        match is_fixed_point(a, &x, tol) {
            Ok(fixed) => {
                unsafe { *out_fixed = fixed };
                QsoStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Human-readable, static name of a status code.
#[no_mangle]
pub extern "C" fn qso_status_name(status: QsoStatus) -> *const c_char {
    let name: &'static str = match status {
        QsoStatus::Ok => "ok\0",
        QsoStatus::NullPointer => "null pointer\0",
        QsoStatus::BadDimension => "bad dimension\0",
        QsoStatus::NotASimplexPoint => "not a simplex point\0",
        QsoStatus::DimensionMismatch => "dimension mismatch\0",
        QsoStatus::CoefficientOutOfRange => "coefficient out of range\0",
        QsoStatus::AllLociZero => "all loci zero\0",
        QsoStatus::FrozenLoci => "frozen loci\0",
        QsoStatus::NonSimpleEigenvalueOne => "non-simple eigenvalue one\0",
        QsoStatus::EigensolverFailure => "eigensolver failure\0",
        QsoStatus::DegenerateNormalization => "degenerate normalization\0",
        QsoStatus::InvalidScenario => "invalid scenario\0",
        QsoStatus::Panic => "internal panic\0",
    };
    name.as_ptr().cast()
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn qso_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
