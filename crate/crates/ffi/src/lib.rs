//! C ABI for the isonlcs library.
//!
//! Handles are opaque pointers created and released by the paired
//! `*_new`/`*_free` functions; every fallible call reports an
//! [`IsonlcsStatus`] and writes results through out-pointers only on
//! `Ok`. The generated header lives in `include/isonlcs.h` (regenerate
//! with `cargo build -p isonlcs-ffi --features generate-header`).

use std::panic::{catch_unwind, AssertUnwindSafe};

use isonlcs::error::Error;
use isonlcs::fockspace::{algebra_residual, AlgebraIdentity, TruncatedBasis};
use isonlcs::quasiprob;
use isonlcs::states::{self, StateVector, Verdict};
use isonlcs::witnesses::{self, WitnessOperators};
use num_complex::Complex64;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsonlcsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    TruncationInadequate = 3,
    DegenerateWitness = 4,
    UnsupportedState = 5,
    UndefinedWitness = 6,
    NonFinite = 7,
    InternalError = 8,
}

/// Selector for `isonlcs_algebra_residual`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsonlcsAlgebraIdentity {
    Quad = 0,
    CasimirLeft = 1,
    CasimirRight = 2,
    HeisI = 3,
    HeisII = 4,
    HeisIII = 5,
    NumIII = 6,
}

/// Squeezing witnesses of one state (see the core crate for definitions).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct IsonlcsSqueezeReport {
    pub r: f64,
    pub theta: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub var_big_x: f64,
    pub var_big_p: f64,
}

/// Opaque truncated-basis handle.
pub struct IsonlcsBasis(TruncatedBasis);

/// Opaque state handle.
pub struct IsonlcsState(StateVector);

/// Opaque handle for the precomputed witness operator products.
pub struct IsonlcsWitnessOps(WitnessOperators);

fn status_of(err: &Error) -> IsonlcsStatus {
    match err {
        Error::Truncation { .. } => IsonlcsStatus::TruncationInadequate,
        Error::DegenerateWitness { .. } => IsonlcsStatus::DegenerateWitness,
        Error::UnsupportedState { .. } => IsonlcsStatus::UnsupportedState,
        Error::UndefinedWitness(_) => IsonlcsStatus::UndefinedWitness,
        Error::NonFinite(_) => IsonlcsStatus::NonFinite,
        Error::Domain(_) | Error::Usage(_) | Error::Range { .. } | Error::BasisMismatch => {
            IsonlcsStatus::InvalidArgument
        }
    }
}

/// Run `body`, mapping panics to `InternalError` so they never unwind across
/// the C boundary.
fn guarded<F: FnOnce() -> IsonlcsStatus>(body: F) -> IsonlcsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => IsonlcsStatus::InternalError,
    }
}

/// Create a truncated shifted basis with highest shifted index `n_max`
/// (`n_max >= 8`). Returns null on invalid input.
#[no_mangle]
pub extern "C" fn isonlcs_basis_new(n_max: usize) -> *mut IsonlcsBasis {
    match TruncatedBasis::new(n_max) {
        Ok(basis) => Box::into_raw(Box::new(IsonlcsBasis(basis))),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Release a basis handle. Null is a no-op.
///
/// # Safety
/// `basis` must come from `isonlcs_basis_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_basis_free(basis: *mut IsonlcsBasis) {
    if !basis.is_null() {
        drop(Box::from_raw(basis));
    }
}

/// Matrix dimension (`n_max + 1`) of the basis.
///
/// # Safety
/// `basis` must be a live handle from `isonlcs_basis_new`.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_basis_dim(basis: *const IsonlcsBasis) -> usize {
    if basis.is_null() {
        return 0;
    }
    (*basis).0.dim()
}

unsafe fn build_state<F>(
    basis: *const IsonlcsBasis,
    out_state: *mut *mut IsonlcsState,
    build: F,
) -> IsonlcsStatus
where
    F: FnOnce(&TruncatedBasis) -> Result<StateVector, Error>,
{
    if basis.is_null() || out_state.is_null() {
        return IsonlcsStatus::NullPointer;
    }
    let basis = &(*basis).0;
    guarded(AssertUnwindSafe(|| match build(basis) {
        Ok(state) => {
            *out_state = Box::into_raw(Box::new(IsonlcsState(state)));
            IsonlcsStatus::Ok
        }
        Err(err) => status_of(&err),
    }))
}

/// Build the nonlinear coherent state `alpha = re + i im` on the basis.
///
/// # Safety
/// `basis` must be a live handle; `out_state` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_state_nlcs(
    basis: *const IsonlcsBasis,
    re: f64,
    im: f64,
    out_state: *mut *mut IsonlcsState,
) -> IsonlcsStatus {
    build_state(basis, out_state, |b| {
        states::nlcs_build(Complex64::new(re, im), b)
    })
}

/// Build the canonical coherent state `zeta = re + i im` on the basis.
///
/// # Safety
/// `basis` must be a live handle; `out_state` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_state_canonical(
    basis: *const IsonlcsBasis,
    re: f64,
    im: f64,
    out_state: *mut *mut IsonlcsState,
) -> IsonlcsStatus {
    build_state(basis, out_state, |b| {
        states::canonical_build(Complex64::new(re, im), b)
    })
}

/// Build the shifted Fock level `|ñ>` on the basis.
///
/// # Safety
/// `basis` must be a live handle; `out_state` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_state_fock(
    basis: *const IsonlcsBasis,
    shifted_level: usize,
    out_state: *mut *mut IsonlcsState,
) -> IsonlcsStatus {
    build_state(basis, out_state, |b| StateVector::fock(b, shifted_level))
}

/// Release a state handle. Null is a no-op.
///
/// # Safety
/// `state` must come from one of the state constructors and not have been
/// freed.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_state_free(state: *mut IsonlcsState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of amplitudes the state carries (the basis dimension).
///
/// # Safety
/// `state` must be a live state handle.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_state_len(state: *const IsonlcsState) -> usize {
    if state.is_null() {
        return 0;
    }
    (*state).0.amplitudes().len()
}

/// Copy the complex amplitudes into caller-owned arrays of length `len`.
///
/// # Safety
/// `out_re`/`out_im` must point to writable arrays of at least `len`
/// doubles; `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_state_amplitudes(
    state: *const IsonlcsState,
    out_re: *mut f64,
    out_im: *mut f64,
    len: usize,
) -> IsonlcsStatus {
    if state.is_null() || out_re.is_null() || out_im.is_null() {
        return IsonlcsStatus::NullPointer;
    }
    let amps = (*state).0.amplitudes();
    if len < amps.len() {
        return IsonlcsStatus::InvalidArgument;
    }
    for (i, c) in amps.iter().enumerate() {
        *out_re.add(i) = c.re;
        *out_im.add(i) = c.im;
    }
    IsonlcsStatus::Ok
}

/// Copy the occupation probabilities into a caller-owned array of length
/// `len`.
///
/// # Safety
/// `out` must point to a writable array of at least `len` doubles; `state`
/// must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_state_probabilities(
    state: *const IsonlcsState,
    out: *mut f64,
    len: usize,
) -> IsonlcsStatus {
    if state.is_null() || out.is_null() {
        return IsonlcsStatus::NullPointer;
    }
    let probs = (*state).0.probabilities();
    if len < probs.len() {
        return IsonlcsStatus::InvalidArgument;
    }
    for (i, p) in probs.iter().enumerate() {
        *out.add(i) = *p;
    }
    IsonlcsStatus::Ok
}

/// Precompute the witness operator products for a basis (reusable across
/// states and sweeps). Returns null on failure.
///
/// # Safety
/// `basis` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_witness_ops_new(
    basis: *const IsonlcsBasis,
) -> *mut IsonlcsWitnessOps {
    if basis.is_null() {
        return std::ptr::null_mut();
    }
    let basis = &(*basis).0;
    match catch_unwind(AssertUnwindSafe(|| WitnessOperators::build(basis))) {
        Ok(ops) => Box::into_raw(Box::new(IsonlcsWitnessOps(ops))),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Release a witness-operator handle. Null is a no-op.
///
/// # Safety
/// `ops` must come from `isonlcs_witness_ops_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_witness_ops_free(ops: *mut IsonlcsWitnessOps) {
    if !ops.is_null() {
        drop(Box::from_raw(ops));
    }
}

/// A3, Mandel Q, g2(0) and mean occupation of a state.
///
/// # Safety
/// All handles must be live and built on the same basis; out-pointers must
/// be valid.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_stats(
    state: *const IsonlcsState,
    ops: *const IsonlcsWitnessOps,
    out_a3: *mut f64,
    out_q: *mut f64,
    out_g2: *mut f64,
    out_mean_k0: *mut f64,
) -> IsonlcsStatus {
    if state.is_null() || ops.is_null() {
        return IsonlcsStatus::NullPointer;
    }
    if out_a3.is_null() || out_q.is_null() || out_g2.is_null() || out_mean_k0.is_null() {
        return IsonlcsStatus::NullPointer;
    }
    let state = &(*state).0;
    let ops = &(*ops).0;
    guarded(AssertUnwindSafe(|| {
        match witnesses::stats_row(state, ops) {
            Ok(row) => {
                *out_a3 = row.a3;
                *out_q = row.q;
                *out_g2 = row.g2;
                *out_mean_k0 = row.mean_k0;
                IsonlcsStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    }))
}

/// Quadrature and amplitude-squared squeezing witnesses of a state.
///
/// # Safety
/// All handles must be live and built on the same basis; `out` must be
/// valid.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_squeeze(
    state: *const IsonlcsState,
    ops: *const IsonlcsWitnessOps,
    out: *mut IsonlcsSqueezeReport,
) -> IsonlcsStatus {
    if state.is_null() || ops.is_null() || out.is_null() {
        return IsonlcsStatus::NullPointer;
    }
    let state = &(*state).0;
    let ops = &(*ops).0;
    guarded(AssertUnwindSafe(|| {
        match witnesses::squeeze_report(state, ops) {
            Ok(rep) => {
                *out = IsonlcsSqueezeReport {
                    r: rep.r,
                    theta: rep.theta,
                    i1: rep.i1,
                    i2: rep.i2,
                    i3: rep.i3,
                    i4: rep.i4,
                    var_x: rep.var_x,
                    var_p: rep.var_p,
                    var_big_x: rep.var_big_x,
                    var_big_p: rep.var_big_p,
                };
                IsonlcsStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    }))
}

/// s-parameterized quasi-probability `F(x + i p, s)` of a state (`s = 0`
/// Wigner, `s = -1` Husimi; `s < 1` required).
///
/// # Safety
/// `state` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_s_function(
    state: *const IsonlcsState,
    x: f64,
    p: f64,
    s: f64,
    out: *mut f64,
) -> IsonlcsStatus {
    if state.is_null() || out.is_null() {
        return IsonlcsStatus::NullPointer;
    }
    let state = &(*state).0;
    guarded(AssertUnwindSafe(|| {
        match quasiprob::s_function(state, Complex64::new(x, p), s) {
            Ok(value) => {
                *out = value;
                IsonlcsStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    }))
}

/// Quadrature distribution `P(x, phi)` of a state at one point.
///
/// # Safety
/// `state` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_quadrature_distribution(
    state: *const IsonlcsState,
    x: f64,
    phi: f64,
    out: *mut f64,
) -> IsonlcsStatus {
    if state.is_null() || out.is_null() {
        return IsonlcsStatus::NullPointer;
    }
    let state = &(*state).0;
    guarded(AssertUnwindSafe(|| {
        let grid = quasiprob::quadrature_distribution(state, &[x], &[phi]);
        *out = grid.value(0, 0);
        IsonlcsStatus::Ok
    }))
}

/// Number of singular P-function coefficients of a nonlinear coherent state
/// (order + 1). Returns 0 for unsupported states.
///
/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_pfunction_len(state: *const IsonlcsState) -> usize {
    if state.is_null() {
        return 0;
    }
    match quasiprob::p_function_coefficients(&(*state).0) {
        Ok(rep) => rep.coefficients.len(),
        Err(_) => 0,
    }
}

/// Copy the signed singular P-function coefficients into a caller-owned
/// array of length `len` (see `isonlcs_pfunction_len`).
///
/// # Safety
/// `out` must point to a writable array of at least `len` doubles; `state`
/// must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_pfunction_coefficients(
    state: *const IsonlcsState,
    out: *mut f64,
    len: usize,
) -> IsonlcsStatus {
    if state.is_null() || out.is_null() {
        return IsonlcsStatus::NullPointer;
    }
    let state = &(*state).0;
    guarded(AssertUnwindSafe(
        || match quasiprob::p_function_coefficients(state) {
            Ok(rep) => {
                if len < rep.coefficients.len() {
                    return IsonlcsStatus::InvalidArgument;
                }
                for (i, c) in rep.coefficients.iter().enumerate() {
                    *out.add(i) = *c;
                }
                IsonlcsStatus::Ok
            }
            Err(err) => status_of(&err),
        },
    ))
}

/// Max-absolute-entry residual of one ladder-algebra identity on the
/// interior columns of the basis.
///
/// # Safety
/// `basis` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_algebra_residual(
    basis: *const IsonlcsBasis,
    which: IsonlcsAlgebraIdentity,
    out: *mut f64,
) -> IsonlcsStatus {
    if basis.is_null() || out.is_null() {
        return IsonlcsStatus::NullPointer;
    }
    let basis = &(*basis).0;
    let which = match which {
        IsonlcsAlgebraIdentity::Quad => AlgebraIdentity::Quad,
        IsonlcsAlgebraIdentity::CasimirLeft => AlgebraIdentity::CasimirLeft,
        IsonlcsAlgebraIdentity::CasimirRight => AlgebraIdentity::CasimirRight,
        IsonlcsAlgebraIdentity::HeisI => AlgebraIdentity::HeisI,
        IsonlcsAlgebraIdentity::HeisII => AlgebraIdentity::HeisII,
        IsonlcsAlgebraIdentity::HeisIII => AlgebraIdentity::HeisIII,
        IsonlcsAlgebraIdentity::NumIII => AlgebraIdentity::NumIII,
    };
    guarded(AssertUnwindSafe(|| {
        *out = algebra_residual(basis, which);
        IsonlcsStatus::Ok
    }))
}

/// Growth verdict for the dual-pair series at `alpha = re + i im`:
/// writes 1 when the series diverges, 0 when it converges.
///
/// # Safety
/// `out_diverges` must be valid.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_dual_series_diverges(
    re: f64,
    im: f64,
    n_terms: usize,
    out_diverges: *mut i32,
) -> IsonlcsStatus {
    if out_diverges.is_null() {
        return IsonlcsStatus::NullPointer;
    }
    guarded(AssertUnwindSafe(|| {
        match states::dual_series_diagnose(Complex64::new(re, im), n_terms) {
            Ok(rep) => {
                *out_diverges = match rep.verdict {
                    Verdict::Diverges => 1,
                    Verdict::Converges => 0,
                };
                IsonlcsStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    }))
}

/// Eigenfunction value `psi_n(x)` of the oscillator (levels 0, 3, 4, ...).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn isonlcs_eigen_psi(level: usize, x: f64, out: *mut f64) -> IsonlcsStatus {
    if out.is_null() {
        return IsonlcsStatus::NullPointer;
    }
    guarded(AssertUnwindSafe(|| {
        match isonlcs::eigenbasis::psi(level, x) {
            Ok(value) => {
                *out = value;
                IsonlcsStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    }))
}
