//! C ABI for the `rabi-var` solvers.
//!
//! Parameters and exact solutions are opaque heap handles created by a
//! `*_new` or solve call and released with the matching `*_free`. Every
//! fallible function returns a [`RabiStatus`]; on failure a description is
//! available from [`rabi_last_error_message`] on the same thread. Panics
//! never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rabi_var::exact::TruncationPolicy;
use rabi_var::{
    classify_regime, energy_functional, energy_gradient, ground_state, solve_fixed_point,
    solve_grwa, solve_numeric, Error, ExactSolution, MinimizerOptions, ModelParams, RegimeCase,
    VariationalSolution,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RabiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Domain = 3,
    NotConverged = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RabiMethod {
    /// Global minimum of the energy functional.
    Variational = 0,
    /// Small-coupling fixed-point displacement.
    FixedPoint = 1,
    /// Displacement fixed at `g/omega`.
    Grwa = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RabiRegime {
    /// Large coupling.
    I = 1,
    /// Small coupling or weak splitting.
    Ii = 2,
    /// Intermediate coupling.
    Iii = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RabiObservables {
    /// `<a^dagger a>`
    pub mean_photon: f64,
    /// `<sigma_z (a^dagger + a)>`
    pub sz_correlation: f64,
    /// `<sigma_x>`
    pub sigma_x: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RabiVariational {
    pub lambda: f64,
    pub theta: f64,
    pub energy: f64,
    pub alpha: f64,
    pub beta: f64,
    pub observables: RabiObservables,
    pub gradient_residual: f64,
}

/// Opaque model parameters.
pub struct RabiParams {
    inner: ModelParams,
}

/// Opaque exact ground state.
pub struct RabiExact {
    inner: ExactSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> RabiStatus {
    match e {
        Error::InvalidParameter { .. } => RabiStatus::InvalidParameter,
        Error::Domain { .. } => RabiStatus::Domain,
        Error::MinimizerNotConverged { .. } | Error::ExactNotConverged { .. } => {
            RabiStatus::NotConverged
        }
        Error::SweepRow { source, .. } => status_of(source),
        Error::Io { .. } => RabiStatus::InvalidParameter,
    }
}

/// Runs `f`, records any failure and converts it to a status.
fn guard(f: impl FnOnce() -> Result<(), (RabiStatus, String)>) -> RabiStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".to_string());
        Err((RabiStatus::Panic, format!("panic: {msg}")))
    });
    match outcome {
        Ok(()) => {
            set_last_error("");
            RabiStatus::Ok
        }
        Err((status, msg)) => {
            set_last_error(&msg);
            status
        }
    }
}

fn lift(e: Error) -> (RabiStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (RabiStatus, String) {
    (RabiStatus::NullPointer, format!("`{name}` is NULL"))
}

/// # Safety
/// `p` is NULL or a live handle from [`rabi_params_new`].
unsafe fn params<'a>(p: *const RabiParams) -> Result<&'a ModelParams, (RabiStatus, String)> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| null("params"))
}

/// # Safety
/// `out` is NULL or valid for a write of `T`.
unsafe fn write<T>(out: *mut T, name: &str, value: T) -> Result<(), (RabiStatus, String)> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

fn observables(o: &rabi_var::Observables) -> RabiObservables {
    RabiObservables {
        mean_photon: o.mean_photon,
        sz_correlation: o.sz_correlation,
        sigma_x: o.sigma_x,
    }
}

fn variational(s: &VariationalSolution) -> RabiVariational {
    RabiVariational {
        lambda: s.lambda,
        theta: s.theta,
        energy: s.energy,
        alpha: s.alpha,
        beta: s.beta,
        observables: observables(&s.observables),
        gradient_residual: s.gradient_residual,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rabi_version() -> *const c_char {
    static VERSION: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(s) => s,
            Err(_) => panic!("version string"),
        };
    VERSION.as_ptr()
}

/// Message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn rabi_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates a parameter handle for
/// `H = omega a^dagger a - (Omega/2) sigma_x + (epsilon/2) sigma_z + g sigma_z (a^dagger + a)`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn rabi_params_new(
    omega: f64,
    big_omega: f64,
    epsilon: f64,
    g: f64,
    out: *mut *mut RabiParams,
) -> RabiStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = ModelParams::new(omega, big_omega, epsilon, g).map_err(lift)?;
        out.write(Box::into_raw(Box::new(RabiParams { inner })));
        Ok(())
    })
}

/// Creates a parameter handle from the biased form
/// `omega a^dagger a + g sigma_x (a + a^dagger) + delta sigma_z + epsilon_prime sigma_x`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn rabi_params_from_biased(
    omega: f64,
    delta: f64,
    epsilon_prime: f64,
    g: f64,
    out: *mut *mut RabiParams,
) -> RabiStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let biased = rabi_var::BiasedParams::new(omega, delta, epsilon_prime, g).map_err(lift)?;
        out.write(Box::into_raw(Box::new(RabiParams {
            inner: biased.to_rotated(),
        })));
        Ok(())
    })
}

/// Releases a parameter handle. NULL is ignored.
///
/// # Safety
/// `p` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rabi_params_free(p: *mut RabiParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Reads the four rotated-form parameters. Any output pointer may be NULL.
///
/// # Safety
/// `p` is a live handle; non-NULL outputs are valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rabi_params_get(
    p: *const RabiParams,
    omega: *mut f64,
    big_omega: *mut f64,
    epsilon: *mut f64,
    g: *mut f64,
) -> RabiStatus {
    guard(|| {
        let p = params(p)?;
        for (out, v) in [
            (omega, p.omega()),
            (big_omega, p.big_omega()),
            (epsilon, p.epsilon()),
            (g, p.g()),
        ] {
            if !out.is_null() {
                out.write(v);
            }
        }
        Ok(())
    })
}

/// Variational energy `E0(lambda)`.
///
/// # Safety
/// `p` is a live handle and `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn rabi_energy_functional(
    p: *const RabiParams,
    lambda: f64,
    out: *mut f64,
) -> RabiStatus {
    guard(|| write(out, "out", energy_functional(params(p)?, lambda)))
}

/// `dE0/dlambda`.
///
/// # Safety
/// `p` is a live handle and `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn rabi_energy_gradient(
    p: *const RabiParams,
    lambda: f64,
    out: *mut f64,
) -> RabiStatus {
    guard(|| write(out, "out", energy_gradient(params(p)?, lambda)))
}

/// Variational ground state. `tol` and `max_iter` configure the minimizer
/// and are ignored by the closed-form methods; pass 0 for the defaults.
///
/// # Safety
/// `p` is a live handle and `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn rabi_solve_variational(
    p: *const RabiParams,
    method: RabiMethod,
    tol: f64,
    max_iter: usize,
    out: *mut RabiVariational,
) -> RabiStatus {
    guard(|| {
        let p = params(p)?;
        let sol = match method {
            RabiMethod::Variational => {
                let defaults = MinimizerOptions::default();
                let opts = MinimizerOptions {
                    tol: if tol == 0.0 { defaults.tol } else { tol },
                    max_iter: if max_iter == 0 {
                        defaults.max_iter
                    } else {
                        max_iter
                    },
                };
                solve_numeric(p, opts).map_err(lift)?
            }
            RabiMethod::FixedPoint => solve_fixed_point(p),
            RabiMethod::Grwa => solve_grwa(p),
        };
        write(out, "out", variational(&sol))
    })
}

/// Regime classification of a parameter point.
///
/// # Safety
/// `p` is a live handle and `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn rabi_classify_regime(
    p: *const RabiParams,
    out: *mut RabiRegime,
) -> RabiStatus {
    guard(|| {
        let case = match classify_regime(params(p)?).case_label {
            RegimeCase::LargeCoupling => RabiRegime::I,
            RegimeCase::SmallCoupling => RabiRegime::Ii,
            RegimeCase::Intermediate => RabiRegime::Iii,
        };
        write(out, "out", case)
    })
}

/// Exact ground state by truncated-basis diagonalization. `n_max` caps the
/// Fock cutoff; 0 selects the default.
///
/// # Safety
/// `p` is a live handle and `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn rabi_exact_solve(
    p: *const RabiParams,
    n_max: usize,
    out: *mut *mut RabiExact,
) -> RabiStatus {
    guard(|| {
        let p = params(p)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut policy = TruncationPolicy::default();
        if n_max != 0 {
            policy.n_max = n_max;
            policy.n_start = policy.n_start.min(n_max);
        }
        let inner = ground_state(p, &policy).map_err(lift)?;
        out.write(Box::into_raw(Box::new(RabiExact { inner })));
        Ok(())
    })
}

/// Releases an exact solution. NULL is ignored.
///
/// # Safety
/// `s` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rabi_exact_free(s: *mut RabiExact) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Ground energy, or NaN for a NULL handle.
///
/// # Safety
/// `s` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rabi_exact_energy(s: *const RabiExact) -> f64 {
    s.as_ref().map_or(f64::NAN, |s| s.inner.energy)
}

/// Fock cutoff at which the solution converged, or 0 for a NULL handle.
///
/// # Safety
/// `s` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rabi_exact_cutoff(s: *const RabiExact) -> usize {
    s.as_ref().map_or(0, |s| s.inner.n_used)
}

/// Ground-state observables and `<sigma_z>`. `sigma_z` may be NULL.
///
/// # Safety
/// `s` is a live handle, `out` is valid for a write, `sigma_z` is NULL or
/// valid for a write.
#[no_mangle]
pub unsafe extern "C" fn rabi_exact_observables(
    s: *const RabiExact,
    out: *mut RabiObservables,
    sigma_z: *mut f64,
) -> RabiStatus {
    guard(|| {
        let s = &s.as_ref().ok_or_else(|| null("solution"))?.inner;
        write(out, "out", observables(&s.observables))?;
        if !sigma_z.is_null() {
            sigma_z.write(s.sigma_z);
        }
        Ok(())
    })
}

/// Copies the ground eigenvector, spin-major: amplitudes of `|down, n>` for
/// `n = 0..=cutoff` followed by those of `|up, n>`. `len` is always set to
/// the vector length; pass a NULL `buf` to query it.
///
/// # Safety
/// `s` is a live handle, `len` is valid for reads and writes, and `buf` is
/// NULL or valid for `*len` writes.
#[no_mangle]
pub unsafe extern "C" fn rabi_exact_vector(
    s: *const RabiExact,
    buf: *mut f64,
    len: *mut usize,
) -> RabiStatus {
    guard(|| {
        let v = &s.as_ref().ok_or_else(|| null("solution"))?.inner.vector;
        if len.is_null() {
            return Err(null("len"));
        }
        let capacity = len.read();
        len.write(v.len());
        if buf.is_null() {
            return Ok(());
        }
        if capacity < v.len() {
            return Err((
                RabiStatus::BufferTooSmall,
                format!("buffer holds {capacity} values, {} needed", v.len()),
            ));
        }
        ptr::copy_nonoverlapping(v.as_ptr(), buf, v.len());
        Ok(())
    })
}
