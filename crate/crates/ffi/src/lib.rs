//! C ABI over the graphene coherent-state library.
//!
//! Conventions:
//! * handles (`GcsParams`, `GcsExpansion`) are opaque pointers owned by the
//!   caller and released with the matching `gcs_*_free`;
//! * fallible functions return [`GcsStatus`] and write through out-pointers
//!   only on success;
//! * [`gcs_last_error_message`] returns a thread-local description of the
//!   most recent failure, valid until the next failing call on that thread.

use std::cell::RefCell;
use std::ffi::CString;
use std::os::raw::c_char;

use num_complex::Complex64 as C64;

use graphene_cs::dynamics;
use graphene_cs::observables;
use graphene_cs::spectrum;
use graphene_cs::{
    annihilation_residual, build_coherent_polar, Branch, CoherentExpansion, Family,
    PhysicalParams, System,
};

/// Status of a C API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcsStatus {
    Ok = 0,
    /// Arguments rejected before computation.
    InvalidArgument = 1,
    /// Computation started but failed numerically.
    NumericalError = 2,
    /// A required pointer was null.
    NullPointer = 3,
}

/// Which effective two-band model.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcsSystem {
    Bilayer = 0,
    Monolayer = 1,
}

/// Coherent-state family (the weight function is the family's standard one).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcsFamily {
    A = 0,
    B = 1,
    C = 2,
}

/// Electron (+) or hole (-) spectrum branch.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcsBranch {
    Electron = 0,
    Hole = 1,
}

/// Moments of the dimensionless quadratures.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcsMoments {
    pub mean_q: f64,
    pub mean_p: f64,
    pub mean_q2: f64,
    pub mean_p2: f64,
    pub sigma_q: f64,
    pub sigma_p: f64,
    pub product: f64,
}

/// Quasi-period estimate.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcsPeriod {
    pub mean_energy: f64,
    pub level_below: f64,
    pub level_above: f64,
    pub tau: f64,
}

/// Opaque physical-parameter handle.
pub struct GcsParams(PhysicalParams);

/// Opaque coherent-expansion handle.
pub struct GcsExpansion(CoherentExpansion);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let owned = CString::new(message.into()).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
}

fn status_of(error: &graphene_cs::Error) -> GcsStatus {
    set_error(error.to_string());
    if error.is_validation() {
        GcsStatus::InvalidArgument
    } else {
        GcsStatus::NumericalError
    }
}

impl From<GcsSystem> for System {
    fn from(s: GcsSystem) -> Self {
        match s {
            GcsSystem::Bilayer => System::Bilayer,
            GcsSystem::Monolayer => System::Monolayer,
        }
    }
}

impl From<GcsFamily> for Family {
    fn from(f: GcsFamily) -> Self {
        match f {
            GcsFamily::A => Family::A,
            GcsFamily::B => Family::B,
            GcsFamily::C => Family::C,
        }
    }
}

impl From<GcsBranch> for Branch {
    fn from(b: GcsBranch) -> Self {
        match b {
            GcsBranch::Electron => Branch::Electron,
            GcsBranch::Hole => Branch::Hole,
        }
    }
}

/// Message describing the most recent failure on this thread. Never null;
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gcs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gcs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// New parameter handle; returns null (and sets the error message) on invalid
/// scales. `omega` is re-derived from `2 m* omega_c / hbar` with `hbar = 1`,
/// `m* = omega / (2 omega_c)`.
#[no_mangle]
pub extern "C" fn gcs_params_new(
    omega: f64,
    omega_c: f64,
    k: f64,
    v_fermi: f64,
) -> *mut GcsParams {
    let built = PhysicalParams::from_frequencies(omega, omega_c)
        .and_then(|p| p.with_wavenumber(k))
        .and_then(|p| p.with_fermi_velocity(v_fermi));
    match built {
        Ok(p) => Box::into_raw(Box::new(GcsParams(p))),
        Err(e) => {
            set_error(e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// The reference parameter set of the standard figures (`omega = omega_c = k = 1`).
#[no_mangle]
pub extern "C" fn gcs_params_default() -> *mut GcsParams {
    Box::into_raw(Box::new(GcsParams(PhysicalParams::default())))
}

/// Set the field proxy: `omega_c` tracks `b` and `omega` rescales with the
/// effective mass held fixed.
///
/// # Safety
/// `params` must be a live handle from `gcs_params_new`/`gcs_params_default`.
#[no_mangle]
pub unsafe extern "C" fn gcs_params_set_b_field(params: *mut GcsParams, b: f64) -> GcsStatus {
    let Some(handle) = params.as_mut() else {
        set_error("null params handle");
        return GcsStatus::NullPointer;
    };
    match handle.0.with_b_field(b) {
        Ok(p) => {
            handle.0 = p;
            GcsStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `params` must come from `gcs_params_new`/`gcs_params_default` and not have
/// been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn gcs_params_free(params: *mut GcsParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Landau level `n` of the chosen system and branch; NaN on a null handle.
///
/// # Safety
/// `params` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gcs_landau_level(
    params: *const GcsParams,
    system: GcsSystem,
    n: usize,
    branch: GcsBranch,
) -> f64 {
    let Some(handle) = params.as_ref() else {
        set_error("null params handle");
        return f64::NAN;
    };
    spectrum::landau_level(system.into(), n, branch.into(), &handle.0)
}

/// Build the coherent expansion of `r e^{i theta}` for a family with its
/// standard weight function.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn gcs_expansion_build(
    system: GcsSystem,
    family: GcsFamily,
    r: f64,
    theta: f64,
    tol: f64,
    out: *mut *mut GcsExpansion,
) -> GcsStatus {
    if out.is_null() {
        set_error("null out pointer");
        return GcsStatus::NullPointer;
    }
    let family: Family = family.into();
    match build_coherent_polar(
        system.into(),
        family,
        &family.standard_ladder(),
        r,
        theta,
        tol,
    ) {
        Ok(expansion) => {
            *out = Box::into_raw(Box::new(GcsExpansion(expansion)));
            GcsStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `expansion` must come from `gcs_expansion_build` and not have been freed;
/// null is ignored.
#[no_mangle]
pub unsafe extern "C" fn gcs_expansion_free(expansion: *mut GcsExpansion) {
    if !expansion.is_null() {
        drop(Box::from_raw(expansion));
    }
}

/// Number of stored coefficients (truncation order + 1); 0 on null.
///
/// # Safety
/// `expansion` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gcs_expansion_len(expansion: *const GcsExpansion) -> usize {
    expansion.as_ref().map_or(0, |e| e.0.coefficients().len())
}

/// Coefficient `a_n` of the expansion.
///
/// # Safety
/// `re` and `im` must be writable; `expansion` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gcs_expansion_coefficient(
    expansion: *const GcsExpansion,
    n: usize,
    re: *mut f64,
    im: *mut f64,
) -> GcsStatus {
    let Some(handle) = expansion.as_ref() else {
        set_error("null expansion handle");
        return GcsStatus::NullPointer;
    };
    if re.is_null() || im.is_null() {
        set_error("null out pointer");
        return GcsStatus::NullPointer;
    }
    match handle.0.coefficients().get(n) {
        Some(c) => {
            *re = c.re;
            *im = c.im;
            GcsStatus::Ok
        }
        None => {
            set_error(format!("coefficient index {n} out of range"));
            GcsStatus::InvalidArgument
        }
    }
}

/// Occupation `|a_n|^2` (0 beyond the truncation).
///
/// # Safety
/// `expansion` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gcs_expansion_weight(expansion: *const GcsExpansion, n: usize) -> f64 {
    expansion.as_ref().map_or(f64::NAN, |e| e.0.weight(n))
}

/// Bound on the squared weight dropped by truncation; NaN on null.
///
/// # Safety
/// `expansion` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gcs_expansion_tail(expansion: *const GcsExpansion) -> f64 {
    expansion.as_ref().map_or(f64::NAN, |e| e.0.tail())
}

/// Quadrature moments and uncertainty product of the expansion.
///
/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gcs_moments(
    expansion: *const GcsExpansion,
    params: *const GcsParams,
    out: *mut GcsMoments,
) -> GcsStatus {
    let (Some(e), Some(p)) = (expansion.as_ref(), params.as_ref()) else {
        set_error("null handle");
        return GcsStatus::NullPointer;
    };
    if out.is_null() {
        set_error("null out pointer");
        return GcsStatus::NullPointer;
    }
    match observables::moments_spectral(&e.0, &p.0) {
        Ok(rep) => {
            *out = GcsMoments {
                mean_q: rep.mean_q,
                mean_p: rep.mean_p,
                mean_q2: rep.mean_q2,
                mean_p2: rep.mean_p2,
                sigma_q: rep.sigma_q,
                sigma_p: rep.sigma_p,
                product: rep.product,
            };
            GcsStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Mean energy of the expansion over the positive-branch spectrum.
///
/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gcs_mean_energy(
    expansion: *const GcsExpansion,
    params: *const GcsParams,
    out: *mut f64,
) -> GcsStatus {
    let (Some(e), Some(p)) = (expansion.as_ref(), params.as_ref()) else {
        set_error("null handle");
        return GcsStatus::NullPointer;
    };
    if out.is_null() {
        set_error("null out pointer");
        return GcsStatus::NullPointer;
    }
    *out = observables::mean_energy(&e.0, &p.0);
    GcsStatus::Ok
}

/// Residual of the annihilation eigenvalue equation for the expansion's own
/// weight function.
///
/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gcs_annihilation_residual(
    expansion: *const GcsExpansion,
    params: *const GcsParams,
    out: *mut f64,
) -> GcsStatus {
    let (Some(e), Some(p)) = (expansion.as_ref(), params.as_ref()) else {
        set_error("null handle");
        return GcsStatus::NullPointer;
    };
    if out.is_null() {
        set_error("null out pointer");
        return GcsStatus::NullPointer;
    }
    let ladder = e.0.ladder().clone();
    *out = annihilation_residual(&e.0, &ladder, &p.0);
    GcsStatus::Ok
}

/// Quasi-period estimate from the level pair bracketing the mean energy.
///
/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gcs_quasi_period(
    expansion: *const GcsExpansion,
    params: *const GcsParams,
    out: *mut GcsPeriod,
) -> GcsStatus {
    let (Some(e), Some(p)) = (expansion.as_ref(), params.as_ref()) else {
        set_error("null handle");
        return GcsStatus::NullPointer;
    };
    if out.is_null() {
        set_error("null out pointer");
        return GcsStatus::NullPointer;
    }
    match dynamics::quasi_period(&e.0, &p.0) {
        Ok(est) => {
            *out = GcsPeriod {
                mean_energy: est.mean_energy,
                level_below: est.level_below,
                level_above: est.level_above,
                tau: est.tau,
            };
            GcsStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Sample the probability density and currents of the evolved expansion at
/// `len` arbitrary positions. Any of `rho`, `jx`, `jy` may be null to skip
/// that output; currents carry their physical `hbar/m*` scale.
///
/// # Safety
/// `x` must point to `len` readable doubles; non-null outputs to `len`
/// writable doubles; handles must be live.
#[no_mangle]
pub unsafe extern "C" fn gcs_field_samples(
    expansion: *const GcsExpansion,
    params: *const GcsParams,
    t: f64,
    x: *const f64,
    len: usize,
    rho: *mut f64,
    jx: *mut f64,
    jy: *mut f64,
) -> GcsStatus {
    let (Some(e), Some(p)) = (expansion.as_ref(), params.as_ref()) else {
        set_error("null handle");
        return GcsStatus::NullPointer;
    };
    if x.is_null() {
        set_error("null x pointer");
        return GcsStatus::NullPointer;
    }
    if !t.is_finite() {
        set_error("non-finite time");
        return GcsStatus::InvalidArgument;
    }
    let positions = std::slice::from_raw_parts(x, len);
    let state = dynamics::evolve(&e.0, t, &p.0).to_spinor(&p.0);
    let scale = p.0.hbar() / p.0.m_star();
    let k = p.0.wavenumber();
    for (i, &xi) in positions.iter().enumerate() {
        let v = match state.components_at(xi) {
            Ok(v) => v,
            Err(err) => return status_of(&err),
        };
        if !rho.is_null() {
            *rho.add(i) = v.upper.norm_sqr() + v.lower.norm_sqr();
        }
        let ul: C64 = v.upper.conj() * v.lower;
        if !jx.is_null() {
            *jx.add(i) = scale
                * ((v.upper.conj() * v.lower_dx).im
                    + (v.lower.conj() * v.upper_dx).im
                    + 2.0 * k * ul.im);
        }
        if !jy.is_null() {
            *jy.add(i) = scale
                * ((v.lower.conj() * v.upper_dx).re
                    - (v.upper.conj() * v.lower_dx).re
                    - 2.0 * k * ul.re);
        }
    }
    GcsStatus::Ok
}
