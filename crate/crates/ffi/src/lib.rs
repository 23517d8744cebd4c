//! C ABI over the density engine.
//!
//! Handles are opaque and owned by the caller once returned; free them with
//! the matching `*_free` function. Strings returned through `char **` are
//! allocated here and released with [`epsdens_string_free`]. Every fallible
//! call returns an [`EpsdensStatus`]; on failure the message is available
//! from [`epsdens_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use epsdens::density::{
    epsilon_density, ordinary_density, reference_fixture, saturated_density, DensityOptions, Fixture,
};
use epsdens::piecewise::PiecewisePolynomial;
use epsdens::scalar::{format_rational, rat, Rational};
use epsdens::vpf::{phi_brute, VPMatrix};
use epsdens::{Error, MonomialIdeal, RingDescriptor};

/// Result codes shared by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsdensStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    /// A fit failed, a check failed, or the request left the verified window.
    ComputationFailure = 5,
    Panic = 6,
}

/// A ring together with a monomial ideal in it.
pub struct EpsdensIdeal {
    ring: RingDescriptor,
    ideal: MonomialIdeal,
}

/// A density function with exact pieces.
pub struct EpsdensDensity {
    inner: PiecewisePolynomial,
}

/// Tuning knobs; obtain defaults from [`epsdens_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EpsdensOptions {
    pub n_max: u32,
    pub k_max: u32,
    /// Fit degree override; negative means the default `d - 1`.
    pub degree: i32,
    pub offset_kmax: u32,
    pub step_numerator: i64,
    pub step_denominator: i64,
}

/// Which closed-form fixture to build.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsdensFixture {
    Nagata = 0,
    Cutkosky = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(e: &Error) -> EpsdensStatus {
    match e {
        Error::Parse { .. } => EpsdensStatus::ParseError,
        e if e.is_computation_failure() => EpsdensStatus::ComputationFailure,
        _ => EpsdensStatus::InvalidInput,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), EpsdensStatus>) -> EpsdensStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EpsdensStatus::Ok,
        Ok(Err(s)) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            EpsdensStatus::Panic
        }
    }
}

fn lift<T>(r: epsdens::Result<T>) -> Result<T, EpsdensStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn non_null<T>(p: *const T) -> Result<(), EpsdensStatus> {
    if p.is_null() {
        set_error("null pointer argument");
        return Err(EpsdensStatus::NullPointer);
    }
    Ok(())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, EpsdensStatus> {
    non_null(p)?;
    // SAFETY: caller passes a NUL-terminated string.
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        EpsdensStatus::InvalidUtf8
    })
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), EpsdensStatus> {
    non_null(out)?;
    let c = CString::new(s).map_err(|_| {
        set_error("result contains NUL");
        EpsdensStatus::InvalidInput
    })?;
    // SAFETY: `out` checked non-null; caller provides writable storage.
    *out = c.into_raw();
    Ok(())
}

fn options_from(p: *const EpsdensOptions) -> Result<DensityOptions, EpsdensStatus> {
    if p.is_null() {
        return Ok(DensityOptions::default());
    }
    // SAFETY: non-null pointers point to a valid options struct.
    let o = unsafe { *p };
    if o.step_numerator <= 0 || o.step_denominator <= 0 {
        set_error("sample step must be positive");
        return Err(EpsdensStatus::InvalidInput);
    }
    Ok(DensityOptions {
        n_max: o.n_max,
        k_max: o.k_max,
        degree: u32::try_from(o.degree).ok(),
        offset_kmax: o.offset_kmax,
        sample_step: rat(o.step_numerator, o.step_denominator),
    })
}

/// Fills `out` with the default options.
///
/// # Safety
/// `out` must be null or point to writable storage for one `EpsdensOptions`.
#[no_mangle]
pub unsafe extern "C" fn epsdens_options_default(out: *mut EpsdensOptions) -> EpsdensStatus {
    guard(|| {
        non_null(out)?;
        let d = DensityOptions::default();
        *out = EpsdensOptions {
            n_max: d.n_max,
            k_max: d.k_max,
            degree: -1,
            offset_kmax: d.offset_kmax,
            step_numerator: 1,
            step_denominator: 20,
        };
        Ok(())
    })
}

/// Parses `{"vars": [...], "gens": [...], "quotient": [...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn epsdens_ideal_parse_json(json: *const c_char, out: *mut *mut EpsdensIdeal) -> EpsdensStatus {
    guard(|| {
        non_null(out)?;
        let text = read_str(json)?;
        let (ring, ideal) = lift(epsdens::io::parse_ideal(text))?;
        *out = Box::into_raw(Box::new(EpsdensIdeal { ring, ideal }));
        Ok(())
    })
}

/// Releases an ideal handle; null is ignored.
///
/// # Safety
/// `ideal` must be null or a handle from [`epsdens_ideal_parse_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn epsdens_ideal_free(ideal: *mut EpsdensIdeal) {
    if !ideal.is_null() {
        drop(Box::from_raw(ideal));
    }
}

/// Number of minimal generators, or 0 for a null handle.
///
/// # Safety
/// `ideal` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn epsdens_ideal_generator_count(ideal: *const EpsdensIdeal) -> usize {
    ideal.as_ref().map_or(0, |i| i.ideal.len())
}

type DensityFn = fn(&RingDescriptor, &MonomialIdeal, &DensityOptions) -> epsdens::Result<PiecewisePolynomial>;

unsafe fn compute_density(
    ideal: *const EpsdensIdeal,
    options: *const EpsdensOptions,
    out: *mut *mut EpsdensDensity,
    f: DensityFn,
) -> EpsdensStatus {
    guard(|| {
        non_null(ideal)?;
        non_null(out)?;
        let i = &*ideal;
        let opts = options_from(options)?;
        let inner = lift(f(&i.ring, &i.ideal, &opts))?;
        *out = Box::into_raw(Box::new(EpsdensDensity { inner }));
        Ok(())
    })
}

/// Density of the ordinary powers.
///
/// # Safety
/// `ideal` must be a live handle, `options` null or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn epsdens_ordinary_density(
    ideal: *const EpsdensIdeal,
    options: *const EpsdensOptions,
    out: *mut *mut EpsdensDensity,
) -> EpsdensStatus {
    compute_density(ideal, options, out, ordinary_density)
}

/// Density of the saturated powers.
///
/// # Safety
/// As [`epsdens_ordinary_density`].
#[no_mangle]
pub unsafe extern "C" fn epsdens_saturated_density(
    ideal: *const EpsdensIdeal,
    options: *const EpsdensOptions,
    out: *mut *mut EpsdensDensity,
) -> EpsdensStatus {
    compute_density(ideal, options, out, saturated_density)
}

/// The ε-density, saturated minus ordinary.
///
/// # Safety
/// As [`epsdens_ordinary_density`].
#[no_mangle]
pub unsafe extern "C" fn epsdens_epsilon_density(
    ideal: *const EpsdensIdeal,
    options: *const EpsdensOptions,
    out: *mut *mut EpsdensDensity,
) -> EpsdensStatus {
    compute_density(ideal, options, out, |r, i, o| Ok(epsilon_density(r, i, o)?.density))
}

/// ε(I) as an exact `"p/q"` string.
///
/// # Safety
/// `ideal` must be a live handle, `options` null or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn epsdens_epsilon_value(
    ideal: *const EpsdensIdeal,
    options: *const EpsdensOptions,
    out: *mut *mut c_char,
) -> EpsdensStatus {
    guard(|| {
        non_null(ideal)?;
        let i = &*ideal;
        let opts = options_from(options)?;
        let e = lift(epsilon_density(&i.ring, &i.ideal, &opts))?;
        write_string(out, format_rational(&e.value))
    })
}

/// Builds a closed-form fixture; `s` is used by `Nagata` only.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn epsdens_fixture(
    which: EpsdensFixture,
    s_numerator: i64,
    s_denominator: i64,
    out: *mut *mut EpsdensDensity,
) -> EpsdensStatus {
    guard(|| {
        non_null(out)?;
        let fixture = match which {
            EpsdensFixture::Nagata => {
                if s_denominator == 0 {
                    set_error("zero denominator");
                    return Err(EpsdensStatus::InvalidInput);
                }
                Fixture::Nagata(rat(s_numerator, s_denominator))
            }
            EpsdensFixture::Cutkosky => Fixture::Cutkosky,
        };
        let inner = lift(reference_fixture(&fixture))?;
        *out = Box::into_raw(Box::new(EpsdensDensity { inner }));
        Ok(())
    })
}

/// Releases a density handle; null is ignored.
///
/// # Safety
/// `density` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn epsdens_density_free(density: *mut EpsdensDensity) {
    if !density.is_null() {
        drop(Box::from_raw(density));
    }
}

/// Serializes a density as JSON.
///
/// # Safety
/// `density` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn epsdens_density_to_json(
    density: *const EpsdensDensity,
    out: *mut *mut c_char,
) -> EpsdensStatus {
    guard(|| {
        non_null(density)?;
        let v = epsdens::io::piecewise_json(&(*density).inner);
        write_string(out, v.to_string())
    })
}

/// Number of breakpoints.
///
/// # Safety
/// `density` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn epsdens_density_breakpoint_count(density: *const EpsdensDensity) -> usize {
    density.as_ref().map_or(0, |d| d.inner.breakpoints.len())
}

/// Evaluates at `numerator / denominator`. The exact value is written to
/// `out_exact` (if non-null) and a decimal approximation to `out_approx`
/// (if non-null).
///
/// # Safety
/// `density` must be a live handle; the out pointers null or writable.
#[no_mangle]
pub unsafe extern "C" fn epsdens_density_eval(
    density: *const EpsdensDensity,
    numerator: i64,
    denominator: i64,
    out_exact: *mut *mut c_char,
    out_approx: *mut f64,
) -> EpsdensStatus {
    guard(|| {
        non_null(density)?;
        if denominator == 0 {
            set_error("zero denominator");
            return Err(EpsdensStatus::InvalidInput);
        }
        let x: Rational = rat(numerator, denominator);
        let v = (*density).inner.eval(&x);
        if !out_approx.is_null() {
            *out_approx = v.to_f64();
        }
        if !out_exact.is_null() {
            write_string(out_exact, v.to_string())?;
        }
        Ok(())
    })
}

/// Vector partition function of the matrix with `r` unit columns `(1, 0)`
/// and `column_count` columns `(columns[2k], columns[2k+1])`, at `(m, n)`,
/// written as a decimal string.
///
/// # Safety
/// `columns` must point to `2 * column_count` readable values (or be null
/// when `column_count` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn epsdens_vpf_eval(
    r: u32,
    columns: *const u32,
    column_count: usize,
    m: i64,
    n: i64,
    out: *mut *mut c_char,
) -> EpsdensStatus {
    guard(|| {
        let cols: Vec<(u32, u32)> = if column_count == 0 {
            Vec::new()
        } else {
            non_null(columns)?;
            std::slice::from_raw_parts(columns, 2 * column_count)
                .chunks_exact(2)
                .map(|c| (c[0], c[1]))
                .collect()
        };
        let matrix = lift(VPMatrix::new(r, cols))?;
        write_string(out, phi_brute(&matrix, m, n).to_string())
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn epsdens_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn epsdens_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
