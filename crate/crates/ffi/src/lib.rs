//! C ABI over `padelab`.
//!
//! Objects cross the boundary as opaque heap handles that the caller
//! releases with the matching `*_free`. Every fallible call returns a
//! [`PadelabStatus`]; on failure the message is kept per thread and read back
//! with [`padelab_last_error`]. Panics are caught at the boundary and
//! reported as [`PadelabStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use num_complex::Complex64;
use padelab::hem::{self, HemError, NetworkCase};
use padelab::pade::{self, RootSet};
use padelab::potential::{self, PlanarCurve};
use padelab::{diagnostics, io, Error, PowerSeries};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadelabStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument is out of range or not valid UTF-8.
    InvalidArgument = 2,
    /// Reading or parsing a case file failed.
    Ingest = 3,
    /// The network case is inconsistent.
    InvalidCase = 4,
    /// A numerical routine failed (singular system, degenerate block, no convergence...).
    Numeric = 5,
    /// The caller's buffer is too small; nothing was written.
    BufferTooSmall = 6,
    /// A panic was caught at the boundary.
    Panic = 7,
}

/// Which roots of a root set to copy out.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadelabRootKind {
    Poles = 0,
    Zeros = 1,
}

/// Plane the roots are reported in.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadelabPlane {
    /// The embedding parameter α.
    Alpha = 0,
    /// The inverse plane `z = 1/α`.
    Inverse = 1,
}

/// Opaque network case.
pub struct PadelabCase(NetworkCase);

/// Opaque truncated power series.
pub struct PadelabSeries(PowerSeries);

/// Opaque pole/zero set of a diagonal Padé approximant.
pub struct PadelabRoots(RootSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(PadelabStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io(_) => PadelabStatus::Ingest,
            Error::Hem(HemError::InvalidCase(_) | HemError::SingularBranch { .. } | HemError::UnknownBus(_)) => {
                PadelabStatus::InvalidCase
            }
            Error::Diagnostics(diagnostics::DiagnosticsError::UnknownBus(_)) => PadelabStatus::InvalidCase,
            _ => PadelabStatus::Numeric,
        };
        Failure(status, e.to_string())
    }
}

macro_rules! from_module_error {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Error::from(e).into()
            }
        }
    )*};
}
from_module_error!(
    padelab::algebra::AlgebraError,
    HemError,
    pade::PadeError,
    potential::PotentialError,
    diagnostics::DiagnosticsError,
    io::IoError
);

fn fail(status: PadelabStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

/// Runs `f`, translating errors and panics into a status plus last-error text.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PadelabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PadelabStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            PadelabStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| fail(PadelabStatus::NullPointer, format!("{name} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| fail(PadelabStatus::NullPointer, format!("{name} is null")))
}

unsafe fn path_arg<'a>(p: *const c_char) -> Result<&'a Path, Failure> {
    if p.is_null() {
        return Err(fail(PadelabStatus::NullPointer, "path is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Path::new)
        .map_err(|_| fail(PadelabStatus::InvalidArgument, "path is not valid UTF-8"))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(PadelabStatus::NullPointer, format!("{name} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// Copies `src` into split re/im buffers of capacity `cap`; `len_out` always
/// receives the number of values available.
unsafe fn copy_complex(src: &[Complex64], re: *mut f64, im: *mut f64, cap: usize, len_out: *mut usize) -> Result<(), Failure> {
    *out_ptr(len_out, "len_out")? = src.len();
    if src.is_empty() {
        return Ok(());
    }
    if cap < src.len() {
        return Err(fail(PadelabStatus::BufferTooSmall, format!("need {} slots, got {cap}", src.len())));
    }
    if re.is_null() || im.is_null() {
        return Err(fail(PadelabStatus::NullPointer, "output buffer is null"));
    }
    for (k, z) in src.iter().enumerate() {
        *re.add(k) = z.re;
        *im.add(k) = z.im;
    }
    Ok(())
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn padelab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next padelab call on the same thread.
#[no_mangle]
pub extern "C" fn padelab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

// ---------------------------------------------------------------------------
// cases

/// Reads a MATPOWER `.m` case file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn padelab_case_from_matpower(path: *const c_char, out: *mut *mut PadelabCase) -> PadelabStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let case = io::parse_matpower(&io::read_file(path_arg(path)?)?)?;
        *out = Box::into_raw(Box::new(PadelabCase(case)));
        Ok(())
    })
}

/// Reads a native TOML case file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn padelab_case_from_native(path: *const c_char, out: *mut *mut PadelabCase) -> PadelabStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let case = io::parse_case_native(&io::read_file(path_arg(path)?)?)?;
        *out = Box::into_raw(Box::new(PadelabCase(case)));
        Ok(())
    })
}

/// Slack + one PQ bus whose voltage has branch points at `bp_neg < 0 < bp_pos`.
///
/// # Safety
/// `out` must be a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn padelab_case_two_bus(bp_neg: f64, bp_pos: f64, out: *mut *mut PadelabCase) -> PadelabStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = Box::into_raw(Box::new(PadelabCase(hem::calibrate_two_bus(bp_neg, bp_pos)?)));
        Ok(())
    })
}

/// Number of buses, 0 for a null handle.
///
/// # Safety
/// `case` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn padelab_case_bus_count(case: *const PadelabCase) -> usize {
    case.as_ref().map_or(0, |c| c.0.buses.len())
}

/// Multiplies every bus injection by `s`.
///
/// # Safety
/// `case` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn padelab_case_scale(case: *mut PadelabCase, s: f64) -> PadelabStatus {
    guard(|| {
        let case = out_ptr(case, "case")?;
        if !s.is_finite() {
            return Err(fail(PadelabStatus::InvalidArgument, format!("scale {s} is not finite")));
        }
        case.0.scale_injections(s);
        Ok(())
    })
}

/// # Safety
/// `case` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn padelab_case_free(case: *mut PadelabCase) {
    if !case.is_null() {
        drop(Box::from_raw(case));
    }
}

// ---------------------------------------------------------------------------
// series

/// Maclaurin series of bus `bus_id`'s voltage through `order`.
///
/// # Safety
/// `case` must be a live handle; `out` a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn padelab_series_hem(
    case: *const PadelabCase,
    bus_id: u32,
    order: usize,
    out: *mut *mut PadelabSeries,
) -> PadelabStatus {
    guard(|| {
        let case = borrow(case, "case")?;
        let out = out_ptr(out, "out")?;
        let sol = hem::hem_series(&case.0, order)?;
        let v = sol.voltage(bus_id).ok_or(HemError::UnknownBus(bus_id))?.clone();
        *out = Box::into_raw(Box::new(PadelabSeries(v)));
        Ok(())
    })
}

/// Series from `len ≥ 1` coefficients given as split real/imaginary arrays.
///
/// # Safety
/// `re` and `im` must each point to `len` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn padelab_series_from_coeffs(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut PadelabSeries,
) -> PadelabStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let (re, im) = (slice_arg(re, len, "re")?, slice_arg(im, len, "im")?);
        let coeffs: Vec<Complex64> = re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let s = PowerSeries::new(coeffs).map_err(|e| fail(PadelabStatus::InvalidArgument, e.to_string()))?;
        *out = Box::into_raw(Box::new(PadelabSeries(s)));
        Ok(())
    })
}

/// Copies the coefficients out; see [`padelab_roots_copy`] for the buffer protocol.
///
/// # Safety
/// `series` must be a live handle; buffers must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn padelab_series_coeffs(
    series: *const PadelabSeries,
    re: *mut f64,
    im: *mut f64,
    cap: usize,
    len_out: *mut usize,
) -> PadelabStatus {
    guard(|| copy_complex(borrow(series, "series")?.0.coeffs(), re, im, cap, len_out))
}

/// # Safety
/// `series` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn padelab_series_free(series: *mut PadelabSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

// ---------------------------------------------------------------------------
// Padé roots

/// Poles and zeros of the `[m/m]` approximant (needs `2m ≤` series order).
///
/// # Safety
/// `series` must be a live handle; `out` a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn padelab_roots_diagonal(
    series: *const PadelabSeries,
    m: usize,
    out: *mut *mut PadelabRoots,
) -> PadelabStatus {
    guard(|| {
        let series = borrow(series, "series")?;
        let out = out_ptr(out, "out")?;
        let (_, rs) = pade::diagonal_roots(&series.0, m)?;
        *out = Box::into_raw(Box::new(PadelabRoots(rs)));
        Ok(())
    })
}

/// Copies poles or zeros in the requested plane into `re`/`im`.
///
/// `len_out` always receives the count. If `cap` is smaller the call returns
/// `BufferTooSmall` without writing, so a first call with `cap = 0` sizes
/// the buffers.
///
/// # Safety
/// `roots` must be a live handle; buffers must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn padelab_roots_copy(
    roots: *const PadelabRoots,
    kind: PadelabRootKind,
    plane: PadelabPlane,
    re: *mut f64,
    im: *mut f64,
    cap: usize,
    len_out: *mut usize,
) -> PadelabStatus {
    guard(|| {
        let rs = &borrow(roots, "roots")?.0;
        let src = match (kind, plane) {
            (PadelabRootKind::Poles, PadelabPlane::Alpha) => &rs.poles_alpha,
            (PadelabRootKind::Zeros, PadelabPlane::Alpha) => &rs.zeros_alpha,
            (PadelabRootKind::Poles, PadelabPlane::Inverse) => &rs.poles_inv,
            (PadelabRootKind::Zeros, PadelabPlane::Inverse) => &rs.zeros_inv,
        };
        copy_complex(src, re, im, cap, len_out)
    })
}

/// # Safety
/// `roots` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn padelab_roots_free(roots: *mut PadelabRoots) {
    if !roots.is_null() {
        drop(Box::from_raw(roots));
    }
}

// ---------------------------------------------------------------------------
// diagnostics and potential theory

/// Empirical convergence factor of bus `bus_id` at real `alpha`, fitted over
/// the approximant orders `ms[0..n_ms]`.
///
/// # Safety
/// `case` must be a live handle; `ms` must point to `n_ms` values.
#[no_mangle]
pub unsafe extern "C" fn padelab_cf_hat(
    case: *const PadelabCase,
    bus_id: u32,
    alpha: f64,
    ms: *const usize,
    n_ms: usize,
    out: *mut f64,
) -> PadelabStatus {
    guard(|| {
        let case = borrow(case, "case")?;
        let out = out_ptr(out, "out")?;
        let ms = slice_arg(ms, n_ms, "ms")?;
        if ms.is_empty() {
            return Err(fail(PadelabStatus::InvalidArgument, "empty M list"));
        }
        let prof = diagnostics::cf_curve(&case.0, bus_id, &[alpha], ms)?;
        match prof.first().and_then(|p| p.cf_hat) {
            Some(cf) => {
                *out = cf;
                Ok(())
            }
            None => Err(fail(PadelabStatus::Numeric, format!("no usable fit window at alpha = {alpha}"))),
        }
    })
}

/// Logarithmic capacity of the segment `[a, b]` estimated from `n` Fekete points.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padelab_segment_capacity(a: f64, b: f64, n: usize, out: *mut f64) -> PadelabStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(fail(PadelabStatus::InvalidArgument, format!("bad segment [{a}, {b}]")));
        }
        let curve = PlanarCurve::new(vec![vec![[a, 0.0], [b, 0.0]]])?;
        let sol = potential::fekete_points(&curve, n, potential::FEKETE_MAX_ITER)?;
        *out = potential::capacity_estimate(&sol.config)?;
        Ok(())
    })
}
