//! C ABI for `spherocurve`.
//!
//! Curves and pairs are opaque handles created by `spc_*` constructors and
//! released with the matching `_free`. Every fallible call returns an
//! [`SpcStatus`]; on failure the message is available from
//! [`spc_last_error`] until the next failing call on the same thread.
//! Strings returned through out-parameters are owned by the caller and
//! released with [`spc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spherocurve::catalog::CatalogEntry;
use spherocurve::cli::exit_code;
use spherocurve::convexity::{analyze_convexity, ConvexityOptions, WitnessOptions};
use spherocurve::curves::{AnyCurve, Curve};
use spherocurve::decomp::{compose, decompose, PairCurve};
use spherocurve::frenet::frenet_frame;
use spherocurve::io::{read_curve, read_pair, to_json, CurveDoc, PairDoc};
use spherocurve::sphere2::spherical_rotation_number;
use spherocurve::Error;

/// Result of an `spc_*` call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpcStatus {
    Ok = 0,
    /// A required pointer was null or a string was not UTF-8.
    NullPointer = 1,
    /// Malformed document or argument out of range.
    InvalidInput = 2,
    /// Numerical or geometric failure.
    Geometry = 3,
    /// Condition (L) or local convexity violated.
    Condition = 4,
    /// The curve lives in the wrong dimension for this call.
    WrongSpace = 5,
    /// Internal panic; the handle arguments are left untouched.
    Panic = 6,
}

/// Opaque curve on `S2` or `S3`.
pub struct SpcCurve(AnyCurve);

/// Opaque pair of curves on `S2`.
pub struct SpcPair(PairCurve);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: SpcStatus, message: String) -> SpcStatus {
    set_error(message);
    status
}

fn from_error(e: Error) -> SpcStatus {
    let status = match exit_code(&e) {
        2 => SpcStatus::InvalidInput,
        4 => SpcStatus::Condition,
        _ => SpcStatus::Geometry,
    };
    fail(status, format!("{}: {e}", e.name()))
}

fn guard(f: impl FnOnce() -> SpcStatus) -> SpcStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(SpcStatus::Panic, "PanicError: internal panic".into()))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, SpcStatus> {
    if s.is_null() {
        return Err(fail(
            SpcStatus::NullPointer,
            "NullPointer: string argument is null".into(),
        ));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(SpcStatus::NullPointer, "NullPointer: string is not UTF-8".into()))
}

unsafe fn emit_string(out: *mut *mut c_char, s: String) -> SpcStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            SpcStatus::Ok
        }
        Err(_) => fail(SpcStatus::Geometry, "SchemaError: output contains a nul byte".into()),
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(SpcStatus::NullPointer, format!("NullPointer: {} is null", stringify!($p)));
        })+
    };
}

unsafe fn emit_curve(out: *mut *mut SpcCurve, r: spherocurve::Result<AnyCurve>) -> SpcStatus {
    match r {
        Ok(c) => {
            *out = Box::into_raw(Box::new(SpcCurve(c)));
            SpcStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn spc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn spc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Circle of length `c` on `S2`, traversed `m` times.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spc_curve_sigma(c: f64, m: f64, out: *mut *mut SpcCurve) -> SpcStatus {
    non_null!(out);
    guard(|| emit_curve(out, CatalogEntry::Sigma { c, m }.build()))
}

/// The curve on `S3` with constant curvature `2/sqrt(3)` and torsion 1,
/// traversed `m` times.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spc_curve_gamma1(m: f64, out: *mut *mut SpcCurve) -> SpcStatus {
    non_null!(out);
    guard(|| emit_curve(out, CatalogEntry::Gamma1 { m }.build()))
}

/// Curve from a JSON curve document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spc_curve_from_json(json: *const c_char, out: *mut *mut SpcCurve) -> SpcStatus {
    non_null!(out);
    guard(|| match read_str(json) {
        Ok(s) => emit_curve(out, read_curve(s)),
        Err(status) => status,
    })
}

/// # Safety
/// `curve` must be null or a live handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn spc_curve_free(curve: *mut SpcCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Ambient dimension, 3 or 4; 0 for a null handle.
///
/// # Safety
/// `curve` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spc_curve_dim(curve: *const SpcCurve) -> usize {
    match curve.as_ref() {
        Some(SpcCurve(AnyCurve::Dim3(_))) => 3,
        Some(SpcCurve(AnyCurve::Dim4(_))) => 4,
        None => 0,
    }
}

/// Writes the point at `t` into `out`, which holds `spc_curve_dim` doubles.
///
/// # Safety
/// `curve` must be a live handle and `out` must hold enough doubles.
#[no_mangle]
pub unsafe extern "C" fn spc_curve_point(curve: *const SpcCurve, t: f64, out: *mut f64) -> SpcStatus {
    non_null!(curve, out);
    guard(|| {
        match &(*curve).0 {
            AnyCurve::Dim3(c) => ptr::copy_nonoverlapping(c.point(t).as_ptr(), out, 3),
            AnyCurve::Dim4(c) => ptr::copy_nonoverlapping(c.point(t).as_ptr(), out, 4),
        }
        SpcStatus::Ok
    })
}

/// Frenet frame at `t` (row-major, `dim * dim` doubles, rows are the frame
/// vectors), geodesic curvature and, on `S3`, torsion (`NaN` on `S2`).
/// `frame` may be null.
///
/// # Safety
/// `curve` must be a live handle; non-null outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn spc_curve_frenet(
    curve: *const SpcCurve,
    t: f64,
    frame: *mut f64,
    kappa: *mut f64,
    tau: *mut f64,
) -> SpcStatus {
    non_null!(curve, kappa, tau);
    guard(|| {
        let (k, ta, rows) = match &(*curve).0 {
            AnyCurve::Dim3(c) => match frenet_frame(c.as_ref(), t) {
                Ok(p) => {
                    let (_, k, ta) = p.invariants();
                    let m = p.frame.matrix();
                    (k, ta, m.as_slice().to_vec())
                }
                Err(e) => return from_error(e),
            },
            AnyCurve::Dim4(c) => match frenet_frame(c.as_ref(), t) {
                Ok(p) => {
                    let (_, k, ta) = p.invariants();
                    let m = p.frame.matrix();
                    (k, ta, m.as_slice().to_vec())
                }
                Err(e) => return from_error(e),
            },
        };
        *kappa = k;
        *tau = ta.unwrap_or(f64::NAN);
        if !frame.is_null() {
            ptr::copy_nonoverlapping(rows.as_ptr(), frame, rows.len());
        }
        SpcStatus::Ok
    })
}

/// Splits a curve on `S3` into its left and right parts on `S2`, sampled
/// on `samples` intervals.
///
/// # Safety
/// `curve` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spc_decompose(curve: *const SpcCurve, samples: usize, out: *mut *mut SpcPair) -> SpcStatus {
    non_null!(curve, out);
    guard(|| {
        let AnyCurve::Dim4(c) = &(*curve).0 else {
            return fail(
                SpcStatus::WrongSpace,
                "SchemaError: decompose needs a curve on S3".into(),
            );
        };
        match decompose(c.as_ref(), samples) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(SpcPair(d.pair)));
                SpcStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Pair from a JSON pair document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spc_pair_from_json(json: *const c_char, out: *mut *mut SpcPair) -> SpcStatus {
    non_null!(out);
    guard(|| match read_str(json).map(read_pair) {
        Ok(Ok(p)) => {
            *out = Box::into_raw(Box::new(SpcPair(p)));
            SpcStatus::Ok
        }
        Ok(Err(e)) => from_error(e),
        Err(status) => status,
    })
}

/// Left and right parts of a pair as JSON curve documents.
///
/// # Safety
/// `pair` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spc_pair_to_json(pair: *const SpcPair, out: *mut *mut c_char) -> SpcStatus {
    non_null!(pair, out);
    guard(|| {
        let p = &(*pair).0;
        let sampled = |c: &spherocurve::curves::Curve3| spherocurve::curves::sample(c.as_ref(), p.samples);
        match (sampled(&p.left), sampled(&p.right)) {
            (Ok(l), Ok(r)) => emit_string(out, to_json(&PairDoc::from_pair(&l, &r, p.samples))),
            (Err(e), _) | (_, Err(e)) => from_error(e),
        }
    })
}

/// # Safety
/// `pair` must be null or a live handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn spc_pair_free(pair: *mut SpcPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Rebuilds the curve on `S3` from a pair. `endpoint` (may be null)
/// receives the lifted endpoint `(zl, zr)` as eight doubles `a, b, c, d`.
///
/// # Safety
/// `pair` must be a live handle, `out` a valid pointer and `endpoint` null
/// or room for eight doubles.
#[no_mangle]
pub unsafe extern "C" fn spc_compose(pair: *const SpcPair, out: *mut *mut SpcCurve, endpoint: *mut f64) -> SpcStatus {
    non_null!(pair, out);
    guard(|| {
        let p = &(*pair).0;
        match compose(p, p.samples) {
            Ok(c) => {
                if !endpoint.is_null() {
                    let e = c.endpoint();
                    let v = [e.zl.quaternion().to_array(), e.zr.quaternion().to_array()].concat();
                    ptr::copy_nonoverlapping(v.as_ptr(), endpoint, 8);
                }
                *out = Box::into_raw(Box::new(SpcCurve(AnyCurve::Dim4(std::sync::Arc::new(c.curve)))));
                SpcStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Convexity report of a curve on `S3` as JSON.
///
/// # Safety
/// `curve` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spc_convexity_json(
    curve: *const SpcCurve,
    samples: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> SpcStatus {
    non_null!(curve, out);
    guard(|| {
        let AnyCurve::Dim4(c) = &(*curve).0 else {
            return fail(
                SpcStatus::WrongSpace,
                "SchemaError: convexity needs a curve on S3".into(),
            );
        };
        let opts = ConvexityOptions {
            samples,
            witness: WitnessOptions {
                seed,
                ..WitnessOptions::default()
            },
        };
        match analyze_convexity(c.as_ref(), &opts) {
            Ok(r) => emit_string(out, to_json(&r)),
            Err(e) => from_error(e),
        }
    })
}

/// Rotation number of a closed curve on `S2` lying in a closed hemisphere.
///
/// # Safety
/// `curve` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spc_rotation_number(curve: *const SpcCurve, samples: usize, out: *mut i64) -> SpcStatus {
    non_null!(curve, out);
    guard(|| {
        let AnyCurve::Dim3(c) = &(*curve).0 else {
            return fail(
                SpcStatus::WrongSpace,
                "SchemaError: rotation number needs a curve on S2".into(),
            );
        };
        match spherical_rotation_number(c.as_ref(), samples) {
            Ok(r) => {
                *out = r.rot;
                SpcStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Curve sampled on `samples` intervals as a JSON curve document.
///
/// # Safety
/// `curve` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spc_curve_to_json(curve: *const SpcCurve, samples: usize, out: *mut *mut c_char) -> SpcStatus {
    non_null!(curve, out);
    guard(|| {
        let doc = match &(*curve).0 {
            AnyCurve::Dim3(c) => spherocurve::curves::sample(c.as_ref(), samples).map(|s| CurveDoc::from_sampled(&s)),
            AnyCurve::Dim4(c) => spherocurve::curves::sample(c.as_ref(), samples).map(|s| CurveDoc::from_sampled(&s)),
        };
        match doc {
            Ok(d) => emit_string(out, to_json(&d)),
            Err(e) => from_error(e),
        }
    })
}
