//! C interface to the verification engine.
//!
//! Every call returns a [`BwStatus`]. Objects come back through out-pointers
//! as opaque handles and must be released with the matching `*_free`
//! function. Strings handed out by the library are released with
//! [`bw_string_free`]. After a non-`Ok` status, [`bw_last_error_message`]
//! describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bethe_weights::verify::{compute, run, Kind, Report, RunConfig, VectorDoc};
use bethe_weights::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BwStatus {
    Ok = 0,
    /// A report was produced and at least one check failed.
    CheckFailed = 1,
    ConfigInvalid = 2,
    SamplingExhausted = 3,
    Degenerate = 4,
    NullPointer = 5,
    InvalidUtf8 = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BwKind {
    Bethe = 0,
    Projection = 1,
}

/// Exact weight-function vector.
pub struct BwVector {
    doc: VectorDoc,
}

/// Result of a verification run.
pub struct BwReport {
    report: Report,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> BwStatus {
    match e {
        Error::ConfigInvalid(_) | Error::IndexOutOfRange(_) | Error::ShapeMismatch(_) => BwStatus::ConfigInvalid,
        Error::SamplingExhausted(_) => BwStatus::SamplingExhausted,
        e if e.is_degenerate() => BwStatus::Degenerate,
        _ => BwStatus::Internal,
    }
}

fn fail(status: BwStatus, msg: impl Into<String>) -> BwStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> BwStatus) -> BwStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(BwStatus::Internal, "panic inside the library"),
    }
}

fn to_c_string(s: String, out: *mut *mut c_char) -> BwStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            BwStatus::Ok
        }
        Err(_) => fail(BwStatus::Internal, "interior NUL in output"),
    }
}

/// Evaluate one weight-function vector.
///
/// `pattern` points at `pattern_len` colours and may be null when
/// `pattern_len` is zero. On success `*out` receives a new vector.
///
/// # Safety
/// `pattern` must be valid for `pattern_len` reads and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bw_compute(
    kind: BwKind,
    n: usize,
    factors: usize,
    pattern: *const usize,
    pattern_len: usize,
    seed: u64,
    out: *mut *mut BwVector,
) -> BwStatus {
    guard(|| {
        if out.is_null() || (pattern.is_null() && pattern_len > 0) {
            return fail(BwStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let colours =
            if pattern_len == 0 { Vec::new() } else { std::slice::from_raw_parts(pattern, pattern_len).to_vec() };
        let kind = match kind {
            BwKind::Bethe => Kind::Bethe,
            BwKind::Projection => Kind::Projection,
        };
        match compute(kind, n, factors, &colours, seed) {
            Ok(v) => {
                *out = Box::into_raw(Box::new(BwVector { doc: VectorDoc::from_ket(&v) }));
                BwStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Dimension of the ambient space, or 0 for a null handle.
///
/// # Safety
/// `v` must be null or a live handle from [`bw_compute`].
#[no_mangle]
pub unsafe extern "C" fn bw_vector_dim(v: *const BwVector) -> usize {
    v.as_ref().map_or(0, |v| v.doc.dim)
}

/// Number of nonzero components, or 0 for a null handle.
///
/// # Safety
/// `v` must be null or a live handle from [`bw_compute`].
#[no_mangle]
pub unsafe extern "C" fn bw_vector_nnz(v: *const BwVector) -> usize {
    v.as_ref().map_or(0, |v| v.doc.components.len())
}

/// The `k`-th nonzero component: its basis index and the decimal numerator
/// and denominator of its coefficient. Both strings are owned by the caller.
///
/// # Safety
/// `v` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bw_vector_component(
    v: *const BwVector,
    k: usize,
    index: *mut usize,
    numerator: *mut *mut c_char,
    denominator: *mut *mut c_char,
) -> BwStatus {
    guard(|| {
        let Some(v) = v.as_ref() else {
            return fail(BwStatus::NullPointer, "null vector");
        };
        if index.is_null() || numerator.is_null() || denominator.is_null() {
            return fail(BwStatus::NullPointer, "null out-pointer");
        }
        let Some(c) = v.doc.components.get(k) else {
            return fail(BwStatus::ConfigInvalid, format!("component {k} of {}", v.doc.components.len()));
        };
        *index = c.index;
        *numerator = ptr::null_mut();
        *denominator = ptr::null_mut();
        let s = to_c_string(c.numerator.clone(), numerator);
        if s != BwStatus::Ok {
            return s;
        }
        let s = to_c_string(c.denominator.clone(), denominator);
        if s != BwStatus::Ok {
            bw_string_free(*numerator);
            *numerator = ptr::null_mut();
        }
        s
    })
}

/// Serialize the vector as JSON into a new string.
///
/// # Safety
/// `v` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bw_vector_to_json(v: *const BwVector, out: *mut *mut c_char) -> BwStatus {
    guard(|| match (v.as_ref(), out.is_null()) {
        (Some(v), false) => to_c_string(v.doc.to_json(), out),
        _ => fail(BwStatus::NullPointer, "null argument"),
    })
}

/// # Safety
/// `v` must be null or a handle from [`bw_compute`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bw_vector_free(v: *mut BwVector) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Run the checks described by a JSON config. Missing fields take their
/// defaults, so `"{}"` runs the default suite.
///
/// `*out` receives the report whenever one was produced, including when the
/// status is `CheckFailed`.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bw_run_json(config_json: *const c_char, out: *mut *mut BwReport) -> BwStatus {
    guard(|| {
        if config_json.is_null() || out.is_null() {
            return fail(BwStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(config_json).to_str() else {
            return fail(BwStatus::InvalidUtf8, "config is not UTF-8");
        };
        let report = match RunConfig::from_json(text).and_then(|c| run(&c)) {
            Ok(r) => r,
            Err(e) => return fail(status_of(&e), e.to_string()),
        };
        let pass = report.pass;
        *out = Box::into_raw(Box::new(BwReport { report }));
        if pass {
            BwStatus::Ok
        } else {
            fail(BwStatus::CheckFailed, "one or more checks failed")
        }
    })
}

/// 1 if every record passed, 0 otherwise or for a null handle.
///
/// # Safety
/// `r` must be null or a live handle from [`bw_run_json`].
#[no_mangle]
pub unsafe extern "C" fn bw_report_passed(r: *const BwReport) -> i32 {
    r.as_ref().map_or(0, |r| r.report.pass as i32)
}

/// # Safety
/// `r` must be null or a live handle from [`bw_run_json`].
#[no_mangle]
pub unsafe extern "C" fn bw_report_num_records(r: *const BwReport) -> usize {
    r.as_ref().map_or(0, |r| r.report.records.len())
}

/// The machine-readable report as a new string.
///
/// # Safety
/// `r` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bw_report_to_json(r: *const BwReport, out: *mut *mut c_char) -> BwStatus {
    guard(|| match (r.as_ref(), out.is_null()) {
        (Some(r), false) => to_c_string(r.report.to_json(), out),
        _ => fail(BwStatus::NullPointer, "null argument"),
    })
}

/// # Safety
/// `r` must be null or a handle from [`bw_run_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bw_report_free(r: *mut BwReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn bw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_mapping() {
        assert_eq!(status_of(&Error::ConfigInvalid("x".into())), BwStatus::ConfigInvalid);
        assert_eq!(status_of(&Error::SamplingExhausted(32)), BwStatus::SamplingExhausted);
        assert_eq!(status_of(&Error::DivisionByZero), BwStatus::Degenerate);
        assert_eq!(status_of(&Error::SingularCorner(2)), BwStatus::Degenerate);
    }

    #[test]
    fn last_error_is_per_call() {
        set_error("boom");
        assert!(!bw_last_error_message().is_null());
        assert_eq!(guard(|| BwStatus::Ok), BwStatus::Ok);
        assert!(bw_last_error_message().is_null());
    }

    #[test]
    fn panics_become_internal() {
        assert_eq!(guard(|| panic!("x")), BwStatus::Internal);
    }
}
