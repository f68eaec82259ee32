use std::ffi::{CStr, CString};
use std::ptr;

use bethe_weights_ffi::*;

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    bw_string_free(p);
    s
}

unsafe fn vector(kind: BwKind, n: usize, factors: usize, pattern: &[usize], seed: u64) -> *mut BwVector {
    let mut v = ptr::null_mut();
    let s = bw_compute(kind, n, factors, pattern.as_ptr(), pattern.len(), seed, &mut v);
    assert_eq!(s, BwStatus::Ok);
    assert!(!v.is_null());
    v
}

#[test]
fn both_sides_agree_through_the_abi() {
    unsafe {
        let a = vector(BwKind::Bethe, 3, 2, &[1, 2], 5);
        let b = vector(BwKind::Projection, 3, 2, &[1, 2], 5);
        assert_eq!(bw_vector_dim(a), 9);
        assert!(bw_vector_nnz(a) > 0);
        let (mut ja, mut jb) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(bw_vector_to_json(a, &mut ja), BwStatus::Ok);
        assert_eq!(bw_vector_to_json(b, &mut jb), BwStatus::Ok);
        assert_eq!(take_string(ja), take_string(jb));
        bw_vector_free(a);
        bw_vector_free(b);
    }
}

#[test]
fn components_are_exact_fractions() {
    unsafe {
        let v = vector(BwKind::Bethe, 2, 1, &[1], 0);
        assert_eq!(bw_vector_nnz(v), 1);
        let (mut idx, mut num, mut den) = (usize::MAX, ptr::null_mut(), ptr::null_mut());
        assert_eq!(bw_vector_component(v, 0, &mut idx, &mut num, &mut den), BwStatus::Ok);
        assert_eq!(idx, 1);
        let num = take_string(num);
        let den = take_string(den);
        assert!(num != "0" && num.trim_start_matches('-').chars().all(|c| c.is_ascii_digit()));
        assert!(den.chars().all(|c| c.is_ascii_digit()) && den != "0");
        assert_eq!(
            bw_vector_component(v, 1, &mut idx, &mut ptr::null_mut(), &mut ptr::null_mut()),
            BwStatus::ConfigInvalid
        );
        bw_vector_free(v);
    }
}

#[test]
fn empty_pattern_accepts_null() {
    unsafe {
        let mut v = ptr::null_mut();
        assert_eq!(bw_compute(BwKind::Projection, 2, 2, ptr::null(), 0, 1, &mut v), BwStatus::Ok);
        assert_eq!(bw_vector_nnz(v), 1);
        bw_vector_free(v);
    }
}

#[test]
fn bad_inputs_report_status_and_message() {
    unsafe {
        let mut v = ptr::null_mut();
        assert_eq!(bw_compute(BwKind::Bethe, 2, 1, [5].as_ptr(), 1, 0, &mut v), BwStatus::ConfigInvalid);
        assert!(v.is_null());
        assert!(!bw_last_error_message().is_null());
        assert_eq!(bw_compute(BwKind::Bethe, 1, 1, ptr::null(), 0, 0, &mut v), BwStatus::ConfigInvalid);
        assert_eq!(bw_compute(BwKind::Bethe, 2, 1, ptr::null(), 2, 0, &mut v), BwStatus::NullPointer);
        assert_eq!(bw_compute(BwKind::Bethe, 2, 1, ptr::null(), 0, 0, ptr::null_mut()), BwStatus::NullPointer);

        let mut r = ptr::null_mut();
        assert_eq!(bw_run_json(ptr::null(), &mut r), BwStatus::NullPointer);
        let bad = CString::new(r#"{"checks": ["nope"]}"#).unwrap();
        assert_eq!(bw_run_json(bad.as_ptr(), &mut r), BwStatus::ConfigInvalid);
        assert!(r.is_null());
        let msg = CStr::from_ptr(bw_last_error_message()).to_str().unwrap();
        assert!(msg.contains("nope"), "{msg}");
        let bytes = [0xffu8, 0];
        assert_eq!(bw_run_json(bytes.as_ptr().cast(), &mut r), BwStatus::InvalidUtf8);
    }
}

#[test]
fn run_report_roundtrip() {
    unsafe {
        let cfg =
            CString::new(r#"{"n": 2, "factors": 1, "checks": ["rll", "main-theorem"], "trials": 2, "seeds": [3]}"#)
                .unwrap();
        let mut r = ptr::null_mut();
        assert_eq!(bw_run_json(cfg.as_ptr(), &mut r), BwStatus::Ok);
        assert_eq!(bw_report_passed(r), 1);
        assert!(bw_report_num_records(r) >= 4);
        let mut j = ptr::null_mut();
        assert_eq!(bw_report_to_json(r, &mut j), BwStatus::Ok);
        let first = take_string(j);
        bw_report_free(r);

        let mut r2 = ptr::null_mut();
        assert_eq!(bw_run_json(cfg.as_ptr(), &mut r2), BwStatus::Ok);
        assert_eq!(bw_report_to_json(r2, &mut j), BwStatus::Ok);
        assert_eq!(first, take_string(j));
        bw_report_free(r2);
    }
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        bw_vector_free(ptr::null_mut());
        bw_report_free(ptr::null_mut());
        bw_string_free(ptr::null_mut());
        assert_eq!(bw_vector_dim(ptr::null()), 0);
        assert_eq!(bw_report_passed(ptr::null()), 0);
        let mut j = ptr::null_mut();
        assert_eq!(bw_report_to_json(ptr::null(), &mut j), BwStatus::NullPointer);
    }
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/bethe_weights.h")).unwrap();
    for name in ["bw_compute", "bw_run_json", "bw_last_error_message", "BwStatus", "BwVector"] {
        assert!(h.contains(name), "{name} missing from header");
    }
}
