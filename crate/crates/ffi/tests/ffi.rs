use qshuf_ffi::*;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    qshuf_string_free(p);
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(qshuf_last_error()).to_str().unwrap().to_string() }
}

const JORDAN: &str = r#"{"vertices": 1, "edges": [[0, 0]]}"#;

#[test]
fn algebra_round_trip() {
    unsafe {
        let mut alg = ptr::null_mut();
        assert_eq!(qshuf_algebra_new(c(JORDAN).as_ptr(), 3, &mut alg), QshufStatus::Ok);
        assert!(!alg.is_null());

        let mut out = ptr::null_mut();
        assert_eq!(qshuf_expand_word(alg, 1, c("0:2").as_ptr(), &mut out), QshufStatus::Ok);
        let elem = take(out);
        assert!(elem.contains("\"exps\":[2]"), "{elem}");

        let mut val = ptr::null_mut();
        assert_eq!(qshuf_pair_word(alg, c(&elem).as_ptr(), c("0:-2").as_ptr(), &mut val), QshufStatus::Ok);
        let v = take(val);
        assert_ne!(v, "0");
        let mut val = ptr::null_mut();
        assert_eq!(qshuf_pair_word(alg, c(&elem).as_ptr(), c("0:-1").as_ptr(), &mut val), QshufStatus::Ok);
        assert_eq!(take(val), "0");

        let mut d = 0usize;
        for (n, want) in [(1, 1), (2, 2), (3, 3)] {
            assert_eq!(qshuf_slope_dim(alg, c("0").as_ptr(), c(&n.to_string()).as_ptr(), &mut d), QshufStatus::Ok);
            assert_eq!(d, want);
        }

        let mut word = ptr::null_mut();
        assert_eq!(qshuf_expand_word(alg, 1, c("0:0,0:1").as_ptr(), &mut word), QshufStatus::Ok);
        let f = take(word);
        let mut pbw = ptr::null_mut();
        assert_eq!(qshuf_pbw(alg, c(&f).as_ptr(), c("0").as_ptr(), c("1").as_ptr(), &mut pbw), QshufStatus::Ok);
        let p = take(pbw);
        assert!(p.contains("\"slope\":\"1\""), "{p}");
        qshuf_algebra_free(alg);
    }
}

#[test]
fn kac_and_conjecture() {
    unsafe {
        let mut out = ptr::null_mut();
        let k2 = r#"{"vertices": 2, "edges": [[0, 1], [0, 1]]}"#;
        assert_eq!(qshuf_kac_polynomial(c(k2).as_ptr(), c("1,1").as_ptr(), &mut out), QshufStatus::Ok);
        assert_eq!(take(out), r#"["1","1"]"#);
        let mut eq = -1;
        let mut rep = ptr::null_mut();
        assert_eq!(
            qshuf_check_conjecture(c(JORDAN).as_ptr(), c("4").as_ptr(), 1, 2, &mut eq, &mut rep),
            QshufStatus::Ok
        );
        assert_eq!(eq, 1);
        assert!(take(rep).contains("\"all_equal\":true"));
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut alg = ptr::null_mut();
        assert_eq!(qshuf_algebra_new(c("{\"vertices\": 1").as_ptr(), 1, &mut alg), QshufStatus::Parse);
        assert!(alg.is_null());
        assert!(last_error().contains("quiver file"), "{}", last_error());
        assert_eq!(qshuf_algebra_new(ptr::null(), 1, &mut alg), QshufStatus::NullPointer);

        assert_eq!(qshuf_algebra_new(c(JORDAN).as_ptr(), 1, &mut alg), QshufStatus::Ok);
        assert!(last_error().is_empty());
        let mut out = ptr::null_mut();
        assert_eq!(qshuf_expand_word(alg, 1, c("0:x").as_ptr(), &mut out), QshufStatus::Parse);
        assert!(last_error().contains("letter 1"), "{}", last_error());
        assert_eq!(qshuf_expand_word(alg, 1, c("3:0").as_ptr(), &mut out), QshufStatus::InvalidInput);
        assert_eq!(qshuf_expand_word(alg, 0, c("0:0").as_ptr(), &mut out), QshufStatus::InvalidInput);
        assert_eq!(qshuf_expand_word(ptr::null(), 1, c("0:0").as_ptr(), &mut out), QshufStatus::NullPointer);
        let mut d = 0usize;
        assert_eq!(qshuf_slope_dim(alg, c("0,0").as_ptr(), c("1").as_ptr(), &mut d), QshufStatus::InvalidInput);
        qshuf_algebra_free(alg);
        qshuf_algebra_free(ptr::null_mut());
        qshuf_string_free(ptr::null_mut());
    }
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/qshuf.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in ["qshuf_algebra_new", "qshuf_string_free", "qshuf_last_error", "QSHUF_STATUS_OK"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    // compile the header when a C compiler is around
    let Ok(status) = std::process::Command::new("cc").args(["-fsyntax-only", "-x", "c", header]).status() else {
        return;
    };
    assert!(status.success());
}
