use std::ffi::{CStr, CString};
use std::ptr;

use tiltlab_ffi::*;

const A4: &str = include_str!("../../core/fixtures/a4_cluster.alg");

fn last_error() -> String {
    unsafe { CStr::from_ptr(tiltlab_last_error()) }.to_string_lossy().into_owned()
}

fn parse(text: &str) -> (TiltlabStatus, *mut TiltlabAlgebra) {
    let text = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    let s = unsafe { tiltlab_algebra_parse(text.as_ptr(), ptr::null(), 30, &mut out) };
    (s, out)
}

#[test]
fn algebra_handle_round_trip() {
    let (s, a) = parse(A4);
    assert_eq!(s, TiltlabStatus::Ok);
    assert!(!a.is_null());
    let (mut dim, mut n) = (0, 0);
    let (mut gor, mut gl) = (0i64, 0i64);
    let mut ext = 0;
    unsafe {
        assert_eq!(tiltlab_algebra_shape(a, &mut dim, &mut n), TiltlabStatus::Ok);
        assert_eq!(tiltlab_algebra_dimensions(a, 20, &mut gor, &mut gl), TiltlabStatus::Ok);
        assert_eq!(tiltlab_ext_simples(a, 0, 1, 1, &mut ext), TiltlabStatus::Ok);
        assert_eq!(tiltlab_cy3_check(a, 20), TiltlabStatus::Ok);
        assert_eq!(tiltlab_ext_simples(a, 9, 0, 1, &mut ext), TiltlabStatus::InvalidArgument);
        tiltlab_algebra_free(a);
    }
    assert_eq!((dim, n), (9, 4));
    assert_eq!(gor, 1);
    assert_eq!(gl, -1);
    assert!(last_error().contains("out of range"));
}

#[test]
fn parse_errors_and_null_pointers() {
    let (s, a) = parse("algebra x\nvertices 2\narrow a 1 -> 7\n");
    assert_eq!(s, TiltlabStatus::ParseError);
    assert!(a.is_null());
    assert!(!last_error().is_empty());
    unsafe {
        assert_eq!(tiltlab_algebra_parse(ptr::null(), ptr::null(), 30, &mut ptr::null_mut()), TiltlabStatus::NullPointer);
        let mut d = 0;
        assert_eq!(tiltlab_algebra_shape(ptr::null(), &mut d, &mut d), TiltlabStatus::NullPointer);
        tiltlab_algebra_free(ptr::null_mut());
        tiltlab_cluster_free(ptr::null_mut());
        tiltlab_string_free(ptr::null_mut());
    }
}

#[test]
fn cluster_counts() {
    let t = CString::new("A3").unwrap();
    let mut c = ptr::null_mut();
    let (mut domain, mut sets) = (0, 0);
    unsafe {
        assert_eq!(tiltlab_cluster_new(t.as_ptr(), 2, &mut c), TiltlabStatus::Ok);
        assert_eq!(tiltlab_cluster_counts(c, &mut domain, &mut sets), TiltlabStatus::Ok);
        tiltlab_cluster_free(c);
    }
    // A3: 6 indecomposables in mod plus 3 shifted projectives, 14 clusters
    assert_eq!((domain, sets), (9, 14));

    let bad = CString::new("Q9").unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { tiltlab_cluster_new(bad.as_ptr(), 2, &mut c) }, TiltlabStatus::ParseError);
    assert!(c.is_null());
}

#[test]
fn run_matches_cli_exit_codes() {
    let run = |args: &[&str]| {
        let owned: Vec<CString> = args.iter().map(|a| CString::new(*a).unwrap()).collect();
        let ptrs: Vec<_> = owned.iter().map(|a| a.as_ptr()).collect();
        let mut out = ptr::null_mut();
        let code = unsafe { tiltlab_run(ptrs.len() as i32, ptrs.as_ptr(), &mut out) };
        let text = unsafe { CStr::from_ptr(out) }.to_string_lossy().into_owned();
        unsafe { tiltlab_string_free(out) };
        (code, text)
    };
    let (code, text) = run(&["tiltlab", "cluster", "--type", "A", "--rank", "3", "enumerate", "--expect", "14"]);
    assert_eq!(code, 0, "{text}");
    let (code, _) = run(&["tiltlab", "no-such-command"]);
    assert_eq!(code, 2);
    assert_eq!(unsafe { tiltlab_run(1, ptr::null(), ptr::null_mut()) }, 2);
}

#[test]
fn version_and_header() {
    let v = unsafe { CStr::from_ptr(tiltlab_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    let header = include_str!("../include/tiltlab.h");
    for name in ["tiltlab_algebra_parse", "tiltlab_run", "TILTLAB_STATUS_NULL_POINTER", "typedef struct TiltlabAlgebra"] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
