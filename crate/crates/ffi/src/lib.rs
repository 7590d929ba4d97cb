//! C interface to tiltlab.
//!
//! Objects are opaque handles created by `*_new`/`*_parse` and released by the matching
//! `*_free`. Every fallible call returns a [`TiltlabStatus`]; on failure a message is
//! available from [`tiltlab_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use tiltlab::clustercat::{ClusterCategory, DynkinType};
use tiltlab::exactlin::Field;
use tiltlab::format::parse_algebra;
use tiltlab::homalg::{ext_dim, global_dim, gorenstein_report, HomDim};
use tiltlab::repmod::{simple, Algebra};
use tiltlab::stablecm::{cy3_report, StableError};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TiltlabStatus {
    Ok = 0,
    CheckFailed = 1,
    ParseError = 2,
    Internal = 3,
    InvalidArgument = 4,
    NullPointer = 5,
}

/// A finite-dimensional bound quiver algebra.
pub struct TiltlabAlgebra {
    inner: Algebra,
}

/// The d-cluster category of a Dynkin quiver.
pub struct TiltlabCluster {
    inner: ClusterCategory,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn guard(f: impl FnOnce() -> Result<TiltlabStatus, (TiltlabStatus, String)>) -> TiltlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => {
            if s == TiltlabStatus::Ok {
                set_error("");
            }
            s
        }
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            TiltlabStatus::Internal
        }
    }
}

fn null() -> (TiltlabStatus, String) {
    (TiltlabStatus::NullPointer, "null pointer argument".into())
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, (TiltlabStatus, String)> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (TiltlabStatus::InvalidArgument, "string is not UTF-8".into()))
}

fn encode(d: HomDim) -> i64 {
    d.finite().map_or(-1, |v| v as i64)
}

/// Message for the last failing call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn tiltlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tiltlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parse an algebra in the text format. `field` may be null to use the field named in
/// the text, otherwise `"Q"` or `"Fp <p>"`.
///
/// # Safety
/// `text` and `field` (if non-null) must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tiltlab_algebra_parse(
    text: *const c_char,
    field: *const c_char,
    max_path_len: usize,
    out: *mut *mut TiltlabAlgebra,
) -> TiltlabStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let text = str_arg(text)?;
        let field = if field.is_null() {
            None
        } else {
            Some(Field::parse(str_arg(field)?).map_err(|e| (TiltlabStatus::ParseError, e.to_string()))?)
        };
        let a = parse_algebra(text, field, max_path_len).map_err(|e| (TiltlabStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(TiltlabAlgebra { inner: Arc::new(a) }));
        Ok(TiltlabStatus::Ok)
    })
}

/// # Safety
/// `a` must come from [`tiltlab_algebra_parse`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tiltlab_algebra_free(a: *mut TiltlabAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

unsafe fn alg<'a>(a: *const TiltlabAlgebra) -> Result<&'a Algebra, (TiltlabStatus, String)> {
    a.as_ref().map(|a| &a.inner).ok_or_else(null)
}

/// Dimension and number of vertices.
///
/// # Safety
/// `a` must be a live handle; `dim` and `vertices` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tiltlab_algebra_shape(a: *const TiltlabAlgebra, dim: *mut usize, vertices: *mut usize) -> TiltlabStatus {
    guard(|| {
        let a = alg(a)?;
        if dim.is_null() || vertices.is_null() {
            return Err(null());
        }
        *dim = a.dim();
        *vertices = a.vertex_count();
        Ok(TiltlabStatus::Ok)
    })
}

/// Gorenstein and global dimension; `-1` stands for "at least `cutoff`".
///
/// # Safety
/// `a` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn tiltlab_algebra_dimensions(
    a: *const TiltlabAlgebra,
    cutoff: usize,
    gorenstein: *mut i64,
    global: *mut i64,
) -> TiltlabStatus {
    guard(|| {
        let a = alg(a)?;
        if gorenstein.is_null() || global.is_null() {
            return Err(null());
        }
        *gorenstein = encode(gorenstein_report(a, cutoff).dimension);
        *global = encode(global_dim(a, cutoff));
        Ok(TiltlabStatus::Ok)
    })
}

/// `dim Ext^n(S_i, S_j)` for simples indexed from 0 in vertex order.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tiltlab_ext_simples(a: *const TiltlabAlgebra, i: usize, j: usize, n: usize, out: *mut usize) -> TiltlabStatus {
    guard(|| {
        let a = alg(a)?;
        if out.is_null() {
            return Err(null());
        }
        let count = a.vertex_count();
        if i >= count || j >= count {
            return Err((TiltlabStatus::InvalidArgument, format!("vertex out of range 0..{count}")));
        }
        *out = ext_dim(&simple(a, i).unwrap(), &simple(a, j).unwrap(), n);
        Ok(TiltlabStatus::Ok)
    })
}

/// Duality `dim Ext^2(Y, X) = dim stable Ext^1(X, Y)` over pairs of simples.
/// Returns `Ok` when it holds, `CheckFailed` when it fails or the algebra is not
/// Gorenstein of dimension at most 1.
///
/// # Safety
/// `a` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tiltlab_cy3_check(a: *const TiltlabAlgebra, cutoff: usize) -> TiltlabStatus {
    guard(|| {
        let a = alg(a)?;
        match cy3_report(a, cutoff) {
            Ok(r) if r.duality_holds() => Ok(TiltlabStatus::Ok),
            Ok(r) => {
                let bad: Vec<String> = r.duality.iter().filter(|d| !d.equal).map(|d| format!("({}, {})", d.x, d.y)).collect();
                Err((TiltlabStatus::CheckFailed, format!("duality fails at {}", bad.join(" "))))
            }
            Err(e @ StableError::NotGorensteinDim1(_)) => Err((TiltlabStatus::CheckFailed, e.to_string())),
            Err(e) => Err((TiltlabStatus::Internal, e.to_string())),
        }
    })
}

/// Cluster category of a Dynkin type such as `"A4"` or `"D4"`, with CY dimension `d`.
///
/// # Safety
/// `dynkin` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tiltlab_cluster_new(dynkin: *const c_char, d: usize, out: *mut *mut TiltlabCluster) -> TiltlabStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let t: DynkinType = str_arg(dynkin)?
            .parse()
            .map_err(|e: tiltlab::clustercat::ClusterError| (TiltlabStatus::ParseError, e.to_string()))?;
        let c = ClusterCategory::dynkin(t, d, Field::Rational).map_err(|e| (TiltlabStatus::InvalidArgument, e.to_string()))?;
        *out = Box::into_raw(Box::new(TiltlabCluster { inner: c }));
        Ok(TiltlabStatus::Ok)
    })
}

/// # Safety
/// `c` must come from [`tiltlab_cluster_new`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tiltlab_cluster_free(c: *mut TiltlabCluster) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Number of objects in the fundamental domain and number of cluster-tilting sets.
///
/// # Safety
/// `c` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn tiltlab_cluster_counts(c: *const TiltlabCluster, domain: *mut usize, tilting_sets: *mut usize) -> TiltlabStatus {
    guard(|| {
        let c = &c.as_ref().ok_or_else(null)?.inner;
        if domain.is_null() || tilting_sets.is_null() {
            return Err(null());
        }
        *domain = c.domain().len();
        *tilting_sets = c
            .enumerate_cluster_tilting()
            .map_err(|e| (TiltlabStatus::Internal, e.to_string()))?
            .len();
        Ok(TiltlabStatus::Ok)
    })
}

/// Run the command line with `argv[0..argc]` (program name first). The exit code is
/// returned; the printed output is stored in `*output`, to be released with
/// [`tiltlab_string_free`]. `output` may be null.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn tiltlab_run(argc: c_int, argv: *const *const c_char, output: *mut *mut c_char) -> c_int {
    let result = catch_unwind(AssertUnwindSafe(|| {
        if argv.is_null() || argc < 0 {
            return (tiltlab::cli::EXIT_PARSE, "error: null argv\n".to_string());
        }
        let mut args = Vec::with_capacity(argc as usize);
        for i in 0..argc as usize {
            let p = *argv.add(i);
            if p.is_null() {
                return (tiltlab::cli::EXIT_PARSE, "error: null argument\n".to_string());
            }
            args.push(CStr::from_ptr(p).to_string_lossy().into_owned());
        }
        let (code, out, _) = tiltlab::cli::run(args);
        (code, out)
    }));
    let (code, text) = result.unwrap_or((tiltlab::cli::EXIT_INTERNAL, "error: internal panic\n".into()));
    if !output.is_null() {
        *output = CString::new(text.replace('\0', " ")).unwrap_or_default().into_raw();
    }
    code
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tiltlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
