//! C ABI for qshuf.
//!
//! Every function returns a [`QshufStatus`]. Results that are strings are
//! written through an out pointer as newly allocated, NUL-terminated JSON and
//! must be released with [`qshuf_string_free`]. After a failing call,
//! [`qshuf_last_error`] describes the failure on the calling thread.

use qshuf::field::{Field, Rational};
use qshuf::hopf::{GeneratorWord, Hopf};
use qshuf::kac::{check_conjecture, kac_hua};
use qshuf::params::rational_params;
use qshuf::quiver::Quiver;
use qshuf::report::{parse_dims, ElementFile};
use qshuf::shuffle::{ShuffleAlgebra, Side};
use qshuf::slope::{parse_slope, slope_dim, DEFAULT_CEILING};
use qshuf::Error;
use serde_json::json;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QshufStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Parse = 3,
    ResourceLimit = 4,
    DivisionByZero = 5,
    Internal = 6,
    Unsolvable = 7,
    Io = 8,
    InvalidUtf8 = 9,
    Panic = 10,
}

/// Opaque handle: a quiver with a specialization of its parameters.
pub struct QshufAlgebra {
    hopf: Hopf<Rational>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(QshufStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidInput(_) => QshufStatus::InvalidInput,
            Error::Parse(_) => QshufStatus::Parse,
            Error::ResourceLimit(_) => QshufStatus::ResourceLimit,
            Error::DivisionByZero(_) => QshufStatus::DivisionByZero,
            Error::Internal(_) => QshufStatus::Internal,
            Error::Unsolvable(_) => QshufStatus::Unsolvable,
            Error::Io(_) => QshufStatus::Io,
        };
        Failure(code, e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn guard(f: impl FnOnce() -> Outcome<()>) -> QshufStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            QshufStatus::Ok
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(&msg);
            code
        }
        Err(_) => {
            set_error("panic inside qshuf");
            QshufStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Outcome<&'a str> {
    if p.is_null() {
        return Err(Failure(QshufStatus::NullPointer, format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(QshufStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Outcome<()> {
    if out.is_null() {
        return Err(Failure(QshufStatus::NullPointer, "output pointer is NULL".into()));
    }
    let c = CString::new(s).map_err(|e| Failure(QshufStatus::Internal, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn algebra<'a>(alg: *const QshufAlgebra) -> Outcome<&'a QshufAlgebra> {
    alg.as_ref()
        .ok_or_else(|| Failure(QshufStatus::NullPointer, "algebra handle is NULL".into()))
}

fn side_of(side: i32) -> Outcome<Side> {
    match side {
        1 => Ok(Side::Plus),
        -1 => Ok(Side::Minus),
        _ => Err(Failure(QshufStatus::InvalidInput, format!("side must be 1 or -1, got {side}"))),
    }
}

/// Message describing the last failure on this thread, or an empty string.
/// The pointer stays valid until the next qshuf call on the same thread.
#[no_mangle]
pub extern "C" fn qshuf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qshuf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates an algebra for a quiver given as JSON
/// (`{"vertices": 1, "edges": [[0, 0]]}`) with parameters drawn from `seed`.
///
/// # Safety
/// `quiver_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qshuf_algebra_new(
    quiver_json: *const c_char,
    seed: u64,
    out: *mut *mut QshufAlgebra,
) -> QshufStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(QshufStatus::NullPointer, "output pointer is NULL".into()));
        }
        let q = Quiver::from_json(read_str(quiver_json, "quiver_json")?)?;
        let alg = ShuffleAlgebra::new(q.clone(), rational_params(&q, seed))?;
        *out = Box::into_raw(Box::new(QshufAlgebra { hopf: Hopf::new(alg) }));
        Ok(())
    })
}

/// Destroys a handle. NULL is ignored.
///
/// # Safety
/// `alg` must come from [`qshuf_algebra_new`] and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qshuf_algebra_free(alg: *mut QshufAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Expands the generator word `"i:d,i:d,..."` on side `1` (plus) or `-1`
/// (minus) and writes the element as JSON.
///
/// # Safety
/// Pointers must be valid; `word` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qshuf_expand_word(
    alg: *const QshufAlgebra,
    side: i32,
    word: *const c_char,
    out_json: *mut *mut c_char,
) -> QshufStatus {
    guard(|| {
        let a = algebra(alg)?;
        let w = GeneratorWord::parse(side_of(side)?, read_str(word, "word")?)?;
        let x = a.hopf.expand_word(&w)?;
        let s = serde_json::to_string(&ElementFile::from_element(&x)).map_err(|e| Failure(QshufStatus::Internal, e.to_string()))?;
        write_string(out_json, s)
    })
}

/// Pairs a plus element (JSON) with a minus generator word and writes the
/// value as an exact rational string.
///
/// # Safety
/// Pointers must be valid and strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qshuf_pair_word(
    alg: *const QshufAlgebra,
    element_json: *const c_char,
    minus_word: *const c_char,
    out_value: *mut *mut c_char,
) -> QshufStatus {
    guard(|| {
        let a = algebra(alg)?;
        let f = ElementFile::from_json(read_str(element_json, "element_json")?)?.to_element()?;
        let w = GeneratorWord::parse(Side::Minus, read_str(minus_word, "minus_word")?)?;
        write_string(out_value, a.hopf.pairing_word(&f, &w)?.to_exact_string())
    })
}

/// Dimension of the slope piece `B_{m|n}` over the rationals.
///
/// # Safety
/// Pointers must be valid and strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qshuf_slope_dim(
    alg: *const QshufAlgebra,
    slope: *const c_char,
    dims: *const c_char,
    out: *mut usize,
) -> QshufStatus {
    guard(|| {
        let a = algebra(alg)?;
        let m = parse_slope(read_str(slope, "slope")?)?;
        let n = parse_dims(read_str(dims, "dims")?)?;
        let nv = a.hopf.algebra().vertex_count();
        if m.len() != nv || n.len() != nv {
            return Err(Failure(QshufStatus::InvalidInput, format!("slope and dims need {nv} entries")));
        }
        if out.is_null() {
            return Err(Failure(QshufStatus::NullPointer, "output pointer is NULL".into()));
        }
        *out = slope_dim(a.hopf.algebra(), &m, &n, a.hopf.ceiling())?;
        Ok(())
    })
}

/// PBW factorization of a plus element (JSON) along `slope + r theta`,
/// written as JSON.
///
/// # Safety
/// Pointers must be valid and strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qshuf_pbw(
    alg: *const QshufAlgebra,
    element_json: *const c_char,
    slope: *const c_char,
    theta: *const c_char,
    out_json: *mut *mut c_char,
) -> QshufStatus {
    guard(|| {
        let a = algebra(alg)?;
        let f = ElementFile::from_json(read_str(element_json, "element_json")?)?.to_element()?;
        let m = parse_slope(read_str(slope, "slope")?)?;
        let theta = parse_slope(read_str(theta, "theta")?)?;
        let p = a.hopf.pbw_decompose(&f, &m, &theta)?;
        let v = json!({
            "terms": p.terms.iter().map(|t| json!({
                "coeff": t.coeff.to_exact_string(),
                "factors": t.factors.iter().map(|x| json!({
                    "slope": x.slope.to_string(),
                    "element": ElementFile::from_element(&x.element),
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        });
        write_string(out_json, v.to_string())
    })
}

/// Kac polynomial of a quiver (JSON) at the dimension vector `"n_1,n_2,..."`,
/// written as a JSON list of decimal coefficients, constant term first.
///
/// # Safety
/// Pointers must be valid and strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qshuf_kac_polynomial(
    quiver_json: *const c_char,
    dims: *const c_char,
    out_json: *mut *mut c_char,
) -> QshufStatus {
    guard(|| {
        let q = Quiver::from_json(read_str(quiver_json, "quiver_json")?)?;
        let p = kac_hua(&q, &parse_dims(read_str(dims, "dims")?)?)?;
        let v: Vec<String> = p.coeffs.iter().map(|c| c.to_string()).collect();
        write_string(out_json, json!(v).to_string())
    })
}

/// Runs the dimension comparison for all `n <= upto` with seeds
/// `seed, seed + 1, ..., seed + trials - 1` and writes the report as JSON.
/// `*all_equal` receives 1 when every row matches, 0 otherwise.
///
/// # Safety
/// Pointers must be valid and strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qshuf_check_conjecture(
    quiver_json: *const c_char,
    upto: *const c_char,
    seed: u64,
    trials: u32,
    all_equal: *mut i32,
    out_json: *mut *mut c_char,
) -> QshufStatus {
    guard(|| {
        let q = Quiver::from_json(read_str(quiver_json, "quiver_json")?)?;
        let upto = parse_dims(read_str(upto, "upto")?)?;
        let seeds: Vec<u64> = (0..trials.max(1) as u64).map(|i| seed + i).collect();
        let r = check_conjecture(&q, &upto, &seeds, DEFAULT_CEILING, 1)?;
        if !all_equal.is_null() {
            *all_equal = r.all_equal as i32;
        }
        let s = serde_json::to_string(&r).map_err(|e| Failure(QshufStatus::Internal, e.to_string()))?;
        write_string(out_json, s)
    })
}
