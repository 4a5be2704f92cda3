//! C ABI for the core library: string-based inputs (the same graph,
//! circuit, and weight grammars the CLI uses), opaque value handles, and
//! integer status codes matching the CLI exit codes.
//!
//! Ownership rules: every `*mut` returned by this library is owned by the
//! caller and must be released with the matching `*_free` function. Input
//! strings are borrowed, NUL-terminated UTF-8. Handles are not thread-safe;
//! do not share one handle across threads without external synchronization.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cising::classify::classify_ising;
use cising::counting::{count_min_cuts_bisection, count_min_cuts_brute};
use cising::error::CisingError;
use cising::graph::GraphFile;
use cising::iqp::{cz_expand, parse_circuit, statevector_prob};
use cising::numerics::interval::decimal_string;
use cising::numerics::value::ComplexValue;
use cising::numerics::weightspec::{parse_rational, WeightSpec};
use cising::partition::{z_ising_with, EvalConfig};

/// Status codes; nonzero means the out-parameters are untouched and
/// `cising_last_error` carries a message.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum CisingStatus {
    Ok = 0,
    InternalError = 1,
    InvalidInput = 2,
    CapExceeded = 3,
    Indeterminate = 4,
}

/// Opaque handle to an exact or certified-approximate complex value.
pub struct CisingValue(ComplexValue);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &CisingError) -> CisingStatus {
    match e {
        CisingError::CapExceeded(_) => CisingStatus::CapExceeded,
        CisingError::Indeterminate(_) => CisingStatus::Indeterminate,
        CisingError::OracleContract(_) => CisingStatus::InternalError,
        _ => CisingStatus::InvalidInput,
    }
}

fn fail(e: CisingError) -> CisingStatus {
    let code = status_of(&e);
    set_error(e.to_string());
    code
}

/// # Safety
/// `ptr` must be a valid NUL-terminated string or null.
unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, CisingStatus> {
    if ptr.is_null() {
        set_error(format!("{what}: null pointer"));
        return Err(CisingStatus::InvalidInput);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error(format!("{what}: invalid UTF-8"));
        CisingStatus::InvalidInput
    })
}

fn guard(f: impl FnOnce() -> CisingStatus) -> CisingStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic".into());
            CisingStatus::InternalError
        }
    }
}

/// Last error message for this thread, or null if none. Caller frees the
/// returned string with `cising_string_free`.
#[no_mangle]
pub extern "C" fn cising_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn cising_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Release a value handle.
///
/// # Safety
/// `v` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn cising_value_free(v: *mut CisingValue) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Evaluate the Ising partition function of a graph described in the
/// graph-file grammar. `y` and `lambda` are fallback weights in the weight
/// grammar (`rou(k,N)`, `polarpi(r,a,b)`, `real(p/q)`, `rect(re,im)`) and
/// may be null when the file carries its own weights. On success `*out`
/// receives a new handle.
///
/// # Safety
/// Pointer arguments must satisfy the module-level contract.
#[no_mangle]
pub unsafe extern "C" fn cising_eval_ising(
    graph_text: *const c_char,
    y: *const c_char,
    lambda: *const c_char,
    out: *mut *mut CisingValue,
) -> CisingStatus {
    guard(|| {
        if out.is_null() {
            set_error("out: null pointer".into());
            return CisingStatus::InvalidInput;
        }
        let text = match read_str(graph_text, "graph_text") {
            Ok(s) => s,
            Err(c) => return c,
        };
        let parse_opt = |p: *const c_char, what: &str| -> Result<Option<ComplexValue>, CisingStatus> {
            if p.is_null() {
                return Ok(None);
            }
            let s = read_str(p, what)?;
            WeightSpec::parse(s).map(|w| Some(w.to_value())).map_err(|e| fail(e))
        };
        let y = match parse_opt(y, "y") {
            Ok(v) => v,
            Err(c) => return c,
        };
        let lambda = match parse_opt(lambda, "lambda") {
            Ok(v) => v,
            Err(c) => return c,
        };
        let result = GraphFile::parse(text)
            .and_then(|f| f.to_ising(y.as_ref(), lambda.as_ref()))
            .and_then(|inst| z_ising_with(&inst, &EvalConfig::default()));
        match result {
            Ok(z) => {
                *out = Box::into_raw(Box::new(CisingValue(z)));
                CisingStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Exact probability of the measurement recorded in an IQP circuit file.
///
/// # Safety
/// Pointer arguments must satisfy the module-level contract.
#[no_mangle]
pub unsafe extern "C" fn cising_simulate_iqp(
    circuit_text: *const c_char,
    out: *mut *mut CisingValue,
) -> CisingStatus {
    guard(|| {
        if out.is_null() {
            set_error("out: null pointer".into());
            return CisingStatus::InvalidInput;
        }
        let text = match read_str(circuit_text, "circuit_text") {
            Ok(s) => s,
            Err(c) => return c,
        };
        let result = parse_circuit(text).and_then(|(c, meas)| {
            let c = if c.has_cz() { cz_expand(&c)? } else { c };
            statevector_prob(&c, &meas)
        });
        match result {
            Ok(p) => {
                *out = Box::into_raw(Box::new(CisingValue(p)));
                CisingStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Classify the approximation complexity of an edge weight. On success
/// `*out_verdict` receives a new string (e.g. "SHARP_P_HARD") and
/// `*out_item` the clause number of the classification theorem.
///
/// # Safety
/// Pointer arguments must satisfy the module-level contract.
#[no_mangle]
pub unsafe extern "C" fn cising_classify_weight(
    y: *const c_char,
    out_verdict: *mut *mut c_char,
    out_item: *mut u8,
) -> CisingStatus {
    guard(|| {
        if out_verdict.is_null() || out_item.is_null() {
            set_error("out: null pointer".into());
            return CisingStatus::InvalidInput;
        }
        let s = match read_str(y, "y") {
            Ok(s) => s,
            Err(c) => return c,
        };
        let result = WeightSpec::parse(s).and_then(|w| classify_ising(&w));
        match result {
            Ok(r) => {
                *out_verdict = CString::new(r.verdict.as_str()).unwrap().into_raw();
                *out_item = r.item;
                CisingStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Count minimum s-t cuts of the graph file's `terminals` pair through the
/// noisy-oracle bisection, cross-checked against brute force. `noise` is a
/// rational like "22/21".
///
/// # Safety
/// Pointer arguments must satisfy the module-level contract.
#[no_mangle]
pub unsafe extern "C" fn cising_count_min_cuts(
    graph_text: *const c_char,
    noise: *const c_char,
    seed: u64,
    out_k: *mut usize,
    out_count: *mut u64,
) -> CisingStatus {
    guard(|| {
        if out_k.is_null() || out_count.is_null() {
            set_error("out: null pointer".into());
            return CisingStatus::InvalidInput;
        }
        let text = match read_str(graph_text, "graph_text") {
            Ok(s) => s,
            Err(c) => return c,
        };
        let noise = match read_str(noise, "noise") {
            Ok(s) => s,
            Err(c) => return c,
        };
        let result = (|| {
            let file = GraphFile::parse(text)?;
            let (s, t) = file.terminals.ok_or_else(|| {
                CisingError::Parse("graph file needs a `terminals s t` line".into())
            })?;
            let noise = parse_rational(noise)?;
            let got = count_min_cuts_bisection(&file.graph, s, t, noise, seed)?;
            let brute = count_min_cuts_brute(&file.graph, s, t)?;
            if got != brute {
                return Err(CisingError::OracleContract(
                    "bisection result disagrees with brute force".into(),
                ));
            }
            Ok(got)
        })();
        match result {
            Ok(r) => {
                *out_k = r.k;
                *out_count = r.count;
                CisingStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// 1 if the value is exact (a cyclotomic number), 0 for a certified
/// floating disk, -1 on a null handle.
///
/// # Safety
/// `v` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cising_value_is_exact(v: *const CisingValue) -> i32 {
    if v.is_null() {
        return -1;
    }
    (*v).0.is_exact() as i32
}

/// Decimal rendering "re + im i" with the given digit count; caller frees.
/// Returns null on a null handle.
///
/// # Safety
/// `v` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cising_value_decimal(v: *const CisingValue, digits: u32) -> *mut c_char {
    if v.is_null() {
        return std::ptr::null_mut();
    }
    let digits = digits.clamp(1, 1000);
    let (re, im) = (*v).0.re_im(4 * digits + 32);
    let s = format!(
        "{} + {}i",
        decimal_string(&re.midpoint(), digits),
        decimal_string(&im.midpoint(), digits)
    );
    CString::new(s).unwrap().into_raw()
}

/// Upper bound on the distance between the decimal rendering and the true
/// value, as a decimal string; caller frees.
///
/// # Safety
/// `v` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cising_value_error_radius(
    v: *const CisingValue,
    digits: u32,
) -> *mut c_char {
    if v.is_null() {
        return std::ptr::null_mut();
    }
    let digits = digits.clamp(1, 1000);
    let (re, im) = (*v).0.re_im(4 * digits + 32);
    let two = num_rational::BigRational::from(num_bigint::BigInt::from(2u32));
    let radius = (re.width() + im.width()) / two;
    CString::new(decimal_string(&radius, digits)).unwrap().into_raw()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn eval_round_trip() {
        let graph = cstr("graph 2\nedge 0 1\n");
        let y = cstr("rou(1,4)");
        let mut out: *mut CisingValue = std::ptr::null_mut();
        let status = unsafe {
            cising_eval_ising(graph.as_ptr(), y.as_ptr(), std::ptr::null(), &mut out)
        };
        assert!(status == CisingStatus::Ok);
        assert!(!out.is_null());
        unsafe {
            assert_eq!(cising_value_is_exact(out), 1);
            let s = cising_value_decimal(out, 6);
            let text = CStr::from_ptr(s).to_str().unwrap().to_string();
            assert_eq!(text, "2.000000 + 2.000000i");
            cising_string_free(s);
            let r = cising_value_error_radius(out, 6);
            assert_eq!(CStr::from_ptr(r).to_str().unwrap(), "0.000000");
            cising_string_free(r);
            cising_value_free(out);
        }
    }

    #[test]
    fn parse_errors_set_message_and_code() {
        let graph = cstr("graph nonsense");
        let mut out: *mut CisingValue = std::ptr::null_mut();
        let status = unsafe {
            cising_eval_ising(graph.as_ptr(), std::ptr::null(), std::ptr::null(), &mut out)
        };
        assert!(status == CisingStatus::InvalidInput);
        assert!(out.is_null());
        unsafe {
            let msg = cising_last_error();
            assert!(!msg.is_null());
            cising_string_free(msg);
        }
    }

    #[test]
    fn classify_and_simulate() {
        let y = cstr("polarpi(1,1,5)");
        let mut verdict: *mut c_char = std::ptr::null_mut();
        let mut item = 0u8;
        let status = unsafe { cising_classify_weight(y.as_ptr(), &mut verdict, &mut item) };
        assert!(status == CisingStatus::Ok);
        unsafe {
            assert_eq!(CStr::from_ptr(verdict).to_str().unwrap(), "SHARP_P_HARD");
            cising_string_free(verdict);
        }
        assert_eq!(item, 6);

        let circuit = cstr("iqp 1 theta pi(1,8)\np 0\n");
        let mut out: *mut CisingValue = std::ptr::null_mut();
        let status = unsafe { cising_simulate_iqp(circuit.as_ptr(), &mut out) };
        assert!(status == CisingStatus::Ok);
        unsafe {
            let s = cising_value_decimal(out, 8);
            assert_eq!(CStr::from_ptr(s).to_str().unwrap(), "0.85355339 + 0.00000000i");
            cising_string_free(s);
            cising_value_free(out);
        }
    }

    #[test]
    fn min_cut_counts() {
        let graph = cstr("graph 4\nedge 0 1\nedge 1 2\nedge 2 3\nedge 0 3\nterminals 0 2\n");
        let noise = cstr("22/21");
        let (mut k, mut count) = (0usize, 0u64);
        let status = unsafe {
            cising_count_min_cuts(graph.as_ptr(), noise.as_ptr(), 3, &mut k, &mut count)
        };
        assert!(status == CisingStatus::Ok);
        assert_eq!((k, count), (2, 4));
    }

    #[test]
    fn null_handles_are_tolerated() {
        unsafe {
            assert_eq!(cising_value_is_exact(std::ptr::null()), -1);
            assert!(cising_value_decimal(std::ptr::null(), 5).is_null());
            cising_value_free(std::ptr::null_mut());
            cising_string_free(std::ptr::null_mut());
        }
    }
}
