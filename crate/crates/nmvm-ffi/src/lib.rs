//! C ABI over the core solvers: opaque model handles, status codes,
//! thread-local error text. The generated header lands in include/nmvm.h.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use nmvm_core::concave::{self, GammaEvalConfig};
use nmvm_core::error::Error;
use nmvm_core::{exp_opt, oracle, NmvmModel, UtilitySpec};

/// Call outcome. Anything but Ok leaves a message behind nmvm_last_error().
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NmvmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Bad input: malformed JSON, failed validation, wrong buffer length.
    InvalidArgument = 3,
    Numeric = 4,
    /// The objective has no finite maximizer for this model and utility.
    Degenerate = 5,
    Panic = 6,
}

/// Opaque validated market model.
pub struct NmvmModelHandle(NmvmModel);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    // Interior NULs cannot reach C; replace rather than fail.
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(err: Error) -> NmvmStatus {
    let status = match err {
        Error::Degenerate(_) => NmvmStatus::Degenerate,
        Error::Numeric(_) => NmvmStatus::Numeric,
        _ => NmvmStatus::InvalidArgument,
    };
    set_error(&err.to_string());
    status
}

fn guarded(f: impl FnOnce() -> NmvmStatus) -> NmvmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == NmvmStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => {
            set_error("internal panic");
            NmvmStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or a NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, NmvmStatus> {
    if p.is_null() {
        set_error("null string pointer");
        return Err(NmvmStatus::NullPointer);
    }
    match CStr::from_ptr(p).to_str() {
        Ok(s) => Ok(s),
        Err(_) => {
            set_error("string is not valid UTF-8");
            Err(NmvmStatus::InvalidUtf8)
        }
    }
}

unsafe fn model_ref<'a>(h: *const NmvmModelHandle) -> Result<&'a NmvmModel, NmvmStatus> {
    if h.is_null() {
        set_error("null model handle");
        return Err(NmvmStatus::NullPointer);
    }
    Ok(&(*h).0)
}

fn parse_utility(text: &str) -> Result<UtilitySpec, NmvmStatus> {
    let spec: UtilitySpec = match serde_json::from_str(text) {
        Ok(s) => s,
        Err(e) => return Err(fail(Error::Json(e))),
    };
    if let Err(e) = spec.validate() {
        return Err(fail(e));
    }
    Ok(spec)
}

unsafe fn check_weights_len(
    len: usize,
    d: usize,
    ptr: *const f64,
) -> Result<(), NmvmStatus> {
    if ptr.is_null() {
        set_error("null weights pointer");
        return Err(NmvmStatus::NullPointer);
    }
    if len != d {
        set_error(&format!("weights buffer holds {len} values, model has {d} assets"));
        return Err(NmvmStatus::InvalidArgument);
    }
    Ok(())
}

/// Pointer to the calling thread's last error text; empty after a
/// successful call. Valid until the thread's next library call.
#[no_mangle]
pub extern "C" fn nmvm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses and validates a model from JSON. On Ok the caller owns the
/// handle and must release it with nmvm_model_free.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nmvm_model_from_json(
    json: *const c_char,
    out: *mut *mut NmvmModelHandle,
) -> NmvmStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return NmvmStatus::NullPointer;
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match serde_json::from_str::<NmvmModel>(text) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(NmvmModelHandle(m)));
                NmvmStatus::Ok
            }
            Err(e) => fail(Error::Json(e)),
        }
    })
}

/// Releases a model handle. Null is a no-op.
///
/// # Safety
/// `h` must be null or a pointer returned by nmvm_model_from_json that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn nmvm_model_free(h: *mut NmvmModelHandle) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of risky assets.
///
/// # Safety
/// `h` must be a live model handle; `out_d` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nmvm_model_dim(
    h: *const NmvmModelHandle,
    out_d: *mut usize,
) -> NmvmStatus {
    guarded(|| {
        let m = match model_ref(h) {
            Ok(m) => m,
            Err(s) => return s,
        };
        if out_d.is_null() {
            set_error("null output pointer");
            return NmvmStatus::NullPointer;
        }
        *out_d = m.d();
        NmvmStatus::Ok
    })
}

/// Closed-form exponential-utility optimum. `weights` must hold exactly
/// `nmvm_model_dim` entries; the minimizer location, expected utility and
/// certainty equivalent land in the scalar outputs (null skips one).
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn nmvm_exp_optimal(
    h: *const NmvmModelHandle,
    a: f64,
    w0: f64,
    weights: *mut f64,
    weights_len: usize,
    out_q_min: *mut f64,
    out_expected_utility: *mut f64,
    out_certainty_equivalent: *mut f64,
) -> NmvmStatus {
    guarded(|| {
        let m = match model_ref(h) {
            Ok(m) => m,
            Err(s) => return s,
        };
        if let Err(s) = check_weights_len(weights_len, m.d(), weights) {
            return s;
        }
        match exp_opt::global_optimal(m, a, w0) {
            Ok(sol) => {
                std::ptr::copy_nonoverlapping(sol.weights.as_ptr(), weights, weights_len);
                if !out_q_min.is_null() {
                    *out_q_min = sol.q_min;
                }
                if !out_expected_utility.is_null() {
                    *out_expected_utility = sol.expected_utility;
                }
                if !out_certainty_equivalent.is_null() {
                    *out_certainty_equivalent = sol.certainty_equivalent();
                }
                NmvmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Exponential-utility optimum under the no-short-sales constraint.
/// `active` (length d, may be null) receives 1 where the constraint pins
/// the asset to zero.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn nmvm_exp_short_sales(
    h: *const NmvmModelHandle,
    a: f64,
    w0: f64,
    weights: *mut f64,
    weights_len: usize,
    active: *mut u8,
    out_expected_utility: *mut f64,
) -> NmvmStatus {
    guarded(|| {
        let m = match model_ref(h) {
            Ok(m) => m,
            Err(s) => return s,
        };
        if let Err(s) = check_weights_len(weights_len, m.d(), weights) {
            return s;
        }
        match exp_opt::short_sales_optimal(m, a, w0) {
            Ok(sol) => {
                std::ptr::copy_nonoverlapping(sol.base.weights.as_ptr(), weights, weights_len);
                if !active.is_null() {
                    for i in 0..weights_len {
                        *active.add(i) = 0;
                    }
                    for &j in &sol.active_set {
                        *active.add(j) = 1;
                    }
                }
                if !out_expected_utility.is_null() {
                    *out_expected_utility = sol.base.expected_utility;
                }
                NmvmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// General concave-utility optimum through the one-dimensional reduction.
/// The utility spec is JSON, e.g. {"family":"sahara","params":{"a":2,"b":1}}.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn nmvm_concave_optimal(
    h: *const NmvmModelHandle,
    utility_json: *const c_char,
    w0: f64,
    weights: *mut f64,
    weights_len: usize,
    out_c_star: *mut f64,
    out_lambda: *mut f64,
    out_expected_utility: *mut f64,
    out_certainty_equivalent: *mut f64,
) -> NmvmStatus {
    guarded(|| {
        let m = match model_ref(h) {
            Ok(m) => m,
            Err(s) => return s,
        };
        let spec = match read_str(utility_json).and_then(parse_utility) {
            Ok(s) => s,
            Err(s) => return s,
        };
        if let Err(s) = check_weights_len(weights_len, m.d(), weights) {
            return s;
        }
        match concave::optimal_portfolio(m, spec, w0, &GammaEvalConfig::default()) {
            Ok(sol) => {
                std::ptr::copy_nonoverlapping(sol.weights.as_ptr(), weights, weights_len);
                if !out_c_star.is_null() {
                    *out_c_star = sol.c_star;
                }
                if !out_lambda.is_null() {
                    *out_lambda = sol.lambda_u;
                }
                if !out_expected_utility.is_null() {
                    *out_expected_utility = sol.expected_utility;
                }
                if !out_certainty_equivalent.is_null() {
                    *out_certainty_equivalent = sol.certainty_equivalent;
                }
                NmvmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Normalized composition of the risky block shared by every optimal
/// portfolio of the model (two-fund separation).
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn nmvm_tangent_skew(
    h: *const NmvmModelHandle,
    weights: *mut f64,
    weights_len: usize,
) -> NmvmStatus {
    guarded(|| {
        let m = match model_ref(h) {
            Ok(m) => m,
            Err(s) => return s,
        };
        if let Err(s) = check_weights_len(weights_len, m.d(), weights) {
            return s;
        }
        match concave::tangent_skew(m) {
            Ok(t) => {
                std::ptr::copy_nonoverlapping(t.as_ptr(), weights, weights_len);
                NmvmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Monte-Carlo estimate of expected utility for a fixed portfolio;
/// deterministic for a given seed.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn nmvm_mc_expected_utility(
    h: *const NmvmModelHandle,
    utility_json: *const c_char,
    w0: f64,
    weights: *const f64,
    weights_len: usize,
    n_samples: usize,
    seed: u64,
    out_estimate: *mut f64,
    out_std_error: *mut f64,
) -> NmvmStatus {
    guarded(|| {
        let m = match model_ref(h) {
            Ok(m) => m,
            Err(s) => return s,
        };
        let spec = match read_str(utility_json).and_then(parse_utility) {
            Ok(s) => s,
            Err(s) => return s,
        };
        if let Err(s) = check_weights_len(weights_len, m.d(), weights) {
            return s;
        }
        let x = std::slice::from_raw_parts(weights, weights_len);
        match oracle::mc_expected_utility(m, spec, w0, x, n_samples, seed) {
            Ok(rep) => {
                if !out_estimate.is_null() {
                    *out_estimate = rep.estimate;
                }
                if !out_std_error.is_null() {
                    *out_std_error = rep.std_error;
                }
                NmvmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
