//! C interface to the simulator core: opaque strategy handles, integer status
//! codes, and flat result structs.
//!
//! Conventions:
//! - every fallible call returns a [`SeqracStatus`]; outputs are written
//!   through pointers only on `Ok`,
//! - strings handed out by the library are released with
//!   [`seqrac_string_free`], strategy handles with [`seqrac_strategy_free`],
//! - [`seqrac_last_error`] returns a thread-local message for the most recent
//!   failure; the pointer stays valid until the next failing call on the same
//!   thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use seqrac::randomness::{hmin_t2, hmin_t3_numeric, hmin_w};
use seqrac::scenario::{joint_table, random_strategy, RandomMode, Strategy};
use seqrac::witness::{canonicalize, certify, tradeoff_bound, witness_ab, witness_ac};

/// Status code of a C-interface call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SeqracStatus {
    /// The call succeeded and all outputs are valid.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Inputs were outside the domain or mutually inconsistent.
    InvalidInput = 2,
    /// An input-output failure (not raised by the current entry points).
    Io = 3,
    /// Text could not be parsed (malformed JSON or invalid UTF-8).
    Parse = 4,
    /// An unexpected internal failure; the process state is intact.
    Internal = 5,
}

/// Opaque handle to a full strategy (preparations, instruments,
/// measurements).
pub struct SeqracStrategy {
    inner: Strategy,
}

/// Two-sided sharpness certificate from a witness pair.
#[repr(C)]
pub struct SeqracCertificate {
    pub eta_lo: f64,
    pub eta_hi: f64,
    /// False when the lower bound degenerates to 0.
    pub lower_nontrivial: bool,
    /// False when the upper bound degenerates to 1.
    pub upper_nontrivial: bool,
}

/// Summary of aligning a strategy with the coordinate-axis form.
#[repr(C)]
pub struct SeqracCanonReport {
    /// Whether every residual is below the supplied tolerance.
    pub pass: bool,
    /// Whether the match required complex conjugation.
    pub conjugated: bool,
    /// Sharpness recovered from the first reader's observables.
    pub eta: f64,
    /// Largest alignment residual across all parties.
    pub max_residual: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: SeqracStatus, message: String) -> SeqracStatus {
    let text = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("error message unavailable").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
    status
}

fn fail_from(err: seqrac::Error) -> SeqracStatus {
    let status = match err.exit_code() {
        3 => SeqracStatus::Io,
        4 => SeqracStatus::Parse,
        _ => SeqracStatus::InvalidInput,
    };
    fail(status, err.to_string())
}

fn guarded<F: FnOnce() -> SeqracStatus>(body: F) -> SeqracStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(SeqracStatus::Internal, "internal panic".to_string()),
    }
}

/// Message for the most recent failure on this thread, or null if no call
/// has failed yet. Owned by the library; do not free.
#[no_mangle]
pub extern "C" fn seqrac_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null(), |text| text.as_ptr())
    })
}

/// Version of the underlying library as a static string; do not free.
#[no_mangle]
pub extern "C" fn seqrac_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `text` must have been returned by a `seqrac_*` call and not freed before.
#[no_mangle]
pub unsafe extern "C" fn seqrac_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Release a strategy handle. Null is ignored.
///
/// # Safety
/// `handle` must have been returned by a `seqrac_strategy_*` constructor and
/// not freed before.
#[no_mangle]
pub unsafe extern "C" fn seqrac_strategy_free(handle: *mut SeqracStrategy) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Build the ideal strategy at sharpness `eta` (0 to 1).
#[no_mangle]
pub extern "C" fn seqrac_strategy_ideal(
    eta: f64,
    out: *mut *mut SeqracStrategy,
) -> SeqracStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SeqracStatus::NullArgument, "out is null".into());
        }
        match Strategy::ideal(eta) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(SeqracStrategy { inner })) };
                SeqracStatus::Ok
            }
            Err(e) => fail_from(e),
        }
    })
}

/// Draw a seeded random strategy. `mode` selects the ensemble: 0 general
/// (mixed preparations, biased instruments), 1 pure preparations, 2 the
/// ideal family under a random rotation.
#[no_mangle]
pub extern "C" fn seqrac_strategy_random(
    seed: u64,
    mode: u32,
    out: *mut *mut SeqracStrategy,
) -> SeqracStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SeqracStatus::NullArgument, "out is null".into());
        }
        let mode = match mode {
            0 => RandomMode::General,
            1 => RandomMode::PurePrep,
            2 => RandomMode::Parametrized,
            other => {
                return fail(
                    SeqracStatus::InvalidInput,
                    format!("unknown random mode {other}"),
                )
            }
        };
        let inner = random_strategy(seed, mode);
        unsafe { *out = Box::into_raw(Box::new(SeqracStrategy { inner })) };
        SeqracStatus::Ok
    })
}

/// Parse a strategy from its JSON form.
///
/// # Safety
/// `json` must be a valid NUL-terminated C string.
#[no_mangle]
pub unsafe extern "C" fn seqrac_strategy_from_json(
    json: *const c_char,
    out: *mut *mut SeqracStrategy,
) -> SeqracStatus {
    guarded(|| {
        if json.is_null() || out.is_null() {
            return fail(SeqracStatus::NullArgument, "json or out is null".into());
        }
        let text = match unsafe { CStr::from_ptr(json) }.to_str() {
            Ok(t) => t,
            Err(_) => return fail(SeqracStatus::Parse, "json is not valid UTF-8".into()),
        };
        match Strategy::from_json(text) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(SeqracStrategy { inner })) };
                SeqracStatus::Ok
            }
            Err(e) => fail_from(e),
        }
    })
}

/// Serialize a strategy to JSON. The returned string is released with
/// `seqrac_string_free`.
///
/// # Safety
/// `handle` must be a live strategy handle.
#[no_mangle]
pub unsafe extern "C" fn seqrac_strategy_to_json(
    handle: *const SeqracStrategy,
    out: *mut *mut c_char,
) -> SeqracStatus {
    guarded(|| {
        if handle.is_null() || out.is_null() {
            return fail(SeqracStatus::NullArgument, "handle or out is null".into());
        }
        let strategy = unsafe { &(*handle).inner };
        match strategy.to_json() {
            Ok(text) => match CString::new(text) {
                Ok(ctext) => {
                    unsafe { *out = ctext.into_raw() };
                    SeqracStatus::Ok
                }
                Err(_) => fail(SeqracStatus::Internal, "JSON contained NUL".into()),
            },
            Err(e) => fail_from(e),
        }
    })
}

/// Simulate the strategy and return both correlation witnesses.
///
/// # Safety
/// `handle` must be a live strategy handle.
#[no_mangle]
pub unsafe extern "C" fn seqrac_witnesses(
    handle: *const SeqracStrategy,
    a_ab: *mut f64,
    a_ac: *mut f64,
) -> SeqracStatus {
    guarded(|| {
        if handle.is_null() || a_ab.is_null() || a_ac.is_null() {
            return fail(SeqracStatus::NullArgument, "handle or outputs null".into());
        }
        let strategy = unsafe { &(*handle).inner };
        match joint_table(strategy) {
            Ok(table) => {
                unsafe {
                    *a_ab = witness_ab(&table);
                    *a_ac = witness_ac(&table);
                }
                SeqracStatus::Ok
            }
            Err(e) => fail_from(e),
        }
    })
}

/// Largest second-reader witness compatible with first-reader score `a_ab`.
#[no_mangle]
pub extern "C" fn seqrac_tradeoff_bound(a_ab: f64, out: *mut f64) -> SeqracStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SeqracStatus::NullArgument, "out is null".into());
        }
        match tradeoff_bound(a_ab) {
            Ok(v) => {
                unsafe { *out = v };
                SeqracStatus::Ok
            }
            Err(e) => fail_from(e),
        }
    })
}

/// Two-sided sharpness certificate from an observed witness pair.
#[no_mangle]
pub extern "C" fn seqrac_certify(
    a_ab: f64,
    a_ac: f64,
    out: *mut SeqracCertificate,
) -> SeqracStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SeqracStatus::NullArgument, "out is null".into());
        }
        match certify(a_ab, a_ac) {
            Ok(cert) => {
                unsafe {
                    *out = SeqracCertificate {
                        eta_lo: cert.eta_lo,
                        eta_hi: cert.eta_hi,
                        lower_nontrivial: cert.lower_nontrivial,
                        upper_nontrivial: cert.upper_nontrivial,
                    };
                }
                SeqracStatus::Ok
            }
            Err(e) => fail_from(e),
        }
    })
}

/// Min-entropy certified by a determinant-witness value (0 to 1).
#[no_mangle]
pub extern "C" fn seqrac_hmin_w(w: f64, out: *mut f64) -> SeqracStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SeqracStatus::NullArgument, "out is null".into());
        }
        match hmin_w(w) {
            Ok(v) => {
                unsafe { *out = v };
                SeqracStatus::Ok
            }
            Err(e) => fail_from(e),
        }
    })
}

/// Min-entropy certified by a 2->1 witness value (2 to 2*sqrt(2)).
#[no_mangle]
pub extern "C" fn seqrac_hmin_t2(t: f64, out: *mut f64) -> SeqracStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SeqracStatus::NullArgument, "out is null".into());
        }
        match hmin_t2(t) {
            Ok(v) => {
                unsafe { *out = v };
                SeqracStatus::Ok
            }
            Err(e) => fail_from(e),
        }
    })
}

/// Min-entropy estimate for a 3->1 witness value (6 to 4*sqrt(3)) against
/// rigidly rotated decoding triads. `budget` caps objective evaluations;
/// `seeds` (may be null when `n_seeds` is 0) makes the multi-start search
/// reproducible.
///
/// # Safety
/// `seeds` must point to `n_seeds` readable values when non-null.
#[no_mangle]
pub unsafe extern "C" fn seqrac_hmin_t3(
    t: f64,
    budget: usize,
    seeds: *const u64,
    n_seeds: usize,
    out: *mut f64,
) -> SeqracStatus {
    guarded(|| {
        if out.is_null() || (seeds.is_null() && n_seeds > 0) {
            return fail(SeqracStatus::NullArgument, "out or seeds null".into());
        }
        let seed_slice: &[u64] = if n_seeds == 0 {
            &[]
        } else {
            unsafe { std::slice::from_raw_parts(seeds, n_seeds) }
        };
        match hmin_t3_numeric(t, budget, seed_slice) {
            Ok(v) => {
                unsafe { *out = v };
                SeqracStatus::Ok
            }
            Err(e) => fail_from(e),
        }
    })
}

/// Align a strategy with the coordinate-axis form and report the residuals.
///
/// # Safety
/// `handle` must be a live strategy handle.
#[no_mangle]
pub unsafe extern "C" fn seqrac_canonicalize(
    handle: *const SeqracStrategy,
    tol: f64,
    out: *mut SeqracCanonReport,
) -> SeqracStatus {
    guarded(|| {
        if handle.is_null() || out.is_null() {
            return fail(SeqracStatus::NullArgument, "handle or out is null".into());
        }
        let strategy = unsafe { &(*handle).inner };
        match canonicalize(strategy, tol) {
            Ok(report) => {
                unsafe {
                    *out = SeqracCanonReport {
                        pass: report.pass,
                        conjugated: report.conjugated,
                        eta: report.eta,
                        max_residual: report.max_residual,
                    };
                }
                SeqracStatus::Ok
            }
            Err(e) => fail_from(e),
        }
    })
}
