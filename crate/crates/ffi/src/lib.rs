//! C ABI over the `specht` library.
//!
//! Objects cross the boundary as opaque handles that the caller frees with the
//! matching `*_free` function. Every fallible call returns a [`SpechtStatus`];
//! on failure [`specht_last_error`] describes the problem for the calling
//! thread. Strings returned through `char **` are owned by the caller and
//! released with [`specht_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use specht::criteria::{self, Store};
use specht::homcalc::Straightener;
use specht::mh::{verify_mainhom, MhParams};
use specht::partition::parse_partition;
use specht::{Error, Partition};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpechtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    BudgetExceeded = 5,
    Internal = 6,
}

/// A partition.
pub struct SpechtPartition(Partition);

/// A classification memo shared across calls. Safe to use from several threads.
pub struct SpechtStore(Store);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn status_of(err: &Error) -> SpechtStatus {
    match err {
        Error::Parse(_) => SpechtStatus::Parse,
        Error::BudgetExceeded(_) => SpechtStatus::BudgetExceeded,
        Error::Io(_) | Error::Straightening(_) => SpechtStatus::Internal,
        _ => SpechtStatus::InvalidInput,
    }
}

/// Runs `f`, turning library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (SpechtStatus, String)>) -> SpechtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpechtStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SpechtStatus::Internal
        }
    }
}

fn lib<T>(r: specht::Result<T>) -> Result<T, (SpechtStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (SpechtStatus, String) {
    (SpechtStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (SpechtStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (SpechtStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, (SpechtStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (SpechtStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| (SpechtStatus::Internal, "embedded nul".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> Result<(), (SpechtStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn specht_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn specht_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses text such as `"3,2^3"` into a new partition.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn specht_partition_parse(text: *const c_char, out: *mut *mut SpechtPartition) -> SpechtStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let p = lib(parse_partition(text))?;
        write_handle(out, SpechtPartition(p))
    })
}

/// Frees a partition. Null is ignored.
///
/// # Safety
/// `p` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn specht_partition_free(p: *mut SpechtPartition) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of nonzero parts; 0 for null.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn specht_partition_len(p: *const SpechtPartition) -> usize {
    p.as_ref().map_or(0, |p| p.0.len())
}

/// Sum of the parts; 0 for null.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn specht_partition_size(p: *const SpechtPartition) -> usize {
    p.as_ref().map_or(0, |p| p.0.size())
}

/// Copies up to `cap` parts into `buf` and returns the number of parts.
///
/// # Safety
/// `p` must be null or a live handle; `buf` must hold `cap` elements.
#[no_mangle]
pub unsafe extern "C" fn specht_partition_parts(p: *const SpechtPartition, buf: *mut usize, cap: usize) -> usize {
    let Some(p) = p.as_ref() else { return 0 };
    let parts = p.0.parts();
    if !buf.is_null() {
        let n = parts.len().min(cap);
        ptr::copy_nonoverlapping(parts.as_ptr(), buf, n);
    }
    parts.len()
}

/// Renders a partition in the text grammar accepted by [`specht_partition_parse`].
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn specht_partition_to_string(p: *const SpechtPartition, out: *mut *mut c_char) -> SpechtStatus {
    guard(|| {
        let p = handle(p, "partition")?;
        write_string(out, p.0.to_string())
    })
}

/// The conjugate partition.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn specht_partition_conjugate(
    p: *const SpechtPartition,
    out: *mut *mut SpechtPartition,
) -> SpechtStatus {
    guard(|| {
        let p = handle(p, "partition")?;
        write_handle(out, SpechtPartition(p.0.conjugate()))
    })
}

/// The 2-regularization.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn specht_partition_regularize(
    p: *const SpechtPartition,
    out: *mut *mut SpechtPartition,
) -> SpechtStatus {
    guard(|| {
        let p = handle(p, "partition")?;
        write_handle(out, SpechtPartition(p.0.regularize()))
    })
}

/// The N-statistic of `mu` inside `lambda`.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn specht_n_statistic(
    lambda: *const SpechtPartition,
    mu: *const SpechtPartition,
    out: *mut i64,
) -> SpechtStatus {
    guard(|| {
        let lambda = handle(lambda, "lambda")?;
        let mu = handle(mu, "mu")?;
        let n = lib(criteria::n_statistic(&lambda.0, &mu.0))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = n;
        Ok(())
    })
}

/// A new empty classification store.
#[no_mangle]
pub extern "C" fn specht_store_new() -> *mut SpechtStore {
    Box::into_raw(Box::new(SpechtStore(Store::new())))
}

/// Frees a store. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn specht_store_free(s: *mut SpechtStore) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Classifies a partition over characteristic `p` (0 or prime) and writes the
/// JSON record to `out_json`.
///
/// # Safety
/// Handles must be live; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn specht_classify_json(
    store: *const SpechtStore,
    lambda: *const SpechtPartition,
    p: u64,
    out_json: *mut *mut c_char,
) -> SpechtStatus {
    guard(|| {
        let store = handle(store, "store")?;
        let lambda = handle(lambda, "partition")?;
        let record = lib(criteria::classify(&lambda.0, p, &store.0))?;
        let text = serde_json::to_string(&record).map_err(|e| (SpechtStatus::Internal, e.to_string()))?;
        write_string(out_json, text)
    })
}

/// Builds and checks the explicit homomorphism for `(s, s', f, g)`.
///
/// A `budget` of 0 uses the default (or the environment override). On
/// success `*verified` is 1 if every check passed and 0 otherwise, and the
/// JSON report is written to `out_json` when it is not null.
///
/// # Safety
/// `verified` must be writable; `out_json` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn specht_verify_mainhom(
    s: usize,
    s_prime: usize,
    f: usize,
    g: usize,
    budget: u64,
    verified: *mut i32,
    out_json: *mut *mut c_char,
) -> SpechtStatus {
    guard(|| {
        if verified.is_null() {
            return Err(null("verified"));
        }
        let params = lib(MhParams::new(s, s_prime, f, g))?;
        let mut st = lib(Straightener::from_env())?;
        if budget > 0 {
            st = st.with_budget(budget);
        }
        let report = lib(verify_mainhom(&st, &params, true))?;
        *verified = i32::from(report.verified());
        if !out_json.is_null() {
            let text = serde_json::to_string(&report).map_err(|e| (SpechtStatus::Internal, e.to_string()))?;
            write_string(out_json, text)?;
        }
        Ok(())
    })
}
