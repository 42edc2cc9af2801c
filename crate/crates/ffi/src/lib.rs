//! C ABI for the `uxes` library.
//!
//! Logs are passed around as opaque `UxesLog` handles; every fallible call
//! returns a [`UxesStatus`] and stores a human-readable message retrievable
//! with [`uxes_last_error`]. Strings returned through out-parameters are
//! allocated by this library and must be released with [`uxes_string_free`];
//! handles must be released with [`uxes_log_free`].
//!
//! The matching C header is generated into `include/uxes.h` at build time.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::str::FromStr;

use uxes::error::Error;
use uxes::inject::{inject, InjectionConfig};
use uxes::model::UncertainLog;
use uxes::realize::sample::{sample_log, SampleOptions};
use uxes::realize::{EnumerateOptions, Mode, ProbabilityOptions};
use uxes::stats::uncertainty_stats;
use uxes::validate::validate_log;
use uxes::xes::{self, WriteOptions};

/// Opaque handle to an event log (certain or uncertain).
pub struct UxesLog(UncertainLog);

/// Outcome of a fallible call. Anything other than `Ok` leaves a
/// message readable through `uxes_last_error`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UxesStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    Utf8 = 2,
    /// Reading or writing a file failed.
    Io = 3,
    /// The input was not well-formed XES.
    Parse = 4,
    /// The input or a configuration value was rejected.
    Invalid = 5,
    /// The log is valid but the requested computation does not
    /// support it (for example, exhaustive enumeration over a
    /// continuous timestamp density).
    Unsupported = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn remember(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(e: &Error) -> UxesStatus {
    remember(&e.to_string());
    match e {
        Error::Io(_) => UxesStatus::Io,
        Error::MalformedXml { .. } | Error::Csv(_) => UxesStatus::Parse,
        Error::TooManyEvents { .. }
        | Error::ContinuousDensityPresent
        | Error::ModeRequired
        | Error::UnweighableIndeterminacy => UxesStatus::Unsupported,
        _ => UxesStatus::Invalid,
    }
}

fn null_argument(name: &str) -> UxesStatus {
    remember(&format!("argument `{name}` must not be null"));
    UxesStatus::NullArgument
}

/// # Safety
/// `ptr` must be null or a NUL-terminated string valid for reads.
unsafe fn required_str<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, UxesStatus> {
    if ptr.is_null() {
        return Err(null_argument(name));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        remember(&format!("argument `{name}` is not valid UTF-8"));
        UxesStatus::Utf8
    })
}

/// # Safety
/// `ptr` must be null or a live handle from this library.
unsafe fn required_log<'a>(ptr: *const UxesLog, name: &str) -> Result<&'a UncertainLog, UxesStatus> {
    if ptr.is_null() {
        Err(null_argument(name))
    } else {
        Ok(&(*ptr).0)
    }
}

fn parse_mode(ptr: *const c_char) -> Result<Option<Mode>, UxesStatus> {
    if ptr.is_null() {
        return Ok(None);
    }
    // Safety: checked non-null; the caller contract requires NUL termination.
    let text = unsafe { required_str(ptr, "mode")? };
    Mode::from_str(text).map(Some).map_err(|e| fail(&e))
}

fn give_string(text: String, out: *mut *mut c_char) -> UxesStatus {
    match CString::new(text) {
        Ok(c) => {
            // Safety: `out` was checked non-null by the caller.
            unsafe { *out = c.into_raw() };
            UxesStatus::Ok
        }
        Err(_) => {
            remember("result contained an interior NUL byte");
            UxesStatus::Invalid
        }
    }
}

fn give_log(log: UncertainLog, out: *mut *mut UxesLog) -> UxesStatus {
    // Safety: `out` was checked non-null by the caller.
    unsafe { *out = Box::into_raw(Box::new(UxesLog(log))) };
    UxesStatus::Ok
}

fn to_json<T: serde::Serialize>(value: &T, out: *mut *mut c_char) -> UxesStatus {
    match serde_json::to_string_pretty(value) {
        Ok(json) => give_string(json, out),
        Err(e) => {
            remember(&e.to_string());
            UxesStatus::Invalid
        }
    }
}

/// Library version as a static NUL-terminated string; never free it.
#[no_mangle]
pub extern "C" fn uxes_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message describing the most recent failure on the calling thread,
/// or an empty string if nothing failed yet. The pointer stays valid
/// until the next failing call on the same thread; never free it.
#[no_mangle]
pub extern "C" fn uxes_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Reads a log from `path` (`.xes` or `.xes.gz`) into a fresh handle.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be a valid
/// pointer. On success `*out` owns the log.
#[no_mangle]
pub unsafe extern "C" fn uxes_log_read_file(
    path: *const c_char,
    out: *mut *mut UxesLog,
) -> UxesStatus {
    if out.is_null() {
        return null_argument("out");
    }
    let path = match required_str(path, "path") {
        Ok(p) => p,
        Err(status) => return status,
    };
    match xes::read_file(path) {
        Ok(log) => give_log(log, out),
        Err(e) => fail(&e),
    }
}

/// Parses a log from an in-memory XES document.
///
/// # Safety
/// `xml` must be a NUL-terminated string; `out` must be a valid
/// pointer. On success `*out` owns the log.
#[no_mangle]
pub unsafe extern "C" fn uxes_log_read_string(
    xml: *const c_char,
    out: *mut *mut UxesLog,
) -> UxesStatus {
    if out.is_null() {
        return null_argument("out");
    }
    let xml = match required_str(xml, "xml") {
        Ok(x) => x,
        Err(status) => return status,
    };
    match xes::read_str(xml) {
        Ok(log) => give_log(log, out),
        Err(e) => fail(&e),
    }
}

/// Writes `log` to `path`; a `.gz` suffix selects gzip compression.
///
/// # Safety
/// `log` must be a live handle; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn uxes_log_write_file(
    log: *const UxesLog,
    path: *const c_char,
) -> UxesStatus {
    let log = match required_log(log, "log") {
        Ok(l) => l,
        Err(status) => return status,
    };
    let path = match required_str(path, "path") {
        Ok(p) => p,
        Err(status) => return status,
    };
    match xes::write_file(path, log, &WriteOptions::default()) {
        Ok(()) => UxesStatus::Ok,
        Err(e) => fail(&e),
    }
}

/// Serializes `log` as an XES document into `*out`.
///
/// # Safety
/// `log` must be a live handle; `out` must be a valid pointer. Free
/// the result with `uxes_string_free`.
#[no_mangle]
pub unsafe extern "C" fn uxes_log_to_string(
    log: *const UxesLog,
    out: *mut *mut c_char,
) -> UxesStatus {
    if out.is_null() {
        return null_argument("out");
    }
    let log = match required_log(log, "log") {
        Ok(l) => l,
        Err(status) => return status,
    };
    match xes::log_to_string(log, &WriteOptions::default()) {
        Ok(text) => give_string(text, out),
        Err(e) => fail(&e),
    }
}

/// Releases a handle. Passing null is a no-op.
///
/// # Safety
/// `log` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn uxes_log_free(log: *mut UxesLog) {
    if !log.is_null() {
        drop(Box::from_raw(log));
    }
}

/// Releases a string returned by this library. Passing null is a no-op.
///
/// # Safety
/// `s` must be null or a string from this library not freed before.
#[no_mangle]
pub unsafe extern "C" fn uxes_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of traces in the log; 0 when `log` is null.
///
/// # Safety
/// `log` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn uxes_log_trace_count(log: *const UxesLog) -> usize {
    match required_log(log, "log") {
        Ok(l) => l.traces.len(),
        Err(_) => 0,
    }
}

/// Total number of events across all traces; 0 when `log` is null.
///
/// # Safety
/// `log` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn uxes_log_event_count(log: *const UxesLog) -> usize {
    match required_log(log, "log") {
        Ok(l) => l.traces.iter().map(|t| t.events.len()).sum(),
        Err(_) => 0,
    }
}

/// Checks the log and stores a JSON report of all violations in `*out`.
/// The status is `Ok` even when violations are found; inspect the
/// report's `violations` array.
///
/// # Safety
/// `log` must be a live handle; `out` must be a valid pointer. Free
/// the result with `uxes_string_free`.
#[no_mangle]
pub unsafe extern "C" fn uxes_log_validate_json(
    log: *const UxesLog,
    out: *mut *mut c_char,
) -> UxesStatus {
    if out.is_null() {
        return null_argument("out");
    }
    let log = match required_log(log, "log") {
        Ok(l) => l,
        Err(status) => return status,
    };
    to_json(&validate_log(log), out)
}

/// Summarizes how much uncertainty the log carries as JSON in `*out`.
///
/// # Safety
/// `log` must be a live handle; `out` must be a valid pointer. Free
/// the result with `uxes_string_free`.
#[no_mangle]
pub unsafe extern "C" fn uxes_log_stats_json(
    log: *const UxesLog,
    out: *mut *mut c_char,
) -> UxesStatus {
    if out.is_null() {
        return null_argument("out");
    }
    let log = match required_log(log, "log") {
        Ok(l) => l,
        Err(status) => return status,
    };
    to_json(&uncertainty_stats(log), out)
}

/// Enumerates every realization of every trace and stores the weighted
/// listing as JSON in `*out`. `mode` selects how probability-free
/// annotations are weighed: `"uniform"`, `"possibilistic"`, or null to
/// require that the log carries explicit probabilities everywhere.
/// `max_events` caps the per-trace event count (0 means the default).
///
/// # Safety
/// `log` must be a live handle; `mode` must be null or NUL-terminated;
/// `out` must be a valid pointer. Free the result with
/// `uxes_string_free`.
#[no_mangle]
pub unsafe extern "C" fn uxes_log_enumerate_json(
    log: *const UxesLog,
    mode: *const c_char,
    max_events: usize,
    out: *mut *mut c_char,
) -> UxesStatus {
    if out.is_null() {
        return null_argument("out");
    }
    let log = match required_log(log, "log") {
        Ok(l) => l,
        Err(status) => return status,
    };
    let mode = match parse_mode(mode) {
        Ok(m) => m,
        Err(status) => return status,
    };
    let mut enum_options = EnumerateOptions::default();
    if max_events > 0 {
        enum_options.max_events = max_events;
    }
    let prob_options = ProbabilityOptions {
        mode,
        ..Default::default()
    };
    match uxes::report::enumerate_report(log, &enum_options, &prob_options) {
        Ok(traces) => to_json(&traces, out),
        Err(e) => fail(&e),
    }
}

/// Draws `n` realizations per trace and stores them as a new certain
/// log in `*out`. Equal seeds give identical results. `mode` is as in
/// `uxes_log_enumerate_json`.
///
/// # Safety
/// `log` must be a live handle; `mode` must be null or NUL-terminated;
/// `out` must be a valid pointer. On success `*out` owns the sampled
/// log; free it with `uxes_log_free`.
#[no_mangle]
pub unsafe extern "C" fn uxes_log_sample(
    log: *const UxesLog,
    n: u64,
    seed: u64,
    mode: *const c_char,
    out: *mut *mut UxesLog,
) -> UxesStatus {
    if out.is_null() {
        return null_argument("out");
    }
    let log = match required_log(log, "log") {
        Ok(l) => l,
        Err(status) => return status,
    };
    let mode = match parse_mode(mode) {
        Ok(m) => m,
        Err(status) => return status,
    };
    let options = SampleOptions {
        mode,
        ..Default::default()
    };
    match sample_log(log, n, seed, &options) {
        Ok(sampled) => give_log(sampled, out),
        Err(e) => fail(&e),
    }
}

/// Adds controlled uncertainty to a certain log and stores the result
/// in `*out`. `config_json` holds an injection configuration object,
/// e.g. `{"p_activity": 0.3, "k_labels": 2, "seed": 7}`; omitted
/// fields keep their defaults and `null` selects the all-defaults
/// identity configuration.
///
/// # Safety
/// `log` must be a live handle; `config_json` must be null or
/// NUL-terminated; `out` must be a valid pointer. On success `*out`
/// owns the new log; free it with `uxes_log_free`.
#[no_mangle]
pub unsafe extern "C" fn uxes_log_inject(
    log: *const UxesLog,
    config_json: *const c_char,
    out: *mut *mut UxesLog,
) -> UxesStatus {
    if out.is_null() {
        return null_argument("out");
    }
    let log = match required_log(log, "log") {
        Ok(l) => l,
        Err(status) => return status,
    };
    let config = if config_json.is_null() {
        InjectionConfig::default()
    } else {
        let text = match required_str(config_json, "config_json") {
            Ok(t) => t,
            Err(status) => return status,
        };
        match serde_json::from_str::<InjectionConfig>(text) {
            Ok(c) => c,
            Err(e) => {
                remember(&format!("bad injection config: {e}"));
                return UxesStatus::Invalid;
            }
        }
    };
    match inject(log, &config) {
        Ok(noisy) => give_log(noisy, out),
        Err(e) => fail(&e),
    }
}

/// Parses `xml`, serializes it again, re-parses, and reports in
/// `*holds` whether both passes agree structurally.
///
/// # Safety
/// `xml` must be a NUL-terminated string; `holds` must be a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn uxes_roundtrip_check(xml: *const c_char, holds: *mut bool) -> UxesStatus {
    if holds.is_null() {
        return null_argument("holds");
    }
    let xml = match required_str(xml, "xml") {
        Ok(x) => x,
        Err(status) => return status,
    };
    match xes::roundtrip_check(xml) {
        Ok(ok) => {
            *holds = ok;
            UxesStatus::Ok
        }
        Err(e) => fail(&e),
    }
}
