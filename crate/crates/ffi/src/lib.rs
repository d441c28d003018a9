//! C interface to cohomolab.
//!
//! Groups and actions are opaque handles created by `coho_*_from_*` and
//! released with the matching `_free`. Every fallible call returns a
//! [`CohoStatus`]; on failure the message is available from
//! [`coho_last_error`] on the same thread until the next call. Strings
//! returned through out-pointers are released with [`coho_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use cohomolab::cli::execute_line;
use cohomolab::corpus::Corpus;
use cohomolab::groups::{conjugacy_classes, conjugation_action, is_commutative_transitive, GAction, Group};
use cohomolab::hochschild::DEFAULT_MEMORY_CAP;
use cohomolab::io::{build_action, parse_action_file, parse_group};
use cohomolab::scalars::{PrimeField, Rationals};
use cohomolab::shapiro::{brute_force_oracle, disintegrate};
use cohomolab::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CohoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed or inconsistent input: JSON, tables, names, fields.
    InvalidInput = 3,
    /// A map would exceed the memory cap.
    MemoryCap = 4,
    /// A mathematical check failed.
    VerdictFailed = 5,
    /// An output buffer is shorter than required.
    BufferTooSmall = 6,
    /// A panic was caught at the boundary.
    Panic = 7,
}

/// Opaque finite group.
pub struct CohoGroup {
    group: Arc<Group>,
}

/// Opaque action of a group on a finite set.
pub struct CohoAction {
    action: GAction,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: CohoStatus,
    message: String,
}

impl Failure {
    fn new(status: CohoStatus, message: impl Into<String>) -> Self {
        Failure { status, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if e.is_verdict_failure() {
            CohoStatus::VerdictFailed
        } else if matches!(e, Error::MemoryCap { .. }) {
            CohoStatus::MemoryCap
        } else {
            CohoStatus::InvalidInput
        };
        Failure::new(status, e.to_string())
    }
}

fn set_error(message: Option<String>) {
    let c = message.map(|m| CString::new(m.replace('\0', " ")).expect("interior nul removed"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

/// Runs `body`, records its error message and converts panics.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CohoStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(None);
            CohoStatus::Ok
        }
        Ok(Err(f)) => {
            set_error(Some(f.message));
            f.status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(Some(format!("panic: {message}")));
            CohoStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(CohoStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::new(CohoStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(CohoStatus::NullPointer, format!("{what} is null")))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(CohoStatus::NullPointer, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or null after a
/// successful one. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn coho_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn coho_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a group file (Cayley table or permutation generators).
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coho_group_from_json(json: *const c_char, out: *mut *mut CohoGroup) -> CohoStatus {
    guard(|| {
        let json = text(json, "json")?;
        let group = Arc::new(parse_group("json", json)?);
        write(out, Box::into_raw(Box::new(CohoGroup { group })), "out")
    })
}

/// Looks up a group of the bundled corpus by name.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coho_group_from_corpus(name: *const c_char, out: *mut *mut CohoGroup) -> CohoStatus {
    guard(|| {
        let name = text(name, "name")?;
        let group = Corpus::load()?.group(name)?;
        write(out, Box::into_raw(Box::new(CohoGroup { group })), "out")
    })
}

/// Releases a group. Null is ignored.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn coho_group_free(g: *mut CohoGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn coho_group_order(g: *const CohoGroup, out: *mut usize) -> CohoStatus {
    guard(|| write(out, deref(g, "group")?.group.order(), "out"))
}

/// # Safety
/// `g` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn coho_group_class_count(g: *const CohoGroup, out: *mut usize) -> CohoStatus {
    guard(|| write(out, conjugacy_classes(&deref(g, "group")?.group).len(), "out"))
}

/// Whether every non-identity element has an abelian centralizer.
///
/// # Safety
/// `g` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn coho_group_is_ct(g: *const CohoGroup, out: *mut bool) -> CohoStatus {
    guard(|| write(out, is_commutative_transitive(&deref(g, "group")?.group).0, "out"))
}

/// Parses an action file for `g`.
///
/// # Safety
/// `g` and `out` must be valid pointers and `json` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn coho_action_from_json(
    g: *const CohoGroup,
    json: *const c_char,
    out: *mut *mut CohoAction,
) -> CohoStatus {
    guard(|| {
        let group = &deref(g, "group")?.group;
        let json = text(json, "json")?;
        let file = parse_action_file("json", json)?;
        let action = build_action("json", json, &file, group)?;
        write(out, Box::into_raw(Box::new(CohoAction { action })), "out")
    })
}

/// Conjugation action of `g` on its non-identity elements.
///
/// # Safety
/// `g` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn coho_action_conjugation(g: *const CohoGroup, out: *mut *mut CohoAction) -> CohoStatus {
    guard(|| {
        let action = conjugation_action(&deref(g, "group")?.group)?;
        write(out, Box::into_raw(Box::new(CohoAction { action })), "out")
    })
}

/// Releases an action. Null is ignored.
///
/// # Safety
/// `a` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn coho_action_free(a: *mut CohoAction) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// # Safety
/// `a` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn coho_action_set_size(a: *const CohoAction, out: *mut usize) -> CohoStatus {
    guard(|| write(out, deref(a, "action")?.action.set_size(), "out"))
}

/// Dimensions of `H^n(k[G], k(S)')` for `0 <= n <= max_degree` over `Q`
/// (`characteristic` 0) or `F_p`, by brute force into `oracle` and through
/// the stabilizers into `fast_path`. Both buffers need `max_degree + 1`
/// entries. Returns `VerdictFailed` when the two disagree.
///
/// # Safety
/// `a` must be valid; `oracle` and `fast_path` must point to `len` writable
/// entries.
#[no_mangle]
pub unsafe extern "C" fn coho_disintegrate(
    a: *const CohoAction,
    characteristic: u64,
    max_degree: usize,
    oracle: *mut usize,
    fast_path: *mut usize,
    len: usize,
) -> CohoStatus {
    guard(|| {
        let action = &deref(a, "action")?.action;
        if oracle.is_null() || fast_path.is_null() {
            return Err(Failure::new(CohoStatus::NullPointer, "output buffer is null"));
        }
        if len < max_degree + 1 {
            return Err(Failure::new(
                CohoStatus::BufferTooSmall,
                format!("buffers need {} entries, got {len}", max_degree + 1),
            ));
        }
        let (o, f) = if characteristic == 0 {
            (
                brute_force_oracle(action, &Rationals, max_degree, DEFAULT_MEMORY_CAP)?.homology_dims(),
                disintegrate(action, &Rationals, max_degree, DEFAULT_MEMORY_CAP)?.homology_dims(),
            )
        } else {
            let field = PrimeField::new(characteristic)?;
            (
                brute_force_oracle(action, &field, max_degree, DEFAULT_MEMORY_CAP)?.homology_dims(),
                disintegrate(action, &field, max_degree, DEFAULT_MEMORY_CAP)?.homology_dims(),
            )
        };
        std::slice::from_raw_parts_mut(oracle, o.len()).copy_from_slice(&o);
        std::slice::from_raw_parts_mut(fast_path, f.len()).copy_from_slice(&f);
        if o != f {
            return Err(Failure::new(CohoStatus::VerdictFailed, format!("oracle {o:?} differs from fast path {f:?}")));
        }
        Ok(())
    })
}

/// Runs a command line of the `cohomolab` binary (without the program name)
/// and returns its JSON report envelope in `json_out`. The report is also
/// returned when the verdict fails, with status `VerdictFailed`.
///
/// # Safety
/// `command_line` must be a nul-terminated string and `json_out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn coho_run(command_line: *const c_char, json_out: *mut *mut c_char) -> CohoStatus {
    guard(|| {
        let line = text(command_line, "command_line")?;
        if json_out.is_null() {
            return Err(Failure::new(CohoStatus::NullPointer, "json_out is null"));
        }
        let outcome = execute_line(line)?;
        let json = CString::new(outcome.envelope().to_string()).expect("JSON has no nul bytes");
        json_out.write(json.into_raw());
        if outcome.ok {
            Ok(())
        } else {
            Err(Failure::new(CohoStatus::VerdictFailed, format!("{} verdict failed", outcome.command)))
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn coho_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
