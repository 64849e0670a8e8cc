//! C ABI over the `fairdiv` solver.
//!
//! Instances and allocations cross the boundary as opaque handles built from
//! the same JSON files the CLI reads. Every fallible call returns an
//! [`FdStatus`]; on failure [`fd_last_error`] describes the problem for the
//! calling thread. Strings handed out by the library are freed with
//! [`fd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fairdiv::algorithms::{solve, Algorithm, SolveOptions};
use fairdiv::fairness::FairnessReport;
use fairdiv::io::{emit_allocation, parse_allocation, parse_instance};
use fairdiv::model::check_feasible;
use fairdiv::oracle::Notion;
use fairdiv::{Allocation, Error, Instance};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    Parse = 3,
    Input = 4,
    Capability = 5,
    Infeasible = 6,
    /// The instance lies in a setting where a fair allocation may not exist.
    Impossible = 7,
    NotBaseOrderable = 8,
    Invariant = 9,
    Internal = 10,
    /// A Rust panic was caught at the boundary.
    Panic = 11,
}

impl From<&Error> for FdStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parse(_) => FdStatus::Parse,
            Error::Input(_) => FdStatus::Input,
            Error::Capability(_) => FdStatus::Capability,
            Error::Infeasible(_) => FdStatus::Infeasible,
            Error::Impossible { .. } => FdStatus::Impossible,
            Error::NotBaseOrderable { .. } => FdStatus::NotBaseOrderable,
            Error::Invariant(_) => FdStatus::Invariant,
            Error::Internal(_) => FdStatus::Internal,
        }
    }
}

/// Opaque instance handle.
pub struct FdInstance(Instance);

/// Opaque allocation handle.
pub struct FdAllocation(Allocation);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(FdStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(FdStatus::from(&e), e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Runs `f`, records any failure and converts it into a status.
fn guard(f: impl FnOnce() -> Outcome<()>) -> FdStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FdStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            FdStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(FdStatus::NullArgument, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Outcome<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(FdStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn opt_str_arg<'a>(p: *const c_char, what: &str) -> Outcome<Option<&'a str>> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, what).map(Some)
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Outcome<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Outcome<()> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes replaced").into_raw()
}

/// Message for the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn fd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn fd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a `fairdiv-instance/1` JSON document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fd_instance_from_json(json: *const c_char, out: *mut *mut FdInstance) -> FdStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let inst = parse_instance(text)?;
        put(out, Box::into_raw(Box::new(FdInstance(inst))), "out")
    })
}

/// Frees an instance. Null is ignored.
///
/// # Safety
/// `inst` must come from [`fd_instance_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fd_instance_free(inst: *mut FdInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of agents, or 0 for null.
///
/// # Safety
/// `inst` must be null or a live instance handle.
#[no_mangle]
pub unsafe extern "C" fn fd_instance_num_agents(inst: *const FdInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.num_agents())
}

/// Number of items, or 0 for null.
///
/// # Safety
/// `inst` must be null or a live instance handle.
#[no_mangle]
pub unsafe extern "C" fn fd_instance_num_items(inst: *const FdInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.num_items())
}

/// Computes an allocation. `algorithm` may be null to pick one automatically;
/// otherwise it names an algorithm as the CLI's `--algorithm` does.
/// With `verify` set, mid-run invariants are checked.
///
/// # Safety
/// `inst` must be a live instance handle, `algorithm` null or nul-terminated,
/// and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fd_solve(
    inst: *const FdInstance,
    algorithm: *const c_char,
    verify: bool,
    out: *mut *mut FdAllocation,
) -> FdStatus {
    guard(|| {
        let inst = deref(inst, "inst")?;
        let algorithm = opt_str_arg(algorithm, "algorithm")?.map(str::parse::<Algorithm>).transpose()?;
        let s = solve(&inst.0, algorithm, &SolveOptions { order: None, verify })?;
        put(out, Box::into_raw(Box::new(FdAllocation(s.allocation))), "out")
    })
}

/// Parses an allocation: a JSON list of bundles, one list of item ids per agent.
///
/// # Safety
/// `json` must be nul-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fd_allocation_from_json(json: *const c_char, out: *mut *mut FdAllocation) -> FdStatus {
    guard(|| {
        let x = parse_allocation(str_arg(json, "json")?)?;
        put(out, Box::into_raw(Box::new(FdAllocation(x))), "out")
    })
}

/// Frees an allocation. Null is ignored.
///
/// # Safety
/// `x` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fd_allocation_free(x: *mut FdAllocation) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// Writes the allocation as JSON into `*out`; free it with [`fd_string_free`].
///
/// # Safety
/// `x` must be a live allocation handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fd_allocation_to_json(x: *const FdAllocation, out: *mut *mut c_char) -> FdStatus {
    guard(|| {
        let x = deref(x, "allocation")?;
        put(out, c_string(emit_allocation(&x.0)), "out")
    })
}

/// Copies the items of `agent`'s bundle into `buf`. `*len` holds the
/// capacity of `buf` on entry and the bundle size on return. A null `buf`
/// only queries the size. A short buffer is an input error.
///
/// # Safety
/// `x` must be a live allocation handle, `len` writable, and `buf` null or
/// valid for `*len` writes.
#[no_mangle]
pub unsafe extern "C" fn fd_allocation_bundle(
    x: *const FdAllocation,
    agent: usize,
    buf: *mut usize,
    len: *mut usize,
) -> FdStatus {
    guard(|| {
        let x = deref(x, "allocation")?;
        if len.is_null() {
            return Err(null("len"));
        }
        if agent >= x.0.num_agents() {
            return Err(Failure(FdStatus::Input, format!("agent {agent} out of range")));
        }
        let bundle = x.0.bundle(agent);
        let cap = *len;
        *len = bundle.len();
        if buf.is_null() {
            return Ok(());
        }
        if cap < bundle.len() {
            return Err(Failure(FdStatus::Input, format!("buffer holds {cap} items, bundle has {}", bundle.len())));
        }
        ptr::copy_nonoverlapping(bundle.as_ptr(), buf, bundle.len());
        Ok(())
    })
}

/// Decides whether the allocation is feasible and satisfies `notion`
/// (`f-ef1`, `ef1`, `efx` or `weak-f-ef1`). An infeasible allocation yields
/// `false` rather than an error.
///
/// # Safety
/// Handles must be live, `notion` nul-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fd_verify(
    inst: *const FdInstance,
    x: *const FdAllocation,
    notion: *const c_char,
    out: *mut bool,
) -> FdStatus {
    guard(|| {
        let inst = deref(inst, "inst")?;
        let x = deref(x, "allocation")?;
        let name = str_arg(notion, "notion")?;
        let notion = Notion::parse(name).ok_or_else(|| Failure(FdStatus::Input, format!("unknown notion {name:?}")))?;
        let ok = check_feasible(&x.0, &inst.0).is_feasible() && notion.holds(&x.0, &inst.0)?;
        put(out, ok, "out")
    })
}

/// Full fairness report as JSON in `*out`; free it with [`fd_string_free`].
/// With `pareto` set, also decides Pareto efficiency by enumeration.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fd_fairness_report(
    inst: *const FdInstance,
    x: *const FdAllocation,
    pareto: bool,
    out: *mut *mut c_char,
) -> FdStatus {
    guard(|| {
        let inst = deref(inst, "inst")?;
        let x = deref(x, "allocation")?;
        let feasibility = check_feasible(&x.0, &inst.0);
        if !feasibility.is_feasible() {
            return Err(Failure(FdStatus::Input, format!("allocation is not feasible: {}", feasibility.describe())));
        }
        let report = FairnessReport::new(&x.0, &inst.0, pareto)?;
        let text = serde_json::to_string(&report).map_err(|e| Failure(FdStatus::Internal, e.to_string()))?;
        put(out, c_string(text), "out")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_codes_are_stable() {
        assert_eq!(FdStatus::Ok as i32, 0);
        assert_eq!(FdStatus::Panic as i32, 11);
        let e = Error::NotBaseOrderable { envious: 0, envied: 1 };
        assert_eq!(FdStatus::from(&e), FdStatus::NotBaseOrderable);
    }

    #[test]
    fn panics_become_status() {
        assert_eq!(guard(|| panic!("boom")), FdStatus::Panic);
        let msg = unsafe { CStr::from_ptr(fd_last_error()) }.to_str().unwrap();
        assert_eq!(msg, "panic: boom");
        assert_eq!(guard(|| Ok(())), FdStatus::Ok);
        assert!(fd_last_error().is_null());
    }
}
