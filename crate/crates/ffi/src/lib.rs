//! C interface to the bitrade library.
//!
//! Bitrades are passed around as opaque `BtBitrade` handles. Every fallible
//! call returns a `BtStatus`; on failure the message is available from
//! `bt_last_error` until the next call on the same thread. Strings handed
//! out by the library must be released with `bt_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use bitrade::dissection::{dissect, to_svg, DissectError, SvgOptions};
use bitrade::group::{integer_homotopy_rank, is_abelian_embeddable, presentation, subgroup_h};
use bitrade::io::{bitrade_from_json, LoadError};
use bitrade::system::{solve_pointed, PointedBitrade, SystemError};
use bitrade::trigon::find_trigons;
use bitrade::Bitrade;

/// Result codes. Values match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BtStatus {
    Ok = 0,
    Failure = 1,
    Axiom = 2,
    Parse = 3,
    Singular = 4,
    NotSeparated = 5,
    NullArgument = 6,
    OutOfRange = 7,
}

/// Opaque validated bitrade.
pub struct BtBitrade(Bitrade);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct BtMetrics {
    pub size: usize,
    pub rows: usize,
    pub cols: usize,
    pub syms: usize,
    pub m: usize,
    pub euler_characteristic: i64,
    /// -1 when the semidual is not a surface.
    pub genus: i64,
    pub spherical: bool,
    pub separated: bool,
    pub indecomposable: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("nul bytes removed")));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: BtStatus, msg: impl Into<String>) -> BtStatus {
    set_error(msg);
    status
}

fn load_status(e: &LoadError) -> BtStatus {
    match e {
        LoadError::Invalid(_) => BtStatus::Axiom,
        LoadError::Parse(_) => BtStatus::Parse,
        LoadError::Io { .. } => BtStatus::Failure,
    }
}

fn system_status(e: &SystemError) -> BtStatus {
    match e {
        SystemError::SingularSystem { .. } => BtStatus::Singular,
        _ => BtStatus::Failure,
    }
}

fn dissect_status(e: &DissectError) -> BtStatus {
    match e {
        DissectError::System(s) => system_status(s),
        DissectError::NotSeparatedSolution(..) => BtStatus::NotSeparated,
        DissectError::VerificationFailed { .. } => BtStatus::Failure,
    }
}

/// Writes `s` to `*out` as a freshly allocated C string.
///
/// # Safety
/// `out` must be valid for writes.
unsafe fn emit(s: String, out: *mut *mut c_char) -> BtStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            BtStatus::Ok
        }
        Err(_) => fail(BtStatus::Failure, "output contains a nul byte"),
    }
}

/// # Safety
/// `t` must be null or a live handle from `bt_bitrade_from_json`.
unsafe fn handle<'a>(t: *const BtBitrade) -> Option<&'a Bitrade> {
    t.as_ref().map(|h| &h.0)
}

fn pivot_in_range(t: &Bitrade, pivot: usize) -> Result<(), BtStatus> {
    if pivot < t.size() {
        Ok(())
    } else {
        Err(fail(BtStatus::OutOfRange, format!("pivot {pivot} out of range (size {})", t.size())))
    }
}

/// Parses and validates a bitrade document. On success `*out` receives a new
/// handle owned by the caller.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bt_bitrade_from_json(json: *const c_char, out: *mut *mut BtBitrade) -> BtStatus {
    clear_error();
    if json.is_null() || out.is_null() {
        return fail(BtStatus::NullArgument, "null argument");
    }
    *out = ptr::null_mut();
    let text = match CStr::from_ptr(json).to_str() {
        Ok(s) => s,
        Err(e) => return fail(BtStatus::Parse, format!("input is not UTF-8: {e}")),
    };
    match bitrade_from_json(text) {
        Ok(t) => {
            *out = Box::into_raw(Box::new(BtBitrade(t)));
            BtStatus::Ok
        }
        Err(e) => fail(load_status(&e), e.to_string()),
    }
}

/// # Safety
/// `t` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bt_bitrade_free(t: *mut BtBitrade) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bt_bitrade_metrics(t: *const BtBitrade, out: *mut BtMetrics) -> BtStatus {
    clear_error();
    let Some(t) = handle(t) else { return fail(BtStatus::NullArgument, "null handle") };
    if out.is_null() {
        return fail(BtStatus::NullArgument, "null output");
    }
    let m = t.metrics();
    *out = BtMetrics {
        size: m.size,
        rows: m.role_counts[0],
        cols: m.role_counts[1],
        syms: m.role_counts[2],
        m: m.m,
        euler_characteristic: m.euler_characteristic,
        genus: m.genus.unwrap_or(-1),
        spherical: m.spherical,
        separated: m.separated,
        indecomposable: m.indecomposable,
    };
    BtStatus::Ok
}

/// Solves the system pointed at star triple `pivot` (index in canonical
/// order) and writes the solution as JSON.
///
/// # Safety
/// `t` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bt_solve_json(t: *const BtBitrade, pivot: usize, out: *mut *mut c_char) -> BtStatus {
    clear_error();
    let Some(t) = handle(t) else { return fail(BtStatus::NullArgument, "null handle") };
    if out.is_null() {
        return fail(BtStatus::NullArgument, "null output");
    }
    if let Err(s) = pivot_in_range(t, pivot) {
        return s;
    }
    match solve_pointed(t, pivot) {
        Ok(sol) => emit(serde_json::to_string(&sol.to_json(t)).expect("plain data"), out),
        Err(e) => fail(system_status(&e), e.to_string()),
    }
}

/// Dissects at `pivot` and writes the SVG rendering.
///
/// # Safety
/// `t` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bt_dissect_svg(
    t: *const BtBitrade,
    pivot: usize,
    equilateral: bool,
    out: *mut *mut c_char,
) -> BtStatus {
    clear_error();
    let Some(t) = handle(t) else { return fail(BtStatus::NullArgument, "null handle") };
    if out.is_null() {
        return fail(BtStatus::NullArgument, "null output");
    }
    if let Err(s) = pivot_in_range(t, pivot) {
        return s;
    }
    let p = PointedBitrade { bitrade: t.clone(), pivot };
    match dissect(&p) {
        Ok(d) => emit(to_svg(&d, SvgOptions { equilateral, ..SvgOptions::default() }), out),
        Err(e) => fail(dissect_status(&e), e.to_string()),
    }
}

/// Writes the group data (G, H, embeddability, integer rank) as JSON.
///
/// # Safety
/// `t` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bt_embed_json(t: *const BtBitrade, out: *mut *mut c_char) -> BtStatus {
    clear_error();
    let Some(t) = handle(t) else { return fail(BtStatus::NullArgument, "null handle") };
    if out.is_null() {
        return fail(BtStatus::NullArgument, "null output");
    }
    let g = presentation(t);
    let h = subgroup_h(t);
    let doc = serde_json::json!({
        "G": { "structure": g, "text": g.to_string() },
        "H": { "structure": h, "text": h.to_string() },
        "embeddable": is_abelian_embeddable(t),
        "integer_homotopy_rank": integer_homotopy_rank(t),
    });
    emit(doc.to_string(), out)
}

/// Number of trigons, or -1 on error.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bt_trigon_count(t: *const BtBitrade) -> i64 {
    clear_error();
    let Some(t) = handle(t) else {
        set_error("null handle");
        return -1;
    };
    match find_trigons(t) {
        Ok(v) => v.len() as i64,
        Err(e) => {
            set_error(e.to_string());
            -1
        }
    }
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next library call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn bt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
