//! C ABI for the Bredon homology engine.
//!
//! Results live behind an opaque `BredonResult` handle that the caller
//! releases with `bredon_result_free`. Every function returns a
//! `BredonStatus`; on failure `bredon_last_error` gives a message for the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bredon_core::coxeter::{enumerate_spherical, CoxeterMatrix};
use bredon_core::report::{run_homology, HomologyOptions, MethodChoice};
use bredon_core::{Error, FgAbGroup, HomologyProfile, KHomology};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BredonStatus {
    Ok = 0,
    InvalidMatrix = 1,
    Input = 2,
    Precondition = 3,
    Resource = 4,
    Consistency = 5,
    NullPointer = 6,
    OutOfRange = 7,
    Internal = 8,
}

pub const BREDON_METHOD_AUTO: u32 = 0;
pub const BREDON_METHOD_CHAIN: u32 = 1;
pub const BREDON_METHOD_CLOSED: u32 = 2;

/// Opaque result handle.
pub struct BredonResult {
    profile: HomologyProfile,
    k: KHomology,
    agreed: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: BredonStatus, msg: impl Into<String>) -> BredonStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> BredonStatus {
    let status = match e {
        Error::InvalidMatrix(_) => BredonStatus::InvalidMatrix,
        Error::Input(_) => BredonStatus::Input,
        Error::Precondition(_) => BredonStatus::Precondition,
        Error::Resource(_) => BredonStatus::Resource,
        Error::Consistency(_) => BredonStatus::Consistency,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> BredonStatus) -> BredonStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(BredonStatus::Internal, "internal panic"))
}

/// # Safety
/// `entries` must point to `rank * rank` readable values.
unsafe fn read_matrix(rank: usize, entries: *const i64) -> Result<CoxeterMatrix, BredonStatus> {
    if entries.is_null() && rank > 0 {
        return Err(fail(BredonStatus::NullPointer, "matrix pointer is null"));
    }
    let Some(len) = rank.checked_mul(rank) else {
        return Err(fail(BredonStatus::InvalidMatrix, "rank too large"));
    };
    let flat: &[i64] = if len == 0 { &[] } else { std::slice::from_raw_parts(entries, len) };
    let rows: Vec<Vec<i64>> = flat.chunks(rank.max(1)).map(<[i64]>::to_vec).collect();
    bredon_core::coxeter::parse_matrix(&rows).map_err(from_error)
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bredon_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Number of spherical subsets (including the empty one).
///
/// # Safety
/// `entries` holds `rank * rank` row-major entries, 0 meaning infinity;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bredon_spherical_count(rank: usize, entries: *const i64, out: *mut usize) -> BredonStatus {
    guard(|| {
        if out.is_null() {
            return fail(BredonStatus::NullPointer, "output pointer is null");
        }
        match read_matrix(rank, entries) {
            Ok(w) => {
                *out = enumerate_spherical(&w).total();
                BredonStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Computes Bredon homology. `method` is one of the `BREDON_METHOD_*`
/// constants; `order_cap` of 0 selects the default cap. On success `*out`
/// receives a handle to free with `bredon_result_free`.
///
/// # Safety
/// `entries` holds `rank * rank` row-major entries, 0 meaning infinity;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bredon_compute(
    rank: usize,
    entries: *const i64,
    method: u32,
    order_cap: u64,
    out: *mut *mut BredonResult,
) -> BredonStatus {
    guard(|| {
        if out.is_null() {
            return fail(BredonStatus::NullPointer, "output pointer is null");
        }
        *out = ptr::null_mut();
        let w = match read_matrix(rank, entries) {
            Ok(w) => w,
            Err(s) => return s,
        };
        let method = match method {
            BREDON_METHOD_AUTO => MethodChoice::Auto,
            BREDON_METHOD_CHAIN => MethodChoice::Chain,
            BREDON_METHOD_CLOSED => MethodChoice::Closed,
            other => return fail(BredonStatus::Input, format!("unknown method {other}")),
        };
        let mut opts = HomologyOptions { method, ..HomologyOptions::default() };
        if order_cap > 0 {
            opts.order_cap = order_cap.into();
        }
        let report = match run_homology(&w, &opts) {
            Ok(r) => r,
            Err(e) => return from_error(e),
        };
        let Some(profile) = report.profiles.first().cloned() else {
            return fail(BredonStatus::Internal, "no method produced a result");
        };
        let k = report.k_homology.clone().expect("present with a profile");
        *out = Box::into_raw(Box::new(BredonResult { profile, k, agreed: report.agreed() }));
        BredonStatus::Ok
    })
}

/// # Safety
/// `result` must come from `bredon_compute` and not be freed yet, or be null.
#[no_mangle]
pub unsafe extern "C" fn bredon_result_free(result: *mut BredonResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

unsafe fn with_result<'a>(result: *const BredonResult) -> Result<&'a BredonResult, BredonStatus> {
    result.as_ref().ok_or_else(|| fail(BredonStatus::NullPointer, "result handle is null"))
}

fn write_group(g: &FgAbGroup, free_rank: *mut u64, torsion_count: *mut usize) -> BredonStatus {
    if free_rank.is_null() || torsion_count.is_null() {
        return fail(BredonStatus::NullPointer, "output pointer is null");
    }
    // SAFETY: both checked non-null above; the caller guarantees validity.
    unsafe {
        *free_rank = g.free_rank as u64;
        *torsion_count = g.torsion.len();
    }
    BredonStatus::Ok
}

/// Highest degree with nonzero homology, or -1 if all vanish.
///
/// # Safety
/// `result` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn bredon_result_top_degree(result: *const BredonResult, out: *mut i64) -> BredonStatus {
    guard(|| {
        let r = match with_result(result) {
            Ok(r) => r,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(BredonStatus::NullPointer, "output pointer is null");
        }
        *out = r.profile.top_nonzero().map_or(-1, |d| d as i64);
        BredonStatus::Ok
    })
}

/// Free rank and number of torsion summands of `H_degree`.
///
/// # Safety
/// `result` is a live handle and both outputs are writable.
#[no_mangle]
pub unsafe extern "C" fn bredon_result_homology(
    result: *const BredonResult,
    degree: usize,
    free_rank: *mut u64,
    torsion_count: *mut usize,
) -> BredonStatus {
    guard(|| match with_result(result) {
        Ok(r) => write_group(&r.profile.get(degree), free_rank, torsion_count),
        Err(s) => s,
    })
}

/// The `index`-th invariant factor of the torsion of `H_degree`.
///
/// # Safety
/// `result` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn bredon_result_torsion(
    result: *const BredonResult,
    degree: usize,
    index: usize,
    out: *mut u64,
) -> BredonStatus {
    guard(|| {
        let r = match with_result(result) {
            Ok(r) => r,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(BredonStatus::NullPointer, "output pointer is null");
        }
        let g = r.profile.get(degree);
        let Some(t) = g.torsion.get(index) else {
            return fail(BredonStatus::OutOfRange, format!("H_{degree} has {} torsion factors", g.torsion.len()));
        };
        match u64::try_from(t) {
            Ok(v) => {
                *out = v;
                BredonStatus::Ok
            }
            Err(_) => fail(BredonStatus::OutOfRange, format!("torsion factor {t} exceeds 64 bits")),
        }
    })
}

/// Whether K-homology is determined (homology vanishes above degree 1),
/// and if so `K_0` (`which == 0`) or `K_1` (`which == 1`).
/// Returns `BREDON_STATUS_PRECONDITION` when undecided.
///
/// # Safety
/// `result` is a live handle and both outputs are writable.
#[no_mangle]
pub unsafe extern "C" fn bredon_result_k_homology(
    result: *const BredonResult,
    which: u32,
    free_rank: *mut u64,
    torsion_count: *mut usize,
) -> BredonStatus {
    guard(|| {
        let r = match with_result(result) {
            Ok(r) => r,
            Err(s) => return s,
        };
        match (&r.k, which) {
            (KHomology::Determined { k0, .. }, 0) => write_group(k0, free_rank, torsion_count),
            (KHomology::Determined { k1, .. }, 1) => write_group(k1, free_rank, torsion_count),
            (KHomology::Determined { .. }, w) => fail(BredonStatus::OutOfRange, format!("no K_{w}")),
            (KHomology::Undecided { .. }, _) => {
                fail(BredonStatus::Precondition, "Bredon homology is nonzero above degree 1")
            }
        }
    })
}

/// Whether every method that ran gave the same groups.
///
/// # Safety
/// `result` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn bredon_result_methods_agree(result: *const BredonResult, out: *mut bool) -> BredonStatus {
    guard(|| {
        let r = match with_result(result) {
            Ok(r) => r,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(BredonStatus::NullPointer, "output pointer is null");
        }
        *out = r.agreed;
        BredonStatus::Ok
    })
}
