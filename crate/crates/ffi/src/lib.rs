//! C ABI for covsketch.
//!
//! Objects are opaque handles created by `cov_*` constructors and released
//! with the matching `*_free`. Every fallible call returns a [`CovStatus`];
//! on failure, `cov_last_error` copies a message for the calling thread.
//! Panics never cross the boundary: they surface as `COV_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::fs::File;
use std::io::BufReader;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use covsketch::distsim::{run_kcover_mapreduce, DistSolver};
use covsketch::instance::{generate_planted, load_edge_list};
use covsketch::sketch::{build_sketch, theory_params};
use covsketch::solvers::{coverage, greedy_kcover, set_cover_outliers, Engine};
use covsketch::{CoverageInstance, Error, HashSource, PracticalParams, Sketch, SketchParams, Solution};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Infeasible = 4,
    Io = 5,
    Panic = 6,
    /// Reserved for failures with no better code.
    Internal = 7,
}

/// Coverage instance handle.
pub struct CovInstance(CoverageInstance);

/// Sketch handle.
pub struct CovSketch(Sketch);

/// Solution handle.
pub struct CovSolution(Solution);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(err: &Error) -> CovStatus {
    match err {
        Error::Parse { .. } => CovStatus::Parse,
        Error::Io(_) => CovStatus::Io,
        Error::Infeasible => CovStatus::Infeasible,
        Error::EmptyInstance
        | Error::InvalidParameter(_)
        | Error::InvalidSetId { .. }
        | Error::OracleOutOfRange { .. }
        | Error::ExpansionBudget { .. }
        | Error::EnumerationBudget { .. } => CovStatus::InvalidArgument,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CovStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CovStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            CovStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_error(format!("panic: {msg}"));
            CovStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    // SAFETY: caller guarantees `p` is null or a live handle from this library.
    unsafe { p.as_ref() }.ok_or(Failure::Null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    // SAFETY: `out` is non-null and the caller guarantees it is writable.
    unsafe { out.write(value) };
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Static description of a status code. Never null.
#[no_mangle]
pub extern "C" fn cov_status_string(status: CovStatus) -> *const c_char {
    let s: &'static CStr = match status {
        CovStatus::Ok => c"ok",
        CovStatus::NullPointer => c"null pointer",
        CovStatus::InvalidArgument => c"invalid argument",
        CovStatus::Parse => c"parse error",
        CovStatus::Infeasible => c"infeasible outlier fraction",
        CovStatus::Io => c"i/o error",
        CovStatus::Panic => c"internal panic",
        CovStatus::Internal => c"internal error",
    };
    s.as_ptr()
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `cap`). Returns the full message length
/// excluding the terminator, so a caller can size a retry.
///
/// # Safety
/// `buf` must be null or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cov_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            // SAFETY: `buf` has `cap` bytes and `n < cap`.
            unsafe {
                ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
        }
        msg.len()
    })
}

/// Loads an edge-list file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cov_instance_load(path: *const c_char, out: *mut *mut CovInstance) -> CovStatus {
    guard(|| {
        if path.is_null() {
            return Err(Failure::Null("path"));
        }
        // SAFETY: non-null and NUL-terminated per the contract.
        let path = unsafe { CStr::from_ptr(path) }
            .to_str()
            .map_err(|_| Error::InvalidParameter("path is not UTF-8".into()))?;
        let inst = load_edge_list(BufReader::new(File::open(path).map_err(Error::from)?))?;
        unsafe { write_out(out, boxed(CovInstance(inst)), "out") }
    })
}

/// Generates a planted instance (`k` disjoint sets over `m` elements plus
/// `kprime` decoys).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cov_instance_generate_planted(
    k: usize,
    m: usize,
    kprime: usize,
    eps: f64,
    seed: u64,
    out: *mut *mut CovInstance,
) -> CovStatus {
    guard(|| {
        let p = generate_planted(k, m, kprime, eps, seed)?;
        unsafe { write_out(out, boxed(CovInstance(p.instance)), "out") }
    })
}

/// Set count, element count and edge count of an instance. Any output
/// pointer may be null.
///
/// # Safety
/// `inst` must be a live instance handle.
#[no_mangle]
pub unsafe extern "C" fn cov_instance_dims(
    inst: *const CovInstance,
    n: *mut usize,
    m: *mut usize,
    edges: *mut usize,
) -> CovStatus {
    guard(|| {
        let inst = &unsafe { deref(inst, "inst") }?.0;
        for (p, v) in [(n, inst.n()), (m, inst.m()), (edges, inst.edge_count())] {
            if !p.is_null() {
                // SAFETY: non-null output pointers are writable per the contract.
                unsafe { p.write(v) };
            }
        }
        Ok(())
    })
}

/// # Safety
/// `inst` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cov_instance_free(inst: *mut CovInstance) {
    if !inst.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(inst) });
    }
}

/// Practical sketch: keep each element with probability `rho`, at most
/// `sigma` edges each.
///
/// # Safety
/// `inst` must be a live instance handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cov_sketch_practical(
    inst: *const CovInstance,
    rho: f64,
    sigma: usize,
    seed: u64,
    out: *mut *mut CovSketch,
) -> CovStatus {
    guard(|| {
        let inst = &unsafe { deref(inst, "inst") }?.0;
        let params = SketchParams::Practical(PracticalParams::new(rho, sigma)?);
        let sk = build_sketch(inst, &params, &HashSource::new(seed));
        unsafe { write_out(out, boxed(CovSketch(sk)), "out") }
    })
}

/// Theory-mode sketch for k-cover with accuracy `eps`.
///
/// # Safety
/// `inst` must be a live instance handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cov_sketch_theory(
    inst: *const CovInstance,
    k: usize,
    eps: f64,
    delta_dprime: f64,
    seed: u64,
    out: *mut *mut CovSketch,
) -> CovStatus {
    guard(|| {
        let inst = &unsafe { deref(inst, "inst") }?.0;
        let p = theory_params(inst.n(), inst.m(), inst.edge_count(), k, eps, delta_dprime)?;
        let sk = build_sketch(inst, &SketchParams::Theory(p), &HashSource::new(seed));
        unsafe { write_out(out, boxed(CovSketch(sk)), "out") }
    })
}

/// Edge count of a sketch.
///
/// # Safety
/// `sketch` must be a live sketch handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cov_sketch_edge_count(sketch: *const CovSketch, out: *mut usize) -> CovStatus {
    guard(|| {
        let sk = &unsafe { deref(sketch, "sketch") }?.0;
        unsafe { write_out(out, sk.edge_count(), "out") }
    })
}

/// # Safety
/// `sketch` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cov_sketch_free(sketch: *mut CovSketch) {
    if !sketch.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(sketch) });
    }
}

/// Greedy k-cover on an instance.
///
/// # Safety
/// `inst` must be a live instance handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cov_greedy_instance(
    inst: *const CovInstance,
    k: usize,
    out: *mut *mut CovSolution,
) -> CovStatus {
    guard(|| {
        let inst = &unsafe { deref(inst, "inst") }?.0;
        unsafe { write_out(out, boxed(CovSolution(greedy_kcover(inst, k))), "out") }
    })
}

/// Greedy k-cover on a sketch; the value is sketch coverage.
///
/// # Safety
/// `sketch` must be a live sketch handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cov_greedy_sketch(
    sketch: *const CovSketch,
    k: usize,
    out: *mut *mut CovSolution,
) -> CovStatus {
    guard(|| {
        let sk = &unsafe { deref(sketch, "sketch") }?.0;
        unsafe { write_out(out, boxed(CovSolution(greedy_kcover(sk, k))), "out") }
    })
}

/// Set cover with outliers; `use_sketch` selects the sketch engine.
/// Returns `COV_STATUS_INFEASIBLE` when no cover exists.
///
/// # Safety
/// `inst` must be a live instance handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cov_set_cover_outliers(
    inst: *const CovInstance,
    lambda: f64,
    eps: f64,
    delta_dprime: f64,
    seed: u64,
    use_sketch: bool,
    out: *mut *mut CovSolution,
) -> CovStatus {
    guard(|| {
        let inst = &unsafe { deref(inst, "inst") }?.0;
        let engine = if use_sketch { Engine::Sketch } else { Engine::Direct };
        let r = set_cover_outliers(inst, lambda, eps, delta_dprime, seed, engine)?;
        unsafe { write_out(out, boxed(CovSolution(r.solution)), "out") }
    })
}

/// Four-round simulated k-cover. `divergence` (may be null) receives
/// whether the distributed sketch may differ from the single-process one.
///
/// # Safety
/// `inst` must be a live instance handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cov_simulate_kcover(
    inst: *const CovInstance,
    k: usize,
    eps: f64,
    delta_dprime: f64,
    seed: u64,
    machines: usize,
    out: *mut *mut CovSolution,
    divergence: *mut bool,
) -> CovStatus {
    guard(|| {
        let inst = &unsafe { deref(inst, "inst") }?.0;
        let run = run_kcover_mapreduce(inst, k, eps, delta_dprime, seed, machines, DistSolver::Greedy)?;
        if !divergence.is_null() {
            // SAFETY: non-null and writable per the contract.
            unsafe { divergence.write(run.report.divergence) };
        }
        unsafe { write_out(out, boxed(CovSolution(run.solution)), "out") }
    })
}

/// Coverage of the `len` set ids at `ids` on an instance.
///
/// # Safety
/// `inst` must be a live handle; `ids` must point to `len` values (or be
/// null with `len == 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cov_coverage(
    inst: *const CovInstance,
    ids: *const u32,
    len: usize,
    out: *mut u64,
) -> CovStatus {
    guard(|| {
        let inst = &unsafe { deref(inst, "inst") }?.0;
        let ids: &[u32] = if len == 0 {
            &[]
        } else if ids.is_null() {
            return Err(Failure::Null("ids"));
        } else {
            // SAFETY: `ids` has `len` elements per the contract.
            unsafe { std::slice::from_raw_parts(ids, len) }
        };
        unsafe { write_out(out, coverage(inst, ids)?, "out") }
    })
}

/// Coverage value recorded in a solution.
///
/// # Safety
/// `sol` must be a live solution handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cov_solution_value(sol: *const CovSolution, out: *mut u64) -> CovStatus {
    guard(|| {
        let sol = &unsafe { deref(sol, "sol") }?.0;
        unsafe { write_out(out, sol.value, "out") }
    })
}

/// Number of chosen sets.
///
/// # Safety
/// `sol` must be a live solution handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cov_solution_len(sol: *const CovSolution, out: *mut usize) -> CovStatus {
    guard(|| {
        let sol = &unsafe { deref(sol, "sol") }?.0;
        unsafe { write_out(out, sol.len(), "out") }
    })
}

/// Copies up to `cap` chosen ids, in pick order, into `buf`; `written`
/// receives the number copied.
///
/// # Safety
/// `sol` must be a live handle; `buf` must hold `cap` values; `written`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn cov_solution_ids(
    sol: *const CovSolution,
    buf: *mut u32,
    cap: usize,
    written: *mut usize,
) -> CovStatus {
    guard(|| {
        let sol = &unsafe { deref(sol, "sol") }?.0;
        let n = sol.chosen.len().min(cap);
        if n > 0 {
            if buf.is_null() {
                return Err(Failure::Null("buf"));
            }
            // SAFETY: `buf` holds at least `cap >= n` values.
            unsafe { ptr::copy_nonoverlapping(sol.chosen.as_ptr(), buf, n) };
        }
        unsafe { write_out(written, n, "written") }
    })
}

/// # Safety
/// `sol` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cov_solution_free(sol: *mut CovSolution) {
    if !sol.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(sol) });
    }
}
