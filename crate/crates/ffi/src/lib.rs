//! C interface to the cut Fock space solver.
//!
//! Every call returns a [`SymqmStatus`]. On failure the message is kept per thread and can be
//! fetched with [`symqm_last_error`]. Arrays are written into caller buffers; when a buffer is
//! too small the call reports `BufferTooSmall` and still stores the required length.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use symqm::closed_form::{theta_bosonic, Family};
use symqm::eigenstates::AnsatzScope;
use symqm::solver::{resolve_cache_dir, Solver};
use symqm::Error;

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymqmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BufferTooSmall = 3,
    SingularGram = 4,
    NotARoot = 5,
    CacheMismatch = 6,
    Internal = 7,
    Panic = 8,
}

/// Opaque solver for one `(N, N_cut)`.
pub struct SymqmSolver {
    inner: Solver,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> SymqmStatus {
    match e {
        Error::SingularGram { .. } | Error::RankDeficient { .. } => SymqmStatus::SingularGram,
        Error::NotARoot { .. } => SymqmStatus::NotARoot,
        Error::CacheMismatch { .. } => SymqmStatus::CacheMismatch,
        Error::InvalidRank(_) | Error::InvalidArgument(_) | Error::InvalidDressing(_) | Error::Parse { .. } => {
            SymqmStatus::InvalidArgument
        }
        _ => SymqmStatus::Internal,
    }
}

/// Runs `f`, turning errors and panics into a status plus the stored message.
fn guard(f: impl FnOnce() -> Result<(), (SymqmStatus, String)>) -> SymqmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            SymqmStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside symqm".into());
            SymqmStatus::Panic
        }
    }
}

fn lib(e: Error) -> (SymqmStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SymqmStatus, String) {
    (SymqmStatus::NullPointer, format!("{what} is null"))
}

/// Copies `values` into `out[..cap]` and stores the length in `len`.
///
/// # Safety
/// `out` must point to `cap` writable doubles (or be null when `cap` is 0); `len` must be writable.
unsafe fn write_array(values: &[f64], out: *mut f64, cap: usize, len: *mut usize) -> Result<(), (SymqmStatus, String)> {
    if len.is_null() {
        return Err(null("len"));
    }
    *len = values.len();
    if values.len() > cap {
        return Err((SymqmStatus::BufferTooSmall, format!("need {} entries, buffer holds {cap}", values.len())));
    }
    if !values.is_empty() {
        if out.is_null() {
            return Err(null("out"));
        }
        std::ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    }
    Ok(())
}

/// Builds the basis, Gram matrix and Hamiltonian. `cache_dir` may be null; `SYMQM_CACHE` overrides it.
///
/// # Safety
/// `cache_dir` must be null or a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn symqm_solver_new(
    n: u32,
    ncut: u32,
    cache_dir: *const c_char,
    out: *mut *mut SymqmSolver,
) -> SymqmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = std::ptr::null_mut();
        let fallback = if cache_dir.is_null() {
            None
        } else {
            let s = CStr::from_ptr(cache_dir)
                .to_str()
                .map_err(|_| (SymqmStatus::InvalidArgument, "cache_dir is not UTF-8".to_string()))?;
            Some(PathBuf::from(s))
        };
        let dir = resolve_cache_dir(fallback.as_deref());
        let inner = Solver::with_cache(n, ncut, dir.as_deref()).map_err(lib)?;
        *out = Box::into_raw(Box::new(SymqmSolver { inner }));
        Ok(())
    })
}

/// Releases a solver; null is ignored.
///
/// # Safety
/// `solver` must come from [`symqm_solver_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn symqm_solver_free(solver: *mut SymqmSolver) {
    if !solver.is_null() {
        drop(Box::from_raw(solver));
    }
}

/// Dimension of the cut basis.
///
/// # Safety
/// `solver` must be a live handle and `dim` writable.
#[no_mangle]
pub unsafe extern "C" fn symqm_solver_dim(solver: *const SymqmSolver, dim: *mut usize) -> SymqmStatus {
    guard(|| {
        let s = solver.as_ref().ok_or_else(|| null("solver"))?;
        if dim.is_null() {
            return Err(null("dim"));
        }
        *dim = s.inner.basis().len();
        Ok(())
    })
}

/// Eigenvalues of the cut Hamiltonian, ascending.
///
/// # Safety
/// See [`symqm_solver_dim`]; `out` must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn symqm_spectrum_numeric(
    solver: *const SymqmSolver,
    out: *mut f64,
    cap: usize,
    len: *mut usize,
) -> SymqmStatus {
    guard(|| {
        let s = solver.as_ref().ok_or_else(|| null("solver"))?;
        let levels = s.inner.spectrum_numeric().map_err(lib)?.eigenvalues;
        write_array(&levels, out, cap, len)
    })
}

/// Zeros of the bosonic Laguerre quantization conditions, `E = x/2`, ascending.
///
/// # Safety
/// `out` must hold `cap` doubles and `len` be writable.
#[no_mangle]
pub unsafe extern "C" fn symqm_spectrum_closed(
    n: u32,
    ncut: u32,
    out: *mut f64,
    cap: usize,
    len: *mut usize,
) -> SymqmStatus {
    guard(|| {
        let levels = theta_bosonic(n, ncut).map_err(lib)?.energies();
        write_array(&levels, out, cap, len)
    })
}

/// Closed-form state of the bosonic family with tail `tail[..tail_len]` at its `root_index`-th zero:
/// its energy, and its residual in the cut eigenproblem.
///
/// # Safety
/// `tail` must hold `tail_len` values (may be null when 0); `energy` and `residual` must be writable.
#[no_mangle]
pub unsafe extern "C" fn symqm_family_state(
    solver: *const SymqmSolver,
    tail: *const u32,
    tail_len: usize,
    root_index: usize,
    energy: *mut f64,
    residual: *mut f64,
) -> SymqmStatus {
    guard(|| {
        let s = solver.as_ref().ok_or_else(|| null("solver"))?;
        if energy.is_null() || residual.is_null() {
            return Err(null("energy or residual"));
        }
        let tail = if tail_len == 0 {
            Vec::new()
        } else if tail.is_null() {
            return Err(null("tail"));
        } else {
            std::slice::from_raw_parts(tail, tail_len).to_vec()
        };
        let st = s.inner.family_state(&Family::bosonic(tail), root_index, AnsatzScope::AllLowerTails).map_err(lib)?;
        *energy = st.energy;
        *residual = s.inner.residual(&st);
        Ok(())
    })
}

/// Copies the last error of this thread into `buf` (NUL-terminated, truncated to `cap`).
/// Returns the full message length without the terminator.
///
/// # Safety
/// `buf` must be null or hold `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn symqm_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn symqm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
