//! C ABI over the `cwvo` solver.
//!
//! Every function returns a [`CwvoStatus`]; results go through out-pointers.
//! Solutions are opaque handles released with [`cwvo_solution_free`]. The
//! message for the most recent failure on the calling thread is available
//! from [`cwvo_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cwvo::opmat::{vo_monomial_matrix, OperationalMatrices, OrderFunction};
use cwvo::{builtin_example, DenseMatrix, Error, WaveletBasis};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CwvoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    SingularSystem = 3,
    Domain = 4,
    BufferTooSmall = 5,
    Internal = 6,
    Panic = 7,
}

/// Which operational matrix [`cwvo_operational_matrix`] should build.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CwvoMatrixKind {
    Derivative = 0,
    ChangeOfBasis = 1,
    MonomialOrder = 2,
    WaveletOrder = 3,
}

/// Opaque solution handle.
pub struct CwvoSolution {
    inner: cwvo::Solution,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> CwvoStatus {
    match err {
        Error::SingularSystem { .. } => CwvoStatus::SingularSystem,
        Error::Domain { .. } | Error::Singularity(_) | Error::OrderBracket { .. } => CwvoStatus::Domain,
        Error::Internal(_) => CwvoStatus::Internal,
        _ => CwvoStatus::InvalidArgument,
    }
}

fn guard<F: FnOnce() -> Result<(), (CwvoStatus, String)>>(f: F) -> CwvoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CwvoStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside cwvo");
            CwvoStatus::Panic
        }
    }
}

fn lift(err: Error) -> (CwvoStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (CwvoStatus, String) {
    (CwvoStatus::NullPointer, format!("{what} is null"))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn cwvo_status_message(status: CwvoStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        CwvoStatus::Ok => b"ok\0",
        CwvoStatus::NullPointer => b"null pointer argument\0",
        CwvoStatus::InvalidArgument => b"invalid argument\0",
        CwvoStatus::SingularSystem => b"singular collocation system\0",
        CwvoStatus::Domain => b"argument outside the function domain\0",
        CwvoStatus::BufferTooSmall => b"output buffer too small\0",
        CwvoStatus::Internal => b"internal error\0",
        CwvoStatus::Panic => b"panic\0",
    };
    s.as_ptr().cast()
}

/// Message of the last failure on this thread. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn cwvo_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Gamma function for `x > 0`.
///
/// # Safety
/// `out` must be null or valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn cwvo_gamma(x: f64, out: *mut f64) -> CwvoStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = cwvo::gamma(x).map_err(lift)?;
        Ok(())
    })
}

/// Solves built-in example `example` (1..4) on the `(k, m)` basis.
///
/// # Safety
/// `out` must be null or valid for writing one pointer. On success the
/// handle must be released with [`cwvo_solution_free`].
#[no_mangle]
pub unsafe extern "C" fn cwvo_solve_example(example: u32, k: u32, m: usize, out: *mut *mut CwvoSolution) -> CwvoStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let spec = builtin_example(example).map_err(lift)?;
        let basis = WaveletBasis::new(k, m).map_err(lift)?;
        let inner = cwvo::solve(&spec, &basis).map_err(lift)?;
        *out = Box::into_raw(Box::new(CwvoSolution { inner }));
        Ok(())
    })
}

/// Releases a solution handle. Null is ignored.
///
/// # Safety
/// `sol` must be null or a handle from [`cwvo_solve_example`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cwvo_solution_free(sol: *mut CwvoSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Evaluates `u(x, t)` on the unit square.
///
/// # Safety
/// `sol` must be a live handle; `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn cwvo_solution_eval(sol: *const CwvoSolution, x: f64, t: f64, out: *mut f64) -> CwvoStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("sol"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = sol.inner.eval(x, t).map_err(lift)?;
        Ok(())
    })
}

/// Basis size `2^k M`; the coefficient matrix is size x size.
///
/// # Safety
/// `sol` must be a live handle; `out` must be valid for writing one `size_t`.
#[no_mangle]
pub unsafe extern "C" fn cwvo_solution_size(sol: *const CwvoSolution, out: *mut usize) -> CwvoStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("sol"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = sol.inner.basis().size();
        Ok(())
    })
}

/// Copies the coefficient matrix, row-major, into `buf` of `len` doubles.
///
/// # Safety
/// `sol` must be a live handle; `buf` must be valid for writing `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cwvo_solution_coefficients(sol: *const CwvoSolution, buf: *mut f64, len: usize) -> CwvoStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("sol"))?;
        copy_out(sol.inner.coefficients(), buf, len)
    })
}

/// Condition estimate of the collocation matrix and the interior residual.
///
/// # Safety
/// `sol` must be a live handle; the out-pointers must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cwvo_solution_diagnostics(
    sol: *const CwvoSolution,
    condition_estimate: *mut f64,
    max_interior_residual: *mut f64,
) -> CwvoStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("sol"))?;
        let cond = condition_estimate.as_mut().ok_or_else(|| null("condition_estimate"))?;
        let res = max_interior_residual
            .as_mut()
            .ok_or_else(|| null("max_interior_residual"))?;
        *cond = sol.inner.diagnostics.condition_estimate;
        *res = sol.inner.diagnostics.max_interior_residual;
        Ok(())
    })
}

unsafe fn copy_out(m: &DenseMatrix, buf: *mut f64, len: usize) -> Result<(), (CwvoStatus, String)> {
    let data = m.as_slice();
    if buf.is_null() {
        return Err(null("buf"));
    }
    if len < data.len() {
        return Err((
            CwvoStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", data.len()),
        ));
    }
    ptr::copy_nonoverlapping(data.as_ptr(), buf, data.len());
    Ok(())
}

/// Builds an operational matrix for the `(k, m)` basis and constant order
/// `vartheta` at time `t` (the order and time are ignored for `D` and `P`).
/// Writes the dimension to `dim` and the row-major entries to `buf`; call
/// with a null `buf` to query the dimension only.
///
/// # Safety
/// `dim` must be valid for writing; `buf` must be null or valid for writing `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cwvo_operational_matrix(
    kind: CwvoMatrixKind,
    k: u32,
    m: usize,
    vartheta: f64,
    t: f64,
    buf: *mut f64,
    len: usize,
    dim: *mut usize,
) -> CwvoStatus {
    guard(|| {
        let dim = dim.as_mut().ok_or_else(|| null("dim"))?;
        let basis = WaveletBasis::new(k, m).map_err(lift)?;
        *dim = basis.size();
        if buf.is_null() {
            return Ok(());
        }
        let ops = OperationalMatrices::new(basis).map_err(lift)?;
        let mat = match kind {
            CwvoMatrixKind::Derivative => ops.derivative().clone(),
            CwvoMatrixKind::ChangeOfBasis => ops.change_of_basis().clone(),
            CwvoMatrixKind::MonomialOrder | CwvoMatrixKind::WaveletOrder => {
                let order = OrderFunction::constant(vartheta).map_err(lift)?;
                if kind == CwvoMatrixKind::MonomialOrder {
                    vo_monomial_matrix(&basis, &order, 0.0, t).map_err(lift)?
                } else {
                    ops.vo_wavelet_matrix(&order, 0.0, t).map_err(lift)?
                }
            }
        };
        copy_out(&mat, buf, len)
    })
}
