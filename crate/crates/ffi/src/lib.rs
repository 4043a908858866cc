//! C interface to perfect-stbc.
//!
//! Codes are opaque handles created by `pstbc_code_new` and released with
//! `pstbc_code_free`. Every fallible call returns a `PstbcStatus`; on
//! failure `pstbc_last_error` gives a message for the calling thread.
//! Matrices are passed row-major as separate real and imaginary arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use num_complex::Complex64;
use perfect_stbc::codes::{text::to_text, CodeName, CodeSpec};
use perfect_stbc::sim::{run_cer, Constellation, SimConfig};
use perfect_stbc::verify::{min_det_bruteforce, min_det_sampled, ratio_f64, DEFAULT_BUDGET};
use perfect_stbc::Error;

/// Result of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PstbcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownName = 3,
    ConstructionFailed = 4,
    BufferTooSmall = 5,
    BudgetExceeded = 6,
    Panic = 7,
}

/// Opaque code handle.
pub struct PstbcCode {
    spec: Arc<CodeSpec>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> PstbcStatus {
    match e {
        Error::UnknownCode(_) | Error::UnknownConstellation(_) => PstbcStatus::UnknownName,
        Error::InvalidArgument(_) | Error::Parse { .. } => PstbcStatus::InvalidArgument,
        Error::BudgetExceeded { .. } => PstbcStatus::BudgetExceeded,
        _ => PstbcStatus::ConstructionFailed,
    }
}

/// Run `f`, recording the error message and catching panics.
fn guard(f: impl FnOnce() -> Result<(), (PstbcStatus, String)>) -> PstbcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PstbcStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            PstbcStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (PstbcStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (PstbcStatus, String) {
    (PstbcStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, (PstbcStatus, String)> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| (PstbcStatus::InvalidArgument, "string is not UTF-8".into()))
}

unsafe fn handle<'a>(code: *const PstbcCode) -> Result<&'a PstbcCode, (PstbcStatus, String)> {
    code.as_ref().ok_or_else(null)
}

/// Message describing the last failed call on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pstbc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Build a code by name (golden, 2x2:<p>, 3x3, 4x4, 6x6, 2x2:17-broken).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pstbc_code_new(name: *const c_char, out: *mut *mut PstbcCode) -> PstbcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let name: CodeName = read_str(name)?.parse().map_err(lib_err)?;
        let spec = name.build().map_err(lib_err)?;
        *out = Box::into_raw(Box::new(PstbcCode { spec: Arc::new(spec) }));
        Ok(())
    })
}

/// Release a handle; null is ignored.
///
/// # Safety
/// `code` must come from `pstbc_code_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pstbc_code_free(code: *mut PstbcCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Number of antennas n; codewords are n×n and carry n² symbols.
///
/// # Safety
/// `code` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pstbc_code_degree(code: *const PstbcCode, out: *mut usize) -> PstbcStatus {
    guard(|| {
        let c = handle(code)?;
        let out = out.as_mut().ok_or_else(null)?;
        *out = c.spec.n();
        Ok(())
    })
}

/// Unitary generator matrix R (n×n, row-major).
///
/// # Safety
/// `re` and `im` must each hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn pstbc_code_generator_matrix(
    code: *const PstbcCode,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> PstbcStatus {
    guard(|| {
        let c = handle(code)?;
        let n = c.spec.n();
        if re.is_null() || im.is_null() {
            return Err(null());
        }
        if len < n * n {
            return Err((PstbcStatus::BufferTooSmall, format!("need {} entries", n * n)));
        }
        let r = c.spec.generator_matrix();
        for row in 0..n {
            for col in 0..n {
                *re.add(row * n + col) = r[(row, col)].re;
                *im.add(row * n + col) = r[(row, col)].im;
            }
        }
        Ok(())
    })
}

/// Encode n² complex symbols into an n×n codeword (row-major).
///
/// # Safety
/// Symbol arrays hold `n_symbols` doubles, output arrays `out_len`.
#[no_mangle]
pub unsafe extern "C" fn pstbc_code_encode(
    code: *const PstbcCode,
    sym_re: *const f64,
    sym_im: *const f64,
    n_symbols: usize,
    out_re: *mut f64,
    out_im: *mut f64,
    out_len: usize,
) -> PstbcStatus {
    guard(|| {
        let c = handle(code)?;
        let n = c.spec.n();
        if sym_re.is_null() || sym_im.is_null() || out_re.is_null() || out_im.is_null() {
            return Err(null());
        }
        if n_symbols != n * n {
            return Err((PstbcStatus::InvalidArgument, format!("expected {} symbols, got {n_symbols}", n * n)));
        }
        if out_len < n * n {
            return Err((PstbcStatus::BufferTooSmall, format!("need {} entries", n * n)));
        }
        let u: Vec<Complex64> = (0..n_symbols).map(|k| Complex64::new(*sym_re.add(k), *sym_im.add(k))).collect();
        let x = c.spec.encode_numeric(&u);
        for row in 0..n {
            for col in 0..n {
                *out_re.add(row * n + col) = x[(row, col)].re;
                *out_im.add(row * n + col) = x[(row, col)].im;
            }
        }
        Ok(())
    })
}

/// Minimum normalized |det|² over nonzero symbol vectors in the box of
/// the given radius. Exhaustive when the box is small enough, otherwise
/// weight ≤ 2 vectors plus `random_vectors` random ones.
///
/// # Safety
/// `code` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pstbc_code_min_det(
    code: *const PstbcCode,
    radius: i64,
    random_vectors: u64,
    seed: u64,
    out: *mut f64,
) -> PstbcStatus {
    guard(|| {
        let c = handle(code)?;
        let out = out.as_mut().ok_or_else(null)?;
        let r = match min_det_bruteforce(&c.spec, radius, DEFAULT_BUDGET) {
            Err(Error::BudgetExceeded { .. }) => min_det_sampled(&c.spec, radius, random_vectors, seed),
            other => other,
        }
        .map_err(lib_err)?;
        *out = ratio_f64(&r.min_det);
        Ok(())
    })
}

/// Text description of the code; free the string with `pstbc_string_free`.
///
/// # Safety
/// `code` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pstbc_code_to_text(code: *const PstbcCode, out: *mut *mut c_char) -> PstbcStatus {
    guard(|| {
        let c = handle(code)?;
        if out.is_null() {
            return Err(null());
        }
        let s = CString::new(to_text(&c.spec)).map_err(|_| (PstbcStatus::InvalidArgument, "NUL in text".into()))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// Release a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pstbc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Simulate one Eb/N0 point; reports codewords sent and codeword errors.
///
/// # Safety
/// `constellation` must be a NUL-terminated string; outputs valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pstbc_simulate_point(
    code: *const PstbcCode,
    constellation: *const c_char,
    ebn0_db: f64,
    seed: u64,
    max_codewords: u64,
    target_errors: u64,
    sent: *mut u64,
    errors: *mut u64,
) -> PstbcStatus {
    guard(|| {
        let c = handle(code)?;
        let constellation: Constellation = read_str(constellation)?.parse().map_err(lib_err)?;
        if sent.is_null() || errors.is_null() {
            return Err(null());
        }
        let cfg = SimConfig {
            spec: c.spec.clone(),
            constellation,
            ebn0_db: vec![ebn0_db],
            max_codewords,
            target_errors,
            seed,
        };
        let r = run_cer(&cfg).map_err(lib_err)?;
        *sent = r.points[0].sent;
        *errors = r.points[0].errors;
        Ok(())
    })
}
