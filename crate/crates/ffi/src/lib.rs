//! C interface to the catamorphism-removal transformation.
//!
//! A successful [`cata_chc_transform`] hands out an opaque [`CataChcOutput`]
//! owned by the caller and released with [`cata_chc_output_free`]. Strings
//! returned through out-parameters are released with [`cata_chc_string_free`].
//! Every function returns a [`CataChcStatus`]; on failure the message is
//! available from [`cata_chc_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use catachc::backend::{clauses_for_mode, script_for_mode, Mode};
use catachc::error::Error;
use catachc::frontend::print_clauses;
use catachc::pipeline::{run, PipelineOptions, Run};
use catachc::transform::TransformOptions;

/// Status codes. Zero is success; the others name the failing stage.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CataChcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    Sort = 4,
    Query = 5,
    Schema = 6,
    NotFunctional = 7,
    Abstraction = 8,
    Internal = 9,
    Config = 10,
    Budget = 11,
    Io = 12,
    Panic = 13,
}

/// Clause set selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CataChcMode {
    /// The source program with coverage predicates.
    Src = 0,
    /// Transformed clauses paired with their erasures.
    Wwo = 1,
    /// Transformed clauses over ADT-carrying predicates.
    W = 2,
    /// ADT-free overapproximation.
    Wo = 3,
}

impl From<CataChcMode> for Mode {
    fn from(m: CataChcMode) -> Mode {
        match m {
            CataChcMode::Src => Mode::Src,
            CataChcMode::Wwo => Mode::Wwo,
            CataChcMode::W => Mode::W,
            CataChcMode::Wo => Mode::Wo,
        }
    }
}

/// Opaque transformation result.
pub struct CataChcOutput {
    run: Run,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CataChcStatus {
    match e {
        Error::Syntax { .. } => CataChcStatus::Syntax,
        Error::Sort(_) => CataChcStatus::Sort,
        Error::Query(_) => CataChcStatus::Query,
        Error::Schema { .. } => CataChcStatus::Schema,
        Error::NotFunctional { .. } => CataChcStatus::NotFunctional,
        Error::Abstraction(_) => CataChcStatus::Abstraction,
        Error::Internal(_) | Error::Unify(_) => CataChcStatus::Internal,
        Error::Config(_) => CataChcStatus::Config,
        Error::Budget(_) => CataChcStatus::Budget,
        Error::Io(_) => CataChcStatus::Io,
    }
}

/// Runs `f`, recording the message of any failure or panic.
fn guarded(f: impl FnOnce() -> Result<(), (CataChcStatus, String)>) -> CataChcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CataChcStatus::Ok
        }
        Ok(Err((s, m))) => {
            set_error(&m);
            s
        }
        Err(_) => {
            set_error("panic inside catachc");
            CataChcStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (CataChcStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, (CataChcStatus, String)> {
    if p.is_null() {
        return Err((CataChcStatus::NullArgument, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (CataChcStatus::InvalidUtf8, e.to_string()))
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), (CataChcStatus, String)> {
    let c = CString::new(s).map_err(|_| (CataChcStatus::Internal, "output contains a nul byte".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Transforms the program in the nul-terminated `source`. On success stores a
/// new handle in `*out`; on failure leaves `*out` null.
///
/// # Safety
/// `source` must be null or a valid nul-terminated string, and `out` must be
/// null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn cata_chc_transform(source: *const c_char, readable_names: bool, out: *mut *mut CataChcOutput) -> CataChcStatus {
    guarded(|| {
        if out.is_null() {
            return Err((CataChcStatus::NullArgument, "null output pointer".into()));
        }
        *out = ptr::null_mut();
        let text = read_str(source)?;
        let opts = PipelineOptions { transform: TransformOptions { readable_names }, ..Default::default() };
        let r = run(text, &opts).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CataChcOutput { run: r }));
        Ok(())
    })
}

/// Stores the SMT-LIB HORN script of one clause set in `*out`.
///
/// # Safety
/// `h` must be null or a live handle; `out` must be null or valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cata_chc_output_smtlib(h: *const CataChcOutput, mode: CataChcMode, out: *mut *mut c_char) -> CataChcStatus {
    guarded(|| {
        if h.is_null() || out.is_null() {
            return Err((CataChcStatus::NullArgument, "null argument".into()));
        }
        let r = &(*h).run;
        let s = script_for_mode(mode.into(), &r.prepared.program, &r.output).map_err(lib_err)?;
        give_string(s.text, out)
    })
}

/// Stores one clause set in the surface syntax in `*out`.
///
/// # Safety
/// As for [`cata_chc_output_smtlib`].
#[no_mangle]
pub unsafe extern "C" fn cata_chc_output_chc(h: *const CataChcOutput, mode: CataChcMode, out: *mut *mut c_char) -> CataChcStatus {
    guarded(|| {
        if h.is_null() || out.is_null() {
            return Err((CataChcStatus::NullArgument, "null argument".into()));
        }
        let r = &(*h).run;
        let cls = clauses_for_mode(mode.into(), &r.prepared.program, &r.output);
        give_string(print_clauses(&cls, &r.output.program), out)
    })
}

/// Number of new-predicate definitions, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cata_chc_output_definition_count(h: *const CataChcOutput) -> usize {
    if h.is_null() {
        0
    } else {
        (*h).run.output.defs.len()
    }
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cata_chc_output_free(h: *mut CataChcOutput) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cata_chc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last call on this thread; empty after a success. Valid until
/// the next call on the same thread.
#[no_mangle]
pub extern "C" fn cata_chc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cata_chc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
