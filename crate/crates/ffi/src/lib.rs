//! C ABI over `sft-escape`.
//!
//! Every function returns an [`SftStatus`]. On failure the message of the
//! last error on the calling thread is available from
//! [`sft_last_error_message`]. Strings returned through out-parameters are
//! owned by the caller and released with [`sft_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sft_escape::escape::{compare_escape, escape_rate, HoleSpec, Ordering};
use sft_escape::spectral::{topological_entropy, AvoidanceAutomaton, DEFAULT_ROOT_TOL};
use sft_escape::words::{WordMode, WordParser};
use sft_escape::Error;

/// Result codes. Domain errors keep the library's error names.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SftStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Panic = 3,
    InsufficientAlphabet = 10,
    BadCharacter = 11,
    EmptyWord = 12,
    InvalidAlphabet = 13,
    DuplicateWord = 14,
    NotReduced = 15,
    SingularCorrelationMatrix = 16,
    DivisionByZero = 17,
    NonExpandable = 18,
    CapExceeded = 19,
    NonConvergence = 20,
    NoRealRootFound = 21,
    EmptySubshift = 22,
    EmptySurvivorSet = 23,
    InvalidHole = 24,
    NotIrreducible = 25,
    NotAllowedWord = 26,
    InvalidArgument = 27,
}

impl From<&Error> for SftStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InsufficientAlphabet { .. } => SftStatus::InsufficientAlphabet,
            Error::BadCharacter(_) => SftStatus::BadCharacter,
            Error::EmptyWord => SftStatus::EmptyWord,
            Error::InvalidAlphabet(_) => SftStatus::InvalidAlphabet,
            Error::DuplicateWord(_) => SftStatus::DuplicateWord,
            Error::NotReduced(..) => SftStatus::NotReduced,
            Error::SingularCorrelationMatrix => SftStatus::SingularCorrelationMatrix,
            Error::DivisionByZero => SftStatus::DivisionByZero,
            Error::NonExpandable(_) => SftStatus::NonExpandable,
            Error::CapExceeded { .. } => SftStatus::CapExceeded,
            Error::NonConvergence(_) => SftStatus::NonConvergence,
            Error::NoRealRootFound(_) => SftStatus::NoRealRootFound,
            Error::EmptySubshift => SftStatus::EmptySubshift,
            Error::EmptySurvivorSet => SftStatus::EmptySurvivorSet,
            Error::InvalidHole(_) => SftStatus::InvalidHole,
            Error::NotIrreducible(_) => SftStatus::NotIrreducible,
            Error::NotAllowedWord(_) => SftStatus::NotAllowedWord,
            Error::InvalidArgument(_) => SftStatus::InvalidArgument,
        }
    }
}

/// Word spelling of the string arguments.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SftWordMode {
    /// Letters named by first occurrence, `a`, `b`, ...
    Abstract = 0,
    /// Symbols written as `0-9a-z`.
    Digit = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SftOrdering {
    /// `ρ1 < ρ2`.
    Less = -1,
    Tie = 0,
    /// `ρ1 > ρ2`.
    Greater = 1,
}

/// Escape rate with its bracket and the two Perron roots.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SftEscapeRate {
    pub rho: f64,
    pub rho_lo: f64,
    pub rho_hi: f64,
    pub lambda: f64,
    pub theta: f64,
}

/// Opaque hole: alphabet size, base forbidden words and hole words.
pub struct SftHole {
    spec: HoleSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: SftStatus, msg: String) -> SftStatus {
    set_error(msg);
    status
}

fn domain(e: Error) -> SftStatus {
    let s = SftStatus::from(&e);
    fail(s, e.to_string())
}

/// Runs `f`, converting panics into [`SftStatus::Panic`].
fn guard(f: impl FnOnce() -> SftStatus) -> SftStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(SftStatus::Panic, format!("Panic: {msg}"))
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, SftStatus> {
    if p.is_null() {
        return Err(fail(SftStatus::NullPointer, format!("NullPointer: {what}")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(SftStatus::InvalidUtf8, format!("InvalidUtf8: {what}")))
}

/// Null pointers read as the empty list.
unsafe fn opt_text<'a>(p: *const c_char, what: &str) -> Result<&'a str, SftStatus> {
    if p.is_null() {
        Ok("")
    } else {
        text(p, what)
    }
}

/// `mode` is an [`SftWordMode`] value.
fn parser(mode: u32) -> Result<WordParser, SftStatus> {
    match mode {
        m if m == SftWordMode::Abstract as u32 => Ok(WordParser::new(WordMode::Abstract)),
        m if m == SftWordMode::Digit as u32 => Ok(WordParser::new(WordMode::Digit)),
        m => Err(fail(SftStatus::InvalidArgument, format!("InvalidArgument: word mode {m}"))),
    }
}

fn out_string(s: String, out: *mut *mut c_char) -> SftStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            SftStatus::Ok
        }
        Err(_) => fail(SftStatus::Panic, "Panic: interior nul in output".into()),
    }
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! dom {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return domain(e),
        }
    };
}

macro_rules! nonnull {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(SftStatus::NullPointer, format!("NullPointer: {}", stringify!($p)));
        })+
    };
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn sft_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn sft_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code, or null for an unknown code.
#[no_mangle]
pub extern "C" fn sft_status_name(status: i32) -> *const c_char {
    match status_from_code(status) {
        Some(s) => status_name(s).as_ptr() as *const c_char,
        None => ptr::null(),
    }
}

const ALL_STATUSES: [SftStatus; 22] = [
    SftStatus::Ok,
    SftStatus::NullPointer,
    SftStatus::InvalidUtf8,
    SftStatus::Panic,
    SftStatus::InsufficientAlphabet,
    SftStatus::BadCharacter,
    SftStatus::EmptyWord,
    SftStatus::InvalidAlphabet,
    SftStatus::DuplicateWord,
    SftStatus::NotReduced,
    SftStatus::SingularCorrelationMatrix,
    SftStatus::DivisionByZero,
    SftStatus::NonExpandable,
    SftStatus::CapExceeded,
    SftStatus::NonConvergence,
    SftStatus::NoRealRootFound,
    SftStatus::EmptySubshift,
    SftStatus::EmptySurvivorSet,
    SftStatus::InvalidHole,
    SftStatus::NotIrreducible,
    SftStatus::NotAllowedWord,
    SftStatus::InvalidArgument,
];

fn status_from_code(code: i32) -> Option<SftStatus> {
    ALL_STATUSES.iter().copied().find(|s| *s as i32 == code)
}

fn status_name(status: SftStatus) -> &'static str {
    match status {
        SftStatus::Ok => "Ok\0",
        SftStatus::NullPointer => "NullPointer\0",
        SftStatus::InvalidUtf8 => "InvalidUtf8\0",
        SftStatus::Panic => "Panic\0",
        SftStatus::InsufficientAlphabet => "InsufficientAlphabet\0",
        SftStatus::BadCharacter => "BadCharacter\0",
        SftStatus::EmptyWord => "EmptyWord\0",
        SftStatus::InvalidAlphabet => "InvalidAlphabet\0",
        SftStatus::DuplicateWord => "DuplicateWord\0",
        SftStatus::NotReduced => "NotReduced\0",
        SftStatus::SingularCorrelationMatrix => "SingularCorrelationMatrix\0",
        SftStatus::DivisionByZero => "DivisionByZero\0",
        SftStatus::NonExpandable => "NonExpandable\0",
        SftStatus::CapExceeded => "CapExceeded\0",
        SftStatus::NonConvergence => "NonConvergence\0",
        SftStatus::NoRealRootFound => "NoRealRootFound\0",
        SftStatus::EmptySubshift => "EmptySubshift\0",
        SftStatus::EmptySurvivorSet => "EmptySurvivorSet\0",
        SftStatus::InvalidHole => "InvalidHole\0",
        SftStatus::NotIrreducible => "NotIrreducible\0",
        SftStatus::NotAllowedWord => "NotAllowedWord\0",
        SftStatus::InvalidArgument => "InvalidArgument\0",
    }
}

/// Frees a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sft_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a hole from comma-separated word lists. `base` may be null for
/// the full shift. Base and hole share one letter map in abstract mode.
#[no_mangle]
pub unsafe extern "C" fn sft_hole_new(
    q: u32,
    hole: *const c_char,
    base: *const c_char,
    mode: u32,
    out: *mut *mut SftHole,
) -> SftStatus {
    guard(|| {
        nonnull!(out);
        let hole = tri!(text(hole, "hole"));
        let base = tri!(opt_text(base, "base"));
        let mut p = tri!(parser(mode));
        let f = dom!(p.parse_list(base, q));
        let g = dom!(p.parse_list(hole, q));
        let spec = dom!(HoleSpec::new(q, g, f));
        *out = Box::into_raw(Box::new(SftHole { spec }));
        SftStatus::Ok
    })
}

/// Releases a hole. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sft_hole_free(h: *mut SftHole) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

#[no_mangle]
pub unsafe extern "C" fn sft_escape_rate(h: *const SftHole, out: *mut SftEscapeRate) -> SftStatus {
    guard(|| {
        nonnull!(h, out);
        let r = dom!(escape_rate(&(*h).spec));
        *out = SftEscapeRate {
            rho: r.rho,
            rho_lo: r.rho_lo,
            rho_hi: r.rho_hi,
            lambda: r.lambda.value,
            theta: r.theta.value,
        };
        SftStatus::Ok
    })
}

/// Full escape-rate result as JSON, including the exact brackets.
#[no_mangle]
pub unsafe extern "C" fn sft_escape_rate_json(h: *const SftHole, out: *mut *mut c_char) -> SftStatus {
    guard(|| {
        nonnull!(h, out);
        let r = dom!(escape_rate(&(*h).spec));
        out_string(serde_json::to_string(&r).expect("serializable"), out)
    })
}

/// Certified comparison of `ρ(h1)` with `ρ(h2)`. Both holes must live on the
/// same alphabet and base.
#[no_mangle]
pub unsafe extern "C" fn sft_compare(
    h1: *const SftHole,
    h2: *const SftHole,
    ordering: *mut SftOrdering,
    certified: *mut bool,
) -> SftStatus {
    guard(|| {
        nonnull!(h1, h2, ordering, certified);
        let c = dom!(compare_escape(&(*h1).spec, &(*h2).spec));
        *ordering = match c.ordering {
            Ordering::Less => SftOrdering::Less,
            Ordering::Tie => SftOrdering::Tie,
            Ordering::Greater => SftOrdering::Greater,
        };
        *certified = c.certified;
        SftStatus::Ok
    })
}

/// Number of words of length `n` allowed in the survivor subshift, as a
/// decimal string.
#[no_mangle]
pub unsafe extern "C" fn sft_count_words(h: *const SftHole, n: usize, out: *mut *mut c_char) -> SftStatus {
    guard(|| {
        nonnull!(h, out);
        let spec = &(*h).spec;
        let a = dom!(AvoidanceAutomaton::new(&spec.survivor_words(), spec.q()));
        out_string(a.count_words(n).to_string(), out)
    })
}

/// Topological entropy of the subshift avoiding `forbidden` (null for the
/// full shift).
#[no_mangle]
pub unsafe extern "C" fn sft_entropy(
    q: u32,
    forbidden: *const c_char,
    mode: u32,
    out: *mut f64,
) -> SftStatus {
    guard(|| {
        nonnull!(out);
        let f = tri!(opt_text(forbidden, "forbidden"));
        let ws = dom!(tri!(parser(mode)).parse_list(f, q));
        let e = dom!(topological_entropy(&ws, q, DEFAULT_ROOT_TOL));
        *out = e.value;
        SftStatus::Ok
    })
}
