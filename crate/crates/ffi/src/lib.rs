//! C ABI over liftlab.
//!
//! Every object crosses the boundary as an opaque handle created by a `*_build_*`,
//! `*_from_json` or `*_random` call and released by the matching `*_free`. Functions
//! return a [`LiftlabStatus`]; on failure [`liftlab_last_error`] holds a message for the
//! calling thread. Strings returned through `*mut *mut c_char` are owned by the caller
//! and released with [`liftlab_string_free`]. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use liftlab::chain::{homology, ChainComplex};
use liftlab::css::{build_code_b, build_code_c, logical_count, CssCode, Family};
use liftlab::io;
use liftlab::lift::search::sparse_search;
use liftlab::lift::{lift, LiftMode, SearchConfig, Strategy};
use liftlab::local::{integer_lift_local, random_sited_instance, verify_local_lift, SitedCssCode};
use liftlab::topo::{build_rp3, build_telescope, ResolutionProfile};
use liftlab::Error;
use serde_json::{json, Value};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftlabStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A parameter was out of range.
    InvalidArgument = 3,
    /// A JSON argument did not parse.
    Parse = 4,
    /// The input parsed but violates a structural invariant.
    InvalidInput = 5,
    /// The instance exceeds a size cap.
    CapExceeded = 6,
    /// The computation could not complete on a valid input.
    Failed = 7,
    /// An internal panic was caught.
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftlabCodeKind {
    /// Qubits on the 2-cells of the 4-dimensional complex.
    B = 0,
    /// Code B plus the coarse-slice RP² cycle as a Z-stabilizer.
    C = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftlabStrategy {
    /// Closed-form correction; budget and seed are ignored.
    Explicit = 0,
    Exhaustive = 1,
    Greedy = 2,
    /// Requires a seed.
    Anneal = 3,
}

/// Exact chain complex over Z or Z2.
pub struct LiftlabComplex(ChainComplex);

/// CSS code given by `dz` and `dq` over Z2.
pub struct LiftlabCode(CssCode);

/// CSS code with a site for every qubit.
pub struct LiftlabSited(SitedCssCode);

struct Fail {
    status: LiftlabStatus,
    msg: String,
}

impl Fail {
    fn new(status: LiftlabStatus, msg: impl Into<String>) -> Self {
        Fail {
            status,
            msg: msg.into(),
        }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        use LiftlabStatus as S;
        let status = match &e {
            Error::Json(_) => S::Parse,
            Error::InvalidParameters(_) => S::InvalidArgument,
            Error::CapExceeded { .. } => S::CapExceeded,
            Error::DimensionMismatch { .. }
            | Error::RingMismatch { .. }
            | Error::WrongRing { .. }
            | Error::UnsupportedModulus(_)
            | Error::OddEntry { .. }
            | Error::InvalidMatrix(_)
            | Error::InvalidComplex(_)
            | Error::InvalidChainMap(_)
            | Error::InvalidCode(_)
            | Error::Missing(_) => S::InvalidInput,
            _ => S::Failed,
        };
        Fail::new(status, e.to_string())
    }
}

type Res<T> = Result<T, Fail>;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Res<()>) -> LiftlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LiftlabStatus::Ok
        }
        Ok(Err(fail)) => {
            set_last_error(&fail.msg);
            fail.status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            LiftlabStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Res<&'a str> {
    if p.is_null() {
        return Err(Fail::new(
            LiftlabStatus::NullPointer,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::new(LiftlabStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Res<&'a T> {
    p.as_ref()
        .ok_or_else(|| Fail::new(LiftlabStatus::NullPointer, format!("{what} is null")))
}

fn check_out<T>(p: *mut T, what: &str) -> Res<()> {
    if p.is_null() {
        Err(Fail::new(
            LiftlabStatus::NullPointer,
            format!("{what} is null"),
        ))
    } else {
        Ok(())
    }
}

unsafe fn put_handle<T>(out: *mut *mut T, v: T) {
    *out = Box::into_raw(Box::new(v));
}

/// Writes `v` as canonical JSON when `out` is non-null.
unsafe fn put_json(out: *mut *mut c_char, v: &Value) -> Res<()> {
    if !out.is_null() {
        let s = CString::new(io::to_canonical_string(v))
            .map_err(|_| Fail::new(LiftlabStatus::Failed, "JSON contains a NUL byte"))?;
        *out = s.into_raw();
    }
    Ok(())
}

unsafe fn parse_json(p: *const c_char) -> Res<Value> {
    let s = text(p, "json")?;
    serde_json::from_str(s).map_err(|e| Error::from(e).into())
}

unsafe fn profile(ks: *const usize, len: usize) -> Res<ResolutionProfile> {
    if ks.is_null() && len > 0 {
        return Err(Fail::new(LiftlabStatus::NullPointer, "profile is null"));
    }
    let ks = if len == 0 {
        Vec::new()
    } else {
        std::slice::from_raw_parts(ks, len).to_vec()
    };
    Ok(ResolutionProfile::new(ks)?)
}

unsafe fn free_handle<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn liftlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null after a successful call.
/// The pointer stays valid until the next liftlab call on the same thread.
#[no_mangle]
pub extern "C" fn liftlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn liftlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The quotient model of RP³ with polygon half-size `k >= 2`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn liftlab_complex_build_rp3(
    k: usize,
    out: *mut *mut LiftlabComplex,
) -> LiftlabStatus {
    guard(|| {
        check_out(out, "out")?;
        put_handle(out, LiftlabComplex(build_rp3(k)?));
        Ok(())
    })
}

/// Telescope along the profile `ks[0..len]`, coarse end first.
///
/// # Safety
/// `ks` must point to `len` readable values and `out` to storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn liftlab_complex_build_telescope(
    ks: *const usize,
    len: usize,
    out: *mut *mut LiftlabComplex,
) -> LiftlabStatus {
    guard(|| {
        check_out(out, "out")?;
        let p = profile(ks, len)?;
        put_handle(out, LiftlabComplex(build_telescope(&p)?));
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` must point to storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn liftlab_complex_from_json(
    json: *const c_char,
    out: *mut *mut LiftlabComplex,
) -> LiftlabStatus {
    guard(|| {
        check_out(out, "out")?;
        let c = io::complex_from_json(&parse_json(json)?)?;
        put_handle(out, LiftlabComplex(c));
        Ok(())
    })
}

/// # Safety
/// `c` must be a live complex handle and `out` must point to storage for one string.
#[no_mangle]
pub unsafe extern "C" fn liftlab_complex_to_json(
    c: *const LiftlabComplex,
    out: *mut *mut c_char,
) -> LiftlabStatus {
    guard(|| {
        let c = handle(c, "complex")?;
        check_out(out, "out")?;
        put_json(out, &io::complex_to_json(&c.0))
    })
}

/// Writes the Z2 Betti numbers, lowest degree first, into `betti[0..cap]` and their
/// count into `len`. Fails with `LIFTLAB_STATUS_INVALID_ARGUMENT` when `cap` is too small.
///
/// # Safety
/// `c` must be a live handle, `betti` must have room for `cap` values and `len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn liftlab_complex_betti_z2(
    c: *const LiftlabComplex,
    betti: *mut usize,
    cap: usize,
    len: *mut usize,
) -> LiftlabStatus {
    guard(|| {
        let c = handle(c, "complex")?;
        check_out(len, "len")?;
        let b = homology(&c.0)?.betti_z2();
        *len = b.len();
        if b.len() > cap {
            return Err(Fail::new(
                LiftlabStatus::InvalidArgument,
                format!("need room for {} values, got {cap}", b.len()),
            ));
        }
        check_out(betti, "betti")?;
        ptr::copy_nonoverlapping(b.as_ptr(), betti, b.len());
        Ok(())
    })
}

/// Full homology report (Z2 and, for integer complexes, Z with torsion) as JSON.
///
/// # Safety
/// `c` must be a live complex handle and `out` must point to storage for one string.
#[no_mangle]
pub unsafe extern "C" fn liftlab_complex_homology_json(
    c: *const LiftlabComplex,
    out: *mut *mut c_char,
) -> LiftlabStatus {
    guard(|| {
        let c = handle(c, "complex")?;
        check_out(out, "out")?;
        let h = homology(&c.0)?;
        let mut v = serde_json::to_value(&h).map_err(Error::from)?;
        v["torsion_free"] = json!(h.is_torsion_free());
        put_json(out, &v)
    })
}

/// # Safety
/// `c` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn liftlab_complex_free(c: *mut LiftlabComplex) {
    free_handle(c);
}

fn build_code(kind: LiftlabCodeKind, family: &Family) -> Res<CssCode> {
    Ok(match kind {
        LiftlabCodeKind::B => build_code_b(family)?,
        LiftlabCodeKind::C => build_code_c(family)?,
    })
}

/// Code B or C on `RP³(k) ⊗ I(n)`.
///
/// # Safety
/// `out` must point to storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn liftlab_code_build_product(
    kind: LiftlabCodeKind,
    k: usize,
    n: usize,
    out: *mut *mut LiftlabCode,
) -> LiftlabStatus {
    guard(|| {
        check_out(out, "out")?;
        put_handle(
            out,
            LiftlabCode(build_code(kind, &Family::Product { k, n })?),
        );
        Ok(())
    })
}

/// Code B or C on the telescope along `ks[0..len]`.
///
/// # Safety
/// `ks` must point to `len` readable values and `out` to storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn liftlab_code_build_telescope(
    kind: LiftlabCodeKind,
    ks: *const usize,
    len: usize,
    out: *mut *mut LiftlabCode,
) -> LiftlabStatus {
    guard(|| {
        check_out(out, "out")?;
        let family = Family::Telescope(profile(ks, len)?);
        put_handle(out, LiftlabCode(build_code(kind, &family)?));
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` must point to storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn liftlab_code_from_json(
    json: *const c_char,
    out: *mut *mut LiftlabCode,
) -> LiftlabStatus {
    guard(|| {
        check_out(out, "out")?;
        let code = io::code_from_json(&parse_json(json)?)?;
        put_handle(out, LiftlabCode(code));
        Ok(())
    })
}

/// # Safety
/// `code` must be a live handle and `out` must point to storage for one string.
#[no_mangle]
pub unsafe extern "C" fn liftlab_code_to_json(
    code: *const LiftlabCode,
    out: *mut *mut c_char,
) -> LiftlabStatus {
    guard(|| {
        let code = handle(code, "code")?;
        check_out(out, "out")?;
        put_json(out, &io::code_to_json(&code.0))
    })
}

/// Stabilizer and qubit counts and the number of logical qubits. Any output may be null.
///
/// # Safety
/// `code` must be a live handle; non-null outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn liftlab_code_params(
    code: *const LiftlabCode,
    n_z: *mut usize,
    n_q: *mut usize,
    n_x: *mut usize,
    logical: *mut usize,
) -> LiftlabStatus {
    guard(|| {
        let code = &handle(code, "code")?.0;
        let k = logical_count(code)?;
        for (p, v) in [
            (n_z, code.n_z()),
            (n_q, code.n_q()),
            (n_x, code.n_x()),
            (logical, k),
        ] {
            if !p.is_null() {
                *p = v;
            }
        }
        Ok(())
    })
}

/// Lifts the code to Z4 cellularly and corrects the lift. `verified` reports whether the
/// corrected lift squares to zero; `report`, when non-null, receives the JSON report.
/// `seed` is used only when `has_seed` is true.
///
/// # Safety
/// `code` must be a live handle, `verified` must be valid for writes and `report` must be
/// null or point to storage for one string.
#[no_mangle]
pub unsafe extern "C" fn liftlab_code_solve(
    code: *const LiftlabCode,
    strategy: LiftlabStrategy,
    budget: u64,
    seed: u64,
    has_seed: bool,
    verified: *mut bool,
    report: *mut *mut c_char,
) -> LiftlabStatus {
    guard(|| {
        let code = &handle(code, "code")?.0;
        check_out(verified, "verified")?;
        let l = lift(code, LiftMode::Cellular)?;
        let seed = has_seed.then_some(seed);
        let s = match strategy {
            LiftlabStrategy::Explicit => None,
            LiftlabStrategy::Exhaustive => Some(Strategy::Exhaustive),
            LiftlabStrategy::Greedy => Some(Strategy::Greedy),
            LiftlabStrategy::Anneal => Some(Strategy::Anneal),
        };
        let v = match s {
            None => io::explicit_report_to_json(code, &l)?,
            Some(s) => io::lift_report_to_json(&sparse_search(
                code,
                &l,
                &SearchConfig::new(s, budget, seed),
            )?),
        };
        *verified = v["verified"] == json!(true);
        put_json(report, &v)
    })
}

/// # Safety
/// `code` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn liftlab_code_free(code: *mut LiftlabCode) {
    free_handle(code);
}

/// Random sited code on a line of `sites` sites with `qubits_per_site` qubits each.
///
/// # Safety
/// `out` must point to storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn liftlab_sited_random(
    sites: usize,
    qubits_per_site: usize,
    density: f64,
    seed: u64,
    out: *mut *mut LiftlabSited,
) -> LiftlabStatus {
    guard(|| {
        check_out(out, "out")?;
        let s = random_sited_instance(sites, qubits_per_site, density, seed)?;
        put_handle(out, LiftlabSited(s));
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` must point to storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn liftlab_sited_from_json(
    json: *const c_char,
    out: *mut *mut LiftlabSited,
) -> LiftlabStatus {
    guard(|| {
        check_out(out, "out")?;
        let s = io::sited_from_json(&parse_json(json)?)?;
        put_handle(out, LiftlabSited(s));
        Ok(())
    })
}

/// # Safety
/// `s` must be a live handle and `out` must point to storage for one string.
#[no_mangle]
pub unsafe extern "C" fn liftlab_sited_to_json(
    s: *const LiftlabSited,
    out: *mut *mut c_char,
) -> LiftlabStatus {
    guard(|| {
        let s = handle(s, "sited code")?;
        check_out(out, "out")?;
        put_json(out, &io::sited_to_json(&s.0))
    })
}

/// Disentangles, lifts locally to Z and verifies. A lift that cannot be built or fails
/// verification is reported through `passed` and the report, not through the status.
///
/// # Safety
/// `s` must be a live handle, `passed` must be valid for writes and `report` must be null
/// or point to storage for one string.
#[no_mangle]
pub unsafe extern "C" fn liftlab_sited_local_lift(
    s: *const LiftlabSited,
    passed: *mut bool,
    report: *mut *mut c_char,
) -> LiftlabStatus {
    guard(|| {
        let s = &handle(s, "sited code")?.0;
        check_out(passed, "passed")?;
        let v = match integer_lift_local(s) {
            Ok(l) => {
                let r = verify_local_lift(s, &l.dz, &l.dq);
                json!({
                    "circuit": io::circuit_to_json(&l.circuit),
                    "dz": io::matrix_to_json(&l.dz),
                    "dq": io::matrix_to_json(&l.dq),
                    "passed": r.passed(),
                    "report": r,
                })
            }
            Err(e @ (Error::Disentangle { .. } | Error::LocalLift(_))) => {
                json!({"passed": false, "error": e.to_string()})
            }
            Err(e) => return Err(e.into()),
        };
        *passed = v["passed"] == json!(true);
        put_json(report, &v)
    })
}

/// # Safety
/// `s` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn liftlab_sited_free(s: *mut LiftlabSited) {
    free_handle(s);
}
