//! C interface to `tempora`.
//!
//! Scenarios, bound results and realizations are opaque heap handles created by
//! `tempora_*` constructors and released with the matching `*_free` function.
//! Every fallible call returns a [`TemporaStatus`]; on failure the message is
//! available from [`tempora_last_error`] until the next failing call on the
//! same thread. Strings returned by the library are freed with
//! [`tempora_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use tempora::cli::{self, BoundOutcome, Method, SolveOptions};
use tempora::regions::{self, LgPoint};
use tempora::sdp::Backend;
use tempora::{catalog, classical, realize, Error, QuantumRealization, Scenario};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TemporaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidString = 2,
    InvalidInput = 3,
    Numerical = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TemporaMethod {
    Simplified = 0,
    Moments = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TemporaSolver {
    /// Interior point for small programs, ADMM otherwise.
    Auto = 0,
    Ipm = 1,
    Admm = 2,
}

pub struct TemporaScenario(Scenario);

pub struct TemporaBound {
    scenario: Scenario,
    outcome: BoundOutcome,
}

pub struct TemporaRealization(QuantumRealization);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Null(&'static str),
    Utf8,
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TemporaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TemporaStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer passed as {what}"));
            TemporaStatus::NullPointer
        }
        Ok(Err(Failure::Utf8)) => {
            set_error("string argument is not valid UTF-8".into());
            TemporaStatus::InvalidString
        }
        Ok(Err(Failure::Lib(e))) => {
            let status = if cli::exit_code(&e) == cli::EXIT_INPUT {
                TemporaStatus::InvalidInput
            } else {
                TemporaStatus::Numerical
            };
            set_error(e.to_string());
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            TemporaStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8)
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior nuls removed").into_raw()
}

/// Message of the last failing call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tempora_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tempora_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Built-in scenario by name (`ncycle5`, `lg`, `yu-oh`, `gyni`, ...).
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tempora_scenario_builtin(
    name: *const c_char,
    out: *mut *mut TemporaScenario,
) -> TemporaStatus {
    guard(|| {
        let s = catalog::builtin(str_arg(name, "name")?)?;
        write_out(out, Box::into_raw(Box::new(TemporaScenario(s))), "out")
    })
}

/// `path` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tempora_scenario_load(
    path: *const c_char,
    out: *mut *mut TemporaScenario,
) -> TemporaStatus {
    guard(|| {
        let s = tempora::scenario::load_scenario(Path::new(str_arg(path, "path")?))?;
        write_out(out, Box::into_raw(Box::new(TemporaScenario(s))), "out")
    })
}

/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tempora_scenario_from_json(
    json: *const c_char,
    out: *mut *mut TemporaScenario,
) -> TemporaStatus {
    guard(|| {
        let s = Scenario::from_json(str_arg(json, "json")?)?;
        write_out(out, Box::into_raw(Box::new(TemporaScenario(s))), "out")
    })
}

/// `s` must be null or a handle from a `tempora_scenario_*` constructor, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tempora_scenario_free(s: *mut TemporaScenario) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of settings, or 0 for a null handle.
/// `s` must be null or a live scenario handle.
#[no_mangle]
pub unsafe extern "C" fn tempora_scenario_num_settings(s: *const TemporaScenario) -> usize {
    s.as_ref().map_or(0, |s| s.0.num_settings())
}

/// Scenario as JSON in the file format accepted by [`tempora_scenario_load`].
/// `s` must be a live scenario handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tempora_scenario_to_json(
    s: *const TemporaScenario,
    out: *mut *mut c_char,
) -> TemporaStatus {
    guard(|| {
        let json = ref_arg(s, "scenario")?.0.to_json()?;
        write_out(out, into_c_string(json), "out")
    })
}

/// Maximum over memoryless deterministic assignments.
/// `s` must be a live scenario handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tempora_nchv_bound(s: *const TemporaScenario, out: *mut f64) -> TemporaStatus {
    guard(|| {
        let v = classical::nchv_bound(&ref_arg(s, "scenario")?.0)?;
        write_out(out, v, "out")
    })
}

/// Maximum over deterministic strategies with memory.
/// `s` must be a live scenario handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tempora_algebraic_max(s: *const TemporaScenario, out: *mut f64) -> TemporaStatus {
    guard(|| {
        let v = classical::algebraic_max(&ref_arg(s, "scenario")?.0)?;
        write_out(out, v, "out")
    })
}

/// Closed-form quantum bound of the canonical N-cycle expression.
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tempora_ncycle_bound(n: usize, out: *mut f64) -> TemporaStatus {
    guard(|| write_out(out, catalog::ncycle_bound(n)?, "out"))
}

/// Solves the quantum program. A non-positive `tol` or zero `max_iter`
/// selects the solver default. A run that stops without converging still
/// produces a handle; check [`tempora_bound_converged`].
/// `s` must be a live scenario handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tempora_bound(
    s: *const TemporaScenario,
    method: TemporaMethod,
    solver: TemporaSolver,
    tol: f64,
    max_iter: usize,
    out: *mut *mut TemporaBound,
) -> TemporaStatus {
    guard(|| {
        let scenario = ref_arg(s, "scenario")?.0.clone();
        let method = match method {
            TemporaMethod::Simplified => Method::Simplified,
            TemporaMethod::Moments => Method::Moments,
        };
        let opts = SolveOptions {
            solver: match solver {
                TemporaSolver::Auto => None,
                TemporaSolver::Ipm => Some(Backend::Ipm),
                TemporaSolver::Admm => Some(Backend::Admm),
            },
            tol: (tol > 0.0).then_some(tol),
            max_iter: (max_iter > 0).then_some(max_iter),
        };
        let outcome = cli::run_bound(&scenario, method, opts)?;
        write_out(out, Box::into_raw(Box::new(TemporaBound { scenario, outcome })), "out")
    })
}

/// `b` must be null or a handle from [`tempora_bound`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tempora_bound_free(b: *mut TemporaBound) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Primal objective value, or NaN for a null handle.
/// `b` must be null or a live bound handle.
#[no_mangle]
pub unsafe extern "C" fn tempora_bound_primal(b: *const TemporaBound) -> f64 {
    b.as_ref().map_or(f64::NAN, |b| b.outcome.report.primal)
}

/// Certified upper bound, or NaN for a null handle.
/// `b` must be null or a live bound handle.
#[no_mangle]
pub unsafe extern "C" fn tempora_bound_certified(b: *const TemporaBound) -> f64 {
    b.as_ref().map_or(f64::NAN, |b| b.outcome.report.dual)
}

/// 1 if the solver met its tolerance, 0 otherwise (including a null handle).
/// `b` must be null or a live bound handle.
#[no_mangle]
pub unsafe extern "C" fn tempora_bound_converged(b: *const TemporaBound) -> c_int {
    b.as_ref().map_or(0, |b| c_int::from(b.outcome.report.converged))
}

/// `b` must be null or a live bound handle.
#[no_mangle]
pub unsafe extern "C" fn tempora_bound_iterations(b: *const TemporaBound) -> usize {
    b.as_ref().map_or(0, |b| b.outcome.report.iterations)
}

/// Full run report as JSON.
/// `b` must be a live bound handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tempora_bound_report_json(b: *const TemporaBound, out: *mut *mut c_char) -> TemporaStatus {
    guard(|| {
        let json = serde_json::to_string_pretty(&ref_arg(b, "bound")?.outcome.report)
            .map_err(Error::from)?;
        write_out(out, into_c_string(json), "out")
    })
}

/// Explicit realization of a solved program, validated before it is returned.
/// `b` must be a live bound handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tempora_realize(b: *const TemporaBound, out: *mut *mut TemporaRealization) -> TemporaStatus {
    guard(|| {
        let b = ref_arg(b, "bound")?;
        let r = cli::realize_outcome(&b.scenario, &b.outcome)?;
        r.validate(realize::VALIDATION_TOL)?;
        write_out(out, Box::into_raw(Box::new(TemporaRealization(r))), "out")
    })
}

/// `path` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tempora_realization_load(
    path: *const c_char,
    out: *mut *mut TemporaRealization,
) -> TemporaStatus {
    guard(|| {
        let r = QuantumRealization::load(Path::new(str_arg(path, "path")?))?;
        write_out(out, Box::into_raw(Box::new(TemporaRealization(r))), "out")
    })
}

/// `r` must be null or a realization handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tempora_realization_free(r: *mut TemporaRealization) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Hilbert-space dimension, or 0 for a null handle.
/// `r` must be null or a live realization handle.
#[no_mangle]
pub unsafe extern "C" fn tempora_realization_dimension(r: *const TemporaRealization) -> usize {
    r.as_ref().map_or(0, |r| r.0.dimension)
}

/// Objective of `s` evaluated by simulating sequential measurements on `r`.
/// `r` and `s` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tempora_realization_objective(
    r: *const TemporaRealization,
    s: *const TemporaScenario,
    out: *mut f64,
) -> TemporaStatus {
    guard(|| {
        let v = realize::simulate_objective(&ref_arg(r, "realization")?.0, &ref_arg(s, "scenario")?.0)?;
        write_out(out, v, "out")
    })
}

/// `r` must be a live realization handle; `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn tempora_realization_save(r: *const TemporaRealization, path: *const c_char) -> TemporaStatus {
    guard(|| {
        let r = ref_arg(r, "realization")?;
        r.0.save(Path::new(str_arg(path, "path")?))?;
        Ok(())
    })
}

/// 1 if `(q12, q13, q23)` is a quantum-achievable three-time point, 0 if not,
/// −1 for an invalid point.
#[no_mangle]
pub extern "C" fn tempora_lg_quantum_member(q12: f64, q13: f64, q23: f64, tol: f64) -> c_int {
    match LgPoint::new(q12, q13, q23) {
        Ok(p) => c_int::from(regions::quantum_member(&p, tol)),
        Err(e) => {
            set_error(e.to_string());
            -1
        }
    }
}

/// 1 if `(q12, q13, q23)` lies in the macrorealist tetrahedron, 0 if not,
/// −1 for an invalid point.
#[no_mangle]
pub extern "C" fn tempora_lg_classical_member(q12: f64, q13: f64, q23: f64, tol: f64) -> c_int {
    match LgPoint::new(q12, q13, q23) {
        Ok(p) => c_int::from(regions::classical_member(&p, tol)),
        Err(e) => {
            set_error(e.to_string());
            -1
        }
    }
}
