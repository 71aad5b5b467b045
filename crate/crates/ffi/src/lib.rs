//! C ABI over the equilib library.
//!
//! Every entry point returns an [`EquilibStatus`]. On failure the message is
//! kept per thread and can be read with [`equilib_last_error_message`].
//! Objects are handed out as opaque pointers and must be released with the
//! matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::{c_char, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use equilib::cli::{execute, Command, RunConfig};
use equilib::electrochem::{nernst_potential, CellSpec};
use equilib::gibbs::ChemicalModel;
use equilib::path::{scaled_grad, trace_maximal_reaction, StopReason, TraceOptions, TracedPath};
use equilib::surface::Curve;
use equilib::Error;

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Invalid configuration or I/O failure.
    Config = 3,
    /// The requested state or point lies outside the model's domain.
    Domain = 4,
    /// A numerical routine failed.
    Numerical = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
    /// Index past the end of a sequence.
    OutOfRange = 7,
}

/// Why a traced path ended.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibStopReason {
    RegionExit = 0,
    DomainBoundary = 1,
    StepLimit = 2,
    Converged = 3,
}

/// Chemical model built from a TOML run configuration.
pub struct EquilibModel {
    chem: ChemicalModel,
}

/// Maximal-reaction path.
pub struct EquilibPath {
    path: TracedPath,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> EquilibStatus {
    match e.exit_code() {
        2 => EquilibStatus::Config,
        3 => EquilibStatus::Domain,
        _ => EquilibStatus::Numerical,
    }
}

/// Runs `f`, recording any error or panic.
fn guard<F>(f: F) -> EquilibStatus
where
    F: FnOnce() -> Result<(), (EquilibStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EquilibStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside equilib".into());
            EquilibStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (EquilibStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (EquilibStatus, String) {
    (EquilibStatus::NullArgument, format!("{name} is null"))
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, name: &str) -> Result<&'a str, (EquilibStatus, String)> {
    if s.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (EquilibStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

/// # Safety
/// `p` must be null or point to a live object of type `T`.
unsafe fn borrow<'a, T>(p: *const T, name: &str) -> Result<&'a T, (EquilibStatus, String)> {
    p.as_ref().ok_or_else(|| null(name))
}

/// # Safety
/// `p` must be null or valid for a write of `T`.
unsafe fn write<T>(p: *mut T, v: T, name: &str) -> Result<(), (EquilibStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    p.write(v);
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn equilib_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a model from TOML configuration text.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn equilib_model_from_toml(toml: *const c_char, out: *mut *mut EquilibModel) -> EquilibStatus {
    guard(|| {
        let text = read_str(toml, "toml")?;
        let cfg = RunConfig::from_toml(text).map_err(lib_err)?;
        let system = cfg.build_system().map_err(lib_err)?;
        let chem = cfg.build_chemical(&system).map_err(lib_err)?;
        write(out, Box::into_raw(Box::new(EquilibModel { chem })), "out")
    })
}

/// # Safety
/// `model` must be null or a pointer from [`equilib_model_from_toml`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn equilib_model_free(model: *mut EquilibModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Activity quotient at (T [K], P [Pa]).
///
/// # Safety
/// `model` must be live and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn equilib_quotient(model: *const EquilibModel, t: f64, p: f64, out: *mut f64) -> EquilibStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        write(out, m.chem.quotient(t, p).map_err(lib_err)?, "out")
    })
}

/// Slope dG/dxi at (T, P), J/mol.
///
/// # Safety
/// `model` must be live and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn equilib_dg_dxi(model: *const EquilibModel, t: f64, p: f64, out: *mut f64) -> EquilibStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        write(out, m.chem.dg_dxi(t, p), "out")
    })
}

/// Aggregate error term at (T, P), J/mol.
///
/// # Safety
/// `model` must be live and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn equilib_epsilon(model: *const EquilibModel, t: f64, p: f64, out: *mut f64) -> EquilibStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        write(out, m.chem.errors.epsilon(t, p).map_err(lib_err)?, "out")
    })
}

/// Gradient of Q in scaled units, `(T_ref dQ/dT, P° dQ/dP)`.
///
/// # Safety
/// `model` must be live; `d_t` and `d_p` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn equilib_scaled_grad(
    model: *const EquilibModel,
    t: f64,
    p: f64,
    d_t: *mut f64,
    d_p: *mut f64,
) -> EquilibStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        let (a, b) = scaled_grad(&m.chem, t, p).map_err(lib_err)?;
        write(d_t, a, "d_t")?;
        write(d_p, b, "d_p")
    })
}

/// Nernst offset `E - E°` in volts for a cell transferring `n_electrons`.
///
/// # Safety
/// `model` must be live and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn equilib_nernst_potential(
    model: *const EquilibModel,
    n_electrons: u32,
    t: f64,
    p: f64,
    out: *mut f64,
) -> EquilibStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        let cell = CellSpec::new(n_electrons, m.chem.clone(), Curve::constant(0.0)).map_err(lib_err)?;
        write(out, nernst_potential(&cell, t, p).map_err(lib_err)?, "out")
    })
}

/// Traces a maximal-reaction path from (T, P).
///
/// # Safety
/// `model` must be live and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn equilib_trace_maximal(
    model: *const EquilibModel,
    t: f64,
    p: f64,
    step: f64,
    max_steps: usize,
    direction: f64,
    out: *mut *mut EquilibPath,
) -> EquilibStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        let opts = TraceOptions { step, max_steps, direction };
        let path = trace_maximal_reaction(&m.chem, (t, p), &opts).map_err(lib_err)?;
        write(out, Box::into_raw(Box::new(EquilibPath { path })), "out")
    })
}

/// Number of points on `path`, or 0 for a null handle.
///
/// # Safety
/// `path` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn equilib_path_len(path: *const EquilibPath) -> usize {
    path.as_ref().map_or(0, |p| p.path.points.len())
}

/// Point `index` of `path`: arc length, temperature, pressure, quotient.
///
/// # Safety
/// `path` must be live; every output pointer valid for a write.
#[no_mangle]
pub unsafe extern "C" fn equilib_path_point(
    path: *const EquilibPath,
    index: usize,
    s: *mut f64,
    t: *mut f64,
    p: *mut f64,
    q: *mut f64,
) -> EquilibStatus {
    guard(|| {
        let path = borrow(path, "path")?;
        let pt = path.path.points.get(index).ok_or_else(|| {
            (EquilibStatus::OutOfRange, format!("index {index} past {} points", path.path.points.len()))
        })?;
        write(s, pt.t, "s")?;
        write(t, pt.temperature, "t")?;
        write(p, pt.pressure, "p")?;
        write(q, pt.quotient, "q")
    })
}

/// Why the path ended.
///
/// # Safety
/// `path` must be live and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn equilib_path_stop_reason(path: *const EquilibPath, out: *mut EquilibStopReason) -> EquilibStatus {
    guard(|| {
        let path = borrow(path, "path")?;
        let r = match path.path.stop_reason {
            StopReason::RegionExit => EquilibStopReason::RegionExit,
            StopReason::DomainBoundary => EquilibStopReason::DomainBoundary,
            StopReason::StepLimit => EquilibStopReason::StepLimit,
            StopReason::Converged => EquilibStopReason::Converged,
        };
        write(out, r, "out")
    })
}

/// # Safety
/// `path` must be null or a pointer from [`equilib_trace_maximal`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn equilib_path_free(path: *mut EquilibPath) {
    if !path.is_null() {
        drop(Box::from_raw(path));
    }
}

/// Runs a command on TOML configuration text and returns the CSV output.
/// `command` may be null to use the config's own `command` key. Relative
/// file references resolve against the current directory. Free the result
/// with [`equilib_string_free`].
///
/// # Safety
/// `toml` must be a NUL-terminated string, `command` null or one, and
/// `out_csv` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn equilib_run(
    toml: *const c_char,
    command: *const c_char,
    out_csv: *mut *mut c_char,
) -> EquilibStatus {
    guard(|| {
        let text = read_str(toml, "toml")?;
        let command = if command.is_null() {
            None
        } else {
            Some(Command::parse(read_str(command, "command")?).map_err(lib_err)?)
        };
        let cfg = RunConfig::from_toml(text).map_err(lib_err)?;
        let csv = execute(&cfg, command, Path::new("."), None).map_err(lib_err)?;
        let c = CString::new(csv).map_err(|_| (EquilibStatus::Numerical, "output contains NUL".to_string()))?;
        write(out_csv, c.into_raw(), "out_csv")
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn equilib_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Version string; static, never freed.
#[no_mangle]
pub extern "C" fn equilib_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Status code as an int, for bindings without enum support.
#[no_mangle]
pub extern "C" fn equilib_status_code(status: EquilibStatus) -> c_int {
    status as c_int
}
