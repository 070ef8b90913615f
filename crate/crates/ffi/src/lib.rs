//! C ABI over `cheeger-core`.
//!
//! Objects cross the boundary as opaque handles created by `cheeger_*` constructors
//! and released by the matching `*_free`. Every fallible call returns a
//! [`CheegerStatus`]; on failure the message is available from
//! [`cheeger_last_error_message`] on the same thread.
//!
//! Strings handed out by the library are NUL-terminated UTF-8 and must be
//! released with [`cheeger_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use cheeger_core::cantor::build_omega_eps;
use cheeger_core::measure::measure;
use cheeger_core::porous::{build_omega0, default_sequences, validate_constraints, IndexPair};
use cheeger_core::raster::{self, RasterField, RasterOptions};
use cheeger_core::solver::{self, CheegerConfig};
use cheeger_core::{DomainSpec, Error, Point2};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheegerStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    InvalidInput = 3,
    DepthLimit = 4,
    InvalidParameters = 5,
    Unvalidated = 6,
    CertificationFailure = 7,
    DegenerateThreshold = 8,
    MemoryLimit = 9,
    Config = 10,
    Io = 11,
    Json = 12,
    /// The library panicked; the handle arguments should be considered unusable.
    Panic = 13,
}

impl From<&Error> for CheegerStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidInput(_) => Self::InvalidInput,
            Error::DepthLimit { .. } => Self::DepthLimit,
            Error::InvalidParameters { .. } => Self::InvalidParameters,
            Error::Unvalidated(_) => Self::Unvalidated,
            Error::CertificationFailure(_) => Self::CertificationFailure,
            Error::DegenerateThreshold(_) => Self::DegenerateThreshold,
            Error::MemoryLimit { .. } => Self::MemoryLimit,
            Error::Config(_) => Self::Config,
            Error::Io(_) => Self::Io,
            Error::Json(_) => Self::Json,
        }
    }
}

/// Domain description, `Omega_eps`, `Omega_0` or a disk with explicit holes.
pub struct CheegerDomain(DomainSpec);

/// Coverage raster of a domain or a relaxed indicator.
pub struct CheegerField(RasterField);

/// Output of the grid Cheeger solver.
pub struct CheegerSolution(solver::CheegerResult);

/// Outward-rounded enclosures of the measures of a domain.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CheegerMeasures {
    pub perimeter_lo: f64,
    pub perimeter_hi: f64,
    pub area_lo: f64,
    pub area_hi: f64,
    /// `H1` of the topological boundary.
    pub boundary_lo: f64,
    pub boundary_hi: f64,
    /// Nonzero when the `delta` fields are set (hole sequences only).
    pub has_delta: u8,
    pub delta_lo: f64,
    pub delta_hi: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CheegerFieldInfo {
    pub nx: usize,
    pub ny: usize,
    pub pixel: f64,
    /// Lower-left corner of pixel `(0, 0)`.
    pub origin_x: f64,
    pub origin_y: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CheegerSolutionInfo {
    pub h_estimate: f64,
    pub perimeter: f64,
    pub area: f64,
    pub threshold: f64,
    pub converged: u8,
    pub outer_steps: usize,
    pub grid: usize,
    pub seconds: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), (CheegerStatus, String)>) -> CheegerStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            CheegerStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside cheeger-core".into());
            CheegerStatus::Panic
        }
    }
}

type FfiResult<T> = Result<T, (CheegerStatus, String)>;

fn core<T>(r: cheeger_core::Result<T>) -> FfiResult<T> {
    r.map_err(|e| (CheegerStatus::from(&e), e.to_string()))
}

fn null(what: &str) -> (CheegerStatus, String) {
    (CheegerStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> FfiResult<&'a mut T> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (CheegerStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn cheeger_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cheeger_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cheeger_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The unit disk with no obstacles.
///
/// # Safety
/// `out_domain` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn cheeger_domain_plain_disk(out_domain: *mut *mut CheegerDomain) -> CheegerStatus {
    guard(|| {
        *out(out_domain, "out_domain")? = boxed(CheegerDomain(DomainSpec::plain_disk()));
        Ok(())
    })
}

/// Unit disk minus the bumps over the fat Cantor set of parameter `eps`, `depth` levels deep.
///
/// # Safety
/// `out_domain` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn cheeger_domain_build_cantor(
    eps: f64,
    depth: usize,
    out_domain: *mut *mut CheegerDomain,
) -> CheegerStatus {
    guard(|| {
        let slot = out(out_domain, "out_domain")?;
        *slot = boxed(CheegerDomain(core(build_omega_eps(eps, depth))?));
        Ok(())
    })
}

/// Unit disk minus the default hole sequence, truncated after block `j1 = depth`.
/// Fails with `InvalidParameters` when the sequence violates an admissibility condition.
///
/// # Safety
/// `out_domain` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn cheeger_domain_build_porous(
    eps1: f64,
    safety: f64,
    depth: u32,
    out_domain: *mut *mut CheegerDomain,
) -> CheegerStatus {
    guard(|| {
        let slot = out(out_domain, "out_domain")?;
        let seq = core(default_sequences(eps1, safety))?;
        let rep = core(validate_constraints(&seq, depth))?;
        if let Some(c) = rep.checks.iter().find(|c| !c.passed) {
            let e = Error::InvalidParameters { condition: c.condition, detail: c.detail.clone() };
            return core(Err(e));
        }
        *slot = boxed(CheegerDomain(core(build_omega0(&seq, depth, IndexPair::first()))?));
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string and `out_domain` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cheeger_domain_from_json(
    json: *const c_char,
    out_domain: *mut *mut CheegerDomain,
) -> CheegerStatus {
    guard(|| {
        let slot = out(out_domain, "out_domain")?;
        let s = text(json, "json")?;
        *slot = boxed(CheegerDomain(core(DomainSpec::from_json(s))?));
        Ok(())
    })
}

/// Serializes the domain; free the string with [`cheeger_string_free`].
///
/// # Safety
/// `domain` must be a live handle and `out_json` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cheeger_domain_to_json(
    domain: *const CheegerDomain,
    out_json: *mut *mut c_char,
) -> CheegerStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        let d = deref(domain, "domain")?;
        *slot = owned_string(core(d.0.to_json())?);
        Ok(())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string and `out_domain` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cheeger_domain_load(
    path: *const c_char,
    out_domain: *mut *mut CheegerDomain,
) -> CheegerStatus {
    guard(|| {
        let slot = out(out_domain, "out_domain")?;
        let p = text(path, "path")?;
        *slot = boxed(CheegerDomain(core(DomainSpec::load(Path::new(p)))?));
        Ok(())
    })
}

/// # Safety
/// `domain` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cheeger_domain_save(domain: *const CheegerDomain, path: *const c_char) -> CheegerStatus {
    guard(|| {
        let d = deref(domain, "domain")?;
        let p = text(path, "path")?;
        core(d.0.save(Path::new(p)))
    })
}

/// Number of bumps or holes; 0 for a null handle.
///
/// # Safety
/// `domain` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cheeger_domain_obstacle_count(domain: *const CheegerDomain) -> usize {
    domain.as_ref().map_or(0, |d| d.0.obstacle_count())
}

/// Writes 1 to `out_inside` when `(x, y)` lies in the open domain, else 0.
///
/// # Safety
/// `domain` must be a live handle and `out_inside` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cheeger_domain_contains(
    domain: *const CheegerDomain,
    x: f64,
    y: f64,
    out_inside: *mut u8,
) -> CheegerStatus {
    guard(|| {
        let slot = out(out_inside, "out_inside")?;
        let d = deref(domain, "domain")?;
        *slot = u8::from(d.0.contains(Point2::new(x, y)));
        Ok(())
    })
}

/// # Safety
/// `domain` must be a live handle and `out_measures` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cheeger_domain_measure(
    domain: *const CheegerDomain,
    out_measures: *mut CheegerMeasures,
) -> CheegerStatus {
    guard(|| {
        let slot = out(out_measures, "out_measures")?;
        let d = deref(domain, "domain")?;
        let m = core(measure(&d.0))?;
        let delta = m.delta.unwrap_or(cheeger_core::IntervalValue::exact(0.0));
        *slot = CheegerMeasures {
            perimeter_lo: m.perimeter.lo,
            perimeter_hi: m.perimeter.hi,
            area_lo: m.area.lo,
            area_hi: m.area.hi,
            boundary_lo: m.boundary_h1.lo,
            boundary_hi: m.boundary_h1.hi,
            has_delta: u8::from(m.delta.is_some()),
            delta_lo: delta.lo,
            delta_hi: delta.hi,
        };
        Ok(())
    })
}

/// # Safety
/// `domain` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn cheeger_domain_free(domain: *mut CheegerDomain) {
    if !domain.is_null() {
        drop(Box::from_raw(domain));
    }
}

/// Coverage raster of `domain` on an `n x n` grid framing the outer disk.
/// `subsamples = 0` selects the default.
///
/// # Safety
/// `domain` must be a live handle and `out_field` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cheeger_rasterize(
    domain: *const CheegerDomain,
    n: usize,
    subsamples: usize,
    out_field: *mut *mut CheegerField,
) -> CheegerStatus {
    guard(|| {
        let slot = out(out_field, "out_field")?;
        let d = deref(domain, "domain")?;
        let mut opts = RasterOptions::default();
        if subsamples > 0 {
            opts.subsamples = subsamples;
        }
        *slot = boxed(CheegerField(core(raster::rasterize_opts(&d.0, n, &opts))?));
        Ok(())
    })
}

/// # Safety
/// `field` must be a live handle and `out_info` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cheeger_field_info(
    field: *const CheegerField,
    out_info: *mut CheegerFieldInfo,
) -> CheegerStatus {
    guard(|| {
        let slot = out(out_info, "out_info")?;
        let f = &deref(field, "field")?.0;
        *slot = CheegerFieldInfo { nx: f.nx, ny: f.ny, pixel: f.pixel, origin_x: f.origin.x, origin_y: f.origin.y };
        Ok(())
    })
}

/// Copies the `nx * ny` values, row-major from the bottom row, into `buf`.
/// Fails with `InvalidInput` when `len` is too small.
///
/// # Safety
/// `field` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn cheeger_field_copy_values(
    field: *const CheegerField,
    buf: *mut f64,
    len: usize,
) -> CheegerStatus {
    guard(|| {
        let f = &deref(field, "field")?.0;
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < f.values.len() {
            return Err((CheegerStatus::InvalidInput, format!("buffer holds {len} values, need {}", f.values.len())));
        }
        ptr::copy_nonoverlapping(f.values.as_ptr(), buf, f.values.len());
        Ok(())
    })
}

/// Perimeter and area of the superlevel set `field >= threshold`.
///
/// # Safety
/// `field` must be a live handle; the outputs must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cheeger_field_measure_set(
    field: *const CheegerField,
    threshold: f64,
    out_perimeter: *mut f64,
    out_area: *mut f64,
) -> CheegerStatus {
    guard(|| {
        let p = out(out_perimeter, "out_perimeter")?;
        let a = out(out_area, "out_area")?;
        let f = &deref(field, "field")?.0;
        if !(threshold > 0.0 && threshold < 1.0) {
            return core(Err(Error::DegenerateThreshold(format!("threshold {threshold} outside (0, 1)"))));
        }
        *p = raster::grid_perimeter(f, threshold);
        *a = raster::grid_area(f, threshold);
        Ok(())
    })
}

/// # Safety
/// `field` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn cheeger_field_free(field: *mut CheegerField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Runs the solver on a domain raster. `config_json` is null for the defaults, or a
/// JSON object with any of the solver configuration keys.
///
/// # Safety
/// `field` must be a live handle, `config_json` null or NUL-terminated, and
/// `out_solution` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cheeger_solve(
    field: *const CheegerField,
    config_json: *const c_char,
    out_solution: *mut *mut CheegerSolution,
) -> CheegerStatus {
    guard(|| {
        let slot = out(out_solution, "out_solution")?;
        let f = &deref(field, "field")?.0;
        let cfg: CheegerConfig = if config_json.is_null() {
            CheegerConfig::default()
        } else {
            core(serde_json::from_str(text(config_json, "config_json")?).map_err(Error::from))?
        };
        *slot = boxed(CheegerSolution(core(solver::solve_cheeger(f, &cfg))?));
        Ok(())
    })
}

/// # Safety
/// `solution` must be a live handle and `out_info` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cheeger_solution_info(
    solution: *const CheegerSolution,
    out_info: *mut CheegerSolutionInfo,
) -> CheegerStatus {
    guard(|| {
        let slot = out(out_info, "out_info")?;
        let r = &deref(solution, "solution")?.0;
        *slot = CheegerSolutionInfo {
            h_estimate: r.h_estimate,
            perimeter: r.perimeter,
            area: r.area,
            threshold: r.threshold,
            converged: u8::from(r.converged),
            outer_steps: r.outer_steps,
            grid: r.indicator.nx,
            seconds: r.seconds,
        };
        Ok(())
    })
}

/// Result summary JSON, including the per-level history. `domain_field` may be
/// null; when given, the summary carries the minimality gap against it.
///
/// # Safety
/// `solution` must be a live handle, `domain_field` null or live, `out_json` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cheeger_solution_to_json(
    solution: *const CheegerSolution,
    domain_field: *const CheegerField,
    out_json: *mut *mut c_char,
) -> CheegerStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        let r = &deref(solution, "solution")?.0;
        let gap = match domain_field.as_ref() {
            Some(f) => Some(core(solver::minimality_gap(r, &f.0))?),
            None => None,
        };
        let s = core(serde_json::to_string_pretty(&r.summary(gap)).map_err(Error::from))?;
        *slot = owned_string(s);
        Ok(())
    })
}

/// New field handle holding a copy of the relaxed indicator.
///
/// # Safety
/// `solution` must be a live handle and `out_field` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cheeger_solution_indicator(
    solution: *const CheegerSolution,
    out_field: *mut *mut CheegerField,
) -> CheegerStatus {
    guard(|| {
        let slot = out(out_field, "out_field")?;
        let r = &deref(solution, "solution")?.0;
        *slot = boxed(CheegerField(r.indicator.clone()));
        Ok(())
    })
}

/// # Safety
/// `solution` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn cheeger_solution_free(solution: *mut CheegerSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}
