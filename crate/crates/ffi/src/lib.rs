//! C ABI over `specfluct`.
//!
//! Every fallible function returns an [`SfStatus`] and writes results through
//! out-pointers. On failure the message is kept per thread and can be read
//! with [`sf_last_error_message`]. Polynomials and distributions are opaque
//! handles released with their `_free` functions; strings returned by the
//! library are released with [`sf_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use specfluct::cli::write_csv;
use specfluct::paths::{path_count, MultiIndex};
use specfluct::polyspace::decompose;
use specfluct::predictor::predict;
use specfluct::simulator::{
    exact_expected_trace, run_experiment, trace_poly_with, ExperimentConfig, TraceEngine,
};
use specfluct::{Distribution, Error, Polynomial, Sector};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Capacity = 4,
    Overflow = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfSector {
    Q = 0,
    E = 1,
    Qperp = 2,
    Mixed = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SfPrediction {
    pub sector: SfSector,
    pub alpha: f64,
    pub critical_alpha: f64,
    pub rate_exponent: f64,
    pub sigma_sq: f64,
    pub supercritical: bool,
}

/// Opaque polynomial handle.
pub struct SfPolynomial(Polynomial);

/// Opaque distribution handle.
pub struct SfDistribution(Distribution);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (SfStatus, String);

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn from_error(e: Error) -> Failure {
    let status = match e {
        Error::Capacity { .. } => SfStatus::Capacity,
        Error::Overflow(_) => SfStatus::Overflow,
        Error::Parse(_) => SfStatus::Parse,
        _ => SfStatus::InvalidArgument,
    };
    (status, e.to_string())
}

fn null(what: &str) -> Failure {
    (SfStatus::NullPointer, format!("{what} is null"))
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> SfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SfStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SfStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (SfStatus::Parse, format!("{what} is not valid UTF-8")))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn sf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub unsafe extern "C" fn sf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Polynomial with coefficients `a_0, ..., a_{len-1}`.
#[no_mangle]
pub unsafe extern "C" fn sf_polynomial_new(
    coeffs: *const f64,
    len: usize,
    out: *mut *mut SfPolynomial,
) -> SfStatus {
    guard(|| {
        let c = slice_arg(coeffs, len, "coeffs")?;
        if c.iter().any(|x| !x.is_finite()) {
            return Err((
                SfStatus::InvalidArgument,
                "coefficients must be finite".into(),
            ));
        }
        let p = Box::new(SfPolynomial(Polynomial::new(c.to_vec())));
        write_out(out, Box::into_raw(p), "out")
    })
}

/// Polynomial from a coefficient list such as `"0,-6,0,1"`.
#[no_mangle]
pub unsafe extern "C" fn sf_polynomial_parse(
    spec: *const c_char,
    out: *mut *mut SfPolynomial,
) -> SfStatus {
    guard(|| {
        let p: Polynomial = str_arg(spec, "spec")?.parse().map_err(from_error)?;
        write_out(out, Box::into_raw(Box::new(SfPolynomial(p))), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn sf_polynomial_free(p: *mut SfPolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Value of the polynomial at `x`.
#[no_mangle]
pub unsafe extern "C" fn sf_polynomial_evaluate(
    p: *const SfPolynomial,
    x: f64,
    out: *mut f64,
) -> SfStatus {
    guard(|| {
        let p = handle(p, "polynomial")?;
        write_out(out, p.0.evaluate(x), "out")
    })
}

/// Distribution from `"rademacher:C"`, `"uniform:C"` or `"atoms:v@p,..."`.
#[no_mangle]
pub unsafe extern "C" fn sf_distribution_parse(
    spec: *const c_char,
    out: *mut *mut SfDistribution,
) -> SfStatus {
    guard(|| {
        let d: Distribution = str_arg(spec, "spec")?.parse().map_err(from_error)?;
        write_out(out, Box::into_raw(Box::new(SfDistribution(d))), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn sf_distribution_atoms(
    values: *const f64,
    probabilities: *const f64,
    len: usize,
    out: *mut *mut SfDistribution,
) -> SfStatus {
    guard(|| {
        let v = slice_arg(values, len, "values")?.to_vec();
        let p = slice_arg(probabilities, len, "probabilities")?.to_vec();
        let d = Distribution::atoms(v, p).map_err(from_error)?;
        write_out(out, Box::into_raw(Box::new(SfDistribution(d))), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn sf_distribution_free(d: *mut SfDistribution) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Raw moments `E[X^1], ..., E[X^6]` into `out[0..6]`.
#[no_mangle]
pub unsafe extern "C" fn sf_distribution_moments(
    d: *const SfDistribution,
    out: *mut f64,
) -> SfStatus {
    guard(|| {
        let d = handle(d, "distribution")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let m = d.0.moments();
        let vals = [m.m1, m.m2, m.m3, m.m4, m.m5, m.m6];
        std::slice::from_raw_parts_mut(out, 6).copy_from_slice(&vals);
        Ok(())
    })
}

/// `p^k(beta)` for `beta = sum_i mults[i] delta^{levels[i]}`.
///
/// Fails with `SF_STATUS_OVERFLOW` if the count does not fit in 64 bits.
#[no_mangle]
pub unsafe extern "C" fn sf_path_count(
    k: usize,
    levels: *const i64,
    mults: *const u32,
    len: usize,
    out: *mut u64,
) -> SfStatus {
    guard(|| {
        let levels = slice_arg(levels, len, "levels")?;
        let mults = slice_arg(mults, len, "mults")?;
        let beta = MultiIndex::from_pairs(levels.iter().copied().zip(mults.iter().copied()));
        let count = path_count(k, &beta).map_err(from_error)?;
        let count = u64::try_from(count)
            .map_err(|_| (SfStatus::Overflow, format!("p^{k}({beta}) exceeds 64 bits")))?;
        write_out(out, count, "out")
    })
}

/// Splits `p` into `Q`, `Q^perp` and even parts, each written as `m + 1`
/// coefficients. `*len` receives `m + 1`; with `capacity < m + 1` nothing
/// else is written and `SF_STATUS_BUFFER_TOO_SMALL` is returned.
#[no_mangle]
pub unsafe extern "C" fn sf_decompose(
    p: *const SfPolynomial,
    q_part: *mut f64,
    qperp_part: *mut f64,
    even_part: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> SfStatus {
    guard(|| {
        let p = handle(p, "polynomial")?;
        let d = decompose(&p.0).map_err(from_error)?;
        let n = d.m + 1;
        write_out(len, n, "len")?;
        if capacity < n {
            return Err((
                SfStatus::BufferTooSmall,
                format!("need {n} coefficients, capacity {capacity}"),
            ));
        }
        for (dst, src) in [
            (q_part, &d.q_part),
            (qperp_part, &d.qperp_part),
            (even_part, &d.even_part),
        ] {
            if dst.is_null() {
                return Err(null("output buffer"));
            }
            std::slice::from_raw_parts_mut(dst, n).copy_from_slice(src.coeffs());
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn sf_predict(
    p: *const SfPolynomial,
    alpha: f64,
    dist: *const SfDistribution,
    out: *mut SfPrediction,
) -> SfStatus {
    guard(|| {
        let p = handle(p, "polynomial")?;
        let d = handle(dist, "distribution")?;
        let r = predict(&p.0, alpha, &d.0.moments()).map_err(from_error)?;
        let sector = match r.sector {
            Sector::Q => SfSector::Q,
            Sector::E => SfSector::E,
            Sector::Qperp => SfSector::Qperp,
            Sector::Mixed => SfSector::Mixed,
        };
        write_out(
            out,
            SfPrediction {
                sector,
                alpha: r.alpha,
                critical_alpha: r.critical_alpha,
                rate_exponent: r.rate_exponent,
                sigma_sq: r.sigma_sq,
                supercritical: r.supercritical,
            },
            "out",
        )
    })
}

/// `Tr P(H)` for the diagonal `potential[0..n]`.
#[no_mangle]
pub unsafe extern "C" fn sf_trace_poly(
    p: *const SfPolynomial,
    potential: *const f64,
    n: usize,
    out: *mut f64,
) -> SfStatus {
    guard(|| {
        let p = handle(p, "polynomial")?;
        let v = slice_arg(potential, n, "potential")?;
        let t = trace_poly_with(v, &p.0, TraceEngine::Banded).map_err(from_error)?;
        write_out(out, t, "out")
    })
}

/// `E[Tr P(H)]` at size `n` and decay exponent `alpha`.
#[no_mangle]
pub unsafe extern "C" fn sf_exact_expected_trace(
    p: *const SfPolynomial,
    alpha: f64,
    n: u64,
    dist: *const SfDistribution,
    out: *mut f64,
) -> SfStatus {
    guard(|| {
        let p = handle(p, "polynomial")?;
        let d = handle(dist, "distribution")?;
        let e = exact_expected_trace(&p.0, alpha, n, &d.0).map_err(from_error)?;
        write_out(out, e, "out")
    })
}

/// Runs the experiment described by a JSON config and returns the CSV
/// table in `*csv_out`, to be released with `sf_string_free`.
#[no_mangle]
pub unsafe extern "C" fn sf_run_experiment_csv(
    config_json: *const c_char,
    csv_out: *mut *mut c_char,
) -> SfStatus {
    guard(|| {
        let text = str_arg(config_json, "config_json")?;
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| (SfStatus::Parse, format!("config: {e}")))?;
        let result = run_experiment(&cfg).map_err(from_error)?;
        let mut buf = Vec::new();
        write_csv(&result, &mut buf).map_err(from_error)?;
        let s = CString::new(buf)
            .map_err(|_| (SfStatus::Panic, "CSV contained a NUL byte".to_string()))?;
        write_out(csv_out, s.into_raw(), "csv_out")
    })
}
