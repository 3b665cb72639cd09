//! C ABI over `bh-lab`.
//!
//! Polynomials cross the boundary as opaque `BhPolynomial` handles. Every
//! fallible call returns a [`BhStatus`] and writes its result through an out
//! pointer; on failure a message is kept per thread and can be read with
//! [`bh_last_error_message`]. Strings returned to the caller must be released
//! with [`bh_string_free`], handles with [`bh_poly_free`].

use bh_lab::inequalities::{paper_constant, verify_main_theorem, Effort, Verdict};
use bh_lab::norms::{bh_exponent, certified_sup, sup_norm_lower, weighted_coeff_norm, SearchOptions};
use bh_lab::poly::{
    random_polynomial, AnyPolynomial, CoefficientKind, EnsembleSpec, HomogeneousPolynomial, Polynomial, Support,
};
use bh_lab::Error;
use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    NotHomogeneous = 4,
    CostCap = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BhCoefficientKind {
    Steinhaus = 0,
    Rademacher = 1,
    ComplexGaussian = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BhVerdict {
    Verified = 0,
    SatisfiedNotCertified = 1,
    ViolatedEstimates = 2,
    Degenerate = 3,
    Inconclusive = 4,
}

impl From<Verdict> for BhVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Verified => BhVerdict::Verified,
            Verdict::SatisfiedNotCertified => BhVerdict::SatisfiedNotCertified,
            Verdict::ViolatedEstimates => BhVerdict::ViolatedEstimates,
            Verdict::Degenerate => BhVerdict::Degenerate,
            Verdict::Inconclusive => BhVerdict::Inconclusive,
        }
    }
}

/// Opaque polynomial handle.
pub struct BhPolynomial(AnyPolynomial);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(BhStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::CostCap { .. } => BhStatus::CostCap,
            Error::Format(_) => BhStatus::ParseError,
            _ => BhStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(BhStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, turning errors and panics into a status plus the thread's
/// error message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            BhStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            BhStatus::Internal
        }
    }
}

unsafe fn poly_ref<'a>(p: *const BhPolynomial) -> Result<&'a AnyPolynomial, Failure> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| null("polynomial"))
}

fn homogeneous(p: &AnyPolynomial) -> Result<&HomogeneousPolynomial, Failure> {
    match p {
        AnyPolynomial::Homogeneous(h) => Ok(h),
        AnyPolynomial::Analytic(_) => Err(Failure(
            BhStatus::NotHomogeneous,
            "operation needs a homogeneous polynomial".into(),
        )),
    }
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(BhStatus::Internal, "string contains NUL".into()))
}

/// Message of the last failed call on this thread, or NULL. Owned by the
/// library; valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn bh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a polynomial JSON document (fields `N`, optional `m`, `terms`).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bh_poly_from_json(json: *const c_char, out: *mut *mut BhPolynomial) -> BhStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(BhStatus::ParseError, format!("json is not UTF-8: {e}")))?;
        let p = AnyPolynomial::from_json(text)?;
        write(out, Box::into_raw(Box::new(BhPolynomial(p))))
    })
}

/// Random `m`-homogeneous polynomial in `n` variables with full support.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bh_poly_random(
    kind: BhCoefficientKind,
    n: usize,
    m: u32,
    seed: u64,
    out: *mut *mut BhPolynomial,
) -> BhStatus {
    guard(|| {
        let kind = match kind {
            BhCoefficientKind::Steinhaus => CoefficientKind::Steinhaus,
            BhCoefficientKind::Rademacher => CoefficientKind::Rademacher,
            BhCoefficientKind::ComplexGaussian => CoefficientKind::ComplexGaussian,
        };
        let p = random_polynomial(&EnsembleSpec {
            kind,
            support: Support::Full,
            seed,
            n,
            m,
        })?;
        write(
            out,
            Box::into_raw(Box::new(BhPolynomial(AnyPolynomial::Homogeneous(p)))),
        )
    })
}

/// Releases a handle; NULL is ignored.
///
/// # Safety
/// `p` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bh_poly_free(p: *mut BhPolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Serializes to JSON; release the result with [`bh_string_free`].
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bh_poly_to_json(p: *const BhPolynomial, out: *mut *mut c_char) -> BhStatus {
    guard(|| {
        let s = into_c_string(poly_ref(p)?.to_json())?;
        write(out, s)
    })
}

/// Releases a string returned by this library; NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of variables.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bh_poly_dimension(p: *const BhPolynomial, out: *mut usize) -> BhStatus {
    guard(|| {
        let n = match poly_ref(p)? {
            AnyPolynomial::Homogeneous(h) => h.dimension(),
            AnyPolynomial::Analytic(f) => f.dimension(),
        };
        write(out, n)
    })
}

/// `P(z)` for `z_r = re[r] + i·im[r]`, `len` equal to the dimension.
///
/// # Safety
/// `re` and `im` must point to `len` doubles; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn bh_poly_evaluate(
    p: *const BhPolynomial,
    re: *const f64,
    im: *const f64,
    len: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> BhStatus {
    guard(|| {
        let p = poly_ref(p)?;
        if len > 0 && (re.is_null() || im.is_null()) {
            return Err(null("point"));
        }
        let z: Vec<Complex64> = (0..len).map(|r| Complex64::new(*re.add(r), *im.add(r))).collect();
        let v = match p {
            AnyPolynomial::Homogeneous(h) => h.evaluate(&z)?,
            AnyPolynomial::Analytic(f) => f.evaluate(&z)?,
        };
        write(out_re, v.re)?;
        write(out_im, v.im)
    })
}

/// Weighted coefficient norm `(Σ (|c_α|/√(α+1))^{2m/(m+1)})^{(m+1)/2m}`.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bh_weighted_coeff_norm(p: *const BhPolynomial, out: *mut f64) -> BhStatus {
    guard(|| {
        let h = homogeneous(poly_ref(p)?)?;
        write(out, weighted_coeff_norm(h, bh_exponent(h.degree()), true).value)
    })
}

/// Lower bound on `sup_{D^N} |P|` by multistart phase search.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bh_sup_norm_lower(
    p: *const BhPolynomial,
    restarts: usize,
    seed: u64,
    out: *mut f64,
) -> BhStatus {
    guard(|| {
        let opts = SearchOptions {
            restarts: restarts.max(1),
            seed,
            ..SearchOptions::default()
        };
        let v = match poly_ref(p)? {
            AnyPolynomial::Homogeneous(h) => sup_norm_lower(h, &opts).value,
            AnyPolynomial::Analytic(f) => sup_norm_lower(f, &opts).value,
        };
        write(out, v)
    })
}

/// Certified upper bound on `sup_{D^N} |P|` within relative `slack` of the
/// grid maximum; fails with `CostCap` past `cost_cap` evaluations.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bh_sup_norm_upper(
    p: *const BhPolynomial,
    slack: f64,
    cost_cap: u64,
    out: *mut f64,
) -> BhStatus {
    guard(|| {
        let h = homogeneous(poly_ref(p)?)?;
        write(out, certified_sup(h, slack, cost_cap)?.value)
    })
}

/// `m^{(m−1)/2m} (1 − 1/(m−1))^{m−1}`; `degenerate` (nullable) is set for `m = 2`.
///
/// # Safety
/// `out` must be writable; `degenerate` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn bh_paper_constant(m: u32, out: *mut f64, degenerate: *mut bool) -> BhStatus {
    guard(|| {
        let c = paper_constant(m)?;
        if !degenerate.is_null() {
            degenerate.write(c.degenerate);
        }
        write(out, c.value)
    })
}

/// Checks the weighted inequality for `p` with default effort and `seed`.
/// `report_json` (nullable) receives the full report; free it with
/// [`bh_string_free`].
///
/// # Safety
/// `p` must be a live handle; `verdict` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bh_verify_main_theorem(
    p: *const BhPolynomial,
    seed: u64,
    verdict: *mut BhVerdict,
    report_json: *mut *mut c_char,
) -> BhStatus {
    guard(|| {
        let h = homogeneous(poly_ref(p)?)?;
        if verdict.is_null() {
            return Err(null("verdict"));
        }
        let effort = Effort {
            seed,
            ..Effort::default()
        };
        let report = verify_main_theorem(h, None, &effort)?;
        if !report_json.is_null() {
            let text = serde_json::to_string(&report).map_err(|e| Failure(BhStatus::Internal, e.to_string()))?;
            report_json.write(into_c_string(text)?);
        }
        write(verdict, report.verdict.into())
    })
}
