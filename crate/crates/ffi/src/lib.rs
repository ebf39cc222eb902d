//! C interface to `knottorsion`.
//!
//! Every fallible function returns a [`KtStatus`]. On failure a message is
//! kept per thread and can be read with [`kt_last_error_message`]. Handles
//! are opaque; each `*_new` has a matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use knottorsion::adjoint::{torsion_knot_irreducible, TorsionOptions};
use knottorsion::connected_sum::{
    factor_level_sets, vanishing_sum, ComponentDescriptor, ConnectedSumLevelSet, ConnectedSumSpec, FactorChoice,
};
use knottorsion::numeric::{ToleranceContext, ToleranceProfile, C64};
use knottorsion::presentation::{alexander_polynomial, two_bridge_presentation, TwoBridgeKnot};
use knottorsion::representation::solve_level_set;
use knottorsion::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KtStatus {
    Ok = 0,
    /// Bad knot, trace, tolerance or index.
    InvalidArgument = 1,
    /// The trace is degenerate or not generic; retry nearby.
    NonGeneric = 2,
    /// A numerical consistency check failed.
    Numerical = 3,
    /// The output buffer is too small or a value does not fit.
    OutOfRange = 4,
    NullPointer = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KtComplex {
    pub re: f64,
    pub im: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KtTolerance {
    pub rank_tol: f64,
    pub residual_tol: f64,
    pub root_tol: f64,
}

/// The two-bridge knot `K(p, q)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KtKnot {
    pub p: i64,
    pub q: i64,
}

/// One irreducible character on a level set. `torsion` is NaN when the
/// point is not regular.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KtPoint {
    pub u: KtComplex,
    pub m: KtComplex,
    pub trace_longitude: KtComplex,
    pub regular: bool,
    pub torsion: KtComplex,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KtVanishing {
    pub components: usize,
    /// Sum of reciprocal torsions over all components.
    pub sum: KtComplex,
    pub abs_sum: f64,
    /// `|sum| / abs_sum`.
    pub relative: f64,
    pub expansion_residual: f64,
}

pub struct KtLevelSet {
    points: Vec<KtPoint>,
}

pub struct KtConnectedSum {
    spec: ConnectedSumSpec,
    c: C64,
    tol: ToleranceContext,
    level_sets: ConnectedSumLevelSet,
    components: Vec<ComponentDescriptor>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(KtStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::DegenerateTrace { .. } | Error::NonGeneric { .. } | Error::Regularity(_) => KtStatus::NonGeneric,
            Error::Shape(_)
            | Error::Domain(_)
            | Error::InvalidTolerance(_)
            | Error::Syntax { .. }
            | Error::UnknownGenerator { .. }
            | Error::InvalidKnot { .. }
            | Error::WrongKind(_) => KtStatus::InvalidArgument,
            _ => KtStatus::Numerical,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: KtStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> KtStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => KtStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            KtStatus::Panic
        }
    }
}

fn out_ref<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    // SAFETY: callers pass either NULL or a valid, writable pointer.
    unsafe { p.as_mut() }.ok_or_else(|| fail(KtStatus::NullPointer, format!("`{name}` is NULL")))
}

fn in_ref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    // SAFETY: callers pass either NULL or a valid pointer.
    unsafe { p.as_ref() }.ok_or_else(|| fail(KtStatus::NullPointer, format!("`{name}` is NULL")))
}

fn tolerance(tol: *const KtTolerance) -> Result<ToleranceContext, Failure> {
    // SAFETY: NULL selects the default profile; otherwise the pointer is valid.
    let t = match unsafe { tol.as_ref() } {
        None => ToleranceContext::default(),
        Some(t) => ToleranceContext {
            rank_tol: t.rank_tol,
            residual_tol: t.residual_tol,
            root_tol: t.root_tol,
        },
    };
    t.validate()?;
    Ok(t)
}

fn knot(k: KtKnot) -> Result<TwoBridgeKnot, Failure> {
    Ok(TwoBridgeKnot::new(k.p, k.q)?)
}

fn trace(c: KtComplex) -> Result<C64, Failure> {
    let z = C64::new(c.re, c.im);
    if !z.is_finite() {
        return Err(fail(KtStatus::InvalidArgument, "trace is not finite"));
    }
    Ok(z)
}

fn complex(z: C64) -> KtComplex {
    KtComplex { re: z.re, im: z.im }
}

const NAN: KtComplex = KtComplex {
    re: f64::NAN,
    im: f64::NAN,
};

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn kt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the most recent failed call on this thread, or NULL. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn kt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn kt_tolerance_default() -> KtTolerance {
    let t = ToleranceContext::default();
    KtTolerance {
        rank_tol: t.rank_tol,
        residual_tol: t.residual_tol,
        root_tol: t.root_tol,
    }
}

/// Fills `out` from a named profile: `default`, `strict` or `loose`.
///
/// # Safety
/// `name` must be NULL or a NUL-terminated string; `out` must be NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn kt_tolerance_profile(name: *const c_char, out: *mut KtTolerance) -> KtStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if name.is_null() {
            return Err(fail(KtStatus::NullPointer, "`name` is NULL"));
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|_| fail(KtStatus::InvalidArgument, "profile name is not UTF-8"))?;
        let t = ToleranceProfile::parse(name)?.context();
        *out = KtTolerance {
            rank_tol: t.rank_tol,
            residual_tol: t.residual_tol,
            root_tol: t.root_tol,
        };
        Ok(())
    })
}

/// Alexander polynomial coefficients, constant term first. `*len` is always
/// set to the number of coefficients; if `cap` is smaller, nothing is
/// written and `KT_STATUS_OUT_OF_RANGE` is returned.
///
/// # Safety
/// `coeffs` must hold `cap` values (it may be NULL when `cap` is 0); `len`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn kt_alexander(k: KtKnot, coeffs: *mut i64, cap: usize, len: *mut usize) -> KtStatus {
    guard(|| {
        let len = out_ref(len, "len")?;
        let d = alexander_polynomial(&two_bridge_presentation(&knot(k)?))?;
        let values = d
            .coeffs()
            .iter()
            .map(|&c| {
                i64::try_from(c).map_err(|_| fail(KtStatus::OutOfRange, format!("coefficient {c} overflows int64")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        *len = values.len();
        if cap < values.len() {
            return Err(fail(
                KtStatus::OutOfRange,
                format!("need {} coefficients, buffer holds {cap}", values.len()),
            ));
        }
        if coeffs.is_null() {
            return Err(fail(KtStatus::NullPointer, "`coeffs` is NULL"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), coeffs, values.len());
        Ok(())
    })
}

/// Irreducible characters of `K(p, q)` with meridian trace `c`, with their
/// torsions. `tol` may be NULL for the default tolerances.
///
/// # Safety
/// `tol` must be NULL or valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kt_level_set_new(
    k: KtKnot,
    c: KtComplex,
    tol: *const KtTolerance,
    out: *mut *mut KtLevelSet,
) -> KtStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let (k, c, tol) = (knot(k)?, trace(c)?, tolerance(tol)?);
        let pres = two_bridge_presentation(&k);
        let opts = TorsionOptions::default();
        let mut points = Vec::new();
        for pt in solve_level_set(&k, c, &tol)? {
            let regular = pt.regularity.generic;
            let torsion = if regular {
                complex(torsion_knot_irreducible(&pres, &pt.rep, &opts, &tol)?.value)
            } else {
                NAN
            };
            points.push(KtPoint {
                u: complex(pt.u),
                m: complex(pt.rep.m()),
                trace_longitude: complex(pt.regularity.longitude_trace),
                regular,
                torsion,
            });
        }
        *out = Box::into_raw(Box::new(KtLevelSet { points }));
        Ok(())
    })
}

/// Number of points; 0 for NULL.
///
/// # Safety
/// `ls` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kt_level_set_len(ls: *const KtLevelSet) -> usize {
    ls.as_ref().map_or(0, |l| l.points.len())
}

/// # Safety
/// `ls` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kt_level_set_point(ls: *const KtLevelSet, index: usize, out: *mut KtPoint) -> KtStatus {
    guard(|| {
        let ls = in_ref(ls, "ls")?;
        let out = out_ref(out, "out")?;
        *out = *ls.points.get(index).ok_or_else(|| {
            fail(
                KtStatus::InvalidArgument,
                format!("point {index} of {}", ls.points.len()),
            )
        })?;
        Ok(())
    })
}

/// # Safety
/// `ls` must be NULL or a handle from `kt_level_set_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kt_level_set_free(ls: *mut KtLevelSet) {
    if !ls.is_null() {
        drop(Box::from_raw(ls));
    }
}

/// Level sets of the connected sum of `n` two-bridge knots at meridian
/// trace `c`.
///
/// # Safety
/// `factors` must hold `n` knots; `tol` must be NULL or valid; `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn kt_connected_sum_new(
    factors: *const KtKnot,
    n: usize,
    c: KtComplex,
    tol: *const KtTolerance,
    out: *mut *mut KtConnectedSum,
) -> KtStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        if factors.is_null() {
            return Err(fail(KtStatus::NullPointer, "`factors` is NULL"));
        }
        let knots = std::slice::from_raw_parts(factors, n)
            .iter()
            .map(|&k| knot(k))
            .collect::<Result<Vec<_>, _>>()?;
        let spec = ConnectedSumSpec::new(knots)?;
        let (c, tol) = (trace(c)?, tolerance(tol)?);
        let level_sets = factor_level_sets(&spec, c, &tol)?;
        let components = level_sets.components();
        *out = Box::into_raw(Box::new(KtConnectedSum {
            spec,
            c,
            tol,
            level_sets,
            components,
        }));
        Ok(())
    })
}

/// Number of factors; 0 for NULL.
///
/// # Safety
/// `cs` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kt_connected_sum_factor_count(cs: *const KtConnectedSum) -> usize {
    cs.as_ref().map_or(0, |c| c.spec.len())
}

/// Number of components with at least one irreducible factor; 0 for NULL.
///
/// # Safety
/// `cs` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kt_connected_sum_component_count(cs: *const KtConnectedSum) -> usize {
    cs.as_ref().map_or(0, |c| c.components.len())
}

/// Writes the factor choices of component `index`: `-1` for the abelian
/// factor, `k >= 0` for the `k`-th irreducible character. `cap` must be at
/// least the factor count.
///
/// # Safety
/// `cs` must be a live handle and `choices` must hold `cap` values.
#[no_mangle]
pub unsafe extern "C" fn kt_connected_sum_component(
    cs: *const KtConnectedSum,
    index: usize,
    choices: *mut i32,
    cap: usize,
) -> KtStatus {
    guard(|| {
        let cs = in_ref(cs, "cs")?;
        let comp = component(cs, index)?;
        if cap < comp.choices.len() {
            return Err(fail(
                KtStatus::OutOfRange,
                format!("need {} slots, buffer holds {cap}", comp.choices.len()),
            ));
        }
        if choices.is_null() {
            return Err(fail(KtStatus::NullPointer, "`choices` is NULL"));
        }
        for (j, ch) in comp.choices.iter().enumerate() {
            let v = match ch {
                FactorChoice::Abelian => -1,
                FactorChoice::Irreducible(i) => {
                    i32::try_from(*i).map_err(|_| fail(KtStatus::OutOfRange, "index overflows int32"))?
                }
            };
            *choices.add(j) = v;
        }
        Ok(())
    })
}

/// Torsion of component `index`.
///
/// # Safety
/// `cs` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kt_connected_sum_torsion(
    cs: *const KtConnectedSum,
    index: usize,
    out: *mut KtComplex,
) -> KtStatus {
    guard(|| {
        let cs = in_ref(cs, "cs")?;
        let out = out_ref(out, "out")?;
        let comp = component(cs, index)?;
        *out = complex(cs.level_sets.torsion(comp, &TorsionOptions::default(), &cs.tol)?.value);
        Ok(())
    })
}

/// Sum of reciprocal torsions over all components.
///
/// # Safety
/// `cs` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kt_connected_sum_vanishing(cs: *const KtConnectedSum, out: *mut KtVanishing) -> KtStatus {
    guard(|| {
        let cs = in_ref(cs, "cs")?;
        let out = out_ref(out, "out")?;
        let r = vanishing_sum(&cs.spec, cs.c, &TorsionOptions::default(), &cs.tol)?;
        *out = KtVanishing {
            components: r.terms.len(),
            sum: complex(r.sum),
            abs_sum: r.abs_sum,
            relative: r.relative(),
            expansion_residual: r.expansion_residual,
        };
        Ok(())
    })
}

/// # Safety
/// `cs` must be NULL or a handle from `kt_connected_sum_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kt_connected_sum_free(cs: *mut KtConnectedSum) {
    if !cs.is_null() {
        drop(Box::from_raw(cs));
    }
}

fn component(cs: &KtConnectedSum, index: usize) -> Result<&ComponentDescriptor, Failure> {
    cs.components.get(index).ok_or_else(|| {
        fail(
            KtStatus::InvalidArgument,
            format!("component {index} of {}", cs.components.len()),
        )
    })
}
