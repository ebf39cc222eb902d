use std::ffi::{CStr, CString};
use std::ptr;

use knottorsion_ffi::*;

fn last_error() -> String {
    let p = kt_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn c(re: f64, im: f64) -> KtComplex {
    KtComplex { re, im }
}

fn level_set(p: i64, q: i64, t: KtComplex) -> Vec<KtPoint> {
    let mut ls = ptr::null_mut();
    assert_eq!(
        unsafe { kt_level_set_new(KtKnot { p, q }, t, ptr::null(), &mut ls) },
        KtStatus::Ok
    );
    let n = unsafe { kt_level_set_len(ls) };
    let pts = (0..n)
        .map(|i| {
            let mut pt = KtPoint {
                u: c(0.0, 0.0),
                m: c(0.0, 0.0),
                trace_longitude: c(0.0, 0.0),
                regular: false,
                torsion: c(0.0, 0.0),
            };
            assert_eq!(unsafe { kt_level_set_point(ls, i, &mut pt) }, KtStatus::Ok);
            pt
        })
        .collect();
    unsafe { kt_level_set_free(ls) };
    pts
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(kt_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn level_set_points() {
    for (p, q) in [(3, 1), (5, 3), (7, 3), (9, 2)] {
        let t = c(0.7, -1.3);
        let pts = level_set(p, q, t);
        assert_eq!(pts.len(), (p as usize - 1) / 2);
        for pt in &pts {
            // m + 1/m is the requested trace.
            let m = num_complex::Complex64::new(pt.m.re, pt.m.im);
            assert!((m + m.inv() - num_complex::Complex64::new(t.re, t.im)).norm() < 1e-12);
            assert!(pt.regular);
            assert!(pt.torsion.re.is_finite() && pt.torsion.im.is_finite());
        }
    }
}

#[test]
fn figure_eight_reciprocals_cancel() {
    let pts = level_set(5, 3, c(-0.4, 2.2));
    let (mut s, mut a) = (num_complex::Complex64::new(0.0, 0.0), 0.0);
    for pt in pts {
        let inv = num_complex::Complex64::new(pt.torsion.re, pt.torsion.im).inv();
        s += inv;
        a += inv.norm();
    }
    assert!(s.norm() / a < 1e-10);
}

#[test]
fn error_statuses_and_messages() {
    let mut ls = ptr::null_mut();
    let s = unsafe { kt_level_set_new(KtKnot { p: 5, q: 3 }, c(2.0, 0.0), ptr::null(), &mut ls) };
    assert_eq!(s, KtStatus::NonGeneric);
    assert!(ls.is_null());
    assert!(last_error().contains("degenerate"));

    let s = unsafe { kt_level_set_new(KtKnot { p: 4, q: 3 }, c(3.0, 0.0), ptr::null(), &mut ls) };
    assert_eq!(s, KtStatus::InvalidArgument);

    let s = unsafe { kt_level_set_new(KtKnot { p: 5, q: 3 }, c(f64::NAN, 0.0), ptr::null(), &mut ls) };
    assert_eq!(s, KtStatus::InvalidArgument);

    let s = unsafe { kt_level_set_new(KtKnot { p: 5, q: 3 }, c(3.0, 0.0), ptr::null(), ptr::null_mut()) };
    assert_eq!(s, KtStatus::NullPointer);

    let bad = KtTolerance {
        rank_tol: -1.0,
        residual_tol: 1e-10,
        root_tol: 1e-12,
    };
    let s = unsafe { kt_level_set_new(KtKnot { p: 5, q: 3 }, c(3.0, 0.0), &bad, &mut ls) };
    assert_eq!(s, KtStatus::InvalidArgument);

    assert_eq!(unsafe { kt_level_set_len(ptr::null()) }, 0);
    unsafe { kt_level_set_free(ptr::null_mut()) };
}

#[test]
fn point_index_out_of_range() {
    let mut ls = ptr::null_mut();
    assert_eq!(
        unsafe { kt_level_set_new(KtKnot { p: 3, q: 1 }, c(3.0, 0.0), ptr::null(), &mut ls) },
        KtStatus::Ok
    );
    let mut pt = std::mem::MaybeUninit::<KtPoint>::uninit();
    assert_eq!(
        unsafe { kt_level_set_point(ls, 1, pt.as_mut_ptr()) },
        KtStatus::InvalidArgument
    );
    unsafe { kt_level_set_free(ls) };
}

#[test]
fn tolerance_profiles() {
    let d = kt_tolerance_default();
    let mut t = KtTolerance {
        rank_tol: 0.0,
        residual_tol: 0.0,
        root_tol: 0.0,
    };
    let name = CString::new("default").unwrap();
    assert_eq!(unsafe { kt_tolerance_profile(name.as_ptr(), &mut t) }, KtStatus::Ok);
    assert_eq!(t, d);
    let name = CString::new("strict").unwrap();
    assert_eq!(unsafe { kt_tolerance_profile(name.as_ptr(), &mut t) }, KtStatus::Ok);
    assert!(t.residual_tol <= d.residual_tol);
    let name = CString::new("sloppy").unwrap();
    assert_eq!(
        unsafe { kt_tolerance_profile(name.as_ptr(), &mut t) },
        KtStatus::InvalidArgument
    );
    assert!(last_error().contains("sloppy"));
}

#[test]
fn alexander_buffer_protocol() {
    let mut len = 0;
    let s = unsafe { kt_alexander(KtKnot { p: 5, q: 3 }, ptr::null_mut(), 0, &mut len) };
    assert_eq!(s, KtStatus::OutOfRange);
    assert_eq!(len, 3);
    let mut buf = vec![0i64; len];
    assert_eq!(
        unsafe { kt_alexander(KtKnot { p: 5, q: 3 }, buf.as_mut_ptr(), buf.len(), &mut len) },
        KtStatus::Ok
    );
    assert_eq!(buf, [1, -3, 1]);
    let mut buf = [0i64; 8];
    assert_eq!(
        unsafe { kt_alexander(KtKnot { p: 3, q: 1 }, buf.as_mut_ptr(), 8, &mut len) },
        KtStatus::Ok
    );
    assert_eq!(&buf[..len], [1, -1, 1]);
}

#[test]
fn connected_sum_components_and_vanishing() {
    let factors = [KtKnot { p: 5, q: 3 }, KtKnot { p: 7, q: 3 }];
    let mut cs = ptr::null_mut();
    let s = unsafe { kt_connected_sum_new(factors.as_ptr(), 2, c(1.3, 0.6), ptr::null(), &mut cs) };
    assert_eq!(s, KtStatus::Ok);
    assert_eq!(unsafe { kt_connected_sum_factor_count(cs) }, 2);
    // (2 + 1)(3 + 1) - 1 choices with at least one irreducible factor.
    let n = unsafe { kt_connected_sum_component_count(cs) };
    assert_eq!(n, 11);

    let mut sum = num_complex::Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    let mut seen = Vec::new();
    for i in 0..n {
        let mut ch = [0i32; 2];
        assert_eq!(
            unsafe { kt_connected_sum_component(cs, i, ch.as_mut_ptr(), 2) },
            KtStatus::Ok
        );
        assert!(ch.iter().any(|&x| x >= 0));
        assert!(ch[0] < 2 && ch[1] < 3);
        seen.push(ch);
        let mut t = c(0.0, 0.0);
        assert_eq!(unsafe { kt_connected_sum_torsion(cs, i, &mut t) }, KtStatus::Ok);
        let inv = num_complex::Complex64::new(t.re, t.im).inv();
        sum += inv;
        abs += inv.norm();
    }
    seen.sort();
    seen.dedup();
    assert_eq!(seen.len(), n);
    assert!(sum.norm() / abs < 1e-9);

    let mut v = std::mem::MaybeUninit::<KtVanishing>::uninit();
    assert_eq!(unsafe { kt_connected_sum_vanishing(cs, v.as_mut_ptr()) }, KtStatus::Ok);
    let v = unsafe { v.assume_init() };
    assert_eq!(v.components, n);
    assert!((v.abs_sum - abs).abs() <= 1e-9 * abs);
    assert!(v.relative < 1e-9);

    let mut short = [0i32; 1];
    assert_eq!(
        unsafe { kt_connected_sum_component(cs, 0, short.as_mut_ptr(), 1) },
        KtStatus::OutOfRange
    );
    let mut t = c(0.0, 0.0);
    assert_eq!(
        unsafe { kt_connected_sum_torsion(cs, n, &mut t) },
        KtStatus::InvalidArgument
    );
    unsafe { kt_connected_sum_free(cs) };
}

#[test]
fn connected_sum_rejects_empty_and_null() {
    let mut cs = ptr::null_mut();
    let k = [KtKnot { p: 5, q: 3 }];
    assert_eq!(
        unsafe { kt_connected_sum_new(k.as_ptr(), 0, c(1.0, 1.0), ptr::null(), &mut cs) },
        KtStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { kt_connected_sum_new(ptr::null(), 1, c(1.0, 1.0), ptr::null(), &mut cs) },
        KtStatus::NullPointer
    );
    assert!(cs.is_null());
}
