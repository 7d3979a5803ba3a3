//! C ABI over blockforge.
//!
//! Objects are opaque heap handles released with their `*_free` function.
//! Every fallible call returns a [`BfStatus`] and writes its result through
//! an out-pointer; the message for the last non-OK status on the calling
//! thread is available from [`bf_last_error_message`]. Panics never cross
//! the boundary and are reported as `BF_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use blockforge::catalog::named_group;
use blockforge::error::Error;
use blockforge::field::Fq;
use blockforge::groups::{FiniteGroup, GroupJson};
use blockforge::linalg::{set_max_dim, Mat};
use blockforge::report::Report;
use blockforge::suites::{certify, run_suite, SuiteSpec};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfStatus {
    Ok = 0,
    /// A suite or certificate ran and some check failed.
    CheckFailed = 1,
    BadParams = 2,
    SchemaError = 3,
    CapExceeded = 4,
    /// Any other mathematical precondition failure.
    MathError = 5,
    NullPointer = 6,
    InvalidUtf8 = 7,
    OutOfRange = 8,
    Panic = 9,
}

pub struct BfField(Fq);
pub struct BfGroup(FiniteGroup);
pub struct BfMatrix(Mat);
pub struct BfReport(Report);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(BfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let status = match e {
            Error::BadParams(_) => BfStatus::BadParams,
            Error::SchemaError(_) => BfStatus::SchemaError,
            Error::DimensionCap(_) | Error::OrderCapExceeded(_) => BfStatus::CapExceeded,
            _ => BfStatus::MathError,
        };
        Failure(status, e.to_string())
    }
}

fn fail<T>(status: BfStatus, msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(status, msg.into()))
}

fn guard(body: impl FnOnce() -> Result<BfStatus, Failure>) -> BfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(s)) => {
            if s == BfStatus::Ok {
                set_error("");
            }
            s
        }
        Ok(Err(Failure(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&msg);
            BfStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().map_or_else(|| fail(BfStatus::NullPointer, "null handle"), Ok)
}

unsafe fn out<T>(p: *mut T, v: T) -> Result<BfStatus, Failure> {
    if p.is_null() {
        return fail(BfStatus::NullPointer, "null out-pointer");
    }
    p.write(v);
    Ok(BfStatus::Ok)
}

unsafe fn string<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return fail(BfStatus::NullPointer, "null string");
    }
    CStr::from_ptr(s).to_str().or_else(|_| fail(BfStatus::InvalidUtf8, "string is not UTF-8"))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message for the last failing call on this thread; empty after a
/// successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn bf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn bf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn bf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Sets the process-wide matrix dimension cap.
#[no_mangle]
pub extern "C" fn bf_set_max_dim(n: usize) {
    set_max_dim(n);
}

/// GF(p^m).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bf_field_new(p: u32, m: u32, out_field: *mut *mut BfField) -> BfStatus {
    guard(|| out(out_field, boxed(BfField(Fq::new(p, m)?))))
}

/// # Safety
/// `f` must be null or a live field handle.
#[no_mangle]
pub unsafe extern "C" fn bf_field_free(f: *mut BfField) {
    free(f)
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live field handle.
#[no_mangle]
pub unsafe extern "C" fn bf_field_order(f: *const BfField) -> u32 {
    f.as_ref().map_or(0, |f| f.0.q())
}

/// Characteristic, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live field handle.
#[no_mangle]
pub unsafe extern "C" fn bf_field_characteristic(f: *const BfField) -> u32 {
    f.as_ref().map_or(0, |f| f.0.p())
}

unsafe fn field_op(
    f: *const BfField,
    a: u32,
    b: u32,
    res: *mut u32,
    op: impl FnOnce(&Fq, u32, u32) -> u32,
) -> BfStatus {
    guard(|| {
        let f = &deref(f)?.0;
        if a >= f.q() || b >= f.q() {
            return fail(BfStatus::OutOfRange, format!("element outside GF({})", f.q()));
        }
        out(res, op(f, a, b))
    })
}

/// # Safety
/// `f` must be a live field handle and `res` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bf_field_add(f: *const BfField, a: u32, b: u32, res: *mut u32) -> BfStatus {
    field_op(f, a, b, res, |f, a, b| f.add(a, b))
}

/// # Safety
/// `f` must be a live field handle and `res` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bf_field_mul(f: *const BfField, a: u32, b: u32, res: *mut u32) -> BfStatus {
    field_op(f, a, b, res, |f, a, b| f.mul(a, b))
}

/// Multiplicative inverse; `BF_STATUS_BAD_PARAMS` for zero.
///
/// # Safety
/// `f` must be a live field handle and `res` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bf_field_inv(f: *const BfField, a: u32, res: *mut u32) -> BfStatus {
    if a == 0 {
        set_error("zero has no inverse");
        return BfStatus::BadParams;
    }
    field_op(f, a, 0, res, |f, a, _| f.inv(a))
}

/// A catalog group by id, e.g. `"S3"`.
///
/// # Safety
/// `id` must be a NUL-terminated string and `out_group` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bf_group_named(id: *const c_char, out_group: *mut *mut BfGroup) -> BfStatus {
    guard(|| out(out_group, boxed(BfGroup(named_group(string(id)?, None)?))))
}

/// A group from `{"order":…,"table":[[…]],"labels":[…]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_group` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bf_group_from_json(json: *const c_char, out_group: *mut *mut BfGroup) -> BfStatus {
    guard(|| {
        let j: GroupJson =
            serde_json::from_str(string(json)?).or_else(|e| fail(BfStatus::SchemaError, e.to_string()))?;
        out(out_group, boxed(BfGroup(FiniteGroup::from_json(&j)?)))
    })
}

/// # Safety
/// `g` must be null or a live group handle.
#[no_mangle]
pub unsafe extern "C" fn bf_group_free(g: *mut BfGroup) {
    free(g)
}

/// Order, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live group handle.
#[no_mangle]
pub unsafe extern "C" fn bf_group_order(g: *const BfGroup) -> usize {
    g.as_ref().map_or(0, |g| g.0.order())
}

/// Number of conjugacy classes, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live group handle.
#[no_mangle]
pub unsafe extern "C" fn bf_group_class_count(g: *const BfGroup) -> usize {
    g.as_ref().map_or(0, |g| g.0.conjugacy_classes().len())
}

/// Product of two element indices.
///
/// # Safety
/// `g` must be a live group handle and `res` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bf_group_mul(g: *const BfGroup, a: u32, b: u32, res: *mut u32) -> BfStatus {
    guard(|| {
        let g = &deref(g)?.0;
        if a as usize >= g.order() || b as usize >= g.order() {
            return fail(BfStatus::OutOfRange, format!("element index outside 0..{}", g.order()));
        }
        out(res, g.mul(a, b))
    })
}

/// A `rows x cols` matrix from row-major entries.
///
/// # Safety
/// `data` must point to `rows * cols` readable entries and `out_matrix`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bf_matrix_new(
    f: *const BfField,
    rows: usize,
    cols: usize,
    data: *const u32,
    out_matrix: *mut *mut BfMatrix,
) -> BfStatus {
    guard(|| {
        let f = &deref(f)?.0;
        let len = rows.checked_mul(cols).ok_or_else(|| Failure(BfStatus::OutOfRange, "size overflows".into()))?;
        if len > 0 && data.is_null() {
            return fail(BfStatus::NullPointer, "null data");
        }
        let entries = if len == 0 { &[][..] } else { std::slice::from_raw_parts(data, len) };
        if entries.iter().any(|&x| x >= f.q()) {
            return fail(BfStatus::OutOfRange, format!("entry outside GF({})", f.q()));
        }
        let row_vecs: Vec<Vec<u32>> = entries.chunks(cols.max(1)).map(|r| r.to_vec()).collect();
        let m = if len == 0 { Mat::zeros(f, rows, cols) } else { Mat::from_rows(f, cols, &row_vecs) };
        out(out_matrix, boxed(BfMatrix(m)))
    })
}

/// # Safety
/// `m` must be null or a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn bf_matrix_free(m: *mut BfMatrix) {
    free(m)
}

/// # Safety
/// `m` must be a live matrix handle and `res` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bf_matrix_rank(m: *const BfMatrix, res: *mut usize) -> BfStatus {
    guard(|| out(res, deref(m)?.0.rank()))
}

/// # Safety
/// `m` must be a live matrix handle and `res` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bf_matrix_get(m: *const BfMatrix, row: usize, col: usize, res: *mut u32) -> BfStatus {
    guard(|| {
        let m = &deref(m)?.0;
        if row >= m.rows() || col >= m.cols() {
            return fail(BfStatus::OutOfRange, format!("({row}, {col}) outside {}x{}", m.rows(), m.cols()));
        }
        out(res, m.get(row, col))
    })
}

/// `a * b`.
///
/// # Safety
/// `a`, `b` must be live matrix handles and `out_matrix` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bf_matrix_mul(
    a: *const BfMatrix,
    b: *const BfMatrix,
    out_matrix: *mut *mut BfMatrix,
) -> BfStatus {
    guard(|| {
        let (a, b) = (&deref(a)?.0, &deref(b)?.0);
        if a.cols() != b.rows() || a.field().q() != b.field().q() {
            return fail(BfStatus::BadParams, "incompatible matrices");
        }
        out(out_matrix, boxed(BfMatrix(a.mul(b))))
    })
}

/// Inverse of a square matrix; `BF_STATUS_MATH_ERROR` when singular.
///
/// # Safety
/// `m` must be a live matrix handle and `out_matrix` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bf_matrix_inverse(m: *const BfMatrix, out_matrix: *mut *mut BfMatrix) -> BfStatus {
    guard(|| {
        let m = &deref(m)?.0;
        if m.rows() != m.cols() {
            return fail(BfStatus::BadParams, "matrix is not square");
        }
        match m.inverse() {
            Some(inv) => out(out_matrix, boxed(BfMatrix(inv))),
            None => fail(BfStatus::MathError, "matrix is singular"),
        }
    })
}

fn report_status(r: &Report) -> BfStatus {
    if r.ok {
        BfStatus::Ok
    } else {
        BfStatus::CheckFailed
    }
}

/// Runs a suite described by a JSON object such as
/// `{"suite":"radical-tensor","p":3,"groups":"S3:A3,C2:1","n":2}`. The
/// report is written to `out_report` whenever the suite ran, including
/// when it returns `BF_STATUS_CHECK_FAILED`.
///
/// # Safety
/// `spec_json` must be a NUL-terminated string and `out_report` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn bf_run_suite(spec_json: *const c_char, seed: u64, out_report: *mut *mut BfReport) -> BfStatus {
    guard(|| {
        let spec: SuiteSpec =
            serde_json::from_str(string(spec_json)?).or_else(|e| fail(BfStatus::SchemaError, e.to_string()))?;
        let r = run_suite(&spec, seed, None)?;
        let s = report_status(&r);
        out(out_report, boxed(BfReport(r)))?;
        Ok(s)
    })
}

/// Verifies a certificate given as JSON text; report semantics as for
/// [`bf_run_suite`].
///
/// # Safety
/// `cert_json` must be a NUL-terminated string and `out_report` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn bf_certify(cert_json: *const c_char, seed: u64, out_report: *mut *mut BfReport) -> BfStatus {
    guard(|| {
        let r = certify(string(cert_json)?, seed)?;
        let s = report_status(&r);
        out(out_report, boxed(BfReport(r)))?;
        Ok(s)
    })
}

/// # Safety
/// `r` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn bf_report_free(r: *mut BfReport) {
    free(r)
}

/// Whether every check passed; false for a null handle.
///
/// # Safety
/// `r` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn bf_report_ok(r: *const BfReport) -> bool {
    r.as_ref().is_some_and(|r| r.0.ok)
}

/// # Safety
/// `r` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn bf_report_check_count(r: *const BfReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.checks.len())
}

/// The report as JSON; free with [`bf_string_free`]. Null for a null
/// handle.
///
/// # Safety
/// `r` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn bf_report_json(r: *const BfReport) -> *mut c_char {
    match r.as_ref() {
        Some(r) => CString::new(r.0.to_json()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn last_error() -> String {
        unsafe { CStr::from_ptr(bf_last_error_message()) }.to_str().unwrap().to_string()
    }

    #[test]
    fn field_arithmetic_and_errors() {
        unsafe {
            let mut f = ptr::null_mut();
            assert_eq!(bf_field_new(3, 2, &mut f), BfStatus::Ok);
            assert_eq!(bf_field_order(f), 9);
            assert_eq!(bf_field_characteristic(f), 3);
            let mut x = 0;
            assert_eq!(bf_field_inv(f, 5, &mut x), BfStatus::Ok);
            let mut one = 0;
            assert_eq!(bf_field_mul(f, 5, x, &mut one), BfStatus::Ok);
            assert_eq!(one, 1);
            assert_eq!(bf_field_inv(f, 0, &mut x), BfStatus::BadParams);
            assert_eq!(bf_field_add(f, 9, 0, &mut x), BfStatus::OutOfRange);
            assert!(last_error().contains("GF(9)"));
            assert_eq!(bf_field_add(f, 1, 1, ptr::null_mut()), BfStatus::NullPointer);
            bf_field_free(f);
            let mut g = ptr::null_mut();
            assert_eq!(bf_field_new(4, 1, &mut g), BfStatus::MathError);
            assert!(g.is_null());
        }
    }

    #[test]
    fn groups_by_name_and_json() {
        unsafe {
            let mut g = ptr::null_mut();
            assert_eq!(bf_group_named(c"S3".as_ptr(), &mut g), BfStatus::Ok);
            assert_eq!(bf_group_order(g), 6);
            assert_eq!(bf_group_class_count(g), 3);
            let json = serde_json::to_string(&(*g).0.to_json()).unwrap();
            let c = CString::new(json).unwrap();
            let mut h = ptr::null_mut();
            assert_eq!(bf_group_from_json(c.as_ptr(), &mut h), BfStatus::Ok);
            let mut p = 0;
            assert_eq!(bf_group_mul(h, 1, 2, &mut p), BfStatus::Ok);
            assert_eq!(p, (*g).0.mul(1, 2));
            assert_eq!(bf_group_mul(h, 6, 0, &mut p), BfStatus::OutOfRange);
            bf_group_free(g);
            bf_group_free(h);
            assert_eq!(bf_group_named(c"Q8x".as_ptr(), &mut g), BfStatus::BadParams);
            assert_eq!(bf_group_from_json(c"{".as_ptr(), &mut g), BfStatus::SchemaError);
        }
    }

    #[test]
    fn matrices() {
        unsafe {
            let mut f = ptr::null_mut();
            bf_field_new(5, 1, &mut f);
            let data = [1u32, 2, 3, 4];
            let mut m = ptr::null_mut();
            assert_eq!(bf_matrix_new(f, 2, 2, data.as_ptr(), &mut m), BfStatus::Ok);
            let mut r = 0;
            assert_eq!(bf_matrix_rank(m, &mut r), BfStatus::Ok);
            assert_eq!(r, 2);
            let mut inv = ptr::null_mut();
            assert_eq!(bf_matrix_inverse(m, &mut inv), BfStatus::Ok);
            let mut id = ptr::null_mut();
            assert_eq!(bf_matrix_mul(m, inv, &mut id), BfStatus::Ok);
            let mut e = 0;
            assert_eq!(bf_matrix_get(id, 1, 1, &mut e), BfStatus::Ok);
            assert_eq!(e, 1);
            assert_eq!(bf_matrix_get(id, 2, 0, &mut e), BfStatus::OutOfRange);
            let sing = [1u32, 2, 2, 4];
            let mut s = ptr::null_mut();
            bf_matrix_new(f, 2, 2, sing.as_ptr(), &mut s);
            assert_eq!(bf_matrix_inverse(s, &mut inv), BfStatus::MathError);
            let bad = [7u32];
            assert_eq!(bf_matrix_new(f, 1, 1, bad.as_ptr(), &mut s), BfStatus::OutOfRange);
            for h in [m, id, s] {
                bf_matrix_free(h);
            }
            bf_field_free(f);
        }
    }

    #[test]
    fn suites_and_reports() {
        unsafe {
            let spec = c"{\"suite\":\"radical-tensor\",\"p\":3,\"groups\":\"S3:A3,C2:1\",\"n\":2}";
            let mut r = ptr::null_mut();
            assert_eq!(bf_run_suite(spec.as_ptr(), 0, &mut r), BfStatus::Ok);
            assert!(bf_report_ok(r));
            assert_eq!(bf_report_check_count(r), 5);
            let s = bf_report_json(r);
            assert!(CStr::from_ptr(s).to_str().unwrap().contains("\"schema\": \"blockforge/1\""));
            bf_string_free(s);
            bf_report_free(r);

            let spec = c"{\"suite\":\"block-wreath\",\"instance\":\"s3-gf4-principal\",\"n\":2}";
            assert_eq!(bf_run_suite(spec.as_ptr(), 0, &mut r), BfStatus::CheckFailed);
            assert!(!bf_report_ok(r));
            bf_report_free(r);

            assert_eq!(bf_run_suite(c"{\"suite\":\"nope\"}".as_ptr(), 0, &mut r), BfStatus::BadParams);
            assert!(last_error().contains("unknown suite"));
            assert_eq!(bf_certify(c"{}".as_ptr(), 0, &mut r), BfStatus::SchemaError);
            assert_eq!(bf_run_suite(ptr::null(), 0, &mut r), BfStatus::NullPointer);
            assert!(bf_report_json(ptr::null()).is_null());
        }
    }

    #[test]
    fn invalid_utf8_is_reported() {
        let bytes = [0xffu8, 0];
        let mut g = ptr::null_mut();
        let s = unsafe { bf_group_named(bytes.as_ptr().cast(), &mut g) };
        assert_eq!(s, BfStatus::InvalidUtf8);
    }
}
