//! C ABI for the einstein4 library.
//!
//! Objects are opaque handles created by `e4_*_new`-style functions and
//! released with the matching `*_free`. Every fallible call returns an
//! [`E4Status`]; on failure the message is available from
//! [`e4_last_error_message`] on the same thread. Indices are 0-based and
//! components are laid out as `c[((i*4 + j)*4 + k)*4 + l]`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use einstein4::berger::BergerForm;
use einstein4::bounds::half_weyl_bound;
use einstein4::hamilton::b_combination;
use einstein4::input;
use einstein4::predicates::{k_positive_margin, Condition};
use einstein4::tensor::{Components, RiemannTensor4, DEFAULT_TOL};
use einstein4::Error;
use nalgebra::Vector4;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum E4Status {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Symmetry = 3,
    NotEinstein = 4,
    NonPositiveLambda = 5,
    InvalidBerger = 6,
    OutOfRange = 7,
    UnknownCondition = 8,
    Infeasible = 9,
    InvalidArgument = 10,
    Io = 11,
    Panic = 12,
}

/// Algebraic curvature tensor.
pub struct E4Tensor(RiemannTensor4);

/// Berger normal form of an Einstein curvature operator.
pub struct E4Berger(BergerForm);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> E4Status {
    match e {
        Error::Symmetry { .. } | Error::ConflictingComponent { .. } => E4Status::Symmetry,
        Error::NotEinstein { .. } => E4Status::NotEinstein,
        Error::NonPositiveLambda { .. } => E4Status::NonPositiveLambda,
        Error::InvalidBerger { .. } => E4Status::InvalidBerger,
        Error::IndexOutOfRange { .. } | Error::KOutOfRange { .. } => E4Status::OutOfRange,
        Error::UnknownCondition(_) => E4Status::UnknownCondition,
        Error::Infeasible { .. } => E4Status::Infeasible,
        Error::InvalidProblem(_) => E4Status::InvalidArgument,
        Error::Parse(_) => E4Status::Parse,
        Error::Io(_) => E4Status::Io,
    }
}

/// Runs `f`, recording errors and panics for `e4_last_error_message`.
fn guard(f: impl FnOnce() -> Result<(), (E4Status, String)>) -> E4Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            E4Status::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            E4Status::Panic
        }
    }
}

type Fallible<T> = Result<T, (E4Status, String)>;

fn lib<T>(r: einstein4::Result<T>) -> Fallible<T> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (E4Status, String) {
    (E4Status::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Fallible<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Fallible<()> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn array<const N: usize>(p: *const f64, what: &str) -> Fallible<[f64; N]> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::array::from_fn(|i| *p.add(i)))
}

fn tol_or_default(tol: f64) -> f64 {
    if tol.is_nan() {
        DEFAULT_TOL
    } else {
        tol
    }
}

/// Message of the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next call into this library on the thread.
#[no_mangle]
pub extern "C" fn e4_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn e4_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a tensor from 256 components, checking the curvature symmetries at
/// `tol` (NaN selects the default tolerance).
///
/// # Safety
/// `components` must point to 256 doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn e4_tensor_from_components(
    components: *const f64,
    tol: f64,
    out: *mut *mut E4Tensor,
) -> E4Status {
    guard(|| {
        let flat: [f64; 256] = array(components, "components")?;
        let mut c: Components = [[[[0.0; 4]; 4]; 4]; 4];
        for (n, v) in flat.iter().enumerate() {
            c[n >> 6][(n >> 4) & 3][(n >> 2) & 3][n & 3] = *v;
        }
        let rm = lib(RiemannTensor4::from_components(c, tol_or_default(tol)))?;
        write(out, Box::into_raw(Box::new(E4Tensor(rm))), "out")
    })
}

/// Parses an input document (TOML text) into a tensor.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn e4_tensor_from_document(text: *const c_char, tol: f64, out: *mut *mut E4Tensor) -> E4Status {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (E4Status::Parse, e.to_string()))?;
        let tol = (!tol.is_nan()).then_some(tol);
        let cur = lib(input::parse(s).and_then(|d| d.curvature(tol)))?;
        write(out, Box::into_raw(Box::new(E4Tensor(cur.tensor()))), "out")
    })
}

/// # Safety
/// `tensor` must be valid and `out` must point to 256 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn e4_tensor_components(tensor: *const E4Tensor, out: *mut f64) -> E4Status {
    guard(|| {
        let t = deref(tensor, "tensor")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = t.0.components();
        for n in 0..256 {
            *out.add(n) = c[n >> 6][(n >> 4) & 3][(n >> 2) & 3][n & 3];
        }
        Ok(())
    })
}

/// Sectional curvature of the plane spanned by `u` and `v`.
///
/// # Safety
/// `u`, `v` point to 4 doubles each; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn e4_tensor_sectional(
    tensor: *const E4Tensor,
    u: *const f64,
    v: *const f64,
    out: *mut f64,
) -> E4Status {
    guard(|| {
        let t = deref(tensor, "tensor")?;
        let u = Vector4::from(array::<4>(u, "u")?);
        let v = Vector4::from(array::<4>(v, "v")?);
        let k = t
            .0
            .sectional_curvature(&u, &v)
            .ok_or((E4Status::InvalidArgument, "u and v are linearly dependent".to_string()))?;
        write(out, k, "out")
    })
}

/// `2(B_ijkl − B_ijlk + B_ikjl − B_iljk)` with `B_ijkl = Σ R_imjp R_kmlp`.
///
/// # Safety
/// `tensor` valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn e4_tensor_b_combination(
    tensor: *const E4Tensor,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    out: *mut f64,
) -> E4Status {
    guard(|| {
        let t = deref(tensor, "tensor")?;
        write(out, lib(b_combination(&t.0, i, j, k, l))?, "out")
    })
}

/// # Safety
/// `tensor` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn e4_tensor_free(tensor: *mut E4Tensor) {
    if !tensor.is_null() {
        drop(Box::from_raw(tensor));
    }
}

/// # Safety
/// `a`, `b` point to 3 doubles each; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn e4_berger_new(
    a: *const f64,
    b: *const f64,
    lambda: f64,
    tol: f64,
    out: *mut *mut E4Berger,
) -> E4Status {
    guard(|| {
        let bf = lib(BergerForm::new(array(a, "a")?, array(b, "b")?, lambda, tol_or_default(tol)))?;
        write(out, Box::into_raw(Box::new(E4Berger(bf))), "out")
    })
}

/// Berger form of an Einstein tensor with positive Einstein constant.
///
/// # Safety
/// `tensor` valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn e4_berger_from_tensor(tensor: *const E4Tensor, tol: f64, out: *mut *mut E4Berger) -> E4Status {
    guard(|| {
        let t = deref(tensor, "tensor")?;
        let bf = lib(BergerForm::from_tensor(&t.0, tol_or_default(tol)))?;
        write(out, Box::into_raw(Box::new(E4Berger(bf))), "out")
    })
}

/// Named spaces: 0 round sphere, 1 complex projective plane, 2 product of
/// two 2-spheres.
///
/// # Safety
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn e4_berger_named(space: u32, lambda: f64, out: *mut *mut E4Berger) -> E4Status {
    guard(|| {
        if !(lambda > 0.0) {
            return lib(Err(Error::NonPositiveLambda { lambda }));
        }
        let bf = match space {
            0 => BergerForm::round_sphere(lambda),
            1 => BergerForm::complex_projective_plane(lambda),
            2 => BergerForm::product_of_spheres(lambda),
            _ => return Err((E4Status::OutOfRange, format!("unknown space {space}"))),
        };
        write(out, Box::into_raw(Box::new(E4Berger(bf))), "out")
    })
}

/// # Safety
/// `form` valid; `a`, `b` point to 3 writable doubles; `lambda` writable.
#[no_mangle]
pub unsafe extern "C" fn e4_berger_parts(form: *const E4Berger, a: *mut f64, b: *mut f64, lambda: *mut f64) -> E4Status {
    guard(|| {
        let f = deref(form, "form")?;
        if a.is_null() || b.is_null() {
            return Err(null("a or b"));
        }
        for i in 0..3 {
            *a.add(i) = f.0.a()[i];
            *b.add(i) = f.0.b()[i];
        }
        write(lambda, f.0.lambda(), "lambda")
    })
}

/// Curvature tensor in the Berger frame.
///
/// # Safety
/// `form` valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn e4_berger_tensor(form: *const E4Berger, out: *mut *mut E4Tensor) -> E4Status {
    guard(|| {
        let f = deref(form, "form")?;
        write(out, Box::into_raw(Box::new(E4Tensor(f.0.tensor()))), "out")
    })
}

/// Margin of a named condition (`"3-positive"`, `"pic"`, `"K>1/12"`, ...)
/// at Einstein constant 1. The condition holds when the margin is positive.
///
/// # Safety
/// `form` valid, `condition` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn e4_berger_condition_margin(
    form: *const E4Berger,
    condition: *const c_char,
    out: *mut f64,
) -> E4Status {
    guard(|| {
        let f = deref(form, "form")?;
        if condition.is_null() {
            return Err(null("condition"));
        }
        let name = CStr::from_ptr(condition).to_string_lossy();
        let c: Condition = lib(name.parse())?;
        write(out, c.margin(&f.0), "out")
    })
}

/// Sum of the `k` smallest curvature operator eigenvalues.
///
/// # Safety
/// `form` valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn e4_berger_k_positive_margin(form: *const E4Berger, k: usize, out: *mut f64) -> E4Status {
    guard(|| {
        let f = deref(form, "form")?;
        write(out, lib(k_positive_margin(&f.0, k))?.margin, "out")
    })
}

/// # Safety
/// `form` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn e4_berger_free(form: *mut E4Berger) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Minimum of the smallest half-Weyl eigenvalue when the largest is `l`,
/// numerically and from the closed form.
///
/// # Safety
/// `numeric` and `analytic` writable.
#[no_mangle]
pub unsafe extern "C" fn e4_half_weyl_bound(l: f64, numeric: *mut f64, analytic: *mut f64) -> E4Status {
    guard(|| {
        let (n, a) = lib(half_weyl_bound(l))?;
        write(numeric, n, "numeric")?;
        write(analytic, a, "analytic")
    })
}
