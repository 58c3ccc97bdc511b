//! C ABI over `qso-core`.
//!
//! Every fallible function returns a [`QsoStatus`]; on failure a message is
//! available from [`qso_last_error_message`] on the same thread. Objects are
//! opaque handles released with their matching `*_free` function. Strings
//! returned through `char **` are released with [`qso_string_free`].
//!
//! Indices and permutations are 1-based in JSON and 0-based everywhere else,
//! except [`qso_conjugate`], which takes the 1-based images used on the
//! command line.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qso_core::conjugacy::Permutation;
use qso_core::dynamics::{Trajectory, TrajectoryStatus};
use qso_core::json as formats;
use qso_core::orthopreserve::OpFamilySpec;
use qso_core::simplex::SimplexPoint;
use qso_core::tensor::{QsoTensor as Tensor, ValidationMode};
use qso_core::volterra::SkewMatrix;
use qso_core::QsoError;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    InvalidTensor = 4,
    NotInSimplex = 5,
    NotVolterra = 6,
    InvalidSkew = 7,
    InvalidFamily = 8,
    ParameterOutOfRange = 9,
    DimensionUnsupported = 10,
    NotOrthogonalityPreserving = 11,
    VertexImageNotVertex = 12,
    InvalidPermutation = 13,
    InvalidKernel = 14,
    TooLarge = 15,
    Format = 16,
    BufferTooSmall = 17,
    Panic = 99,
}

/// How a trajectory ended.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsoTrajectoryKind {
    Converged = 0,
    Cycle = 1,
    BudgetExhausted = 2,
}

/// A member of one of the six orthogonality-preserving families.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QsoOpSpec {
    pub family: u8,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Opaque validated operator.
pub struct QsoTensor(Tensor);

/// Opaque trajectory.
pub struct QsoTrajectory(Trajectory);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &QsoError) -> QsoStatus {
    match e {
        QsoError::DimensionMismatch { .. } => QsoStatus::DimensionMismatch,
        QsoError::InvalidDimension(..)
        | QsoError::NotCubic(_)
        | QsoError::NonFinite { .. }
        | QsoError::NegativeCoefficient { .. }
        | QsoError::NotSymmetric { .. }
        | QsoError::NotStochastic { .. } => QsoStatus::InvalidTensor,
        QsoError::NotInSimplex(_) => QsoStatus::NotInSimplex,
        QsoError::NotVolterra { .. } => QsoStatus::NotVolterra,
        QsoError::InvalidSkew(_) => QsoStatus::InvalidSkew,
        QsoError::InvalidFamily(_) => QsoStatus::InvalidFamily,
        QsoError::ParameterOutOfRange { .. } => QsoStatus::ParameterOutOfRange,
        QsoError::DimensionUnsupported(_) => QsoStatus::DimensionUnsupported,
        QsoError::NotOrthogonalityPreserving(_) => QsoStatus::NotOrthogonalityPreserving,
        QsoError::VertexImageNotVertex { .. } => QsoStatus::VertexImageNotVertex,
        QsoError::InvalidPermutation(_) => QsoStatus::InvalidPermutation,
        QsoError::InvalidKernel(_) | QsoError::InvalidMeasure(_) => QsoStatus::InvalidKernel,
        QsoError::TooLarge(..) => QsoStatus::TooLarge,
        QsoError::InvalidArgument(_) => QsoStatus::InvalidArgument,
        QsoError::Format(_) => QsoStatus::Format,
    }
}

struct Failure(QsoStatus, String);

impl From<QsoError> for Failure {
    fn from(e: QsoError) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(QsoStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, recording failures and converting panics.
fn guard<F: FnOnce() -> Result<(), Failure>>(body: F) -> QsoStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => QsoStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QsoStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn copy_out(src: &[f64], out: *mut f64, out_len: usize) -> Result<(), Failure> {
    if out_len < src.len() {
        return Err(Failure(
            QsoStatus::BufferTooSmall,
            format!("output buffer holds {out_len} values, {} needed", src.len()),
        ));
    }
    if out.is_null() {
        return Err(null("output buffer"));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    Ok(())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null("string"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(QsoStatus::InvalidArgument, "string is not UTF-8".into()))
}

unsafe fn give_string(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(QsoStatus::Format, "output contains a nul byte".into()))?;
    write_out(out, c.into_raw(), "out")
}

unsafe fn give_tensor(t: Tensor, out: *mut *mut QsoTensor) -> Result<(), Failure> {
    write_out(out, Box::into_raw(Box::new(QsoTensor(t))), "out")
}

fn mode(normalize: bool) -> ValidationMode {
    if normalize {
        ValidationMode::Normalize
    } else {
        ValidationMode::Strict
    }
}

/// Message of the last failure on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn qso_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn qso_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qso_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Validates the flat coefficients `p[(i*m + j)*m + k]` (length `m^3`).
///
/// # Safety
/// `p` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qso_tensor_new(
    m: usize,
    p: *const f64,
    len: usize,
    normalize: bool,
    out: *mut *mut QsoTensor,
) -> QsoStatus {
    guard(|| {
        let p = slice(p, len, "p")?;
        give_tensor(Tensor::validate(m, p.to_vec(), mode(normalize))?, out)
    })
}

/// Parses a tensor or family-spec JSON document.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qso_tensor_from_json(
    json: *const c_char,
    normalize: bool,
    out: *mut *mut QsoTensor,
) -> QsoStatus {
    guard(|| give_tensor(formats::parse_operator(text(json)?, mode(normalize))?, out))
}

/// Deterministic JSON of the tensor; free with [`qso_string_free`].
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qso_tensor_to_json(t: *const QsoTensor, out: *mut *mut c_char) -> QsoStatus {
    guard(|| {
        let t = deref(t, "tensor")?;
        give_string(formats::to_canonical_string(&formats::tensor_value(&t.0)), out)
    })
}

/// # Safety
/// `t` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qso_tensor_free(t: *mut QsoTensor) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of types `m`, or 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qso_tensor_dim(t: *const QsoTensor) -> usize {
    t.as_ref().map_or(0, |t| t.0.dim())
}

/// `P[i][j][k]`, 0-based.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qso_tensor_get(t: *const QsoTensor, i: usize, j: usize, k: usize, out: *mut f64) -> QsoStatus {
    guard(|| {
        let t = deref(t, "tensor")?;
        let m = t.0.dim();
        if i >= m || j >= m || k >= m {
            return Err(Failure(
                QsoStatus::InvalidArgument,
                format!("index ({i},{j},{k}) out of range for m = {m}"),
            ));
        }
        write_out(out, t.0.get(i, j, k), "out")
    })
}

/// `V(x)` written to `out` (capacity `out_len >= m`).
///
/// # Safety
/// `x` must point to `len` doubles and `out` to `out_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qso_tensor_apply(
    t: *const QsoTensor,
    x: *const f64,
    len: usize,
    out: *mut f64,
    out_len: usize,
) -> QsoStatus {
    guard(|| {
        let t = deref(t, "tensor")?;
        let x = SimplexPoint::new(slice(x, len, "x")?.to_vec())?;
        copy_out(t.0.apply(&x)?.coords(), out, out_len)
    })
}

/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qso_is_volterra(t: *const QsoTensor, out: *mut bool) -> QsoStatus {
    guard(|| write_out(out, qso_core::is_volterra(&deref(t, "tensor")?.0), "out"))
}

/// Decides `V(x) ≺ x` on the vertices and edge midpoints.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qso_volterra_certificate(t: *const QsoTensor, out: *mut bool) -> QsoStatus {
    guard(|| write_out(out, qso_core::volterra_certificate(&deref(t, "tensor")?.0), "out"))
}

/// Skew-symmetric canonical matrix, row-major `a[k*m + i]`.
///
/// # Safety
/// `t` must be a live handle; `out` must hold `out_len >= m*m` doubles.
#[no_mangle]
pub unsafe extern "C" fn qso_to_canonical(t: *const QsoTensor, out: *mut f64, out_len: usize) -> QsoStatus {
    guard(|| {
        let a = qso_core::to_canonical(&deref(t, "tensor")?.0)?;
        let flat: Vec<f64> = a.rows().concat();
        copy_out(&flat, out, out_len)
    })
}

/// Volterra operator of a skew-symmetric matrix given row-major.
///
/// # Safety
/// `a` must point to `m*m` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qso_from_canonical(m: usize, a: *const f64, out: *mut *mut QsoTensor) -> QsoStatus {
    guard(|| {
        let len = m
            .checked_mul(m)
            .ok_or_else(|| Failure(QsoStatus::InvalidArgument, "m too large".into()))?;
        let a = SkewMatrix::new(m, slice(a, len, "a")?.to_vec())?;
        give_tensor(qso_core::from_canonical(&a), out)
    })
}

/// Family member on the 2-simplex.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qso_op_family(spec: QsoOpSpec, out: *mut *mut QsoTensor) -> QsoStatus {
    guard(|| {
        let spec = OpFamilySpec::new(spec.family, spec.alpha, spec.beta, spec.gamma)?;
        give_tensor(qso_core::op_family(&spec)?, out)
    })
}

/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qso_is_orthogonality_preserving(t: *const QsoTensor, out: *mut bool) -> QsoStatus {
    guard(|| {
        let flag = qso_core::is_orthogonality_preserving(&deref(t, "tensor")?.0)?;
        write_out(out, flag, "out")
    })
}

/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qso_classify_op(t: *const QsoTensor, out: *mut QsoOpSpec) -> QsoStatus {
    guard(|| {
        let s = qso_core::classify_op(&deref(t, "tensor")?.0)?;
        write_out(
            out,
            QsoOpSpec {
                family: s.family,
                alpha: s.alpha,
                beta: s.beta,
                gamma: s.gamma,
            },
            "out",
        )
    })
}

/// Conjugate by the permutation with 1-based images `perm[0..len]`.
///
/// # Safety
/// `perm` must point to `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qso_conjugate(
    t: *const QsoTensor,
    perm: *const usize,
    len: usize,
    out: *mut *mut QsoTensor,
) -> QsoStatus {
    guard(|| {
        let t = deref(t, "tensor")?;
        if perm.is_null() && len > 0 {
            return Err(null("perm"));
        }
        let images = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(perm, len)
        };
        let pi = Permutation::from_one_based(images)?;
        give_tensor(qso_core::conjugate(&t.0, &pi)?, out)
    })
}

/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qso_associator_residual(t: *const QsoTensor, out: *mut f64) -> QsoStatus {
    guard(|| write_out(out, qso_core::associator_residual(&deref(t, "tensor")?.0), "out"))
}

/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qso_is_associative(t: *const QsoTensor, out: *mut bool) -> QsoStatus {
    guard(|| write_out(out, qso_core::is_associative(&deref(t, "tensor")?.0), "out"))
}

/// The seven reduced conditions for family 2, written to `out[0..7]`.
///
/// # Safety
/// `out` must hold `out_len >= 7` doubles.
#[no_mangle]
pub unsafe extern "C" fn qso_v2_condition_system(
    alpha: f64,
    beta: f64,
    gamma: f64,
    out: *mut f64,
    out_len: usize,
) -> QsoStatus {
    guard(|| copy_out(&qso_core::v2_condition_system(alpha, beta, gamma), out, out_len))
}

/// Iterates `V` from `x0`.
///
/// # Safety
/// `x0` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qso_iterate(
    t: *const QsoTensor,
    x0: *const f64,
    len: usize,
    max_iter: usize,
    tol: f64,
    out: *mut *mut QsoTrajectory,
) -> QsoStatus {
    guard(|| {
        let t = deref(t, "tensor")?;
        let x0 = SimplexPoint::new(slice(x0, len, "x0")?.to_vec())?;
        let traj = qso_core::iterate(&t.0, &x0, max_iter, tol)?;
        write_out(out, Box::into_raw(Box::new(QsoTrajectory(traj))), "out")
    })
}

/// # Safety
/// `tr` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qso_trajectory_free(tr: *mut QsoTrajectory) {
    if !tr.is_null() {
        drop(Box::from_raw(tr));
    }
}

/// Number of stored points (iterations + 1), or 0 for null.
///
/// # Safety
/// `tr` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qso_trajectory_len(tr: *const QsoTrajectory) -> usize {
    tr.as_ref().map_or(0, |tr| tr.0.points.len())
}

/// # Safety
/// `tr` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qso_trajectory_dim(tr: *const QsoTrajectory) -> usize {
    tr.as_ref().map_or(0, |tr| tr.0.points[0].dim())
}

/// Point `index` (0 is the initial state).
///
/// # Safety
/// `tr` must be a live handle; `out` must hold `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qso_trajectory_point(
    tr: *const QsoTrajectory,
    index: usize,
    out: *mut f64,
    out_len: usize,
) -> QsoStatus {
    guard(|| {
        let tr = deref(tr, "trajectory")?;
        let p = tr.0.points.get(index).ok_or_else(|| {
            Failure(
                QsoStatus::InvalidArgument,
                format!("index {index} beyond {} points", tr.0.points.len()),
            )
        })?;
        copy_out(p.coords(), out, out_len)
    })
}

/// Final status; `cycle_len` receives the period for cycles and 0 otherwise.
///
/// # Safety
/// `tr` must be a live handle; `kind` must be writable; `cycle_len` may be null.
#[no_mangle]
pub unsafe extern "C" fn qso_trajectory_status(
    tr: *const QsoTrajectory,
    kind: *mut QsoTrajectoryKind,
    cycle_len: *mut usize,
) -> QsoStatus {
    guard(|| {
        let tr = deref(tr, "trajectory")?;
        let (k, len) = match tr.0.status {
            TrajectoryStatus::Converged => (QsoTrajectoryKind::Converged, 0),
            TrajectoryStatus::Cycle(n) => (QsoTrajectoryKind::Cycle, n),
            TrajectoryStatus::BudgetExhausted => (QsoTrajectoryKind::BudgetExhausted, 0),
        };
        write_out(kind, k, "kind")?;
        if !cycle_len.is_null() {
            cycle_len.write(len);
        }
        Ok(())
    })
}

/// CSV export (`iter,x1..xm,status`); free with [`qso_string_free`].
///
/// # Safety
/// `tr` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qso_trajectory_to_csv(tr: *const QsoTrajectory, out: *mut *mut c_char) -> QsoStatus {
    guard(|| {
        let tr = deref(tr, "trajectory")?;
        let mut buf = Vec::new();
        tr.0.write_csv(&mut buf)
            .map_err(|e| Failure(QsoStatus::Format, e.to_string()))?;
        give_string(String::from_utf8(buf).expect("CSV is ASCII"), out)
    })
}
