//! C ABI for the luvar library.
//!
//! Matrices and packed factorizations are opaque handles created and freed
//! through this API; every function returns a [`LuvarStatus`] and writes
//! results through out-pointers. Handles are not thread-safe to mutate
//! concurrently; values are plain data and may be moved across threads.
//!
//! Pointer arguments must be valid for the advertised lengths and null only
//! where documented. Passing a freed or foreign handle is undefined
//! behavior, as with any C library.

use std::ffi::{c_char, CStr};
use std::path::Path;

use luvar::error::Error;
use luvar::io;
use luvar::matrix::DenseMatrix;
use luvar::nopiv::{lu_nopiv, NopivVariant};
use luvar::piv::{lu_piv, solve, Mode, PackedLu, PivVariant};
use luvar::pivot::PivotVector;
use luvar::variant::VariantId;
use luvar::{generate, verify};

/// Status code returned by every API call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LuvarStatus {
    Ok = 0,
    /// Operand dimensions are incompatible.
    ShapeError = 1,
    /// An index, split point, or pivot offset is out of range.
    BoundsError = 2,
    /// An argument is outside the operation's domain.
    DomainError = 3,
    /// Zero pivot or zero triangular diagonal; see the step out-parameter.
    SingularError = 4,
    /// Pivot column exactly zero; the input columns are linearly dependent.
    RankDeficientError = 5,
    ParseError = 6,
    IoError = 7,
    /// A required pointer argument was null.
    NullPointer = 8,
    /// A variant or parameter value outside the documented range.
    InvalidArgument = 9,
}

/// Unblocked no-pivot variant selector.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LuvarNopivVariant {
    Nopiv1 = 1,
    Nopiv2 = 2,
    Nopiv3 = 3,
    Nopiv4 = 4,
    Nopiv5 = 5,
}

/// Pivoted variant selector; pair with a block size (`0` = unblocked).
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LuvarPivVariant {
    Piv3a = 0,
    Piv3b = 1,
    Piv4 = 2,
    Piv5 = 3,
}

/// Backward-error measurements for a completed factorization.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct LuvarBackwardError {
    pub componentwise_c: f64,
    pub normwise_residual: f64,
    pub growth_factor: f64,
    pub epsilon: f64,
}

/// Opaque dense matrix handle (column-major f64 storage).
pub struct LuvarMatrix(DenseMatrix);

/// Opaque packed factorization handle (L\U plus pivot vector).
pub struct LuvarPackedLu(PackedLu);

fn status_of(err: &Error) -> LuvarStatus {
    match err {
        Error::Shape(_) => LuvarStatus::ShapeError,
        Error::Bounds(_) => LuvarStatus::BoundsError,
        Error::Domain(_) => LuvarStatus::DomainError,
        Error::Singular { .. } => LuvarStatus::SingularError,
        Error::RankDeficient { .. } => LuvarStatus::RankDeficientError,
        Error::Parse(_) => LuvarStatus::ParseError,
        Error::Io(_) => LuvarStatus::IoError,
    }
}

fn fail(err: &Error, out_step: *mut usize) -> LuvarStatus {
    if !out_step.is_null() {
        if let Error::Singular { step } | Error::RankDeficient { step } = err {
            unsafe { *out_step = *step };
        }
    }
    status_of(err)
}

fn nopiv_variant(v: LuvarNopivVariant) -> NopivVariant {
    match v {
        LuvarNopivVariant::Nopiv1 => NopivVariant::V1,
        LuvarNopivVariant::Nopiv2 => NopivVariant::V2,
        LuvarNopivVariant::Nopiv3 => NopivVariant::V3,
        LuvarNopivVariant::Nopiv4 => NopivVariant::V4,
        LuvarNopivVariant::Nopiv5 => NopivVariant::V5,
    }
}

fn piv_variant(v: LuvarPivVariant) -> PivVariant {
    match v {
        LuvarPivVariant::Piv3a => PivVariant::V3a,
        LuvarPivVariant::Piv3b => PivVariant::V3b,
        LuvarPivVariant::Piv4 => PivVariant::V4,
        LuvarPivVariant::Piv5 => PivVariant::V5,
    }
}

fn mode_of(nb: usize) -> Mode {
    if nb == 0 {
        Mode::Unblocked
    } else {
        Mode::Blocked(nb)
    }
}

unsafe fn path_arg<'a>(path: *const c_char) -> Result<&'a Path, LuvarStatus> {
    if path.is_null() {
        return Err(LuvarStatus::NullPointer);
    }
    match CStr::from_ptr(path).to_str() {
        Ok(s) => Ok(Path::new(s)),
        Err(_) => Err(LuvarStatus::InvalidArgument),
    }
}

unsafe fn give_matrix(out: *mut *mut LuvarMatrix, m: DenseMatrix) -> LuvarStatus {
    if out.is_null() {
        return LuvarStatus::NullPointer;
    }
    *out = Box::into_raw(Box::new(LuvarMatrix(m)));
    LuvarStatus::Ok
}

/// Human-readable description of a status code (static storage).
#[no_mangle]
pub extern "C" fn luvar_status_message(status: LuvarStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        LuvarStatus::Ok => b"ok\0",
        LuvarStatus::ShapeError => b"shape mismatch\0",
        LuvarStatus::BoundsError => b"index out of bounds\0",
        LuvarStatus::DomainError => b"argument outside domain\0",
        LuvarStatus::SingularError => b"singular pivot\0",
        LuvarStatus::RankDeficientError => b"rank deficiency detected\0",
        LuvarStatus::ParseError => b"parse error\0",
        LuvarStatus::IoError => b"i/o error\0",
        LuvarStatus::NullPointer => b"null pointer argument\0",
        LuvarStatus::InvalidArgument => b"invalid argument\0",
    };
    msg.as_ptr() as *const c_char
}

/// Allocates a zero matrix.
///
/// # Safety
/// `out` must be a valid pointer; the handle must be released with
/// `luvar_matrix_free`.
#[no_mangle]
pub unsafe extern "C" fn luvar_matrix_zeros(
    rows: usize,
    cols: usize,
    out: *mut *mut LuvarMatrix,
) -> LuvarStatus {
    give_matrix(out, DenseMatrix::zeros(rows, cols))
}

/// Allocates an identity matrix.
///
/// # Safety
/// As `luvar_matrix_zeros`.
#[no_mangle]
pub unsafe extern "C" fn luvar_matrix_identity(
    n: usize,
    out: *mut *mut LuvarMatrix,
) -> LuvarStatus {
    give_matrix(out, DenseMatrix::identity(n))
}

/// Allocates a matrix from `rows * cols` column-major values.
///
/// # Safety
/// `data` must point to at least `rows * cols` doubles.
#[no_mangle]
pub unsafe extern "C" fn luvar_matrix_from_data(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut LuvarMatrix,
) -> LuvarStatus {
    if data.is_null() && rows * cols > 0 {
        return LuvarStatus::NullPointer;
    }
    let values = if rows * cols == 0 {
        Vec::new()
    } else {
        std::slice::from_raw_parts(data, rows * cols).to_vec()
    };
    match DenseMatrix::from_col_major(rows, cols, values) {
        Ok(m) => give_matrix(out, m),
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `m` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn luvar_matrix_clone(
    m: *const LuvarMatrix,
    out: *mut *mut LuvarMatrix,
) -> LuvarStatus {
    if m.is_null() {
        return LuvarStatus::NullPointer;
    }
    give_matrix(out, (*m).0.clone())
}

/// Releases a matrix handle; null is ignored.
///
/// # Safety
/// `m` must be null or a handle obtained from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn luvar_matrix_free(m: *mut LuvarMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Row count; 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn luvar_matrix_rows(m: *const LuvarMatrix) -> usize {
    if m.is_null() {
        0
    } else {
        (*m).0.rows()
    }
}

/// Column count; 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn luvar_matrix_cols(m: *const LuvarMatrix) -> usize {
    if m.is_null() {
        0
    } else {
        (*m).0.cols()
    }
}

/// Reads element `(i, j)`.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn luvar_matrix_get(
    m: *const LuvarMatrix,
    i: usize,
    j: usize,
    out: *mut f64,
) -> LuvarStatus {
    if m.is_null() || out.is_null() {
        return LuvarStatus::NullPointer;
    }
    let mat = &(*m).0;
    if i >= mat.rows() || j >= mat.cols() {
        return LuvarStatus::BoundsError;
    }
    *out = mat.get(i, j);
    LuvarStatus::Ok
}

/// Writes element `(i, j)`.
///
/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn luvar_matrix_set(
    m: *mut LuvarMatrix,
    i: usize,
    j: usize,
    value: f64,
) -> LuvarStatus {
    if m.is_null() {
        return LuvarStatus::NullPointer;
    }
    let mat = &mut (*m).0;
    if i >= mat.rows() || j >= mat.cols() {
        return LuvarStatus::BoundsError;
    }
    mat.set(i, j, value);
    LuvarStatus::Ok
}

/// Reads a matrix from the text format (`rows cols` header then row lines).
///
/// # Safety
/// `path` must be a NUL-terminated UTF-8 string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn luvar_matrix_read_file(
    path: *const c_char,
    out: *mut *mut LuvarMatrix,
) -> LuvarStatus {
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match io::read_matrix_file(path) {
        Ok(m) => give_matrix(out, m),
        Err(e) => status_of(&e),
    }
}

/// Writes a matrix in the text format.
///
/// # Safety
/// `m` must be a live handle; `path` a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn luvar_matrix_write_file(
    m: *const LuvarMatrix,
    path: *const c_char,
) -> LuvarStatus {
    if m.is_null() {
        return LuvarStatus::NullPointer;
    }
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match io::write_matrix_file(path, &(*m).0) {
        Ok(()) => LuvarStatus::Ok,
        Err(e) => status_of(&e),
    }
}

/// Seeded uniform [-1, 1] matrix; equal seeds give identical contents.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn luvar_gen_random(
    seed: u64,
    rows: usize,
    cols: usize,
    out: *mut *mut LuvarMatrix,
) -> LuvarStatus {
    give_matrix(out, generate::random(seed, rows, cols))
}

/// The element-growth matrix (unit diagonal, -1 below, ones column last).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn luvar_gen_growth(
    rows: usize,
    cols: usize,
    out: *mut *mut LuvarMatrix,
) -> LuvarStatus {
    give_matrix(out, generate::growth(rows, cols))
}

/// Random matrix whose leading `k x k` block is exactly singular.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn luvar_gen_singular_minor(
    seed: u64,
    rows: usize,
    cols: usize,
    k: usize,
    out: *mut *mut LuvarMatrix,
) -> LuvarStatus {
    match generate::singular_minor(seed, rows, cols, k) {
        Ok(m) => give_matrix(out, m),
        Err(e) => status_of(&e),
    }
}

/// Random matrix whose column `k` depends exactly on earlier columns.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn luvar_gen_rankdef(
    seed: u64,
    rows: usize,
    cols: usize,
    k: usize,
    out: *mut *mut LuvarMatrix,
) -> LuvarStatus {
    match generate::rankdef(seed, rows, cols, k) {
        Ok(m) => give_matrix(out, m),
        Err(e) => status_of(&e),
    }
}

/// Factors a square matrix in place without pivoting (`L\U` packed).
///
/// On `SingularError`, `out_step` (nullable) receives the failing step.
///
/// # Safety
/// `m` must be a live handle; `out_step` null or valid.
#[no_mangle]
pub unsafe extern "C" fn luvar_lu_nopiv(
    m: *mut LuvarMatrix,
    variant: LuvarNopivVariant,
    out_step: *mut usize,
) -> LuvarStatus {
    if m.is_null() {
        return LuvarStatus::NullPointer;
    }
    match lu_nopiv(&mut (*m).0, nopiv_variant(variant), None) {
        Ok(()) => LuvarStatus::Ok,
        Err(e) => fail(&e, out_step),
    }
}

/// Factors a copy of `a` with partial pivoting; `nb = 0` selects the
/// unblocked algorithm, `nb >= 1` the blocked one with that panel width.
///
/// On `RankDeficientError`, `out_step` (nullable) receives the failing
/// column.
///
/// # Safety
/// `a` must be a live handle; `out` valid; `out_step` null or valid. The
/// returned handle must be released with `luvar_packed_free`.
#[no_mangle]
pub unsafe extern "C" fn luvar_lu_piv(
    a: *const LuvarMatrix,
    variant: LuvarPivVariant,
    nb: usize,
    out: *mut *mut LuvarPackedLu,
    out_step: *mut usize,
) -> LuvarStatus {
    if a.is_null() || out.is_null() {
        return LuvarStatus::NullPointer;
    }
    let mut work = (*a).0.clone();
    match lu_piv(&mut work, piv_variant(variant), mode_of(nb), None) {
        Ok(pivots) => match PackedLu::from_parts(work, pivots) {
            Ok(lu) => {
                *out = Box::into_raw(Box::new(LuvarPackedLu(lu)));
                LuvarStatus::Ok
            }
            Err(e) => status_of(&e),
        },
        Err(e) => fail(&e, out_step),
    }
}

/// Releases a packed factorization handle; null is ignored.
///
/// # Safety
/// `lu` must be null or a handle obtained from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn luvar_packed_free(lu: *mut LuvarPackedLu) {
    if !lu.is_null() {
        drop(Box::from_raw(lu));
    }
}

/// # Safety
/// `lu` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn luvar_packed_rows(lu: *const LuvarPackedLu) -> usize {
    if lu.is_null() {
        0
    } else {
        (*lu).0.rows()
    }
}

/// # Safety
/// `lu` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn luvar_packed_cols(lu: *const LuvarPackedLu) -> usize {
    if lu.is_null() {
        0
    } else {
        (*lu).0.cols()
    }
}

/// Reads packed factor element `(i, j)` (strict lower = multipliers, upper =
/// U, unit diagonal of L implicit).
///
/// # Safety
/// `lu` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn luvar_packed_factor_get(
    lu: *const LuvarPackedLu,
    i: usize,
    j: usize,
    out: *mut f64,
) -> LuvarStatus {
    if lu.is_null() || out.is_null() {
        return LuvarStatus::NullPointer;
    }
    let f = (*lu).0.factors();
    if i >= f.rows() || j >= f.cols() {
        return LuvarStatus::BoundsError;
    }
    *out = f.get(i, j);
    LuvarStatus::Ok
}

/// Reads relative pivot offset `i` (row `i` was swapped with `i + offset`).
///
/// # Safety
/// `lu` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn luvar_packed_pivot_get(
    lu: *const LuvarPackedLu,
    i: usize,
    out: *mut usize,
) -> LuvarStatus {
    if lu.is_null() || out.is_null() {
        return LuvarStatus::NullPointer;
    }
    let p = (*lu).0.pivots();
    if i >= p.len() {
        return LuvarStatus::BoundsError;
    }
    *out = p.offsets()[i];
    LuvarStatus::Ok
}

/// Reads a packed factorization file (matrix, `---`, pivot vector).
///
/// # Safety
/// `path` must be a NUL-terminated UTF-8 string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn luvar_packed_read_file(
    path: *const c_char,
    out: *mut *mut LuvarPackedLu,
) -> LuvarStatus {
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    if out.is_null() {
        return LuvarStatus::NullPointer;
    }
    match io::read_packed_file(path) {
        Ok(lu) => {
            *out = Box::into_raw(Box::new(LuvarPackedLu(lu)));
            LuvarStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Writes a packed factorization file.
///
/// # Safety
/// `lu` must be a live handle; `path` a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn luvar_packed_write_file(
    lu: *const LuvarPackedLu,
    path: *const c_char,
) -> LuvarStatus {
    if lu.is_null() {
        return LuvarStatus::NullPointer;
    }
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match io::write_packed_file(path, &(*lu).0) {
        Ok(()) => LuvarStatus::Ok,
        Err(e) => status_of(&e),
    }
}

/// Solves `A x = b` from a square packed factorization.
///
/// # Safety
/// `b` and `x` must each point to `n` doubles, where `n` is the
/// factorization size.
#[no_mangle]
pub unsafe extern "C" fn luvar_solve(
    lu: *const LuvarPackedLu,
    b: *const f64,
    n: usize,
    x: *mut f64,
) -> LuvarStatus {
    if lu.is_null() || (b.is_null() && n > 0) || (x.is_null() && n > 0) {
        return LuvarStatus::NullPointer;
    }
    let rhs = std::slice::from_raw_parts(b, n);
    match solve(&(*lu).0, rhs) {
        Ok(sol) => {
            std::slice::from_raw_parts_mut(x, n).copy_from_slice(&sol);
            LuvarStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Checks the factorization postcondition against the original matrix.
///
/// `tol <= 0` selects the default `50 * n * eps * maxabs` tolerance. Each
/// out-pointer is nullable.
///
/// # Safety
/// `lu` and `a_hat` must be live handles; out-pointers null or valid.
#[no_mangle]
pub unsafe extern "C" fn luvar_check_postcondition(
    lu: *const LuvarPackedLu,
    a_hat: *const LuvarMatrix,
    tol: f64,
    out_residual: *mut f64,
    out_max_multiplier: *mut f64,
    out_passed: *mut bool,
) -> LuvarStatus {
    if lu.is_null() || a_hat.is_null() {
        return LuvarStatus::NullPointer;
    }
    let a = &(*a_hat).0;
    let tol = if tol > 0.0 {
        tol
    } else {
        verify::default_tolerance(a)
    };
    match verify::check_postcondition(&(*lu).0, a, tol) {
        Ok(report) => {
            if !out_residual.is_null() {
                *out_residual = report.conjunct_residuals["reconstruction"];
            }
            if !out_max_multiplier.is_null() {
                *out_max_multiplier = report.multiplier_bound.unwrap_or(0.0);
            }
            if !out_passed.is_null() {
                *out_passed = report.passed;
            }
            LuvarStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Componentwise backward-error measurement.
///
/// # Safety
/// `lu` and `a_hat` must be live handles; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn luvar_backward_error(
    lu: *const LuvarPackedLu,
    a_hat: *const LuvarMatrix,
    out: *mut LuvarBackwardError,
) -> LuvarStatus {
    if lu.is_null() || a_hat.is_null() || out.is_null() {
        return LuvarStatus::NullPointer;
    }
    match verify::backward_error(&(*lu).0, &(*a_hat).0) {
        Ok(r) => {
            *out = LuvarBackwardError {
                componentwise_c: r.componentwise_c,
                normwise_residual: r.normwise_residual,
                growth_factor: r.growth_factor,
                epsilon: r.epsilon,
            };
            LuvarStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Element growth of a no-pivot run over the input's largest magnitude.
///
/// # Safety
/// `a` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn luvar_growth_nopiv(
    a: *const LuvarMatrix,
    variant: LuvarNopivVariant,
    out: *mut f64,
) -> LuvarStatus {
    if a.is_null() || out.is_null() {
        return LuvarStatus::NullPointer;
    }
    match verify::growth_factor(&(*a).0, VariantId::Nopiv(nopiv_variant(variant))) {
        Ok(g) => {
            *out = g;
            LuvarStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Element growth of a pivoted run (`nb = 0` unblocked).
///
/// # Safety
/// `a` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn luvar_growth_piv(
    a: *const LuvarMatrix,
    variant: LuvarPivVariant,
    nb: usize,
    out: *mut f64,
) -> LuvarStatus {
    if a.is_null() || out.is_null() {
        return LuvarStatus::NullPointer;
    }
    match verify::growth_factor(&(*a).0, VariantId::Piv(piv_variant(variant), mode_of(nb))) {
        Ok(g) => {
            *out = g;
            LuvarStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Applies the packed pivots to a vector of length `target_rows`, forward
/// (`inverse = false`) or undoing them (`inverse = true`).
///
/// # Safety
/// `lu` must be a live handle; `data` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn luvar_packed_apply_pivots(
    lu: *const LuvarPackedLu,
    data: *mut f64,
    len: usize,
    inverse: bool,
) -> LuvarStatus {
    if lu.is_null() || (data.is_null() && len > 0) {
        return LuvarStatus::NullPointer;
    }
    let x = std::slice::from_raw_parts_mut(data, len);
    let pivots: &PivotVector = (*lu).0.pivots();
    let result = if inverse {
        pivots.apply_vec_inverse(x)
    } else {
        pivots.apply_vec_forward(x)
    };
    match result {
        Ok(()) => LuvarStatus::Ok,
        Err(e) => status_of(&e),
    }
}
