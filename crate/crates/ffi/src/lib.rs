//! C ABI over `kernel-forge`.
//!
//! Objects cross the boundary as opaque handles (`KfKernel`, `KfMatrix`,
//! `KfEnsemble`) created by `kf_*_new`-style calls and released with the
//! matching `kf_*_free`. Every fallible call returns a `KfStatus`; on
//! failure `kf_last_error()` gives a message for the calling thread.
//! Matrices are exchanged row-major as separate real and imaginary arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kernel_forge::factorize::{self, ALT_CHOLESKY_MAX_ITER, ALT_CHOLESKY_TOL};
use kernel_forge::gpsim::{self, FactorizationPair, PathEnsemble};
use kernel_forge::kernels::{self, GramMatrix, KernelSpec, Point};
use kernel_forge::matrix::CMatrix;
use kernel_forge::measures::MeasureModel;
use kernel_forge::Error;
use num_complex::Complex64;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfDomain = 3,
    DimensionMismatch = 4,
    NotPositiveDefinite = 5,
    Singular = 6,
    NotConverged = 7,
    Parse = 8,
    Io = 9,
    Panic = 10,
}

impl From<&Error> for KfStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DomainMismatch { .. } | Error::OutOfDomain(_) | Error::OutOfRange(_) => {
                KfStatus::OutOfDomain
            }
            Error::DimensionMismatch { .. } => KfStatus::DimensionMismatch,
            Error::NotPositiveDefinite { .. } => KfStatus::NotPositiveDefinite,
            Error::Singular { .. } => KfStatus::Singular,
            Error::Parse(_) | Error::Json(_) | Error::Csv(_) => KfStatus::Parse,
            Error::Io(_) => KfStatus::Io,
            _ => KfStatus::InvalidArgument,
        }
    }
}

/// A kernel family with its parameters.
pub struct KfKernel(KernelSpec);

/// A dense complex matrix.
pub struct KfMatrix(CMatrix);

/// Sample paths on a grid, one row per path.
pub struct KfEnsemble(PathEnsemble);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(KfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(KfStatus::from(&e), e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn guard(f: impl FnOnce() -> Outcome) -> KfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KfStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            KfStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(KfStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(KfStatus::InvalidArgument, msg.into())
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn complex_points(re: &[f64], im: &[f64]) -> Vec<Point> {
    re.iter()
        .zip(im)
        .map(|(&a, &b)| Point::Disk(Complex64::new(a, b)))
        .collect()
}

fn hermitian(m: &KfMatrix) -> Result<GramMatrix, Failure> {
    let m = &m.0;
    if m.rows() != m.cols() {
        return Err(Failure(KfStatus::DimensionMismatch, "matrix is not square".into()));
    }
    Ok(GramMatrix::from_parts(m.clone(), Vec::new()))
}

/// Message for the most recent failure on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn kf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn kf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a kernel by family name: `brownian-min`, `brownian-line`,
/// `szego`, `cantor-product`, `shannon`, `drury-arveson`, `overlap`,
/// `green-1d`. `param` is the number of factors for `cantor-product`, the
/// dimension for `drury-arveson` and the partition depth (Lebesgue measure)
/// for `overlap`; it is ignored otherwise. `scale` multiplies the kernel.
///
/// # Safety
/// `family` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kf_kernel_new(
    family: *const c_char,
    param: u32,
    scale: f64,
    out: *mut *mut KfKernel,
) -> KfStatus {
    guard(|| {
        if family.is_null() {
            return Err(null("family"));
        }
        let name = CStr::from_ptr(family)
            .to_str()
            .map_err(|_| invalid("family is not UTF-8"))?;
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(invalid(format!("scale must be positive, got {scale}")));
        }
        let spec = match name {
            "brownian-min" => KernelSpec::brownian_min(),
            "brownian-line" => KernelSpec::brownian_line(),
            "szego" => KernelSpec::szego(),
            "cantor-product" => KernelSpec::cantor_product(param)?,
            "shannon" => KernelSpec::shannon(),
            "drury-arveson" => KernelSpec::drury_arveson(param as usize),
            "overlap" => KernelSpec::overlap(MeasureModel::lebesgue(param)),
            "green-1d" => KernelSpec::green_1d(),
            other => return Err(invalid(format!("unknown kernel family '{other}'"))),
        };
        put(out, KfKernel(spec.scaled(scale)))
    })
}

/// # Safety
/// `k` must come from `kf_kernel_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kf_kernel_free(k: *mut KfKernel) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// `K(x, y)` for kernels on the real line or the unit interval.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kf_kernel_eval_real(
    k: *const KfKernel,
    x: f64,
    y: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> KfStatus {
    guard(|| {
        let k = deref(k, "kernel")?;
        let v = kernels::eval_kernel(&k.0, &Point::Real(x), &Point::Real(y))?;
        *slice_mut(out_re, 1, "out_re")?.first_mut().unwrap() = v.re;
        *slice_mut(out_im, 1, "out_im")?.first_mut().unwrap() = v.im;
        Ok(())
    })
}

/// `K(z, w)` for kernels on the unit disk.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kf_kernel_eval_complex(
    k: *const KfKernel,
    z_re: f64,
    z_im: f64,
    w_re: f64,
    w_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> KfStatus {
    guard(|| {
        let k = deref(k, "kernel")?;
        let v = kernels::eval_kernel(
            &k.0,
            &Point::Disk(Complex64::new(z_re, z_im)),
            &Point::Disk(Complex64::new(w_re, w_im)),
        )?;
        *slice_mut(out_re, 1, "out_re")?.first_mut().unwrap() = v.re;
        *slice_mut(out_im, 1, "out_im")?.first_mut().unwrap() = v.im;
        Ok(())
    })
}

/// Gram matrix on `n` real points.
///
/// # Safety
/// `xs` must hold `n` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kf_gram_real(
    k: *const KfKernel,
    xs: *const f64,
    n: usize,
    out: *mut *mut KfMatrix,
) -> KfStatus {
    guard(|| {
        let k = deref(k, "kernel")?;
        let pts = kernels::real_points(slice(xs, n, "xs")?);
        let g = kernels::gram(&k.0, &pts)?;
        put(out, KfMatrix(g.entries().clone()))
    })
}

/// Gram matrix on `n` points of the complex disk.
///
/// # Safety
/// `re` and `im` must hold `n` values each; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kf_gram_complex(
    k: *const KfKernel,
    re: *const f64,
    im: *const f64,
    n: usize,
    out: *mut *mut KfMatrix,
) -> KfStatus {
    guard(|| {
        let k = deref(k, "kernel")?;
        let pts = complex_points(slice(re, n, "re")?, slice(im, n, "im")?);
        let g = kernels::gram(&k.0, &pts)?;
        put(out, KfMatrix(g.entries().clone()))
    })
}

/// Matrix from row-major parts. `im` may be null for a real matrix.
///
/// # Safety
/// `re` (and `im` when non-null) must hold `rows * cols` values.
#[no_mangle]
pub unsafe extern "C" fn kf_matrix_new(
    rows: usize,
    cols: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut KfMatrix,
) -> KfStatus {
    guard(|| {
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| invalid("matrix size overflows"))?;
        let re = slice(re, len, "re")?;
        let data = if im.is_null() {
            re.iter().map(|&a| Complex64::new(a, 0.0)).collect()
        } else {
            let im = slice(im, len, "im")?;
            re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect()
        };
        put(out, KfMatrix(CMatrix::from_vec(rows, cols, data)))
    })
}

/// # Safety
/// `m` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kf_matrix_free(m: *mut KfMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a valid handle or null (giving 0).
#[no_mangle]
pub unsafe extern "C" fn kf_matrix_rows(m: *const KfMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rows())
}

/// # Safety
/// `m` must be a valid handle or null (giving 0).
#[no_mangle]
pub unsafe extern "C" fn kf_matrix_cols(m: *const KfMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.cols())
}

/// Copies the entries row-major into `re` and `im` (`im` may be null).
///
/// # Safety
/// The buffers must hold `len` values, with `len` equal to rows × cols.
#[no_mangle]
pub unsafe extern "C" fn kf_matrix_copy(
    m: *const KfMatrix,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> KfStatus {
    guard(|| {
        let m = deref(m, "matrix")?;
        let data = m.0.as_slice();
        if len != data.len() {
            return Err(Failure(
                KfStatus::DimensionMismatch,
                format!("buffer holds {len} entries, matrix has {}", data.len()),
            ));
        }
        for (o, z) in slice_mut(re, len, "re")?.iter_mut().zip(data) {
            *o = z.re;
        }
        if !im.is_null() {
            for (o, z) in slice_mut(im, len, "im")?.iter_mut().zip(data) {
                *o = z.im;
            }
        }
        Ok(())
    })
}

/// Sampling factor `B` of a Hermitian positive definite matrix, with
/// `conj(B) Bᵀ = G`; for real input `B` is the lower Cholesky factor.
///
/// # Safety
/// Handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kf_cholesky(
    m: *const KfMatrix,
    ridge: f64,
    out: *mut *mut KfMatrix,
) -> KfStatus {
    guard(|| {
        let g = hermitian(deref(m, "matrix")?)?;
        let f = factorize::cholesky(&g, ridge, 1e-12)?;
        put(out, KfMatrix(f.sampling_factor()))
    })
}

/// Inverse of a Hermitian positive definite matrix.
///
/// # Safety
/// Handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kf_inverse(m: *const KfMatrix, out: *mut *mut KfMatrix) -> KfStatus {
    guard(|| {
        let g = hermitian(deref(m, "matrix")?)?;
        put(out, KfMatrix(factorize::inverse_gram(&g)?))
    })
}

/// Eigenvalue methods for `kf_eigenvalues`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KfEigMethod {
    Jacobi = 0,
    AltCholesky = 1,
}

/// Eigenvalues in descending order into `values` (length n). Returns
/// `NotConverged` when the iteration cap is hit; the values written are the
/// last iterate.
///
/// # Safety
/// `values` must hold `n` values, where the matrix is n × n.
#[no_mangle]
pub unsafe extern "C" fn kf_eigenvalues(
    m: *const KfMatrix,
    method: KfEigMethod,
    values: *mut f64,
    n: usize,
) -> KfStatus {
    guard(|| {
        let g = hermitian(deref(m, "matrix")?)?;
        if n != g.n() {
            return Err(Failure(
                KfStatus::DimensionMismatch,
                format!("buffer holds {n} values, matrix is {0}x{0}", g.n()),
            ));
        }
        let r = match method {
            KfEigMethod::Jacobi => factorize::jacobi_eigs(&g, 1e-15),
            KfEigMethod::AltCholesky => {
                factorize::alt_cholesky_eigs(&g, ALT_CHOLESKY_MAX_ITER, ALT_CHOLESKY_TOL)?
            }
        };
        slice_mut(values, n, "values")?.copy_from_slice(&r.eigenvalues);
        if !r.converged {
            return Err(Failure(
                KfStatus::NotConverged,
                format!("no convergence after {} iterations", r.iterations),
            ));
        }
        Ok(())
    })
}

/// `n_paths` draws of the Gaussian vector with covariance `m`.
///
/// # Safety
/// Handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kf_sample_gaussian(
    m: *const KfMatrix,
    n_paths: usize,
    seed: u64,
    out: *mut *mut KfEnsemble,
) -> KfStatus {
    guard(|| {
        let g = hermitian(deref(m, "matrix")?)?;
        put(out, KfEnsemble(gpsim::sample_gaussian_vector(&g, n_paths, seed)?))
    })
}

/// Built-in processes for `kf_simulate`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KfExample {
    /// Brownian motion on [0, 1]; the grid is real.
    Brownian = 1,
    /// Hardy-space process on the disk; the grid is complex.
    Hardy = 2,
    /// Cantor-product process on the disk; the grid is complex.
    Cantor = 3,
}

/// Paths of a built-in process by discretized stochastic integration at
/// dyadic `resolution`. `grid_im` may be null for the Brownian example.
/// `truncation` is the number of Cantor-product factors.
///
/// # Safety
/// `grid_re` (and `grid_im` when non-null) must hold `grid_len` values.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn kf_simulate(
    example: KfExample,
    truncation: u32,
    resolution: u32,
    grid_re: *const f64,
    grid_im: *const f64,
    grid_len: usize,
    n_paths: usize,
    seed: u64,
    out: *mut *mut KfEnsemble,
) -> KfStatus {
    guard(|| {
        let re = slice(grid_re, grid_len, "grid_re")?;
        let (pair, grid) = match example {
            KfExample::Brownian => (FactorizationPair::brownian(), kernels::real_points(re)),
            KfExample::Hardy | KfExample::Cantor => {
                let zeros = vec![0.0; grid_len];
                let im = if grid_im.is_null() {
                    &zeros[..]
                } else {
                    slice(grid_im, grid_len, "grid_im")?
                };
                let pair = if example == KfExample::Hardy {
                    FactorizationPair::hardy()
                } else {
                    FactorizationPair::cantor(truncation)
                };
                (pair, complex_points(re, im))
            }
        };
        put(
            out,
            KfEnsemble(gpsim::ito_synthesize(&pair, resolution, &grid, n_paths, seed)?),
        )
    })
}

/// # Safety
/// `e` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kf_ensemble_free(e: *mut KfEnsemble) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// # Safety
/// `e` must be a valid handle or null (giving 0).
#[no_mangle]
pub unsafe extern "C" fn kf_ensemble_paths(e: *const KfEnsemble) -> usize {
    e.as_ref().map_or(0, |e| e.0.n_paths())
}

/// # Safety
/// `e` must be a valid handle or null (giving 0).
#[no_mangle]
pub unsafe extern "C" fn kf_ensemble_grid_len(e: *const KfEnsemble) -> usize {
    e.as_ref().map_or(0, |e| e.0.grid.len())
}

/// The paths as a `paths × grid_len` matrix.
///
/// # Safety
/// Handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kf_ensemble_values(
    e: *const KfEnsemble,
    out: *mut *mut KfMatrix,
) -> KfStatus {
    guard(|| {
        let e = deref(e, "ensemble")?;
        put(out, KfMatrix(e.0.paths.clone()))
    })
}

/// Empirical covariance `(1/P) Σ conj(V_x) V_y` as a grid × grid matrix.
///
/// # Safety
/// Handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kf_ensemble_covariance(
    e: *const KfEnsemble,
    out: *mut *mut KfMatrix,
) -> KfStatus {
    guard(|| {
        let e = deref(e, "ensemble")?;
        put(out, KfMatrix(gpsim::empirical_covariance(&e.0)?))
    })
}
