//! Cholesky factorization, inversion and eigenvalues of Gram matrices.
//!
//! Complex Hermitian Gram matrices go through the real embedding
//! `[[Re, -Im], [Im, Re]]`, so a single real Cholesky routine serves every
//! kernel. Eigenvalues of the embedding come in equal pairs; the pairs are
//! collapsed before they are reported.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::GramMatrix;
use crate::matrix::{CMatrix, Matrix};

/// Default iteration cap for [`alt_cholesky_eigs`].
pub const ALT_CHOLESKY_MAX_ITER: usize = 500;
/// Default relative stopping tolerance for [`alt_cholesky_eigs`].
pub const ALT_CHOLESKY_TOL: f64 = 1e-12;
/// Pivot tolerance used when a Gram matrix must be inverted.
pub const INVERSE_PIVOT_TOL: f64 = 1e-12;

/// Lower-triangular factor `L` with `G + ridge·I = L Lᵀ`.
///
/// For complex Gram matrices `l` factors the `2n × 2n` real embedding and
/// `embedded` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    pub l: Matrix,
    pub ridge_used: f64,
    pub embedded: bool,
}

impl CholeskyFactor {
    /// Matrix `B` with `E[conj(V) Vᵀ] = G` when `V = B z` for a real
    /// standard normal vector `z`. For real input this is `L` itself; for
    /// complex input it is `(L_top - i L_bottom) / √2`, `n × 2n`.
    pub fn sampling_factor(&self) -> CMatrix {
        if !self.embedded {
            return CMatrix::from_real(&self.l);
        }
        let n = self.l.rows() / 2;
        let m = self.l.cols();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut b = CMatrix::zeros(n, m);
        for i in 0..n {
            for k in 0..m {
                b[(i, k)] = Complex64::new(self.l[(i, k)] * s, -self.l[(i + n, k)] * s);
            }
        }
        b
    }

    /// `L Lᵀ`, which equals the factored matrix plus the ridge.
    pub fn reconstruct(&self) -> Matrix {
        self.l.matmul(&self.l.transpose())
    }
}

/// Eigenvalues in descending order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Plain Cholesky on a real symmetric matrix, reading the lower triangle.
/// Fails as soon as a pivot drops to `pivot_tol` or below.
pub fn cholesky_real(a: &Matrix, ridge: f64, pivot_tol: f64) -> Result<Matrix> {
    assert!(a.is_square(), "Cholesky needs a square matrix");
    let n = a.rows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let lj = l.row(j)[..j].to_vec();
        let pivot = a[(j, j)] + ridge - lj.iter().map(|v| v * v).sum::<f64>();
        if !(pivot > pivot_tol) {
            return Err(Error::NotPositiveDefinite { row: j, pivot });
        }
        let d = pivot.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let dot: f64 = l.row(i)[..j].iter().zip(&lj).map(|(x, y)| x * y).sum();
            l[(i, j)] = (a[(i, j)] - dot) / d;
        }
    }
    Ok(l)
}

fn pivot_threshold(a: &Matrix, tol: f64) -> f64 {
    let max_diag = a.diagonal().into_iter().fold(1.0, f64::max);
    tol * max_diag
}

/// Cholesky factor of `G + ridge·I`. `tol` is relative: a pivot below
/// `tol · max(1, max diagonal)` is rejected.
pub fn cholesky(g: &GramMatrix, ridge: f64, tol: f64) -> Result<CholeskyFactor> {
    let a = g.real_form();
    let l = cholesky_real(&a, ridge, pivot_threshold(&a, tol))?;
    Ok(CholeskyFactor {
        l,
        ridge_used: ridge,
        embedded: !g.is_real(),
    })
}

/// Closed-form Cholesky factor of the Brownian Gram matrix `min(x_i, x_j)`
/// on `0 < x_1 < … < x_N`: every row repeats the square roots of the
/// increments up to the diagonal.
pub fn brownian_cholesky_closed_form(points: &[f64]) -> Result<CholeskyFactor> {
    if let Some(&first) = points.first() {
        if !(first > 0.0) {
            return Err(Error::NotIncreasing(0));
        }
    }
    if let Some(i) = points.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::NotIncreasing(i + 1));
    }
    let n = points.len();
    let roots: Vec<f64> = (0..n)
        .map(|m| {
            let prev = if m == 0 { 0.0 } else { points[m - 1] };
            (points[m] - prev).sqrt()
        })
        .collect();
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for (m, &r) in roots.iter().enumerate().take(i + 1) {
            l[(i, m)] = r;
        }
    }
    Ok(CholeskyFactor {
        l,
        ridge_used: 0.0,
        embedded: false,
    })
}

/// Solves `L Lᵀ x = b` in place.
fn cholesky_solve_in_place(l: &Matrix, b: &mut [f64]) {
    let n = l.rows();
    for i in 0..n {
        let s: f64 = l.row(i)[..i].iter().zip(&b[..i]).map(|(a, x)| a * x).sum();
        b[i] = (b[i] - s) / l[(i, i)];
    }
    for i in (0..n).rev() {
        let mut s = 0.0;
        for k in (i + 1)..n {
            s += l[(k, i)] * b[k];
        }
        b[i] = (b[i] - s) / l[(i, i)];
    }
}

/// Linear solves against a positive-definite Gram matrix.
#[derive(Debug, Clone)]
pub struct GramSolver {
    factor: CholeskyFactor,
    n: usize,
}

impl GramSolver {
    /// Factors `G + ridge·I`; failures are reported as [`Error::Singular`].
    pub fn new(g: &GramMatrix, ridge: f64) -> Result<Self> {
        let factor = cholesky(g, ridge, INVERSE_PIVOT_TOL).map_err(|e| match e {
            Error::NotPositiveDefinite { row, pivot } => Error::Singular { row, pivot },
            other => other,
        })?;
        Ok(Self { factor, n: g.n() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factor(&self) -> &CholeskyFactor {
        &self.factor
    }

    /// `G⁻¹ b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(b.len(), self.n, "right-hand side has wrong length");
        let n = self.n;
        if self.factor.embedded {
            let mut stacked: Vec<f64> = b.iter().map(|z| z.re).chain(b.iter().map(|z| z.im)).collect();
            cholesky_solve_in_place(&self.factor.l, &mut stacked);
            (0..n).map(|i| Complex64::new(stacked[i], stacked[i + n])).collect()
        } else {
            let mut re: Vec<f64> = b.iter().map(|z| z.re).collect();
            cholesky_solve_in_place(&self.factor.l, &mut re);
            if b.iter().all(|z| z.im == 0.0) {
                return re.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
            }
            let mut im: Vec<f64> = b.iter().map(|z| z.im).collect();
            cholesky_solve_in_place(&self.factor.l, &mut im);
            re.into_iter().zip(im).map(|(r, i)| Complex64::new(r, i)).collect()
        }
    }

    /// Diagonal entry `(G⁻¹)_{ii}`; real for Hermitian `G`.
    pub fn inverse_diagonal(&self, i: usize) -> f64 {
        let mut e = vec![Complex64::new(0.0, 0.0); self.n];
        e[i] = Complex64::new(1.0, 0.0);
        self.solve(&e)[i].re
    }

    /// Full inverse, symmetrized so the result is exactly Hermitian.
    pub fn inverse(&self) -> CMatrix {
        let n = self.n;
        let dim = self.factor.l.rows();
        let mut inv = Matrix::zeros(dim, dim);
        for j in 0..dim {
            let mut col = vec![0.0; dim];
            col[j] = 1.0;
            cholesky_solve_in_place(&self.factor.l, &mut col);
            for i in 0..dim {
                inv[(i, j)] = col[i];
            }
        }
        let full = if self.factor.embedded {
            CMatrix::from_real_embedding(&inv)
        } else {
            CMatrix::from_real(&inv)
        };
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            out[(i, i)] = Complex64::new(full[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let v = (full[(i, j)] + full[(j, i)].conj()) * 0.5;
                out[(i, j)] = v;
                out[(j, i)] = v.conj();
            }
        }
        out
    }
}

/// `G⁻¹` through Cholesky solves.
pub fn inverse_gram(g: &GramMatrix) -> Result<CMatrix> {
    Ok(GramSolver::new(g, 0.0)?.inverse())
}

fn sort_descending(values: &mut [f64]) {
    values.sort_by(|a, b| b.total_cmp(a));
}

/// Collapses the doubled spectrum of a real embedding.
fn collapse_pairs(sorted: Vec<f64>) -> Vec<f64> {
    sorted.into_iter().step_by(2).collect()
}

/// Eigenvalues by the alternating Cholesky iteration: factor `B = A Aᵀ`,
/// replace `B` by `Aᵀ A`, repeat. Each step is a similarity transform
/// (`Aᵀ A = A⁻¹ B A`) and the iterates converge to a diagonal matrix with
/// the eigenvalues in descending order.
///
/// Plain iteration converges at the rate `λ_{k+1}/λ_k`, which stalls on
/// nearly equal eigenvalues. Each step therefore factors `B − σI` with a
/// shift `σ` just below the trailing diagonal entry (falling back to
/// smaller shifts, and finally to `σ = 0`, whenever that factorization
/// fails) and sets `B ← AᵀA + σI`, still a similarity. Once the last active
/// row's off-diagonal sum drops below `tol · trace` its diagonal entry is
/// locked and the iteration continues on the leading block.
///
/// `iterations` counts successful factorizations. Running out of iterations
/// is not an error: the current diagonal is returned with
/// `converged = false`.
pub fn alt_cholesky_eigs(g: &GramMatrix, max_iter: usize, tol: f64) -> Result<SpectralResult> {
    const SHIFT_FRACTIONS: [f64; 5] = [0.999, 0.99, 0.9, 0.5, 0.0];
    let mut b = g.real_form();
    let n = b.rows();
    cholesky_real(&b, 0.0, 0.0)?;
    let threshold = tol * b.trace();
    let mut active = n;
    let mut iterations = 0;
    let converged = loop {
        while active > 0 && trailing_off_diagonal(&b, active) < threshold {
            active -= 1;
        }
        if active == 0 {
            break true;
        }
        if iterations == max_iter {
            break false;
        }
        let sub = leading_block(&b, active);
        let last = sub[(active - 1, active - 1)];
        let mut step = Err(Error::NotPositiveDefinite { row: 0, pivot: 0.0 });
        for theta in SHIFT_FRACTIONS {
            let sigma = theta * last;
            step = cholesky_real(&sub, -sigma, 0.0).map(|a| (a, sigma));
            if step.is_ok() {
                break;
            }
        }
        let (a, sigma) = step?;
        // B ← Aᵀ A + σI on the active block, using that A is lower triangular
        for i in 0..active {
            for j in i..active {
                let s: f64 = (j..active).map(|k| a[(k, i)] * a[(k, j)]).sum();
                let v = if i == j { s + sigma } else { s };
                b[(i, j)] = v;
                b[(j, i)] = v;
            }
        }
        iterations += 1;
    };
    let mut eigenvalues = b.diagonal();
    sort_descending(&mut eigenvalues);
    if !g.is_real() {
        eigenvalues = collapse_pairs(eigenvalues);
    }
    Ok(SpectralResult {
        eigenvalues,
        iterations,
        converged,
    })
}

/// `Σ_{j < m-1} |B_{m-1, j}|` for the leading `m × m` block.
fn trailing_off_diagonal(b: &Matrix, m: usize) -> f64 {
    b.row(m - 1)[..m - 1].iter().map(|v| v.abs()).sum()
}

fn leading_block(b: &Matrix, m: usize) -> Matrix {
    let mut out = Matrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            out[(i, j)] = b[(i, j)];
        }
    }
    out
}

/// Cyclic Jacobi rotations on a real symmetric matrix. Returns the
/// eigenvalues (descending) and, column by column, the eigenvectors.
///
/// Sweeps stop once the off-diagonal Frobenius norm is below
/// `tol · ‖A‖_F`.
pub fn jacobi_eigen_decomposition(a: &Matrix, tol: f64) -> (SpectralResult, Matrix) {
    assert!(a.is_square(), "Jacobi needs a square matrix");
    const MAX_SWEEPS: usize = 100;
    let n = a.rows();
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    let scale = a.norm_frobenius();
    let target = tol * scale;

    let off = |m: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)] * m[(i, j)];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    let mut converged = off(&m) <= target;
    while !converged && sweeps < MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        sweeps += 1;
        converged = off(&m) <= target;
    }

    // stable sort by value, descending; permute eigenvector columns along
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, col)] = v[(k, src)];
        }
    }
    (
        SpectralResult {
            eigenvalues,
            iterations: sweeps,
            converged,
        },
        vectors,
    )
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi.
pub fn jacobi_eigs_real(a: &Matrix, tol: f64) -> SpectralResult {
    jacobi_eigen_decomposition(a, tol).0
}

/// Reference eigenvalue routine for Gram matrices.
pub fn jacobi_eigs(g: &GramMatrix, tol: f64) -> SpectralResult {
    let mut r = jacobi_eigs_real(&g.real_form(), tol);
    if !g.is_real() {
        r.eigenvalues = collapse_pairs(r.eigenvalues);
    }
    r
}
