//! Monte Carlo synthesis of Gaussian processes.
//!
//! Every sampler here reduces to `V = Φ (s ∘ Z)`: a fixed complex matrix
//! `Φ` (grid × draws), per-draw scales `s`, and a vector `Z` of standard
//! normals taken from the path's own stream (see [`crate::rng`]). Paths are
//! generated in parallel and collected in path order; reductions run over
//! fixed blocks of paths and combine the block sums pairwise, so results do
//! not depend on the number of worker threads.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorize::cholesky;
use crate::kernels::{eval_kernel, gram, GramMatrix, KernelSpec, Point};
use crate::matrix::{pairwise_sum, CMatrix, Matrix};
use crate::measures::{cells, MeasureKind, MeasureModel, PartitionCells, MAX_RESOLUTION};
use crate::phase::cis_turns;
use crate::rng::RngSeedPolicy;

/// Paths per reduction block.
const BLOCK: usize = 1024;

/// Monte Carlo tolerances are this many standard errors.
pub const MC_SIGMAS: f64 = 5.0;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Realizations of a process on a grid: one row per path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    pub grid: Vec<Point>,
    pub paths: CMatrix,
    pub seed: u64,
    pub partition_resolution: Option<u32>,
}

impl PathEnsemble {
    pub fn n_paths(&self) -> usize {
        self.paths.rows()
    }

    pub fn is_real(&self) -> bool {
        self.paths.is_real()
    }

    /// Sample mean at each grid point.
    pub fn mean(&self) -> Result<Vec<Complex64>> {
        let p = self.n_paths();
        if p == 0 {
            return Err(Error::EmptyEnsemble);
        }
        let g = self.paths.cols();
        let blocks: Vec<Vec<Complex64>> = self
            .paths
            .as_slice()
            .par_chunks(BLOCK * g.max(1))
            .map(|chunk| {
                let mut acc = vec![ZERO; g];
                for row in chunk.chunks(g) {
                    for (a, v) in acc.iter_mut().zip(row) {
                        *a += v;
                    }
                }
                acc
            })
            .collect();
        Ok((0..g)
            .map(|j| {
                let parts: Vec<Complex64> = blocks.iter().map(|b| b[j]).collect();
                pairwise_sum(&parts) / p as f64
            })
            .collect())
    }
}

/// `V_p = Φ (s ∘ Z_p)` for every path `p`, with `Z_p` drawn from stream `p`.
fn linear_synthesis(phi: &CMatrix, scale: &[f64], n_paths: usize, seed: u64) -> CMatrix {
    assert_eq!(phi.cols(), scale.len());
    let g = phi.rows();
    let d = phi.cols();
    let policy = RngSeedPolicy::new(seed);
    let real = phi.is_real();
    let phi_re = phi.re();
    let phi_im = phi.im();
    let rows: Vec<Vec<Complex64>> = (0..n_paths)
        .into_par_iter()
        .map(|p| {
            let mut z = vec![0.0; d];
            policy.stream(p as u64).fill_normal(&mut z);
            for (v, s) in z.iter_mut().zip(scale) {
                *v *= s;
            }
            (0..g)
                .map(|x| {
                    let re = dot(phi_re.row(x), &z);
                    let im = if real { 0.0 } else { dot(phi_im.row(x), &z) };
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();
    CMatrix::from_vec(n_paths, g, rows.into_iter().flatten().collect())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact finite-dimensional sampler: each path is `B z` with
/// `conj(B) Bᵀ = G` from Cholesky. If `G` is only semidefinite a ridge of
/// `1e-12 · trace` is added.
pub fn sample_gaussian_vector(g: &GramMatrix, n_paths: usize, seed: u64) -> Result<PathEnsemble> {
    let n = g.n();
    let grid = if g.points().len() == n {
        g.points().to_vec()
    } else {
        (0..n).map(|i| Point::Real(i as f64)).collect()
    };
    if g.entries().max_abs() == 0.0 {
        return Ok(PathEnsemble {
            grid,
            paths: CMatrix::zeros(n_paths, n),
            seed,
            partition_resolution: None,
        });
    }
    let factor = match cholesky(g, 0.0, 0.0) {
        Ok(f) => f,
        Err(_) => {
            let trace: f64 = (0..n).map(|i| g.entries()[(i, i)].re).sum();
            cholesky(g, 1e-12 * trace, 0.0)?
        }
    };
    let b = factor.sampling_factor();
    let scale = vec![1.0; b.cols()];
    Ok(PathEnsemble {
        grid,
        paths: linear_synthesis(&b, &scale, n_paths, seed),
        seed,
        partition_resolution: None,
    })
}

/// Independent Wiener increments `W_{A_i} ~ N(0, μ(A_i))` over the cells of
/// a partition, one row per path.
#[derive(Debug, Clone, PartialEq)]
pub struct WienerIncrements {
    pub model: MeasureModel,
    pub cells: PartitionCells,
    pub values: Matrix,
    pub seed: u64,
}

fn check_resolution(resolution: u32) -> Result<()> {
    if resolution > MAX_RESOLUTION {
        return Err(Error::OutOfRange(format!(
            "resolution {resolution} exceeds {MAX_RESOLUTION}"
        )));
    }
    Ok(())
}

fn sqrt_masses(part: &PartitionCells) -> Vec<f64> {
    part.cells.iter().map(|c| c.mass.sqrt()).collect()
}

/// Increment for cell `i` of path `p` is `√μ(A_i)` times the `i`-th normal
/// of stream `p`, so the same `(seed, path)` gives the same Wiener process
/// to every synthesizer that uses this partition.
pub fn wiener_increments(
    m: &MeasureModel,
    resolution: u32,
    n_paths: usize,
    seed: u64,
) -> Result<WienerIncrements> {
    check_resolution(resolution)?;
    let part = cells(m, resolution);
    let scale = sqrt_masses(&part);
    let policy = RngSeedPolicy::new(seed);
    let rows: Vec<Vec<f64>> = (0..n_paths)
        .into_par_iter()
        .map(|p| {
            let mut z = vec![0.0; scale.len()];
            policy.stream(p as u64).fill_normal(&mut z);
            z.iter().zip(&scale).map(|(v, s)| v * s).collect()
        })
        .collect();
    let n = part.len();
    Ok(WienerIncrements {
        model: *m,
        cells: part,
        values: Matrix::from_vec(n_paths, n, rows.into_iter().flatten().collect()),
        seed,
    })
}

/// `W([0, x])`: sum of the increments of cells whose left endpoint is
/// strictly below `x`, so `W(0) = 0` and paths hold constant across gaps of
/// the support.
pub fn cumulative_path(inc: &WienerIncrements, x_grid: &[f64]) -> Result<PathEnsemble> {
    if let Some(x) = x_grid.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::OutOfRange(format!("cumulative path needs x in [0,1], got {x}")));
    }
    let counts: Vec<usize> = x_grid
        .iter()
        .map(|&x| inc.cells.cells.partition_point(|c| c.a < x))
        .collect();
    let n_paths = inc.values.rows();
    let mut data = Vec::with_capacity(n_paths * x_grid.len());
    for p in 0..n_paths {
        let row = inc.values.row(p);
        let mut running = 0.0;
        let mut upto = 0;
        // grid order is arbitrary; recompute from scratch when it goes back
        for &c in &counts {
            if c < upto {
                running = 0.0;
                upto = 0;
            }
            running += row[upto..c].iter().sum::<f64>();
            upto = c;
            data.push(Complex64::new(running, 0.0));
        }
    }
    Ok(PathEnsemble {
        grid: x_grid.iter().map(|&x| Point::Real(x)).collect(),
        paths: CMatrix::from_vec(n_paths, x_grid.len(), data),
        seed: inc.seed,
        partition_resolution: Some(inc.cells.resolution),
    })
}

/// Feature functions `k_x` on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "type")]
pub enum FeatureMap {
    /// `k_x = χ_[0,x]`, `x ∈ [0, 1]`.
    Indicator,
    /// `k_z(t) = 1 / (1 − z e(−t))`, `|z| < 1`.
    Szego,
    /// `k_z(t) = ∏_{n<N} (1 + z^{4ⁿ} e(−4ⁿ t))`, `|z| < 1`.
    CantorProduct { truncation: u32 },
    /// `k_x ≡ 1` on any domain.
    Constant,
}

impl FeatureMap {
    pub fn name(&self) -> &'static str {
        match self {
            FeatureMap::Indicator => "indicator",
            FeatureMap::Szego => "szego",
            FeatureMap::CantorProduct { .. } => "cantor-product",
            FeatureMap::Constant => "constant",
        }
    }
}

/// Feature functions and a measure with `K(x,y) = ∫ conj(k_x) k_y dμ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FactorizationPair {
    pub features: FeatureMap,
    pub measure: MeasureModel,
}

impl FactorizationPair {
    pub fn new(features: FeatureMap, measure: MeasureModel) -> Self {
        Self { features, measure }
    }

    /// Brownian motion: indicators against Lebesgue measure.
    pub fn brownian() -> Self {
        Self::new(FeatureMap::Indicator, MeasureModel::lebesgue(0))
    }

    /// Hardy space: Szegő features against Lebesgue measure on the circle.
    pub fn hardy() -> Self {
        Self::new(FeatureMap::Szego, MeasureModel::lebesgue(0))
    }

    /// Cantor products against μ₄.
    pub fn cantor(truncation: u32) -> Self {
        Self::new(
            FeatureMap::CantorProduct { truncation },
            MeasureModel::cantor4(truncation),
        )
    }

    /// The kernel the pair is meant to factor, if it is a named family.
    pub fn kernel(&self) -> Option<KernelSpec> {
        match self.features {
            FeatureMap::Indicator => Some(KernelSpec::brownian_min()),
            FeatureMap::Szego => Some(KernelSpec::szego()),
            FeatureMap::CantorProduct { truncation } => KernelSpec::cantor_product(truncation).ok(),
            FeatureMap::Constant => None,
        }
    }

    pub fn check_point(&self, x: &Point) -> Result<()> {
        let family = self.features.name();
        match (self.features, x) {
            (FeatureMap::Constant, _) => Ok(()),
            (FeatureMap::Indicator, Point::Real(v) | Point::Unit(v)) => {
                if (0.0..=1.0).contains(v) {
                    Ok(())
                } else {
                    Err(Error::OutOfDomain(format!("{family} features need x in [0,1], got {v}")))
                }
            }
            (FeatureMap::Szego | FeatureMap::CantorProduct { .. }, Point::Disk(z)) => {
                if z.norm_sqr() < 1.0 {
                    Ok(())
                } else {
                    Err(Error::OutOfDomain(format!("{family} features need |z| < 1, got {z}")))
                }
            }
            (FeatureMap::Indicator, _) => Err(Error::DomainMismatch {
                family,
                expected: "unit-interval or real-line",
                got: x.tag().to_string(),
            }),
            _ => Err(Error::DomainMismatch {
                family,
                expected: "complex-disk",
                got: x.tag().to_string(),
            }),
        }
    }

    /// `k_x(t)` for a point already checked with [`Self::check_point`].
    pub fn feature(&self, x: &Point, t: f64) -> Complex64 {
        match (self.features, x) {
            (FeatureMap::Constant, _) => ONE,
            (FeatureMap::Indicator, _) => {
                let x = x.as_real().expect("checked point");
                if t <= x {
                    ONE
                } else {
                    ZERO
                }
            }
            (FeatureMap::Szego, Point::Disk(z)) => ONE / (ONE - z * cis_turns(-t)),
            (FeatureMap::CantorProduct { truncation }, Point::Disk(z)) => {
                let mut acc = ONE;
                let mut zp = *z;
                let mut freq = t;
                for _ in 0..truncation {
                    acc *= ONE + zp * cis_turns(-freq);
                    let sq = zp * zp;
                    zp = sq * sq;
                    freq *= 4.0;
                }
                acc
            }
            _ => unreachable!("checked point"),
        }
    }

    /// Worst-case gap between the left-endpoint quadrature of
    /// `∫ conj(k_x) k_y dμ` at this resolution and the kernel the features
    /// factor under their intended measure.
    pub fn discretization_bound(&self, grid: &[Point], resolution: u32) -> f64 {
        let rho = grid
            .iter()
            .filter_map(Point::as_complex)
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        match self.features {
            FeatureMap::Constant => 0.0,
            FeatureMap::Indicator => 0.5f64.powi(resolution as i32),
            FeatureMap::Szego => {
                // exponentials alias modulo M = 2^r
                let rm = rho.powf(2f64.powi(resolution as i32));
                2.0 * rm / ((1.0 - rho * rho) * (1.0 - rm))
            }
            FeatureMap::CantorProduct { truncation } => {
                if resolution >= truncation {
                    0.0
                } else {
                    let p: f64 = (0..truncation).map(|n| 1.0 + rho.powf(4f64.powi(n as i32))).product();
                    2.0 * p * p * rho.powf(4f64.powi(resolution as i32))
                }
            }
        }
    }

    fn feature_matrix(&self, grid: &[Point], part: &PartitionCells) -> Result<CMatrix> {
        for x in grid {
            self.check_point(x)?;
        }
        let reps = part.representatives();
        let data = grid
            .iter()
            .flat_map(|x| reps.iter().map(move |&t| self.feature(x, t)))
            .collect();
        Ok(CMatrix::from_vec(grid.len(), reps.len(), data))
    }
}

/// `Σ_i μ(A_i) conj(k_x(s_i)) k_y(s_i)` on the grid.
pub fn quadrature_kernel(pair: &FactorizationPair, grid: &[Point], resolution: u32) -> Result<CMatrix> {
    check_resolution(resolution)?;
    let part = cells(&pair.measure, resolution);
    let phi = pair.feature_matrix(grid, &part)?;
    let n = grid.len();
    let mut out = CMatrix::zeros(n, n);
    for x in 0..n {
        for y in x..n {
            let terms: Vec<Complex64> = part
                .cells
                .iter()
                .enumerate()
                .map(|(i, c)| phi[(x, i)].conj() * phi[(y, i)] * c.mass)
                .collect();
            let v = pairwise_sum(&terms);
            if x == y {
                out[(x, x)] = Complex64::new(v.re, 0.0);
            } else {
                out[(x, y)] = v;
                out[(y, x)] = v.conj();
            }
        }
    }
    Ok(out)
}

/// Discretized Itô integral `V_x = Σ_i k_x(s_i) W_{A_i}` with left-endpoint
/// representatives. Uses the same increments as [`wiener_increments`].
pub fn ito_synthesize(
    pair: &FactorizationPair,
    resolution: u32,
    grid: &[Point],
    n_paths: usize,
    seed: u64,
) -> Result<PathEnsemble> {
    check_resolution(resolution)?;
    let part = cells(&pair.measure, resolution);
    let phi = pair.feature_matrix(grid, &part)?;
    Ok(PathEnsemble {
        grid: grid.to_vec(),
        paths: linear_synthesis(&phi, &sqrt_masses(&part), n_paths, seed),
        seed,
        partition_resolution: Some(resolution),
    })
}

/// `V_x = Σ_n g_n(x) ζ_n` with iid standard normal `ζ_n`.
pub fn frame_synthesize<F>(g: &[F], grid: &[Point], n_paths: usize, seed: u64) -> Result<PathEnsemble>
where
    F: Fn(&Point) -> Complex64,
{
    let mut values = CMatrix::zeros(grid.len(), g.len());
    for (x, p) in grid.iter().enumerate() {
        for (n, f) in g.iter().enumerate() {
            values[(x, n)] = f(p);
        }
    }
    frame_synthesize_values(&values, grid, n_paths, seed)
}

/// [`frame_synthesize`] with `values[(x, n)] = g_n(x)` precomputed.
pub fn frame_synthesize_values(
    values: &CMatrix,
    grid: &[Point],
    n_paths: usize,
    seed: u64,
) -> Result<PathEnsemble> {
    if values.rows() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            got: values.rows(),
        });
    }
    let scale = vec![1.0; values.cols()];
    Ok(PathEnsemble {
        grid: grid.to_vec(),
        paths: linear_synthesis(values, &scale, n_paths, seed),
        seed,
        partition_resolution: None,
    })
}

/// `Ĉ(x,y) = (1/P) Σ_p conj(V_x^p) V_y^p`, without centering. The upper
/// triangle is computed and mirrored, so `Ĉ` is exactly Hermitian.
pub fn empirical_covariance(e: &PathEnsemble) -> Result<CMatrix> {
    let p = e.n_paths();
    if p == 0 {
        return Err(Error::EmptyEnsemble);
    }
    let g = e.paths.cols();
    let blocks: Vec<Vec<Complex64>> = e
        .paths
        .as_slice()
        .par_chunks(BLOCK * g.max(1))
        .map(|chunk| {
            let mut acc = vec![ZERO; g * g];
            for row in chunk.chunks(g) {
                for x in 0..g {
                    let cx = row[x].conj();
                    for y in x..g {
                        acc[x * g + y] += cx * row[y];
                    }
                }
            }
            acc
        })
        .collect();
    let mut out = CMatrix::zeros(g, g);
    for x in 0..g {
        for y in x..g {
            let parts: Vec<Complex64> = blocks.iter().map(|b| b[x * g + y]).collect();
            let v = pairwise_sum(&parts) / p as f64;
            if x == y {
                out[(x, x)] = Complex64::new(v.re, 0.0);
            } else {
                out[(x, y)] = v;
                out[(y, x)] = v.conj();
            }
        }
    }
    Ok(out)
}

/// Monte Carlo tolerance `5 · scale / √P`.
pub fn mc_tolerance(scale: f64, n_paths: usize) -> f64 {
    MC_SIGMAS * scale / (n_paths as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityReport {
    pub kernel: String,
    pub features: FeatureMap,
    pub measure: MeasureKind,
    pub resolution: u32,
    pub n_paths: usize,
    pub seed: u64,
    pub grid_size: usize,
    pub max_abs_kernel: f64,
    /// `max |∫ conj(k_x) k_y dμ − K(x,y)|` by quadrature.
    pub quadrature_error: f64,
    pub quadrature_tolerance: f64,
    pub quadrature_pass: bool,
    /// `max |Ĉ − K|` from the synthesized ensemble.
    pub mc_error: f64,
    pub mc_tolerance: f64,
    pub mc_pass: bool,
    pub pass: bool,
}

/// Checks that a factorization pair reproduces `spec` both deterministically
/// (quadrature of the feature inner products) and stochastically (empirical
/// covariance of the Itô synthesis).
pub fn duality_check(
    pair: &FactorizationPair,
    spec: &KernelSpec,
    grid: &[Point],
    resolution: u32,
    n_paths: usize,
    seed: u64,
) -> Result<DualityReport> {
    let k = gram(spec, grid)?;
    let kmax = k.entries().max_abs();
    let quad = quadrature_kernel(pair, grid, resolution)?;
    let quadrature_error = quad.max_abs_diff(k.entries());
    let quadrature_tolerance = pair.discretization_bound(grid, resolution) + 1e-12 * kmax.max(1.0);
    let ens = ito_synthesize(pair, resolution, grid, n_paths, seed)?;
    let c = empirical_covariance(&ens)?;
    let mc_error = c.max_abs_diff(k.entries());
    let mc_tol = mc_tolerance(kmax, n_paths);
    let quadrature_pass = quadrature_error <= quadrature_tolerance;
    let mc_pass = mc_error <= mc_tol;
    Ok(DualityReport {
        kernel: spec.family.name().to_string(),
        features: pair.features,
        measure: pair.measure.kind,
        resolution,
        n_paths,
        seed,
        grid_size: grid.len(),
        max_abs_kernel: kmax,
        quadrature_error,
        quadrature_tolerance,
        quadrature_pass,
        mc_error,
        mc_tolerance: mc_tol,
        mc_pass,
        pass: quadrature_pass && mc_pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticVariationRow {
    pub resolution: u32,
    pub cells: usize,
    /// Sample mean of `Q = Σ W_{A_i}²` over paths.
    pub mean_q: f64,
    pub mean_q_error: f64,
    pub mean_q_tolerance: f64,
    /// Sample mean of `(μ(A) − Q)²`.
    pub mean_sq_dev: f64,
    /// `2 Σ μ(A_i)²`, the exact value of `E(μ(A) − Q)²`.
    pub expected_mean_sq_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticVariationReport {
    pub interval: (f64, f64),
    pub mass: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub rows: Vec<QuadraticVariationRow>,
    /// `mean_sq_dev[k] / mean_sq_dev[k+1]` for consecutive resolutions.
    pub ratios: Vec<f64>,
}

/// Quadratic variation of the Wiener process over `[a, b]` at several
/// resolutions. One process is drawn at the finest resolution per path and
/// coarsened by summing sibling cells, so all rows see the same paths.
pub fn quadratic_variation(
    m: &MeasureModel,
    a: f64,
    b: f64,
    resolutions: &[u32],
    n_paths: usize,
    seed: u64,
) -> Result<QuadraticVariationReport> {
    let Some(&finest) = resolutions.iter().max() else {
        return Err(Error::InvalidInput("no resolutions given".into()));
    };
    check_resolution(finest)?;
    if n_paths == 0 {
        return Err(Error::EmptyEnsemble);
    }
    let mass = m.interval_mass(a, b);
    let selections: Vec<(u32, Vec<usize>, f64)> = resolutions
        .iter()
        .map(|&r| {
            let part = cells(m, r);
            let inside = part.cells_within(a, b)?;
            let sum_sq: f64 = inside.iter().map(|&i| part.cells[i].mass.powi(2)).sum();
            Ok((r, inside, sum_sq))
        })
        .collect::<Result<_>>()?;

    let fine = cells(m, finest);
    let scale = sqrt_masses(&fine);
    let policy = RngSeedPolicy::new(seed);
    // per path: Q at each requested resolution
    let q: Vec<Vec<f64>> = (0..n_paths)
        .into_par_iter()
        .map(|p| {
            let mut w = vec![0.0; scale.len()];
            policy.stream(p as u64).fill_normal(&mut w);
            for (v, s) in w.iter_mut().zip(&scale) {
                *v *= s;
            }
            let mut levels = vec![w];
            for _ in 0..finest {
                let prev = levels.last().unwrap();
                levels.push(prev.chunks(2).map(|c| c[0] + c[1]).collect());
            }
            selections
                .iter()
                .map(|(r, inside, _)| {
                    let level = &levels[(finest - r) as usize];
                    inside.iter().map(|&i| level[i] * level[i]).sum()
                })
                .collect()
        })
        .collect();

    let rows: Vec<QuadraticVariationRow> = selections
        .iter()
        .enumerate()
        .map(|(k, (r, inside, sum_sq))| {
            let qs: Vec<f64> = q.iter().map(|row| row[k]).collect();
            let devs: Vec<f64> = qs.iter().map(|v| (mass - v).powi(2)).collect();
            let mean_q = pairwise_sum(&qs) / n_paths as f64;
            let expected = 2.0 * sum_sq;
            QuadraticVariationRow {
                resolution: *r,
                cells: inside.len(),
                mean_q,
                mean_q_error: (mean_q - mass).abs(),
                mean_q_tolerance: MC_SIGMAS * (expected / n_paths as f64).sqrt(),
                mean_sq_dev: pairwise_sum(&devs) / n_paths as f64,
                expected_mean_sq_dev: expected,
            }
        })
        .collect();
    let ratios = rows
        .windows(2)
        .map(|w| w[0].mean_sq_dev / w[1].mean_sq_dev)
        .collect();
    Ok(QuadraticVariationReport {
        interval: (a, b),
        mass,
        n_paths,
        seed,
        rows,
        ratios,
    })
}

/// `(T* f)(x) = ∫ f(s) conj(k_x(s)) dμ(s)` by left-endpoint quadrature.
pub fn transform_adjoint<F>(
    pair: &FactorizationPair,
    f: F,
    grid: &[Point],
    resolution: u32,
) -> Result<Vec<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    check_resolution(resolution)?;
    let part = cells(&pair.measure, resolution);
    let phi = pair.feature_matrix(grid, &part)?;
    let fv: Vec<Complex64> = part.cells.iter().map(|c| f(c.representative()) * c.mass).collect();
    Ok((0..grid.len())
        .map(|x| {
            let terms: Vec<Complex64> = fv.iter().enumerate().map(|(i, v)| v * phi[(x, i)].conj()).collect();
            pairwise_sum(&terms)
        })
        .collect())
}

/// Maximum of `|Ĉ − K|` over the grid, with `K` evaluated from `spec`.
pub fn covariance_error(e: &PathEnsemble, spec: &KernelSpec) -> Result<(f64, f64)> {
    let c = empirical_covariance(e)?;
    let mut err: f64 = 0.0;
    let mut kmax: f64 = 0.0;
    for (i, x) in e.grid.iter().enumerate() {
        for (j, y) in e.grid.iter().enumerate() {
            let k = eval_kernel(spec, x, y)?;
            kmax = kmax.max(k.norm());
            err = err.max((c[(i, j)] - k).norm());
        }
    }
    Ok((err, kmax))
}
