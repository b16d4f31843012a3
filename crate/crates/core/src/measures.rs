//! Lebesgue measure and the quarter Cantor measure on `[0, 1]`.
//!
//! The Cantor measure is the invariant probability measure of the two maps
//! `x/4` and `(x+2)/4`. At refinement depth `d` its support is covered by
//! `2^d` intervals of length `4^-d`, each carrying mass `2^-d`. Quadrature
//! evaluates the integrand at the left endpoint of every cell and sums with
//! [`pairwise_sum`], so results are reproducible to the bit.

use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{GramMatrix, Point};
use crate::matrix::{pairwise_sum, CMatrix};
use crate::phase::cis_turns;

/// Deepest refinement supported. Cell endpoints stay exact dyadic rationals
/// well below this.
pub const MAX_RESOLUTION: u32 = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureKind {
    Lebesgue,
    Cantor4,
}

impl std::str::FromStr for MeasureKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lebesgue" => Ok(Self::Lebesgue),
            "cantor4" => Ok(Self::Cantor4),
            other => Err(Error::Parse(format!("unknown measure '{other}'"))),
        }
    }
}

/// A probability measure on `[0,1]` together with the partition depth used
/// wherever a single default resolution is needed (overlap kernel norms).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureModel {
    pub kind: MeasureKind,
    pub depth: u32,
}

impl MeasureModel {
    pub fn lebesgue(depth: u32) -> Self {
        Self {
            kind: MeasureKind::Lebesgue,
            depth,
        }
    }

    pub fn cantor4(depth: u32) -> Self {
        Self {
            kind: MeasureKind::Cantor4,
            depth,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match self.kind {
            MeasureKind::Lebesgue => x,
            MeasureKind::Cantor4 => mu4_cdf_unchecked(x),
        }
    }

    /// Mass of the closed interval `[a, b]`. Both measures are atomless, so
    /// open and closed intervals agree.
    pub fn interval_mass(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        self.cdf(b) - self.cdf(a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub a: f64,
    pub b: f64,
    pub mass: f64,
}

impl Cell {
    pub fn representative(&self) -> f64 {
        self.a
    }
}

/// Disjoint cells ordered left to right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionCells {
    pub resolution: u32,
    pub cells: Vec<Cell>,
}

impl PartitionCells {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn representatives(&self) -> Vec<f64> {
        self.cells.iter().map(Cell::representative).collect()
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum(&self.cells.iter().map(|c| c.mass).collect::<Vec<_>>())
    }

    /// Indices of the cells contained in `[a, b]`. Fails if some cell is
    /// only partly covered.
    pub fn cells_within(&self, a: f64, b: f64) -> Result<Vec<usize>> {
        let mut inside = Vec::new();
        for (i, c) in self.cells.iter().enumerate() {
            let overlap = (b.min(c.b) - a.max(c.a)).max(0.0);
            let width = c.b - c.a;
            if overlap == 0.0 {
                continue;
            }
            if (overlap - width).abs() <= 1e-12 * width.max(1e-300) {
                inside.push(i);
            } else {
                return Err(Error::CellMisalignment(format!(
                    "[{a}, {b}] cuts cell [{}, {}] at resolution {}",
                    c.a, c.b, self.resolution
                )));
            }
        }
        Ok(inside)
    }
}

/// Partition of `[0,1]` (Lebesgue) or of the Cantor set (μ₄) at the given
/// refinement level. Cells are returned left to right.
pub fn cells(model: &MeasureModel, resolution: u32) -> PartitionCells {
    assert!(
        resolution <= MAX_RESOLUTION,
        "resolution {resolution} exceeds {MAX_RESOLUTION}"
    );
    let count = 1usize << resolution;
    let mass = 1.0 / count as f64;
    let cells = match model.kind {
        MeasureKind::Lebesgue => (0..count)
            .map(|k| Cell {
                a: k as f64 * mass,
                b: (k + 1) as f64 * mass,
                mass,
            })
            .collect(),
        MeasureKind::Cantor4 => {
            let width = 0.25f64.powi(resolution as i32);
            (0..count)
                .map(|k| {
                    let a = cantor_left_endpoint(k as u64, resolution);
                    Cell {
                        a,
                        b: a + width,
                        mass,
                    }
                })
                .collect()
        }
    };
    PartitionCells { resolution, cells }
}

/// Left endpoint of the `k`-th depth-`d` Cantor cell: the binary digits of
/// `k` (most significant first) select the map `x/4` or `(x+2)/4`.
fn cantor_left_endpoint(k: u64, depth: u32) -> f64 {
    let mut a = 0.0;
    let mut scale = 1.0;
    for j in (0..depth).rev() {
        scale *= 0.25;
        if (k >> j) & 1 == 1 {
            a += 2.0 * scale;
        }
    }
    a
}

/// Cumulative distribution of μ₄ (the devil's staircase for the quarter
/// Cantor set).
pub fn mu4_cdf(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange(format!("mu4_cdf needs x in [0,1], got {x}")));
    }
    Ok(mu4_cdf_unchecked(x))
}

fn mu4_cdf_unchecked(x: f64) -> f64 {
    if x >= 1.0 {
        return 1.0;
    }
    let mut rem = x;
    let mut acc = 0.0;
    let mut w = 1.0;
    // Scaling by 4 and stripping the integer part are exact in binary, so
    // the loop reads off the true base-4 digits of the double.
    for _ in 0..64 {
        if rem == 0.0 {
            break;
        }
        rem *= 4.0;
        let d = rem.floor();
        rem -= d;
        match d as u8 {
            0 => w /= 2.0,
            1 => {
                acc += w / 2.0;
                break;
            }
            2 => {
                acc += w / 2.0;
                w /= 2.0;
            }
            _ => {
                acc += w;
                break;
            }
        }
    }
    acc
}

/// Integers below `limit` whose base-4 digits are all 0 or 1, ascending.
///
/// Counting `k = 0, 1, 2, …` in binary and reading the bits as base-4 digits
/// enumerates the set in increasing order.
pub fn lambda4(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for k in 0u64.. {
        let v = binary_as_base4(k);
        if v >= limit {
            break;
        }
        out.push(v);
    }
    out
}

/// Base-4 digit test for membership in Λ₄.
pub fn is_lambda4(mut n: u64) -> bool {
    while n > 0 {
        if n % 4 > 1 {
            return false;
        }
        n /= 4;
    }
    true
}

fn binary_as_base4(mut k: u64) -> u64 {
    let mut v = 0u64;
    let mut place = 1u64;
    while k > 0 {
        if k & 1 == 1 {
            v += place;
        }
        k >>= 1;
        place = place.saturating_mul(4);
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneratingFunction {
    pub product: Complex64,
    pub sum: Complex64,
    /// Upper bound on the distance from `product` to the infinite product.
    pub gap_bound: f64,
}

/// Truncated generating function of Λ₄, both as the product
/// `∏_{n<N} (1 + s^{4^n})` and as the sum `Σ_{λ∈Λ₄, λ<4^N} s^λ`.
pub fn generating_function(s: Complex64, truncation: u32) -> Result<GeneratingFunction> {
    let r = s.norm();
    if r >= 1.0 {
        return Err(Error::OutOfRange(format!("|s| = {r} must be < 1")));
    }
    if truncation == 0 {
        return Err(Error::InvalidInput("truncation must be >= 1".into()));
    }
    if truncation > 30 {
        return Err(Error::InvalidInput("truncation must be <= 30".into()));
    }
    // powers[n] = s^(4^n)
    let mut powers = Vec::with_capacity(truncation as usize);
    let mut p = s;
    for _ in 0..truncation {
        powers.push(p);
        let sq = p * p;
        p = sq * sq;
    }
    let product = powers
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, q| acc * (Complex64::new(1.0, 0.0) + q));

    // s^λ for λ ∈ Λ₄ ∩ [0, 4^N): one term per subset of the powers.
    let terms: Vec<Complex64> = (0u64..(1u64 << truncation))
        .map(|k| {
            powers
                .iter()
                .enumerate()
                .filter(|(n, _)| (k >> n) & 1 == 1)
                .fold(Complex64::new(1.0, 0.0), |acc, (_, q)| acc * q)
        })
        .collect();
    let sum = pairwise_sum(&terms);

    // |∏_{n≥N}(1+a_n) − 1| ≤ exp(Σ|a_n|) − 1 and Σ_{n≥N} r^{4^n} ≤ r^{4^N}/(1−r).
    let tail = r.powf(4f64.powi(truncation as i32)) / (1.0 - r);
    let gap_bound = product.norm() * tail.exp_m1();
    Ok(GeneratingFunction {
        product,
        sum,
        gap_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierComparison {
    pub t: f64,
    /// `∏_{k=1}^{N} (1 + e^{iπt/4^k}) / 2`, the displayed product formula.
    pub product_formula: Complex64,
    /// `∫ e^{2πitx} dμ₄(x)` by cell quadrature.
    pub quadrature: Complex64,
    pub truncation: u32,
    pub resolution: u32,
}

/// Fourier transform of μ₄: the closed product formula side by side with
/// direct quadrature. The two use different frequency conventions and are
/// reported, not reconciled.
pub fn mu4_fourier(t: f64, truncation: u32, resolution: u32) -> FourierComparison {
    let mut product = Complex64::new(1.0, 0.0);
    let mut scale = 1.0;
    for _ in 0..truncation {
        scale *= 0.25;
        let phase = Complex64::from_polar(1.0, PI * t * scale);
        product *= (Complex64::new(1.0, 0.0) + phase) * 0.5;
    }
    let quadrature = integrate(&MeasureModel::cantor4(resolution), resolution, |x| {
        cis_turns(t * x)
    });
    FourierComparison {
        t,
        product_formula: product,
        quadrature,
        truncation,
        resolution,
    }
}

/// `Σ_cells mass · f(left endpoint)` in fixed pairwise order.
pub fn integrate<T, F>(model: &MeasureModel, resolution: u32, f: F) -> T
where
    T: Copy + Zero + Mul<f64, Output = T>,
    F: Fn(f64) -> T,
{
    let part = cells(model, resolution);
    let terms: Vec<T> = part
        .cells
        .iter()
        .map(|c| f(c.representative()) * c.mass)
        .collect();
    pairwise_sum(&terms)
}

/// Gram matrix of the exponentials `e(λt)` in `L²(μ₄)`, entries
/// `∫ conj(e(λ_i t)) e(λ_j t) dμ₄` by quadrature.
pub fn fourier_gram(lams: &[u64], resolution: u32, allow_any: bool) -> Result<GramMatrix> {
    if !allow_any {
        if let Some(&bad) = lams.iter().find(|&&l| !is_lambda4(l)) {
            return Err(Error::InvalidInput(format!(
                "{bad} is not in the Cantor spectrum (pass allow_any to override)"
            )));
        }
    }
    for (i, a) in lams.iter().enumerate() {
        if let Some(j) = lams[..i].iter().position(|b| b == a) {
            return Err(Error::DuplicatePoint { first: j, second: i });
        }
    }
    let model = MeasureModel::cantor4(resolution);
    let n = lams.len();
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = integrate(&model, resolution, |_| Complex64::new(1.0, 0.0));
        for j in (i + 1)..n {
            let freq = lams[j] as f64 - lams[i] as f64;
            let v = integrate(&model, resolution, |x| cis_turns(freq * x));
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    let points = lams.iter().map(|&l| Point::Real(l as f64)).collect();
    Ok(GramMatrix::from_parts(m, points))
}

/// Largest off-diagonal modulus of a square matrix.
pub fn off_diagonal_max(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if i != j {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_depth_one_cells() {
        let p = cells(&MeasureModel::cantor4(0), 1);
        assert_eq!(p.len(), 2);
        assert_eq!((p.cells[0].a, p.cells[0].b, p.cells[0].mass), (0.0, 0.25, 0.5));
        assert_eq!((p.cells[1].a, p.cells[1].b, p.cells[1].mass), (0.5, 0.75, 0.5));
    }

    #[test]
    fn resolution_zero_is_whole_interval() {
        for m in [MeasureModel::lebesgue(0), MeasureModel::cantor4(0)] {
            let p = cells(&m, 0);
            assert_eq!(p.cells, vec![Cell { a: 0.0, b: 1.0, mass: 1.0 }]);
        }
    }

    #[test]
    fn lebesgue_resolution_two() {
        let p = cells(&MeasureModel::lebesgue(0), 2);
        assert_eq!(p.len(), 4);
        assert!(p.cells.iter().all(|c| c.mass == 0.25));
    }

    #[test]
    fn cdf_digit_walk_values() {
        assert_eq!(mu4_cdf(0.0).unwrap(), 0.0);
        assert_eq!(mu4_cdf(1.0).unwrap(), 1.0);
        assert_eq!(mu4_cdf(0.25).unwrap(), 0.5);
        assert_eq!(mu4_cdf(0.5).unwrap(), 0.5);
        assert_eq!(mu4_cdf(0.75).unwrap(), 1.0);
        assert!(mu4_cdf(1.5).is_err());
        assert!(mu4_cdf(-0.1).is_err());
    }

    #[test]
    fn cdf_agrees_with_cell_counting() {
        // cross-oracle: mass of depth-8 cells lying left of x
        let p = cells(&MeasureModel::cantor4(0), 8);
        for &x in &[0.25, 0.1, 0.6, 0.7, 0.9, 0.13] {
            let counted: f64 = p.cells.iter().filter(|c| c.b <= x).map(|c| c.mass).sum();
            let partial = p.cells.iter().find(|c| c.a < x && x < c.b);
            let cdf = mu4_cdf(x).unwrap();
            match partial {
                None => assert!((cdf - counted).abs() < 1e-15, "x={x}"),
                Some(c) => assert!(cdf >= counted && cdf <= counted + c.mass),
            }
        }
    }

    #[test]
    fn lambda4_examples() {
        assert_eq!(lambda4(66), vec![0, 1, 4, 5, 16, 17, 20, 21, 64, 65]);
        assert_eq!(lambda4(1), vec![0]);
        assert_eq!(lambda4(0), Vec::<u64>::new());
    }

    #[test]
    fn generating_function_examples() {
        let g = generating_function(Complex64::new(0.0, 0.0), 3).unwrap();
        assert_eq!(g.product, Complex64::new(1.0, 0.0));
        assert_eq!(g.sum, Complex64::new(1.0, 0.0));
        assert_eq!(g.gap_bound, 0.0);

        let g = generating_function(Complex64::new(0.5, 0.0), 3).unwrap();
        let direct = 1.5 * (1.0 + 0.5f64.powi(4)) * (1.0 + 0.5f64.powi(16));
        assert!((g.product.re - direct).abs() < 1e-15);
        assert!((g.product.re - 1.593_774_318_695_068_4).abs() < 1e-12);
        assert!((g.sum - g.product).norm() < 1e-12);

        assert!(generating_function(Complex64::new(1.0, 0.0), 2).is_err());
    }

    #[test]
    fn functional_equation_at_truncation() {
        let s = Complex64::new(0.3, -0.4);
        let s4 = s.powu(4);
        for n in 2..6 {
            let lhs = generating_function(s, n).unwrap().product;
            let rhs = (1.0 + s) * generating_function(s4, n - 1).unwrap().product;
            assert!((lhs - rhs).norm() < 1e-14);
        }
    }

    #[test]
    fn fourier_transform_basics() {
        let r = mu4_fourier(0.0, 12, 6);
        assert_eq!(r.product_formula, Complex64::new(1.0, 0.0));
        assert_eq!(r.quadrature, Complex64::new(1.0, 0.0));
        for i in 0..50 {
            let r = mu4_fourier(i as f64 * 0.77, 10, 6);
            assert!(r.product_formula.norm() <= 1.0 + 1e-15);
            assert!(r.quadrature.norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn integrate_examples() {
        for r in [0, 3, 10] {
            let one: f64 = integrate(&MeasureModel::cantor4(r), r, |_| 1.0);
            assert_eq!(one, 1.0);
            let m: f64 = integrate(&MeasureModel::cantor4(r), r, |x| x);
            assert!((m - 1.0 / 3.0).abs() <= 0.25f64.powi(r as i32));
            let l: f64 = integrate(&MeasureModel::lebesgue(r), r, |x| x);
            assert!((l - 0.5).abs() <= 0.5f64.powi(r as i32));
        }
    }

    #[test]
    fn fourier_gram_orthonormal_on_spectrum() {
        let g = fourier_gram(&[0, 1, 4, 5], 12, false).unwrap();
        for i in 0..4 {
            assert_eq!(g.entries()[(i, i)], Complex64::new(1.0, 0.0));
        }
        assert!(g.entries()[(0, 1)].norm() <= 0.01);
        assert!(fourier_gram(&[0, 2], 8, false).is_err());
        let off = fourier_gram(&[0, 2], 12, true).unwrap();
        assert!(off.entries()[(0, 1)].norm() > 0.1);
    }

    #[test]
    fn interval_mass_matches_cells() {
        let m = MeasureModel::cantor4(0);
        assert_eq!(m.interval_mass(0.0, 0.25), 0.5);
        assert_eq!(m.interval_mass(0.25, 0.5), 0.0);
        assert!((MeasureModel::lebesgue(0).interval_mass(0.2, 0.7) - 0.5).abs() < 1e-15);
    }
}
