//! Frames of kernel sections, Parseval sums, and the sawtooth witness.
//!
//! Frame statements are certified only on the span of the truncated system
//! `{K(·, s) : s ∈ S_N}`; the reports say so in their `scope` field.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorize::{jacobi_eigen_decomposition, jacobi_eigs, GramSolver};
use crate::kernels::{gram, KernelFamily, KernelSpec, Point};
use crate::matrix::pairwise_sum;

/// Jacobi stopping tolerance relative to `‖K_S‖_F`.
const JACOBI_TOL: f64 = 1e-15;

/// Largest truncation used when frame bounds accompany a Parseval check.
pub const FRAME_BOUND_CAP: i64 = 100;

const SCOPE: &str = "bounds hold on the span of the truncated system only";

/// Sample sets that are enumerated by truncation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountableSet {
    /// `{-N, …, N}` at truncation `N`.
    Integers,
    /// `{1, …, N}` at truncation `N`.
    PositiveIntegers,
}

impl CountableSet {
    pub fn truncate(&self, n: i64) -> Vec<Point> {
        let range = match self {
            CountableSet::Integers => -n..=n,
            CountableSet::PositiveIntegers => 1..=n,
        };
        range.map(|k| Point::Real(k as f64)).collect()
    }
}

impl std::str::FromStr for CountableSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "integers" | "Z" => Ok(Self::Integers),
            "positive-integers" | "N" => Ok(Self::PositiveIntegers),
            other => Err(Error::Parse(format!("unknown sample set '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParsevalPoint {
    pub x: f64,
    pub kxx: f64,
    /// `Σ_{s ∈ S_N} |K(x, s)|²`.
    pub partial_sum: f64,
    pub deficit: f64,
    /// Rigorous bound on the omitted terms, when one is known.
    pub tail_bound: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameVerdict {
    Parseval,
    NotParseval,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameReport {
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// Truncation at which the bounds were computed.
    pub bounds_truncation: i64,
    pub parseval_deficit: f64,
    pub tolerance: f64,
    pub truncation: i64,
    pub points: Vec<ParsevalPoint>,
    pub verdict: FrameVerdict,
    pub scope: &'static str,
}

/// `Σ_{|n| > N} sinc²(x − n) ≤ 2 / (π² (N − |x|))`.
pub fn shannon_tail_bound(x: f64, n: i64) -> f64 {
    let gap = n as f64 - x.abs();
    if gap <= 0.0 {
        f64::INFINITY
    } else {
        2.0 / (PI * PI * gap)
    }
}

/// Compares `K(x,x)` with the truncated sum `Σ |K(x,s)|²` at each test
/// point. The verdict is Parseval when every deficit is within the tail
/// bound (or `1e-12 · K(x,x)` when no bound is known) and the frame bounds
/// on the truncated system are 1 to within `1e-9`.
pub fn parseval_check(
    spec: &KernelSpec,
    set: &CountableSet,
    test_points: &[f64],
    truncation: i64,
) -> Result<FrameReport> {
    if truncation < 1 {
        return Err(Error::InvalidInput("truncation must be at least 1".into()));
    }
    let samples = set.truncate(truncation);
    for s in &samples {
        spec.check_point(s)?;
    }
    let shannon_on_integers =
        matches!(spec.family, KernelFamily::Shannon) && *set == CountableSet::Integers;

    let points: Vec<ParsevalPoint> = test_points
        .par_iter()
        .map(|&x| {
            let p = Point::Real(x);
            spec.check_point(&p)?;
            let kxx = spec.eval_unchecked(&p, &p).re;
            let terms: Vec<f64> = samples.iter().map(|s| spec.eval_unchecked(&p, s).norm_sqr()).collect();
            let partial_sum = pairwise_sum(&terms);
            let tail_bound = shannon_on_integers.then(|| shannon_tail_bound(x, truncation) * spec.scale * spec.scale);
            Ok(ParsevalPoint {
                x,
                kxx,
                partial_sum,
                deficit: (kxx - partial_sum).abs(),
                tail_bound,
            })
        })
        .collect::<Result<_>>()?;

    let cap = truncation.min(FRAME_BOUND_CAP);
    let (lower_bound, upper_bound) = frame_bounds(spec, &set.truncate(cap))?;
    let mut within = true;
    let mut tolerance: f64 = 0.0;
    for p in &points {
        let tol = p.tail_bound.unwrap_or(0.0) + 1e-12 * p.kxx.abs().max(1.0);
        tolerance = tolerance.max(tol);
        within &= p.deficit <= tol;
    }
    let unit_bounds = (lower_bound - 1.0).abs() <= 1e-9 && (upper_bound - 1.0).abs() <= 1e-9;
    let parseval_deficit = points.iter().map(|p| p.deficit).fold(0.0, f64::max);
    Ok(FrameReport {
        lower_bound,
        upper_bound,
        bounds_truncation: cap,
        parseval_deficit,
        tolerance,
        truncation,
        points,
        verdict: if within && unit_bounds {
            FrameVerdict::Parseval
        } else {
            FrameVerdict::NotParseval
        },
        scope: SCOPE,
    })
}

/// Extreme eigenvalues of `K_S`: on `span{K(·,s)}` the ratio
/// `Σ_s |f(s)|² / ‖f‖²` ranges exactly over `[λ_min, λ_max]`.
pub fn frame_bounds(spec: &KernelSpec, s: &[Point]) -> Result<(f64, f64)> {
    let g = gram(spec, s)?;
    GramSolver::new(&g, 0.0)?;
    let eig = jacobi_eigs(&g, JACOBI_TOL);
    let max = eig.eigenvalues.first().copied().unwrap_or(0.0);
    let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
    Ok((min, max))
}

/// `f(t) = Σ_s (K_S⁻¹ f_S)(s) K(t, s)`, with `K_S⁻¹` applied through the
/// eigendecomposition of `K_S`.
pub fn frame_reconstruct(
    spec: &KernelSpec,
    s: &[Point],
    f_samples: &[Complex64],
    eval_points: &[Point],
) -> Result<Vec<Complex64>> {
    if f_samples.len() != s.len() {
        return Err(Error::DimensionMismatch {
            expected: s.len(),
            got: f_samples.len(),
        });
    }
    for t in eval_points {
        spec.check_point(t)?;
    }
    let g = gram(spec, s)?;
    let n = s.len();
    let real = g.is_real();
    let a = g.real_form();
    let (eig, u) = jacobi_eigen_decomposition(&a, JACOBI_TOL);
    let top = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if let Some((i, &low)) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .find(|(_, &l)| !(l > 1e-12 * top.max(f64::MIN_POSITIVE)))
    {
        return Err(Error::Singular { row: i, pivot: low });
    }
    let rhs: Vec<f64> = if real {
        f_samples.iter().map(|z| z.re).collect()
    } else {
        f_samples.iter().map(|z| z.re).chain(f_samples.iter().map(|z| z.im)).collect()
    };
    let solve = |b: &[f64]| -> Vec<f64> {
        let dim = b.len();
        let mut out = vec![0.0; dim];
        for (k, &l) in eig.eigenvalues.iter().enumerate() {
            let proj: f64 = (0..dim).map(|i| u[(i, k)] * b[i]).sum::<f64>() / l;
            for (i, o) in out.iter_mut().enumerate() {
                *o += u[(i, k)] * proj;
            }
        }
        out
    };
    let coeffs: Vec<Complex64> = if real {
        let re = solve(&rhs);
        let im: Vec<f64> = f_samples.iter().map(|z| z.im).collect();
        let im = if im.iter().all(|&v| v == 0.0) { vec![0.0; n] } else { solve(&im) };
        re.into_iter().zip(im).map(|(r, i)| Complex64::new(r, i)).collect()
    } else {
        let c = solve(&rhs);
        (0..n).map(|i| Complex64::new(c[i], c[i + n])).collect()
    };
    Ok(eval_points
        .iter()
        .map(|t| s.iter().zip(&coeffs).map(|(y, c)| c * spec.eval_unchecked(t, y)).sum())
        .collect())
}

/// Slopes for the sawtooth teeth.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlopeRule {
    /// `c_n = 1 / (n √Δx_n)`, so tooth `n` contributes `1/n²` to the norm.
    Harmonic,
    Custom(Vec<f64>),
}

/// Piecewise-linear function with one tent ("tooth") between consecutive
/// knots: slope `c_n` up to the midpoint, `−c_n` back down, zero outside.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SawtoothWitness {
    pub knots: Vec<f64>,
    pub slopes: Vec<f64>,
    /// `Σ c_n² Δx_n = ∫ |f'|²`.
    pub norm_sq: f64,
    /// Running sums of the tooth contributions.
    pub partial_norm_sq: Vec<f64>,
}

impl SawtoothWitness {
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.knots.len();
        if n < 2 || x <= self.knots[0] || x >= self.knots[n - 1] {
            return 0.0;
        }
        let i = self.knots.partition_point(|&k| k <= x) - 1;
        let (a, b) = (self.knots[i], self.knots[i + 1]);
        self.slopes[i] * (x - a).min(b - x)
    }

    /// Value at the midpoint of tooth `n`: `c_n Δx_n / 2`.
    pub fn apex(&self, n: usize) -> f64 {
        self.slopes[n] * (self.knots[n + 1] - self.knots[n]) / 2.0
    }

    /// `⟨f, K(·, y)⟩` for the Brownian kernel, which the reproducing
    /// property turns into `f(y)`.
    pub fn inner_with_section(&self, y: f64) -> f64 {
        self.eval(y)
    }

    /// `∫₀^y f'(t) dt` accumulated tooth by tooth, an independent route to
    /// the same inner product.
    pub fn derivative_pairing(&self, y: f64) -> f64 {
        let mut acc = 0.0;
        for (i, &c) in self.slopes.iter().enumerate() {
            let (a, b) = (self.knots[i], self.knots[i + 1]);
            let m = 0.5 * (a + b);
            let up = (y.min(m) - a).max(0.0);
            let down = (y.min(b) - m).max(0.0);
            acc += c * up - c * down;
        }
        acc
    }
}

/// Builds the sawtooth on the given knots. For the Brownian kernel it is a
/// nonzero element of finite norm vanishing at every knot, so it is
/// orthogonal to every `K(·, x_n)`.
pub fn sawtooth_witness(knots: &[f64], rule: &SlopeRule) -> Result<SawtoothWitness> {
    if knots.len() < 2 {
        return Err(Error::InvalidInput("sawtooth needs at least two knots".into()));
    }
    if knots[0] < 0.0 || !knots.iter().all(|k| k.is_finite()) {
        return Err(Error::OutOfDomain(format!(
            "knots must be finite and non-negative, first is {}",
            knots[0]
        )));
    }
    if let Some(i) = knots.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::NotIncreasing(i + 1));
    }
    let teeth = knots.len() - 1;
    let slopes: Vec<f64> = match rule {
        SlopeRule::Harmonic => (0..teeth)
            .map(|i| 1.0 / ((i + 1) as f64 * (knots[i + 1] - knots[i]).sqrt()))
            .collect(),
        SlopeRule::Custom(c) => {
            if c.len() != teeth {
                return Err(Error::DimensionMismatch {
                    expected: teeth,
                    got: c.len(),
                });
            }
            c.clone()
        }
    };
    if slopes.iter().all(|&c| c == 0.0) {
        return Err(Error::InvalidInput("all slopes are zero".into()));
    }
    let mut partial_norm_sq = Vec::with_capacity(teeth);
    let mut acc = 0.0;
    for (i, c) in slopes.iter().enumerate() {
        acc += c * c * (knots[i + 1] - knots[i]);
        partial_norm_sq.push(acc);
    }
    Ok(SawtoothWitness {
        knots: knots.to_vec(),
        slopes,
        norm_sq: acc,
        partial_norm_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::real_points;
    use crate::rkhs;

    #[test]
    fn shannon_parseval_at_integers_is_exact() {
        let r = parseval_check(&KernelSpec::shannon(), &CountableSet::Integers, &[0.0, 3.0, -7.0], 50).unwrap();
        for p in &r.points {
            assert_eq!(p.deficit, 0.0);
        }
        assert_eq!(r.verdict, FrameVerdict::Parseval);
    }

    #[test]
    fn shannon_deficit_shrinks_with_truncation() {
        for x in [0.25, 0.5, 0.75] {
            let d: Vec<f64> = [100, 1000, 10_000]
                .iter()
                .map(|&n| parseval_check(&KernelSpec::shannon(), &CountableSet::Integers, &[x], n).unwrap().parseval_deficit)
                .collect();
            assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
        }
        let r = parseval_check(&KernelSpec::shannon(), &CountableSet::Integers, &[0.5], 10_000).unwrap();
        assert!(r.parseval_deficit <= 1e-4);
        assert!(r.parseval_deficit <= r.points[0].tail_bound.unwrap());
    }

    #[test]
    fn brownian_partial_sums_diverge() {
        let k = KernelSpec::brownian_min();
        let a = parseval_check(&k, &CountableSet::PositiveIntegers, &[0.5], 100).unwrap();
        let b = parseval_check(&k, &CountableSet::PositiveIntegers, &[0.5], 400).unwrap();
        assert!((a.points[0].partial_sum - 25.0).abs() < 1e-12);
        assert!((b.points[0].partial_sum - 100.0).abs() < 1e-12);
        assert_eq!(b.verdict, FrameVerdict::NotParseval);
    }

    #[test]
    fn frame_bound_examples() {
        let ints = real_points(&(-5..=5).map(|v| v as f64).collect::<Vec<_>>());
        let (a, b) = frame_bounds(&KernelSpec::shannon(), &ints).unwrap();
        assert!((a - 1.0).abs() < 1e-14 && (b - 1.0).abs() < 1e-14);
        let pts = real_points(&[1.0, 2.0, 3.0]);
        let (a1, b1) = frame_bounds(&KernelSpec::brownian_min(), &pts).unwrap();
        let (a2, b2) = frame_bounds(&KernelSpec::brownian_min().scaled(2.0), &pts).unwrap();
        assert!((a2 - 2.0 * a1).abs() < 1e-12 && (b2 - 2.0 * b1).abs() < 1e-12);
        // characteristic polynomial of [[1,1,1],[1,2,2],[1,2,3]] is λ³ − 6λ² + 5λ − 1
        for l in [a1, b1] {
            assert!((l.powi(3) - 6.0 * l * l + 5.0 * l - 1.0).abs() < 1e-12);
        }
        let singular = real_points(&[0.0, 1.0]);
        assert!(frame_bounds(&KernelSpec::brownian_min(), &singular).is_err());
    }

    #[test]
    fn reconstruction_examples() {
        let k = KernelSpec::shannon();
        let s = real_points(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        let f = |x: f64| crate::phase::sinc_pi(x - 1.0) + 2.0 * crate::phase::sinc_pi(x - 3.0);
        let fs: Vec<Complex64> = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0].iter().map(|&x| Complex64::new(f(x), 0.0)).collect();
        let t = real_points(&[2.5, -1.3, 7.25]);
        let v = frame_reconstruct(&k, &s, &fs, &t).unwrap();
        for (p, z) in [2.5, -1.3, 7.25].iter().zip(&v) {
            assert!((z.re - f(*p)).abs() < 1e-10);
        }
        let p = rkhs::project(&k, &s, &fs, &t).unwrap();
        for (a, b) in v.iter().zip(&p) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn reconstruction_of_complex_sections() {
        let k = KernelSpec::szego();
        let s: Vec<Point> = [(0.1, 0.2), (-0.4, 0.0), (0.0, -0.6), (0.5, 0.5)]
            .iter()
            .map(|&(a, b)| Point::Disk(Complex64::new(a, b)))
            .collect();
        let y = s[2].clone();
        let fs: Vec<Complex64> = s.iter().map(|x| k.eval_unchecked(x, &y)).collect();
        let t = vec![Point::Disk(Complex64::new(0.3, -0.3)), Point::Disk(Complex64::new(0.0, 0.0))];
        let v = frame_reconstruct(&k, &s, &fs, &t).unwrap();
        for (p, z) in t.iter().zip(&v) {
            assert!((z - k.eval_unchecked(p, &y)).norm() < 1e-10);
        }
    }

    #[test]
    fn sawtooth_examples() {
        let knots: Vec<f64> = (1..=11).map(|v| v as f64).collect();
        let w = sawtooth_witness(&knots, &SlopeRule::Harmonic).unwrap();
        for &x in &knots {
            assert_eq!(w.eval(x), 0.0);
            assert_eq!(w.inner_with_section(x), 0.0);
            assert_eq!(w.derivative_pairing(x), 0.0);
        }
        assert!((w.norm_sq - 1.5497677311665408).abs() < 1e-12);
        let w = sawtooth_witness(&[1.0, 2.0], &SlopeRule::Custom(vec![3.0])).unwrap();
        assert_eq!(w.eval(1.5), 1.5);
        assert_eq!(w.apex(0), 1.5);
        assert!(matches!(
            sawtooth_witness(&[1.0, 1.0, 2.0], &SlopeRule::Harmonic),
            Err(Error::NotIncreasing(1))
        ));
    }

    #[test]
    fn sawtooth_pairing_agrees_off_knots() {
        let knots = [0.5, 0.75, 1.5, 1.6, 3.0];
        let w = sawtooth_witness(&knots, &SlopeRule::Harmonic).unwrap();
        for i in 0..60 {
            let y = i as f64 * 0.055;
            assert!((w.derivative_pairing(y) - w.eval(y)).abs() < 1e-12, "y={y}");
        }
    }
}
