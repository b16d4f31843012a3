//! RKHS computations on finite sample sets.
//!
//! For a finite set `F` the restricted kernel `K_F` is a positive-definite
//! matrix and everything reduces to solves against it: projections onto
//! `span{K(·, y) : y ∈ F}`, norms `⟨h_F, K_F⁻¹ h_F⟩`, Dirac masses
//! `‖δ_x‖² = (K_F⁻¹)_{xx}` and the graph Laplacian `Δh = K_F⁻¹ h_F`.
//!
//! Points with `K(x, x) = 0` (the origin for the Brownian kernels, the
//! endpoints for the Green kernel) are *null points*: every function in the
//! RKHS vanishes there, so they carry no coordinate. They are dropped before
//! `K_F` is formed instead of making it singular, and sample values there
//! must be zero.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorize::GramSolver;
use crate::kernels::{gram, GramMatrix, KernelSpec, Point};
use crate::matrix::CMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// An ordered set of distinct points, optionally with a nested chain of
/// subsets `F₁ ⊂ F₂ ⊂ …` whose last member is the whole set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSet {
    points: Vec<Point>,
    /// Each level as indices into `points`.
    levels: Vec<Vec<usize>>,
}

impl SampleSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        check_distinct(&points)?;
        Ok(Self {
            points,
            levels: Vec::new(),
        })
    }

    pub fn real(xs: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| Point::Real(x)).collect())
    }

    /// Builds a set from nested levels. Points are ordered by the level in
    /// which they first appear.
    pub fn from_chain(levels: Vec<Vec<Point>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidInput("chain needs at least one level".into()));
        }
        let mut points: Vec<Point> = Vec::new();
        let mut index_levels = Vec::with_capacity(levels.len());
        for (k, level) in levels.iter().enumerate() {
            check_distinct(level)?;
            if k > 0 {
                let prev = &levels[k - 1];
                if level.len() <= prev.len() || !prev.iter().all(|p| level.contains(p)) {
                    return Err(Error::InvalidInput(format!(
                        "chain level {k} does not strictly contain level {}",
                        k - 1
                    )));
                }
            }
            let mut idx = Vec::with_capacity(level.len());
            for p in level {
                let i = match points.iter().position(|q| q == p) {
                    Some(i) => i,
                    None => {
                        points.push(p.clone());
                        points.len() - 1
                    }
                };
                idx.push(i);
            }
            index_levels.push(idx);
        }
        Ok(Self {
            points,
            levels: index_levels,
        })
    }

    /// `{-n, …, n}` for `n = 1, …, max_n`.
    pub fn symmetric_integer_chain(max_n: i64) -> Result<Self> {
        Self::from_chain(
            (1..=max_n)
                .map(|n| (-n..=n).map(|k| Point::Real(k as f64)).collect())
                .collect(),
        )
    }

    /// Dyadic grids `{j·2^-k : 1 ≤ j ≤ 2^k}` for `k = k_min, …, k_max`.
    pub fn dyadic_chain(k_min: u32, k_max: u32) -> Result<Self> {
        Self::from_chain(
            (k_min..=k_max)
                .map(|k| {
                    let m = 1u64 << k;
                    (1..=m).map(|j| Point::Real(j as f64 / m as f64)).collect()
                })
                .collect(),
        )
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Chain levels as index lists; a set without a chain has one level.
    pub fn levels(&self) -> Vec<Vec<usize>> {
        if self.levels.is_empty() {
            vec![(0..self.points.len()).collect()]
        } else {
            self.levels.clone()
        }
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }
}

fn check_distinct(points: &[Point]) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        if let Some(j) = points[..i].iter().position(|q| q == p) {
            return Err(Error::DuplicatePoint { first: j, second: i });
        }
    }
    Ok(())
}

/// `K_F` with null points removed, ready for solves.
struct Restricted {
    gram: GramMatrix,
    solver: GramSolver,
    /// Positions (in the caller's point list) that made it into `gram`.
    kept: Vec<usize>,
}

impl Restricted {
    fn new(spec: &KernelSpec, points: &[Point]) -> Result<Self> {
        check_distinct(points)?;
        let mut kept = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            spec.check_point(p)?;
            if spec.eval_unchecked(p, p).re > 0.0 {
                kept.push(i);
            }
        }
        let reduced: Vec<Point> = kept.iter().map(|&i| points[i].clone()).collect();
        let gram = gram(spec, &reduced)?;
        let solver = GramSolver::new(&gram, 0.0)?;
        Ok(Self { gram, solver, kept })
    }

    /// Values on the kept points; values at null points must be zero.
    fn reduce(&self, values: &[Complex64], points: &[Point]) -> Result<Vec<Complex64>> {
        if values.len() != points.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                got: values.len(),
            });
        }
        for (i, v) in values.iter().enumerate() {
            if !self.kept.contains(&i) && *v != ZERO {
                return Err(Error::InvalidInput(format!(
                    "value {v} at {} where every RKHS function vanishes",
                    points[i]
                )));
            }
        }
        Ok(self.kept.iter().map(|&i| values[i]).collect())
    }

    /// Expands a vector on the kept points back to all points (zeros at
    /// null points).
    fn expand(&self, reduced: &[Complex64], n: usize) -> Vec<Complex64> {
        let mut out = vec![ZERO; n];
        for (&i, &v) in self.kept.iter().zip(reduced) {
            out[i] = v;
        }
        out
    }
}

/// A function in the RKHS, as kernel coefficients or as raw samples.
#[derive(Debug, Clone, PartialEq)]
pub enum RkhsFunction {
    /// `Σ_y ξ_y K(·, y)`.
    Coefficients {
        points: Vec<Point>,
        coeffs: Vec<Complex64>,
    },
    /// `h` restricted to a finite set.
    Samples {
        points: Vec<Point>,
        values: Vec<Complex64>,
    },
}

impl RkhsFunction {
    /// Evaluates the coefficient form at `t`. Sample form can only be read
    /// back at its own points.
    pub fn eval(&self, spec: &KernelSpec, t: &Point) -> Result<Complex64> {
        spec.check_point(t)?;
        match self {
            RkhsFunction::Coefficients { points, coeffs } => Ok(points
                .iter()
                .zip(coeffs)
                .map(|(y, c)| c * spec.eval_unchecked(t, y))
                .sum()),
            RkhsFunction::Samples { points, values } => points
                .iter()
                .position(|p| p == t)
                .map(|i| values[i])
                .ok_or_else(|| {
                    Error::InvalidInput(format!("sampled function is not known at {t}"))
                }),
        }
    }

    /// `‖Σ ξ_y K(·,y)‖² = ξ* K ξ`; only defined for the coefficient form.
    pub fn norm_sq(&self, spec: &KernelSpec) -> Result<f64> {
        match self {
            RkhsFunction::Coefficients { points, coeffs } => {
                let g = gram(spec, points)?;
                let kc = g.entries().mul_vec(coeffs);
                Ok(coeffs.iter().zip(&kc).map(|(c, v)| (c.conj() * v).re).sum())
            }
            RkhsFunction::Samples { .. } => Err(Error::InvalidInput(
                "norm of a sampled function needs a Gram solve; use rkhs_norm_sq".into(),
            )),
        }
    }
}

/// The minimal-norm element of `span{K(·, y) : y ∈ F}` matching `h` on `F`,
/// i.e. the orthogonal projection of `h` onto that span.
pub fn interpolant(spec: &KernelSpec, f: &[Point], h_values: &[Complex64]) -> Result<RkhsFunction> {
    let r = Restricted::new(spec, f)?;
    let h = r.reduce(h_values, f)?;
    let coeffs = r.solver.solve(&h);
    Ok(RkhsFunction::Coefficients {
        points: r.kept.iter().map(|&i| f[i].clone()).collect(),
        coeffs,
    })
}

/// `(P_F h)(t) = Σ_y (K_F⁻¹ h_F)(y) K(t, y)` at each evaluation point.
pub fn project(
    spec: &KernelSpec,
    f: &[Point],
    h_values: &[Complex64],
    eval_points: &[Point],
) -> Result<Vec<Complex64>> {
    let g = interpolant(spec, f, h_values)?;
    eval_points.iter().map(|t| g.eval(spec, t)).collect()
}

/// Generalized spline: the isometric extension of data on `S` to the whole
/// domain. Identical to [`project`] with `F = S`.
pub fn extend_spline(
    spec: &KernelSpec,
    s: &[Point],
    h_values: &[Complex64],
    eval_points: &[Point],
) -> Result<Vec<Complex64>> {
    project(spec, s, h_values, eval_points)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormSequence {
    /// `⟨h_F, K_F⁻¹ h_F⟩` for every level of the chain.
    pub sequence: Vec<f64>,
    pub level_sizes: Vec<usize>,
    pub sup: f64,
    pub last: f64,
}

/// Norm² of the sampled function on each level of the chain. Along a nested
/// chain the sequence is nondecreasing, and its supremum is the RKHS norm²
/// when `h` belongs to the space.
pub fn rkhs_norm_sq(
    spec: &KernelSpec,
    chain: &SampleSet,
    h_values: &[Complex64],
) -> Result<NormSequence> {
    if h_values.len() != chain.len() {
        return Err(Error::DimensionMismatch {
            expected: chain.len(),
            got: h_values.len(),
        });
    }
    let mut sequence = Vec::new();
    let mut level_sizes = Vec::new();
    for level in chain.levels() {
        let pts: Vec<Point> = level.iter().map(|&i| chain.points()[i].clone()).collect();
        let vals: Vec<Complex64> = level.iter().map(|&i| h_values[i]).collect();
        let r = Restricted::new(spec, &pts)?;
        let h = r.reduce(&vals, &pts)?;
        let c = r.solver.solve(&h);
        let q: f64 = h.iter().zip(&c).map(|(a, b)| (a.conj() * b).re).sum();
        sequence.push(q);
        level_sizes.push(pts.len());
    }
    let sup = sequence.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let last = *sequence.last().expect("chain has at least one level");
    Ok(NormSequence {
        sequence,
        level_sizes,
        sup,
        last,
    })
}

/// Heuristics for turning a finite sequence of `(K_F⁻¹)_{xx}` into a
/// membership verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaPolicy {
    /// Relative change between the last two levels below which the
    /// sequence counts as settled.
    pub rtol: f64,
    /// Absolute value beyond which the sequence counts as diverging.
    pub cap: f64,
    /// Growth factor between the last two levels that counts as diverging.
    pub growth: f64,
}

impl Default for DeltaPolicy {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            cap: 1e6,
            growth: 1.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaVerdict {
    /// The sequence settled; `δ_x` is in the RKHS with `‖δ_x‖² = sup`.
    Member,
    /// The sequence blew past the cap or is still growing geometrically.
    Diverging,
    /// Neither test fired on the available levels.
    Undetermined,
    /// `K(x, x) = 0`: every function vanishes at `x`, so `δ_x` is not in
    /// the space.
    NullPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaReport {
    pub sequence: Vec<f64>,
    pub level_sizes: Vec<usize>,
    pub sup: f64,
    pub verdict: DeltaVerdict,
    /// Chain level at which `x` first appears; earlier levels are skipped.
    pub first_level: usize,
    pub policy: DeltaPolicy,
}

/// `(K_F⁻¹)_{xx}` along the chain. The sequence is nondecreasing and its
/// supremum is `‖δ_x‖²` in the RKHS restricted to the chain's union.
pub fn delta_membership(
    spec: &KernelSpec,
    x: &Point,
    chain: &SampleSet,
    policy: &DeltaPolicy,
) -> Result<DeltaReport> {
    spec.check_point(x)?;
    let levels = chain.levels();
    let Some(xi) = chain.index_of(x) else {
        return Err(Error::InvalidInput(format!("{x} is not in the sample set")));
    };
    // Levels are nested, so x stays in every level after it first appears.
    let first_level = levels.iter().position(|l| l.contains(&xi)).unwrap_or(0);
    let levels = levels[first_level..].to_vec();
    let level_sizes: Vec<usize> = levels.iter().map(Vec::len).collect();
    if spec.eval_unchecked(x, x).re <= 0.0 {
        return Ok(DeltaReport {
            sequence: Vec::new(),
            level_sizes,
            sup: f64::INFINITY,
            verdict: DeltaVerdict::NullPoint,
            first_level,
            policy: *policy,
        });
    }

    let mut sequence = Vec::with_capacity(levels.len());
    for level in &levels {
        let pts: Vec<Point> = level.iter().map(|&i| chain.points()[i].clone()).collect();
        let r = Restricted::new(spec, &pts)?;
        let local = pts.iter().position(|p| p == x).expect("x is in every level");
        let reduced = r.kept.iter().position(|&i| i == local).expect("x is not a null point");
        sequence.push(r.solver.inverse_diagonal(reduced));
    }

    let sup = sequence.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let last = *sequence.last().expect("chain has at least one level");
    let prev = sequence.len().checked_sub(2).map(|i| sequence[i]);
    let verdict = match prev {
        _ if last > policy.cap => DeltaVerdict::Diverging,
        Some(p) if last > policy.growth * p => DeltaVerdict::Diverging,
        Some(p) if (last - p).abs() <= policy.rtol * last.abs() => DeltaVerdict::Member,
        _ => DeltaVerdict::Undetermined,
    };
    Ok(DeltaReport {
        sequence,
        level_sizes,
        sup,
        verdict,
        first_level,
        policy: *policy,
    })
}

/// Graph Laplacian `(Δh)(x) = (K_S⁻¹ h_S)(x)`; zero at null points.
pub fn laplacian_apply(spec: &KernelSpec, s: &[Point], h_values: &[Complex64]) -> Result<Vec<Complex64>> {
    let r = Restricted::new(spec, s)?;
    let h = r.reduce(h_values, s)?;
    Ok(r.expand(&r.solver.solve(&h), s.len()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct InducedGraph {
    pub vertices: Vec<Point>,
    /// `D = K_S⁻¹`, with zero rows and columns at null points.
    pub weights: CMatrix,
    /// `(i, j, D_ij)` for `i < j` with `|D_ij| > threshold`.
    pub edges: Vec<(usize, usize, Complex64)>,
    pub threshold: f64,
}

/// Graph on `S` with weights from the inverse Gram matrix. The default
/// threshold is `1e-8 · max |D|`.
pub fn induced_graph(spec: &KernelSpec, s: &[Point], threshold: Option<f64>) -> Result<InducedGraph> {
    let r = Restricted::new(spec, s)?;
    let inv = r.solver.inverse();
    let n = s.len();
    let mut weights = CMatrix::zeros(n, n);
    for (a, &i) in r.kept.iter().enumerate() {
        for (b, &j) in r.kept.iter().enumerate() {
            weights[(i, j)] = inv[(a, b)];
        }
    }
    let threshold = threshold.unwrap_or_else(|| 1e-8 * weights.max_abs());
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let w = weights[(i, j)];
            if w.norm() > threshold {
                edges.push((i, j, w));
            }
        }
    }
    debug_assert_eq!(r.gram.n(), r.kept.len());
    Ok(InducedGraph {
        vertices: s.to_vec(),
        weights,
        edges,
        threshold,
    })
}

/// Piecewise-linear function through `(0, 0)` and the given knots, constant
/// after the last knot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseLinear {
    /// Knots including the anchor `(0, 0)`.
    pub knots: Vec<(f64, f64)>,
    /// `∫ |f'|² = Σ (Δy)² / Δx`.
    pub norm_sq: f64,
}

impl PiecewiseLinear {
    /// Any piecewise-linear function through the anchor and `knots`
    /// (strictly increasing, positive abscissae).
    pub fn through(knots: &[(f64, f64)]) -> Result<Self> {
        let mut all = Vec::with_capacity(knots.len() + 1);
        all.push((0.0, 0.0));
        all.extend_from_slice(knots);
        if let Some(i) = all.windows(2).position(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::NotIncreasing(i));
        }
        let norm_sq = all
            .windows(2)
            .map(|w| {
                let dy = w[1].1 - w[0].1;
                dy * dy / (w[1].0 - w[0].0)
            })
            .sum();
        Ok(Self { knots: all, norm_sq })
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let last = *self.knots.last().expect("anchor is always present");
        if x >= last.0 {
            return last.1;
        }
        let i = self.knots.partition_point(|k| k.0 <= x);
        let (x0, y0) = self.knots[i - 1];
        let (x1, y1) = self.knots[i];
        if x == x0 {
            return y0;
        }
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// Minimal-norm interpolant for the Brownian kernel `min(x, y)`: the
/// piecewise-linear spline through the data with `f(0) = 0` and a flat tail.
pub fn min_norm_interpolant(data: &[(f64, f64)]) -> Result<PiecewiseLinear> {
    PiecewiseLinear::through(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    fn pts(xs: &[f64]) -> Vec<Point> {
        xs.iter().map(|&x| Point::Real(x)).collect()
    }

    #[test]
    fn projection_fixes_kernel_sections() {
        let k = KernelSpec::shannon();
        let f = pts(&[0.0, 0.7, 1.9, 3.2]);
        let y0 = f[2].clone();
        let h: Vec<Complex64> = f.iter().map(|x| k.eval_unchecked(x, &y0)).collect();
        let ts = pts(&[-1.0, 0.3, 2.5, 5.0]);
        let p = project(&k, &f, &h, &ts).unwrap();
        for (t, v) in ts.iter().zip(&p) {
            assert!((v - k.eval_unchecked(t, &y0)).norm() < 1e-12);
        }
    }

    #[test]
    fn tent_from_delta_samples() {
        let k = KernelSpec::brownian_line();
        let f = pts(&[2.0, 3.0, 4.0]);
        let h = re(&[0.0, 1.0, 0.0]);
        let ts: Vec<f64> = (0..=24).map(|i| i as f64 * 0.25).collect();
        let p = project(&k, &f, &h, &pts(&ts)).unwrap();
        for (&t, v) in ts.iter().zip(&p) {
            let kt = |y: f64| k.eval_unchecked(&Point::Real(t), &Point::Real(y)).re;
            let tent = 2.0 * kt(3.0) - kt(4.0) - kt(2.0);
            assert!((v.re - tent).abs() < 1e-12, "t={t}");
        }
        let zero = project(&k, &f, &re(&[0.0; 3]), &pts(&[2.5])).unwrap();
        assert_eq!(zero[0], ZERO);
    }

    #[test]
    fn spline_extension_values() {
        let k = KernelSpec::brownian_line();
        let s = pts(&[2.0, 3.0, 4.0]);
        let h = re(&[0.0, 1.0, 0.0]);
        let v = extend_spline(&k, &s, &h, &pts(&[3.5, 5.0, 3.0, 2.0])).unwrap();
        assert!((v[0].re - 0.5).abs() < 1e-12);
        assert!(v[1].re.abs() < 1e-12);
        assert!((v[2].re - 1.0).abs() < 1e-12);
        assert!(v[3].re.abs() < 1e-12);
    }

    #[test]
    fn reproducing_sequence_is_constant() {
        let k = KernelSpec::brownian_min();
        let chain = SampleSet::dyadic_chain(1, 4).unwrap();
        let y = Point::Real(0.5);
        let h: Vec<Complex64> = chain.points().iter().map(|x| k.eval_unchecked(x, &y)).collect();
        let r = rkhs_norm_sq(&k, &chain, &h).unwrap();
        for v in &r.sequence {
            assert!((v - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn integer_chain_norm_is_sum_of_squared_differences() {
        let k = KernelSpec::brownian_line();
        let chain = SampleSet::symmetric_integer_chain(6).unwrap();
        let phi = |n: f64| match n as i64 {
            -2 => 1.5,
            -1 => -0.5,
            1 => 2.0,
            2 => 1.0,
            3 => -1.0,
            _ => 0.0,
        };
        let h: Vec<Complex64> = chain.points().iter().map(|p| Complex64::new(phi(p.as_real().unwrap()), 0.0)).collect();
        let r = rkhs_norm_sq(&k, &chain, &h).unwrap();
        let expected: f64 = (-10..10).map(|n| (phi(n as f64) - phi(n as f64 + 1.0)).powi(2)).sum();
        assert!((r.last - expected).abs() < 1e-9);
        for w in r.sequence.windows(2) {
            assert!(w[1] >= w[0] - 1e-10);
        }
    }

    #[test]
    fn nonzero_value_at_null_point_is_rejected() {
        let k = KernelSpec::brownian_line();
        let chain = SampleSet::symmetric_integer_chain(2).unwrap();
        let mut h = vec![ZERO; chain.len()];
        h[chain.index_of(&Point::Real(0.0)).unwrap()] = Complex64::new(1.0, 0.0);
        assert!(matches!(rkhs_norm_sq(&k, &chain, &h), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn delta_membership_examples() {
        let policy = DeltaPolicy::default();
        let single = SampleSet::real(&[1.0]).unwrap();
        let r = delta_membership(&KernelSpec::brownian_min(), &Point::Real(1.0), &single, &policy).unwrap();
        assert_eq!(r.sequence, vec![1.0]);

        let chain = SampleSet::symmetric_integer_chain(5).unwrap();
        let r = delta_membership(&KernelSpec::brownian_line(), &Point::Real(1.0), &chain, &policy).unwrap();
        assert!((r.sup - 2.0).abs() < 1e-9);
        assert_eq!(r.verdict, DeltaVerdict::Member);

        let r = delta_membership(&KernelSpec::brownian_line(), &Point::Real(0.0), &chain, &policy).unwrap();
        assert_eq!(r.verdict, DeltaVerdict::NullPoint);

        let r = delta_membership(&KernelSpec::brownian_line(), &Point::Real(-2.0), &chain, &policy).unwrap();
        assert_eq!(r.first_level, 1);
        assert_eq!(r.level_sizes, vec![5, 7, 9, 11]);
        assert!((r.sup - 2.0).abs() < 1e-9);

        let grid = SampleSet::dyadic_chain(2, 8).unwrap();
        let r = delta_membership(&KernelSpec::brownian_min(), &Point::Real(0.5), &grid, &policy).unwrap();
        for (k, v) in (2..=8).zip(&r.sequence) {
            // direct oracle: interior diagonal of the tridiagonal inverse is 2/h
            let h = 0.5f64.powi(k);
            assert!((v - 2.0 / h).abs() < 1e-6 * (2.0 / h));
        }
        assert_eq!(r.verdict, DeltaVerdict::Diverging);

        let missing = SampleSet::real(&[1.0, 2.0]).unwrap();
        assert!(delta_membership(&KernelSpec::brownian_min(), &Point::Real(3.0), &missing, &policy).is_err());
    }

    #[test]
    fn laplacian_examples() {
        let k = KernelSpec::brownian_line();
        let s = pts(&[-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0]);
        let phi = [0.5, -1.0, 2.0, 0.0, 1.0, 3.0, -2.0, 0.25];
        let d = laplacian_apply(&k, &s, &re(&phi)).unwrap();
        // interior points away from the null point
        for i in [1usize, 2, 4, 5, 6] {
            let expected = 2.0 * phi[i] - phi[i + 1] - phi[i - 1];
            assert!((d[i].re - expected).abs() < 1e-9, "i={i}");
        }
        let y = Point::Real(2.0);
        let h: Vec<Complex64> = s.iter().map(|x| k.eval_unchecked(x, &y)).collect();
        let d = laplacian_apply(&k, &s, &h).unwrap();
        for (i, v) in d.iter().enumerate() {
            let e = if i == 5 { 1.0 } else { 0.0 };
            assert!((v.re - e).abs() < 1e-12);
        }
        let d = laplacian_apply(&k, &s, &re(&[0.0; 8])).unwrap();
        assert!(d.iter().all(|v| *v == ZERO));
    }

    #[test]
    fn graph_examples() {
        let n = 7;
        let s = pts(&(1..=n).map(|v| v as f64).collect::<Vec<_>>());
        let g = induced_graph(&KernelSpec::brownian_line(), &s, None).unwrap();
        assert_eq!(g.edges.len(), n - 1);
        for (i, j, w) in &g.edges {
            assert_eq!(j - i, 1);
            assert!((w.re + 1.0).abs() < 1e-9);
        }
        let s = pts(&[0.0, 1.0, 2.0, 3.0]);
        let g = induced_graph(&KernelSpec::shannon(), &s, None).unwrap();
        assert!(g.edges.is_empty());
    }

    #[test]
    fn min_norm_examples() {
        assert_eq!(min_norm_interpolant(&[(1.0, 1.0)]).unwrap().norm_sq, 1.0);
        let z = min_norm_interpolant(&[(1.0, 0.0), (2.0, 0.0)]).unwrap();
        assert_eq!(z.norm_sq, 0.0);
        assert_eq!(z.eval(1.5), 0.0);
        let f = min_norm_interpolant(&[(1.0, 1.0), (2.0, 3.0)]).unwrap();
        assert_eq!(f.norm_sq, 5.0);
        assert_eq!(f.eval(1.0), 1.0);
        assert_eq!(f.eval(2.0), 3.0);
        assert_eq!(f.eval(7.0), 3.0);
        assert_eq!(f.eval(0.5), 0.5);
        assert!(matches!(
            min_norm_interpolant(&[(2.0, 1.0), (1.0, 0.0)]),
            Err(Error::NotIncreasing(_))
        ));
    }

    #[test]
    fn min_norm_matches_brownian_projection() {
        let data = [(0.5, 1.0), (1.25, -0.5), (3.0, 2.0)];
        let f = min_norm_interpolant(&data).unwrap();
        let k = KernelSpec::brownian_min();
        let xs: Vec<Point> = data.iter().map(|d| Point::Real(d.0)).collect();
        let ys = re(&data.iter().map(|d| d.1).collect::<Vec<_>>());
        let chain = SampleSet::new(xs.clone()).unwrap();
        let n = rkhs_norm_sq(&k, &chain, &ys).unwrap();
        assert!((n.last - f.norm_sq).abs() < 1e-12);
        let ts: Vec<f64> = (0..40).map(|i| i as f64 * 0.1).collect();
        let p = project(&k, &xs, &ys, &pts(&ts)).unwrap();
        for (&t, v) in ts.iter().zip(&p) {
            assert!((v.re - f.eval(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn chain_must_nest() {
        let bad = vec![pts(&[1.0, 2.0]), pts(&[1.0, 3.0, 4.0])];
        assert!(SampleSet::from_chain(bad).is_err());
        assert!(SampleSet::real(&[1.0, 1.0]).is_err());
    }
}
