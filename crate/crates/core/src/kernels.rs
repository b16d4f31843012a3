//! Kernel families, point domains and Gram matrices.
//!
//! All kernels are conjugate-linear in their first argument: the Szegő kernel
//! is `1 / (1 - conj(z) w)` and the Gram entry `(i, j)` is `K(x_i, x_j)`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorize::jacobi_eigs_real;
use crate::matrix::CMatrix;
use crate::measures::{cells, MeasureModel};
use crate::phase::sinc_pi;

/// A finite union of disjoint closed intervals, kept sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSet(Vec<(f64, f64)>);

impl IntervalSet {
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.iter().any(|&(a, b)| !(a <= b) || !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidInput(
                "interval endpoints must be finite with a <= b".into(),
            ));
        }
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        if intervals.windows(2).any(|w| w[1].0 <= w[0].1) {
            return Err(Error::InvalidInput("intervals must be pairwise disjoint".into()));
        }
        Ok(Self(intervals))
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![(a, b)])
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.0
    }

    /// Pairwise intersections. Touching endpoints produce degenerate
    /// intervals, which carry no mass under atomless measures.
    pub fn intersect(&self, other: &IntervalSet) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for &(a, b) in &self.0 {
            for &(c, d) in &other.0 {
                let lo = a.max(c);
                let hi = b.min(d);
                if lo <= hi {
                    out.push((lo, hi));
                }
            }
        }
        out
    }

    pub fn mass(&self, measure: &MeasureModel) -> f64 {
        self.0.iter().map(|&(a, b)| measure.interval_mass(a, b)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainTag {
    RealLine,
    UnitInterval,
    ComplexDisk,
    ComplexVector(usize),
    IntervalSet,
}

impl fmt::Display for DomainTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainTag::RealLine => write!(f, "real-line"),
            DomainTag::UnitInterval => write!(f, "unit-interval"),
            DomainTag::ComplexDisk => write!(f, "complex-disk"),
            DomainTag::ComplexVector(k) => write!(f, "complex-vector({k})"),
            DomainTag::IntervalSet => write!(f, "interval-set"),
        }
    }
}

impl std::str::FromStr for DomainTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "real-line" => Ok(Self::RealLine),
            "unit-interval" => Ok(Self::UnitInterval),
            "complex-disk" => Ok(Self::ComplexDisk),
            "interval-set" => Ok(Self::IntervalSet),
            _ => {
                let k = s
                    .strip_prefix("complex-vector(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|k| k.parse::<usize>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown domain tag '{s}'")))?;
                Ok(Self::ComplexVector(k))
            }
        }
    }
}

/// A point in one of the kernel domains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", content = "coords", rename_all = "kebab-case")]
pub enum Point {
    Real(f64),
    Unit(f64),
    Disk(Complex64),
    Vector(Vec<Complex64>),
    Sets(IntervalSet),
}

impl Point {
    pub fn tag(&self) -> DomainTag {
        match self {
            Point::Real(_) => DomainTag::RealLine,
            Point::Unit(_) => DomainTag::UnitInterval,
            Point::Disk(_) => DomainTag::ComplexDisk,
            Point::Vector(v) => DomainTag::ComplexVector(v.len()),
            Point::Sets(_) => DomainTag::IntervalSet,
        }
    }

    /// The real coordinate of a real-line or unit-interval point.
    pub fn as_real(&self) -> Option<f64> {
        match *self {
            Point::Real(x) | Point::Unit(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_complex(&self) -> Option<Complex64> {
        match *self {
            Point::Disk(z) => Some(z),
            Point::Real(x) | Point::Unit(x) => Some(Complex64::new(x, 0.0)),
            _ => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Real(x) | Point::Unit(x) => write!(f, "{x}"),
            Point::Disk(z) => write!(f, "{}{:+}i", z.re, z.im),
            Point::Vector(v) => {
                let parts: Vec<String> = v.iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect();
                write!(f, "({})", parts.join(", "))
            }
            Point::Sets(s) => {
                let parts: Vec<String> =
                    s.intervals().iter().map(|(a, b)| format!("[{a}, {b}]")).collect();
                write!(f, "{}", parts.join(" ∪ "))
            }
        }
    }
}

pub fn real_points(xs: &[f64]) -> Vec<Point> {
    xs.iter().map(|&x| Point::Real(x)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum KernelFamily {
    /// `min(x, y)` on `[0, ∞)`: the Brownian covariance.
    BrownianMin,
    /// `min(|x|, |y|)` when `xy ≥ 0`, else 0: two-sided Brownian motion on ℝ.
    BrownianLine,
    /// `1 / (1 - conj(z) w)` on the unit disk.
    Szego,
    /// `∏_{n<N} (1 + (conj(z) w)^{4^n})` on the unit disk.
    CantorProduct { truncation: u32 },
    /// `sinc π(x - y)` on ℝ.
    Shannon,
    /// `1 / (1 - ⟨w, z⟩)` on the unit ball of ℂ^k.
    DruryArveson { dim: usize },
    /// `μ(A ∩ B)` on finite unions of intervals.
    Overlap { measure: MeasureModel },
    /// `min(x, y) - xy` on `[0, 1]`, the Green's function of `-d²/dx²`
    /// with zero boundary values.
    Green1d,
}

impl KernelFamily {
    pub fn name(&self) -> &'static str {
        match self {
            KernelFamily::BrownianMin => "brownian-min",
            KernelFamily::BrownianLine => "brownian-line",
            KernelFamily::Szego => "szego",
            KernelFamily::CantorProduct { .. } => "cantor-product",
            KernelFamily::Shannon => "shannon",
            KernelFamily::DruryArveson { .. } => "drury-arveson",
            KernelFamily::Overlap { .. } => "overlap",
            KernelFamily::Green1d => "green-1d",
        }
    }

    /// Whether the kernel takes complex values off the diagonal.
    pub fn is_complex(&self) -> bool {
        matches!(
            self,
            KernelFamily::Szego
                | KernelFamily::CantorProduct { .. }
                | KernelFamily::DruryArveson { .. }
        )
    }
}

/// A kernel family together with a positive scale factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    #[serde(flatten)]
    pub family: KernelFamily,
    pub scale: f64,
}

impl KernelSpec {
    pub fn new(family: KernelFamily) -> Self {
        Self { family, scale: 1.0 }
    }

    pub fn brownian_min() -> Self {
        Self::new(KernelFamily::BrownianMin)
    }

    pub fn brownian_line() -> Self {
        Self::new(KernelFamily::BrownianLine)
    }

    pub fn szego() -> Self {
        Self::new(KernelFamily::Szego)
    }

    pub fn cantor_product(truncation: u32) -> Result<Self> {
        if truncation == 0 {
            return Err(Error::InvalidInput("cantor-product truncation must be >= 1".into()));
        }
        Ok(Self::new(KernelFamily::CantorProduct { truncation }))
    }

    pub fn shannon() -> Self {
        Self::new(KernelFamily::Shannon)
    }

    pub fn drury_arveson(dim: usize) -> Self {
        Self::new(KernelFamily::DruryArveson { dim })
    }

    pub fn overlap(measure: MeasureModel) -> Self {
        Self::new(KernelFamily::Overlap { measure })
    }

    pub fn green_1d() -> Self {
        Self::new(KernelFamily::Green1d)
    }

    pub fn scaled(self, scale: f64) -> Self {
        Self { scale, ..self }
    }

    pub fn is_complex(&self) -> bool {
        self.family.is_complex()
    }

    /// Checks that `x` lies in the family's domain.
    pub fn check_point(&self, x: &Point) -> Result<()> {
        let family = self.family.name();
        let mismatch = |expected: &'static str| Error::DomainMismatch {
            family,
            expected,
            got: x.tag().to_string(),
        };
        match (&self.family, x) {
            (KernelFamily::BrownianMin, Point::Real(v) | Point::Unit(v)) => {
                if *v < 0.0 || !v.is_finite() {
                    return Err(Error::OutOfDomain(format!("{family} needs x >= 0, got {v}")));
                }
            }
            (KernelFamily::BrownianLine | KernelFamily::Shannon, Point::Real(v) | Point::Unit(v)) => {
                if !v.is_finite() {
                    return Err(Error::OutOfDomain(format!("{family} needs finite x, got {v}")));
                }
            }
            (KernelFamily::Green1d, Point::Real(v) | Point::Unit(v)) => {
                if !(0.0..=1.0).contains(v) {
                    return Err(Error::OutOfDomain(format!("{family} needs x in [0,1], got {v}")));
                }
            }
            (KernelFamily::BrownianMin | KernelFamily::Green1d, _) => {
                return Err(mismatch("unit-interval or real-line"))
            }
            (KernelFamily::BrownianLine | KernelFamily::Shannon, _) => {
                return Err(mismatch("real-line"))
            }
            (KernelFamily::Szego | KernelFamily::CantorProduct { .. }, Point::Disk(z)) => {
                if z.norm_sqr() >= 1.0 {
                    return Err(Error::OutOfDomain(format!("{family} needs |z| < 1, got {z}")));
                }
            }
            (KernelFamily::Szego | KernelFamily::CantorProduct { .. }, _) => {
                return Err(mismatch("complex-disk"))
            }
            (KernelFamily::DruryArveson { dim }, Point::Vector(v)) => {
                if v.len() != *dim {
                    return Err(Error::DimensionMismatch {
                        expected: *dim,
                        got: v.len(),
                    });
                }
                let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                if norm_sq >= 1.0 {
                    return Err(Error::OutOfDomain(format!(
                        "{family} needs |z|^2 < 1, got {norm_sq}"
                    )));
                }
            }
            (KernelFamily::DruryArveson { .. }, _) => return Err(mismatch("complex-vector(k)")),
            (KernelFamily::Overlap { .. }, Point::Sets(_)) => {}
            (KernelFamily::Overlap { .. }, _) => return Err(mismatch("interval-set")),
        }
        Ok(())
    }

    /// Kernel value without domain validation. Callers that already checked
    /// their points use this in inner loops.
    pub(crate) fn eval_unchecked(&self, x: &Point, y: &Point) -> Complex64 {
        let v = match (&self.family, x, y) {
            (KernelFamily::BrownianMin, _, _) => {
                let (a, b) = (x.as_real().unwrap(), y.as_real().unwrap());
                Complex64::new(a.min(b), 0.0)
            }
            (KernelFamily::BrownianLine, _, _) => {
                let (a, b) = (x.as_real().unwrap(), y.as_real().unwrap());
                let v = if a * b >= 0.0 { a.abs().min(b.abs()) } else { 0.0 };
                Complex64::new(v, 0.0)
            }
            (KernelFamily::Shannon, _, _) => {
                let (a, b) = (x.as_real().unwrap(), y.as_real().unwrap());
                Complex64::new(sinc_pi(a - b), 0.0)
            }
            (KernelFamily::Green1d, _, _) => {
                let (a, b) = (x.as_real().unwrap(), y.as_real().unwrap());
                Complex64::new(a.min(b) - a * b, 0.0)
            }
            (KernelFamily::Szego, Point::Disk(z), Point::Disk(w)) => {
                let q = z.conj() * w;
                1.0 / (1.0 - q)
            }
            (KernelFamily::CantorProduct { truncation }, Point::Disk(z), Point::Disk(w)) => {
                cantor_partial_product(z.conj() * w, *truncation)
            }
            (KernelFamily::DruryArveson { .. }, Point::Vector(z), Point::Vector(w)) => {
                let q: Complex64 = z.iter().zip(w).map(|(a, b)| a.conj() * b).sum();
                1.0 / (1.0 - q)
            }
            (KernelFamily::Overlap { measure }, Point::Sets(a), Point::Sets(b)) => {
                let m: f64 = a
                    .intersect(b)
                    .iter()
                    .map(|&(lo, hi)| measure.interval_mass(lo, hi))
                    .sum();
                Complex64::new(m, 0.0)
            }
            _ => unreachable!("points were validated against the family"),
        };
        v * self.scale
    }
}

/// `∏_{n<N} (1 + q^{4^n})`.
pub(crate) fn cantor_partial_product(q: Complex64, truncation: u32) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let mut acc = one;
    let mut p = q;
    for _ in 0..truncation {
        acc *= one + p;
        let sq = p * p;
        p = sq * sq;
    }
    acc
}

/// Evaluates `K(x, y)`.
pub fn eval_kernel(spec: &KernelSpec, x: &Point, y: &Point) -> Result<Complex64> {
    spec.check_point(x)?;
    spec.check_point(y)?;
    Ok(spec.eval_unchecked(x, y))
}

/// Hermitian matrix of kernel values on a finite point set.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    entries: CMatrix,
    points: Vec<Point>,
}

impl GramMatrix {
    /// Wraps a square matrix. `points` may be empty when the matrix did not
    /// come from a point set (e.g. read from a file).
    pub fn from_parts(entries: CMatrix, points: Vec<Point>) -> Self {
        assert_eq!(entries.rows(), entries.cols(), "Gram matrix must be square");
        Self { entries, points }
    }

    pub fn from_real(m: &crate::matrix::Matrix) -> Self {
        Self::from_parts(CMatrix::from_real(m), Vec::new())
    }

    pub fn n(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn is_real(&self) -> bool {
        self.entries.is_real()
    }

    pub fn max_diagonal(&self) -> f64 {
        (0..self.n()).map(|i| self.entries[(i, i)].re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Real symmetric matrix carrying the same spectral information: the
    /// real part for real Gram matrices, the `2n × 2n` embedding otherwise.
    pub fn real_form(&self) -> crate::matrix::Matrix {
        if self.is_real() {
            self.entries.re()
        } else {
            self.entries.real_embedding()
        }
    }
}

/// Gram matrix `K(x_i, x_j)`. Each entry above the diagonal is evaluated
/// once and mirrored with conjugation, so the result is exactly Hermitian.
pub fn gram(spec: &KernelSpec, points: &[Point]) -> Result<GramMatrix> {
    for (i, p) in points.iter().enumerate() {
        spec.check_point(p)?;
        if let Some(j) = points[..i].iter().position(|q| q == p) {
            return Err(Error::DuplicatePoint { first: j, second: i });
        }
    }
    let n = points.len();
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        let d = spec.eval_unchecked(&points[i], &points[i]);
        m[(i, i)] = Complex64::new(d.re, 0.0);
        for j in (i + 1)..n {
            let v = spec.eval_unchecked(&points[i], &points[j]);
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    Ok(GramMatrix::from_parts(m, points.to_vec()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsdVerdict {
    pub psd: bool,
    pub min_eigenvalue: f64,
    pub threshold: f64,
}

/// Numerical positive-semidefiniteness: the smallest eigenvalue (Jacobi)
/// must be at least `-tol · max(1, max diagonal)`.
pub fn validate_psd(g: &GramMatrix, tol: f64) -> PsdVerdict {
    if g.n() == 0 {
        return PsdVerdict {
            psd: true,
            min_eigenvalue: f64::INFINITY,
            threshold: -tol,
        };
    }
    let spectrum = jacobi_eigs_real(&g.real_form(), 1e-14);
    let min_eigenvalue = spectrum.eigenvalues.last().copied().unwrap_or(f64::INFINITY);
    let threshold = -tol * g.max_diagonal().max(1.0);
    PsdVerdict {
        psd: min_eigenvalue >= threshold,
        min_eigenvalue,
        threshold,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapNorm {
    /// `‖φ‖` in `L²(μ)`.
    pub l2_norm: f64,
    /// `Φ(A) = ∫_A φ dμ` for each requested set.
    pub values: Vec<f64>,
    /// `‖Φ‖` computed from the overlap-kernel Gram matrix on the partition
    /// cells.
    pub gram_norm: f64,
}

/// Norm of `Φ(A) = ∫_A φ dμ` in the RKHS of the overlap kernel
/// `K(A, B) = μ(A ∩ B)`, for `φ` constant on the cells of the measure's
/// partition at its configured depth.
pub fn overlap_rkhs_norm(
    measure: &MeasureModel,
    phi: &[f64],
    sets: &[Point],
) -> Result<OverlapNorm> {
    let part = cells(measure, measure.depth);
    if phi.len() != part.len() {
        return Err(Error::DimensionMismatch {
            expected: part.len(),
            got: phi.len(),
        });
    }
    let l2_sq: f64 = phi.iter().zip(&part.cells).map(|(p, c)| p * p * c.mass).sum();

    let mut values = Vec::with_capacity(sets.len());
    for s in sets {
        let Point::Sets(set) = s else {
            return Err(Error::DomainMismatch {
                family: "overlap",
                expected: "interval-set",
                got: s.tag().to_string(),
            });
        };
        let mut covered = vec![false; part.len()];
        for &(a, b) in set.intervals() {
            for i in part.cells_within(a, b)? {
                covered[i] = true;
            }
        }
        values.push(
            phi.iter()
                .zip(&part.cells)
                .zip(&covered)
                .filter(|(_, &c)| c)
                .map(|((p, cell), _)| p * cell.mass)
                .sum(),
        );
    }

    // Gram route: on the cells, K(A_i, A_j) = μ(A_i ∩ A_j) and the norm of
    // the sampled Φ is ⟨Φ, K⁻¹ Φ⟩.
    let spec = KernelSpec::overlap(*measure);
    let cell_sets: Vec<Point> = part
        .cells
        .iter()
        .map(|c| IntervalSet::interval(c.a, c.b).map(Point::Sets))
        .collect::<Result<_>>()?;
    let g = gram(&spec, &cell_sets)?;
    let sampled: Vec<Complex64> = phi
        .iter()
        .zip(&part.cells)
        .map(|(p, c)| Complex64::new(p * c.mass, 0.0))
        .collect();
    let solver = crate::factorize::GramSolver::new(&g, 0.0)?;
    let coeffs = solver.solve(&sampled);
    let gram_sq: f64 = sampled.iter().zip(&coeffs).map(|(h, c)| (h.conj() * c).re).sum();

    Ok(OverlapNorm {
        l2_norm: l2_sq.sqrt(),
        values,
        gram_norm: gram_sq.max(0.0).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let k = KernelSpec::brownian_min();
        assert_eq!(eval_kernel(&k, &Point::Real(2.0), &Point::Real(3.0)).unwrap(), c(2.0, 0.0));
        let k = KernelSpec::brownian_line();
        assert_eq!(eval_kernel(&k, &Point::Real(-1.0), &Point::Real(2.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(eval_kernel(&k, &Point::Real(-1.0), &Point::Real(-2.0)).unwrap(), c(1.0, 0.0));
        let k = KernelSpec::szego();
        let w = Point::Disk(c(0.3, -0.6));
        assert_eq!(eval_kernel(&k, &Point::Disk(c(0.0, 0.0)), &w).unwrap(), c(1.0, 0.0));
        let k = KernelSpec::shannon();
        assert_eq!(eval_kernel(&k, &Point::Real(0.7), &Point::Real(0.7)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn cantor_product_half() {
        let k = KernelSpec::cantor_product(8).unwrap();
        let z = Point::Disk(c(0.5, 0.0));
        let v = eval_kernel(&k, &z, &z).unwrap();
        // direct partial product, factor by factor
        let mut expected = 1.0;
        for n in 0..8 {
            expected *= 1.0 + 0.25f64.powf(4f64.powi(n));
        }
        assert!((v.re - expected).abs() < 1e-15);
        // exact rational evaluation of the same product
        assert!((v.re - 1.254_882_812_792_175_2).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        let k = KernelSpec::szego();
        assert!(matches!(
            eval_kernel(&k, &Point::Disk(c(1.0, 0.0)), &Point::Disk(c(0.0, 0.0))),
            Err(Error::OutOfDomain(_))
        ));
        assert!(matches!(
            eval_kernel(&k, &Point::Real(0.1), &Point::Disk(c(0.0, 0.0))),
            Err(Error::DomainMismatch { .. })
        ));
        let da = KernelSpec::drury_arveson(2);
        let big = Point::Vector(vec![c(0.8, 0.0), c(0.0, 0.7)]);
        assert!(eval_kernel(&da, &big, &big).is_err());
    }

    #[test]
    fn hermitian_by_construction() {
        let k = KernelSpec::szego();
        let pts = vec![
            Point::Disk(c(0.1, 0.2)),
            Point::Disk(c(-0.4, 0.3)),
            Point::Disk(c(0.0, -0.5)),
        ];
        let g = gram(&k, &pts).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g.entries()[(i, j)], g.entries()[(j, i)].conj());
                assert_eq!(
                    eval_kernel(&k, &pts[i], &pts[j]).unwrap(),
                    eval_kernel(&k, &pts[j], &pts[i]).unwrap().conj()
                );
            }
        }
    }

    #[test]
    fn gram_examples() {
        let g = gram(&KernelSpec::brownian_min(), &real_points(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(
            g.entries().re(),
            Matrix::from_rows(&[[1.0, 1.0, 1.0], [1.0, 2.0, 2.0], [1.0, 2.0, 3.0]])
        );
        let g = gram(&KernelSpec::shannon(), &real_points(&[-1.0, 0.0, 1.0])).unwrap();
        assert_eq!(g.entries().re(), Matrix::identity(3));
        let g = gram(&KernelSpec::shannon(), &[]).unwrap();
        assert_eq!(g.n(), 0);
        assert!(matches!(
            gram(&KernelSpec::shannon(), &real_points(&[1.0, 2.0, 1.0])),
            Err(Error::DuplicatePoint { first: 0, second: 2 })
        ));
    }

    #[test]
    fn psd_examples() {
        let id = GramMatrix::from_real(&Matrix::identity(2));
        let v = validate_psd(&id, 1e-8);
        assert!(v.psd);
        assert!((v.min_eigenvalue - 1.0).abs() < 1e-14);

        let bad = GramMatrix::from_real(&Matrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]));
        let v = validate_psd(&bad, 1e-8);
        assert!(!v.psd);
        assert!((v.min_eigenvalue + 1.0).abs() < 1e-12);

        let empty = GramMatrix::from_real(&Matrix::zeros(0, 0));
        let v = validate_psd(&empty, 1e-8);
        assert!(v.psd && v.min_eigenvalue == f64::INFINITY);
    }

    #[test]
    fn green_kernel_is_harmonic_off_diagonal() {
        // second difference of K(·, y) vanishes away from y, boundary values 0
        let k = KernelSpec::green_1d();
        let y = Point::Unit(0.37);
        let h = 1e-3;
        let f = |x: f64| eval_kernel(&k, &Point::Unit(x), &y).unwrap().re;
        assert_eq!(f(0.0), 0.0);
        assert!(f(1.0).abs() < 1e-16);
        for i in 1..1000 {
            let x = i as f64 * h;
            if (x - 0.37).abs() < 2.0 * h {
                continue;
            }
            let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
            assert!(d2.abs() < 1e-6, "x={x} d2={d2}");
        }
        // jump of -1 in the derivative at y: -K'' = δ_y
        let jump = (f(0.37 + h) - f(0.37)) / h - (f(0.37) - f(0.37 - h)) / h;
        assert!((jump + 1.0).abs() < 1e-9);
    }

    #[test]
    fn overlap_disjoint_sets_are_orthogonal() {
        let k = KernelSpec::overlap(MeasureModel::lebesgue(3));
        let sets: Vec<Point> = [(0.0, 0.2), (0.3, 0.5), (0.6, 0.9)]
            .iter()
            .map(|&(a, b)| Point::Sets(IntervalSet::interval(a, b).unwrap()))
            .collect();
        let g = gram(&k, &sets).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(g.entries()[(i, j)], c(0.0, 0.0));
                }
            }
        }
        assert!((g.entries()[(2, 2)].re - 0.3).abs() < 1e-15);
    }

    #[test]
    fn overlap_norm_examples() {
        let whole = Point::Sets(IntervalSet::interval(0.0, 1.0).unwrap());
        let r = overlap_rkhs_norm(&MeasureModel::lebesgue(0), &[1.0], std::slice::from_ref(&whole)).unwrap();
        assert!((r.l2_norm - 1.0).abs() < 1e-15);
        assert!((r.values[0] - 1.0).abs() < 1e-15);

        let half = Point::Sets(IntervalSet::interval(0.0, 0.5).unwrap());
        let r = overlap_rkhs_norm(&MeasureModel::lebesgue(1), &[1.0, 0.0], &[half]).unwrap();
        assert!((r.l2_norm - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((r.values[0] - 0.5).abs() < 1e-15);
        assert!((r.gram_norm - r.l2_norm).abs() < 1e-9);

        let quarter = Point::Sets(IntervalSet::interval(0.0, 0.25).unwrap());
        let r = overlap_rkhs_norm(&MeasureModel::cantor4(1), &[1.0, 1.0], &[quarter]).unwrap();
        assert!((r.values[0] - 0.5).abs() < 1e-15);

        let cut = Point::Sets(IntervalSet::interval(0.0, 0.3).unwrap());
        assert!(matches!(
            overlap_rkhs_norm(&MeasureModel::lebesgue(2), &[1.0; 4], &[cut]),
            Err(Error::CellMisalignment(_))
        ));
    }
}
