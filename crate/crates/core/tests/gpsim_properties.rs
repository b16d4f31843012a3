use kernel_forge::factorize::cholesky_real;
use kernel_forge::gpsim::{
    empirical_covariance, frame_synthesize_values, ito_synthesize, quadrature_kernel,
    sample_gaussian_vector, FactorizationPair,
};
use kernel_forge::kernels::{gram, real_points, KernelSpec, Point};
use kernel_forge::matrix::CMatrix;
use proptest::prelude::*;

const PATHS: usize = 4000;

fn grid(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::btree_set(1u32..100, 1..=max_len)
        .prop_map(|s| s.into_iter().map(|k| k as f64 / 100.0).collect())
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

fn max_diag(m: &CMatrix) -> f64 {
    (0..m.rows()).map(|i| m[(i, i)].re).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn gaussian_vectors_have_zero_mean(xs in grid(10), seed in any::<u64>()) {
        let g = gram(&KernelSpec::brownian_min(), &real_points(&xs)).unwrap();
        let e = sample_gaussian_vector(&g, PATHS, seed).unwrap();
        for (i, m) in e.mean().unwrap().iter().enumerate() {
            let sd = (g.entries()[(i, i)].re / PATHS as f64).sqrt();
            prop_assert!(m.norm() <= 5.0 * sd, "mean {m} at {i}, sd {sd}");
        }
    }

    #[test]
    fn ito_integral_variance_matches_quadrature(xs in grid(8), seed in any::<u64>()) {
        // E|V_x|² = Σ_i |k_x(s_i)|² μ(A_i); a squared normal has variance 2σ⁴
        let pair = FactorizationPair::brownian();
        let pts = real_points(&xs);
        let e = ito_synthesize(&pair, 8, &pts, PATHS, seed).unwrap();
        let c = empirical_covariance(&e).unwrap();
        let k = quadrature_kernel(&pair, &pts, 8).unwrap();
        for i in 0..pts.len() {
            let var = k[(i, i)].re;
            let tol = 5.0 * 2f64.sqrt() * var / (PATHS as f64).sqrt();
            prop_assert!((c[(i, i)].re - var).abs() <= tol, "{} vs {var}", c[(i, i)].re);
        }
    }

    #[test]
    fn cholesky_and_frame_sampling_agree(xs in grid(8), seed in any::<u64>()) {
        let g = gram(&KernelSpec::brownian_min(), &real_points(&xs)).unwrap();
        let direct = empirical_covariance(&sample_gaussian_vector(&g, PATHS, seed).unwrap()).unwrap();
        // rows of L as frame coefficients: Σ_n L_xn L_yn = G_xy
        let l = cholesky_real(&g.entries().re(), 0.0, 0.0).unwrap();
        let pts: Vec<Point> = real_points(&xs);
        let framed = frame_synthesize_values(&CMatrix::from_real(&l), &pts, PATHS, seed ^ 0x5eed).unwrap();
        let via_frame = empirical_covariance(&framed).unwrap();
        let tol = 10.0 * max_diag(g.entries()) / (PATHS as f64).sqrt();
        prop_assert!(direct.max_abs_diff(&via_frame) <= tol);
    }

    #[test]
    fn sampling_ignores_thread_count(xs in grid(6), seed in any::<u64>()) {
        let g = gram(&KernelSpec::brownian_min(), &real_points(&xs)).unwrap();
        let one = in_pool(1, || sample_gaussian_vector(&g, 3000, seed).unwrap());
        let four = in_pool(4, || sample_gaussian_vector(&g, 3000, seed).unwrap());
        prop_assert_eq!(&one, &four);
        let c1 = in_pool(1, || empirical_covariance(&one).unwrap());
        let c4 = in_pool(4, || empirical_covariance(&four).unwrap());
        prop_assert_eq!(c1, c4);
    }
}
