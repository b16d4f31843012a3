use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use kernel_forge_ffi::*;

fn kernel(name: &str, param: u32) -> *mut KfKernel {
    let name = CString::new(name).unwrap();
    let mut k = ptr::null_mut();
    let st = unsafe { kf_kernel_new(name.as_ptr(), param, 1.0, &mut k) };
    assert_eq!(st, KfStatus::Ok);
    k
}

fn read(m: *const KfMatrix) -> (usize, usize, Vec<f64>, Vec<f64>) {
    unsafe {
        let (r, c) = (kf_matrix_rows(m), kf_matrix_cols(m));
        let mut re = vec![0.0; r * c];
        let mut im = vec![0.0; r * c];
        assert_eq!(kf_matrix_copy(m, re.as_mut_ptr(), im.as_mut_ptr(), r * c), KfStatus::Ok);
        (r, c, re, im)
    }
}

fn last_error() -> String {
    let p = kf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn brownian_gram_cholesky_and_inverse() {
    let k = kernel("brownian-min", 0);
    let xs = [1.0, 2.0, 3.0];
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(kf_gram_real(k, xs.as_ptr(), 3, &mut g), KfStatus::Ok);
        let (_, _, re, im) = read(g);
        assert_eq!(re, vec![1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 1.0, 2.0, 3.0]);
        assert!(im.iter().all(|&v| v == 0.0));

        let mut l = ptr::null_mut();
        assert_eq!(kf_cholesky(g, 0.0, &mut l), KfStatus::Ok);
        assert_eq!(read(l).2, vec![1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0]);

        let mut d = ptr::null_mut();
        assert_eq!(kf_inverse(g, &mut d), KfStatus::Ok);
        let expected = [2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 1.0];
        for (a, b) in read(d).2.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }

        let mut jac = [0.0; 3];
        let mut alt = [0.0; 3];
        assert_eq!(kf_eigenvalues(g, KfEigMethod::Jacobi, jac.as_mut_ptr(), 3), KfStatus::Ok);
        assert_eq!(kf_eigenvalues(g, KfEigMethod::AltCholesky, alt.as_mut_ptr(), 3), KfStatus::Ok);
        for (a, b) in jac.iter().zip(alt) {
            assert!((a - b).abs() < 1e-10);
        }
        // eigenvalues of the Brownian Gram matrix multiply to its determinant, 1
        assert!((jac.iter().product::<f64>() - 1.0).abs() < 1e-12);

        kf_matrix_free(d);
        kf_matrix_free(l);
        kf_matrix_free(g);
        kf_kernel_free(k);
    }
}

#[test]
fn complex_kernel_values() {
    let k = kernel("szego", 0);
    let (mut re, mut im) = (0.0, 0.0);
    unsafe {
        assert_eq!(kf_kernel_eval_complex(k, 0.5, 0.0, 0.0, 0.5, &mut re, &mut im), KfStatus::Ok);
    }
    // 1 / (1 - conj(0.5) * 0.5i) = 1 / (1 - 0.25i)
    let d = 1.0 + 0.0625;
    assert!((re - 1.0 / d).abs() < 1e-15);
    assert!((im - 0.25 / d).abs() < 1e-15);
    unsafe { kf_kernel_free(k) };
}

#[test]
fn errors_carry_status_and_message() {
    unsafe {
        let name = CString::new("no-such-kernel").unwrap();
        let mut k = ptr::null_mut();
        assert_eq!(kf_kernel_new(name.as_ptr(), 0, 1.0, &mut k), KfStatus::InvalidArgument);
        assert!(k.is_null());
        assert!(last_error().contains("no-such-kernel"));

        let k = kernel("brownian-min", 0);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(kf_kernel_eval_real(k, -1.0, 1.0, &mut re, &mut im), KfStatus::OutOfDomain);

        let data = [1.0, 2.0, 2.0, 1.0];
        let mut m = ptr::null_mut();
        assert_eq!(kf_matrix_new(2, 2, data.as_ptr(), ptr::null(), &mut m), KfStatus::Ok);
        let mut l = ptr::null_mut();
        assert_eq!(kf_cholesky(m, 0.0, &mut l), KfStatus::NotPositiveDefinite);
        assert!(last_error().contains("positive definite"));

        assert_eq!(kf_gram_real(k, ptr::null(), 2, &mut l), KfStatus::NullPointer);
        assert_eq!(kf_matrix_rows(ptr::null()), 0);

        kf_matrix_free(m);
        kf_kernel_free(k);
        kf_kernel_free(ptr::null_mut());
    }
}

#[test]
fn simulation_is_seeded() {
    let grid = [0.25, 0.5, 1.0];
    let run = |seed: u64| unsafe {
        let mut e = ptr::null_mut();
        let st = kf_simulate(
            KfExample::Brownian,
            0,
            6,
            grid.as_ptr(),
            ptr::null(),
            grid.len(),
            200,
            seed,
            &mut e,
        );
        assert_eq!(st, KfStatus::Ok);
        assert_eq!(kf_ensemble_paths(e), 200);
        assert_eq!(kf_ensemble_grid_len(e), 3);
        let mut v = ptr::null_mut();
        assert_eq!(kf_ensemble_values(e, &mut v), KfStatus::Ok);
        let out = read(v).2;
        let mut c = ptr::null_mut();
        assert_eq!(kf_ensemble_covariance(e, &mut c), KfStatus::Ok);
        assert_eq!(read(c).0, 3);
        kf_matrix_free(c);
        kf_matrix_free(v);
        kf_ensemble_free(e);
        out
    };
    assert_eq!(run(5), run(5));
    assert_ne!(run(5), run(6));
}

#[test]
fn gaussian_sampling_matches_covariance() {
    let k = kernel("brownian-min", 0);
    let xs = [0.5, 1.0];
    let paths = 20_000;
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(kf_gram_real(k, xs.as_ptr(), 2, &mut g), KfStatus::Ok);
        let mut e = ptr::null_mut();
        assert_eq!(kf_sample_gaussian(g, paths, 1, &mut e), KfStatus::Ok);
        let mut c = ptr::null_mut();
        assert_eq!(kf_ensemble_covariance(e, &mut c), KfStatus::Ok);
        let tol = 5.0 / (paths as f64).sqrt();
        for (a, b) in read(c).2.iter().zip(read(g).2) {
            assert!((a - b).abs() < tol);
        }
        kf_matrix_free(c);
        kf_ensemble_free(e);
        kf_matrix_free(g);
        kf_kernel_free(k);
    }
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(kf_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_exports() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/kernel_forge.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "kf_kernel_new",
        "kf_gram_real",
        "kf_cholesky",
        "kf_eigenvalues",
        "kf_simulate",
        "kf_last_error",
        "KF_STATUS_NOT_POSITIVE_DEFINITE",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    // Compile the header as C when a compiler is around.
    if let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-std=c99"])
        .arg(&header)
        .output()
    {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
