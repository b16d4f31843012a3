//! Trigonometry in units of turns and half-turns.
//!
//! Arguments are reduced before calling `sin`/`cos`, so that `cis_turns(x +
//! 1/2) == -cis_turns(x)` and `sin_pi(n) == 0` hold bit-for-bit. Quadrature of
//! exponentials on the Cantor set and the Shannon kernel at integer offsets
//! rely on those cancellations being exact.

use std::f64::consts::PI;

use num_complex::Complex64;

/// `exp(2πi x)`.
pub fn cis_turns(x: f64) -> Complex64 {
    let mut r = x - x.floor();
    let mut neg = false;
    let mut quarter = false;
    if r >= 0.5 {
        r -= 0.5;
        neg = true;
    }
    if r >= 0.25 {
        r -= 0.25;
        quarter = true;
    }
    let (s, c) = if r == 0.0 {
        (0.0, 1.0)
    } else {
        (2.0 * PI * r).sin_cos()
    };
    // multiply by i for the quarter turn, by -1 for the half turn
    let (re, im) = if quarter { (-s, c) } else { (c, s) };
    if neg {
        Complex64::new(-re, -im)
    } else {
        Complex64::new(re, im)
    }
}

/// `sin(π x)`, exactly zero at integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    let (sign, r) = if r < 0.0 { (-1.0, -r) } else { (1.0, r) };
    let r = if r > 0.5 { 1.0 - r } else { r };
    if r == 0.0 {
        0.0
    } else {
        sign * (PI * r).sin()
    }
}

/// `sin(π d) / (π d)` with the removable singularity filled in.
pub fn sinc_pi(d: f64) -> f64 {
    if d == 0.0 {
        1.0
    } else {
        sin_pi(d) / (PI * d)
    }
}
