//! Positive-definite kernels, RKHS linear algebra on finite point sets,
//! Cantor-measure constructions and Monte Carlo Gaussian-process synthesis.

// `!(a <= b)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod cli;
pub mod factorize;
pub mod gpsim;
pub mod io;
pub mod kernels;
pub mod matrix;
pub mod measures;
pub mod phase;
pub mod rkhs;
pub mod rng;
pub mod sampling;

pub use error::{Error, Result};
