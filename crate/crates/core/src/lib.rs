//! Hörmander spaces `H^φ` parametrized by RO-varying weights, realized on the
//! torus through Fourier coefficients, together with interpolation with a
//! function parameter, quotient norms on subdomains and exactly solvable
//! boundary-value models on the unit disk.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bvp;
pub mod error;
pub mod experiment;
pub mod fft;
pub mod growth;
pub mod interpolation;
pub mod quad;
pub mod quotient;
pub mod spectral;
pub mod weights;

pub use error::{Error, Result};
pub use num_complex::Complex64;
