//! Littlewood-Paley analysis, paradifferential operators with a large
//! parameter, and a spectral solver for wave equations whose coefficients
//! are only Zygmund continuous.
//!
//! Everything lives on the periodic torus of period 2π. Spectra follow the
//! convention `û_k = (1/n^dim) Σ_x u(x) e^{-ik·x}`, so the L² norm used
//! throughout is the normalized one, `‖u‖² = Σ_k |û_k|² = mean |u|²`.
//!
//! Module map:
//! - [`spectral_core`]: grids, fields, cutoffs, dyadic blocks.
//! - [`function_spaces`]: Sobolev, log-Sobolev, Zygmund, Hölder norms.
//! - [`coefficients`]: Weierstrass generators and time mollification.
//! - [`parasymbols`]: admissible cutoffs, symbol smoothing, the symbols α.
//! - [`paraops`]: quantization, adjoints, order fits, positivity.
//! - [`energy`]: the four-term energy, its equivalence, the Q operator.
//! - [`solver`]: the method-of-lines integrator and energy traces.
//! - [`harness`]: configuration, suites, CSV and field files.

// Negated comparisons are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coefficients;
pub mod energy;
mod error;
mod fft;
pub mod fit;
pub mod function_spaces;
pub mod harness;
pub mod paraops;
pub mod parasymbols;
pub mod random;
pub mod solver;
pub mod spectral_core;

pub use error::{Error, Result};
pub use num_complex::Complex64;
