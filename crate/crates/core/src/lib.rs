//! Covariance-matrix simulation of two gravitationally coupled oscillators
//! under measurement-feedback (classical-channel) coupling, its dissipative
//! extension and the unitary Newtonian limit, together with the Gaussian
//! correlation measures used to analyse them.
//!
//! Modules, bottom-up:
//!
//! - [`matkernel`]: dense real kernels (exponential, eigenvalues, solves,
//!   Lyapunov equation).
//! - [`gaussian`]: covariance validation, symplectic spectra, mutual
//!   information, Gaussian discord and the partial-transpose witness.
//! - [`models`]: drift/diffusion generators and initial states.
//! - [`dynamics`]: exact propagation, sampling, steady states.
//! - [`analysis`]: correlation series, peaks, asymptote and sweeps.

// `!(x > y)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod gaussian;
pub mod matkernel;
pub mod models;

pub use error::{Error, Result};
