//! Spontaneous radiation from collapse-model noise and the limits it implies.
//!
//! The crate is organised bottom-up:
//!
//! * [`domain`]: physical constants, unit conversions and the shared value types.
//! * [`specfun`]: log-gamma, the regularized incomplete gamma function and its
//!   inverse, adaptive quadrature and bracketed root finding.
//! * [`emission`]: noise-correlation functionals, the angular radiation kernel and
//!   the emission rate of an arbitrary set of point charges, with its coherent,
//!   incoherent and atomic limits.
//! * [`signal`]: detector efficiency polynomials and the folding of the atomic
//!   rate into an expected number of counts.
//! * [`inference`]: Poisson posterior with a uniform prior, upper limits on the
//!   collapse rate and exclusion curves in the (r_C, λ) plane.
//! * [`io`]: JSON inputs and CSV outputs used by the command-line tool.
//!
//! Data-parallel loops run on rayon when the `parallel` feature (on by default)
//! is enabled; see [`exec::Execution`].

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod domain;
pub mod emission;
mod error;
pub mod exec;
pub mod inference;
pub mod io;
pub mod signal;
pub mod specfun;

pub use error::{Error, Result};
