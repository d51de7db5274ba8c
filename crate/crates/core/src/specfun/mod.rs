//! Special functions and numerical kernels.
//!
//! Everything here is self-contained: log-gamma (Lanczos), the regularized
//! lower incomplete gamma function (series / continued fraction in log
//! space), its quantile, adaptive Simpson quadrature and Brent root finding.

mod gamma;
mod quad;
mod roots;

pub use gamma::{gamma_quantile, ln_gamma, reg_lower_gamma, reg_upper_gamma};
pub use quad::{integrate, QuadratureSpec};
pub use roots::brent;
