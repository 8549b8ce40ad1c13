//! Beta-family kernels and unit-interval quadrature shared by every other module.

mod beta;
pub mod quadrature;
mod special;

pub(crate) use beta::ln_beta_binomial_pmf;
pub use beta::{beta_binomial_pmf, beta_cdf, beta_pdf, beta_sf, ln_beta_pdf, BetaParams};
pub use quadrature::{integrate, integrate_unit, Estimate, QuadOptions, DEFAULT_TOL};
pub(crate) use special::ln_beta_unchecked;
pub use special::{ln_gamma, log_beta_fn};
