//! Difference-of-betas posterior inference built on Appell's F1.

mod appell;
mod diff;

pub use appell::{appell_f1, ln_appell_f1};
pub use diff::{
    density_grid, diff_cdf, diff_credible_interval, diff_density, diff_mean, diff_total_mass,
    DiffPosterior,
};
