//! Kernel functions, kernel density estimation, bandwidth selection and
//! histogram bin-width rules.

mod bandwidth;
mod histogram;
mod kde;
mod kernel;

pub use bandwidth::{isj_bandwidth, select_bandwidth, BandwidthRule, ISJ_GRID};
pub use histogram::{histogram_bin_width, BinWidthRule};
pub use kde::DensityModel;
pub use kernel::Kernel;

/// Kernel value at `u`; zero outside the kernel's support.
pub fn evaluate_kernel(kernel: Kernel, u: f64) -> f64 {
    kernel.evaluate(u)
}

pub fn kde_pdf(model: &DensityModel, y: f64) -> f64 {
    model.pdf(y)
}

pub fn kde_cdf(model: &DensityModel, y: f64) -> f64 {
    model.cdf(y)
}
