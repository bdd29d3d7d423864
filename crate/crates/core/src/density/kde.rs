use crate::density::Kernel;
use crate::error::{Error, Result};

/// A fixed-bandwidth kernel density estimate
/// `f(y) = 1/(N h) * sum K((y - y_n) / h)`.
///
/// Samples are kept sorted so that evaluation only touches the samples whose
/// kernel actually reaches the query point.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityModel {
    kernel: Kernel,
    bandwidth: f64,
    samples: Vec<f64>,
    support: (f64, f64),
}

impl DensityModel {
    pub fn new(mut samples: Vec<f64>, kernel: Kernel, bandwidth: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::DegenerateSample(format!(
                "density estimation needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        if let Some((index, &value)) = samples.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(Error::InvalidBandwidth(bandwidth));
        }
        samples.sort_by(f64::total_cmp);
        let pad = kernel.evaluation_radius() * bandwidth;
        let support = (samples[0] - pad, samples[samples.len() - 1] + pad);
        Ok(Self {
            kernel,
            bandwidth,
            samples,
            support,
        })
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// Training samples in ascending order.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Closed interval outside which the density is zero.
    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    fn window(&self, y: f64) -> (usize, usize) {
        let reach = self.kernel.evaluation_radius() * self.bandwidth;
        let start = self.samples.partition_point(|&s| s < y - reach);
        let end = self.samples.partition_point(|&s| s <= y + reach);
        (start, end)
    }

    pub fn pdf(&self, y: f64) -> f64 {
        let (lo, hi) = self.support;
        if !(lo..=hi).contains(&y) {
            return 0.0;
        }
        let (start, end) = self.window(y);
        let h = self.bandwidth;
        let sum: f64 = self.samples[start..end]
            .iter()
            .map(|&s| self.kernel.evaluate((y - s) / h))
            .sum();
        sum / (self.samples.len() as f64 * h)
    }

    /// Mean of the per-sample kernel CDFs. Exactly 0 at and below the lower
    /// support bound and exactly 1 at and above the upper one.
    pub fn cdf(&self, y: f64) -> f64 {
        let (lo, hi) = self.support;
        if y <= lo {
            return 0.0;
        }
        if y >= hi {
            return 1.0;
        }
        let (start, end) = self.window(y);
        let h = self.bandwidth;
        let partial: f64 = self.samples[start..end]
            .iter()
            .map(|&s| self.kernel.cdf((y - s) / h))
            .sum();
        ((start as f64 + partial) / self.samples.len() as f64).clamp(0.0, 1.0)
    }

    /// The largest interval around `y` on which the density is identically
    /// zero, or `None` if the density is positive at `y`. Only bounded
    /// kernels produce such gaps inside the support.
    pub(crate) fn zero_density_gap(&self, y: f64) -> Option<(f64, f64)> {
        let r = self.kernel.support_radius()?;
        let reach = r * self.bandwidth;
        let (start, end) = self.window(y);
        if self.samples[start..end].iter().any(|&s| (y - s).abs() < reach) {
            return None;
        }
        let below = self.samples.partition_point(|&s| s <= y);
        let left = if below == 0 {
            self.support.0
        } else {
            self.samples[below - 1] + reach
        };
        let right = self.samples.get(below).map_or(self.support.1, |&s| s - reach);
        Some((left, right))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{adaptive_simpson, normal_pdf};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn normals(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn construction_errors() {
        assert!(DensityModel::new(vec![0.0], Kernel::Normal, 1.0).is_err());
        assert!(DensityModel::new(vec![0.0, 1.0], Kernel::Normal, 0.0).is_err());
        assert!(DensityModel::new(vec![0.0, 1.0], Kernel::Normal, f64::NAN).is_err());
        assert!(DensityModel::new(vec![0.0, f64::NAN], Kernel::Normal, 1.0).is_err());
    }

    #[test]
    fn pdf_examples() {
        let m = DensityModel::new(vec![0.0, 0.0], Kernel::Uniform, 1.0).unwrap();
        assert_abs_diff_eq!(m.pdf(0.0), 1.0 / (2.0 * 3f64.sqrt()), epsilon = 1e-15);
        assert_eq!(m.pdf(100.0), 0.0);
        assert_eq!(m.pdf(-100.0), 0.0);

        let m = DensityModel::new(vec![-1.0, 1.0], Kernel::Epanechnikov, 1.0).unwrap();
        let expected = 3.0 * (1.0 - 1.0 / 5.0) / (4.0 * 5f64.sqrt());
        assert_abs_diff_eq!(m.pdf(0.0), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(m.pdf(0.0), 0.26833, epsilon = 1e-5);
    }

    #[test]
    fn pdf_includes_bandwidth_factor() {
        let m = DensityModel::new(vec![0.0, 0.0], Kernel::Normal, 0.5).unwrap();
        assert_abs_diff_eq!(m.pdf(0.0), normal_pdf(0.0) / 0.5, epsilon = 1e-15);
    }

    #[test]
    fn cdf_examples() {
        let m = DensityModel::new(vec![0.0, 0.0], Kernel::Uniform, 1.0).unwrap();
        let (lo, hi) = m.support();
        assert_eq!(m.cdf(lo), 0.0);
        assert_eq!(m.cdf(hi), 1.0);
        let q = adaptive_simpson(&|y| m.pdf(y), lo, 0.0, 1e-12);
        assert_abs_diff_eq!(q, 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(m.cdf(0.0), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn integrates_to_one_over_support() {
        let samples = normals(300, 7);
        for k in Kernel::ALL {
            let m = DensityModel::new(samples.clone(), k, 0.4).unwrap();
            let (lo, hi) = m.support();
            let mass = adaptive_simpson(&|y| m.pdf(y), lo, hi, 1e-9);
            assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-4);
            assert!(m.cdf(lo).abs() < 1e-6 && (m.cdf(hi) - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn cdf_monotone_on_grid() {
        let samples = normals(200, 11);
        for k in Kernel::ALL {
            let m = DensityModel::new(samples.clone(), k, 0.3).unwrap();
            let (lo, hi) = m.support();
            let mut prev = 0.0;
            for i in 0..1000 {
                let y = lo + (hi - lo) * i as f64 / 999.0;
                let c = m.cdf(y);
                assert!(c >= prev, "{k}: cdf decreased at {y}");
                prev = c;
            }
        }
    }

    #[test]
    fn cdf_derivative_matches_pdf() {
        let samples = normals(100, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for k in Kernel::ALL.into_iter().filter(|k| k.is_bounded()) {
            let m = DensityModel::new(samples.clone(), k, 0.5).unwrap();
            let (lo, hi) = m.support();
            let dist = rand_distr::Uniform::new(lo + 0.1, hi - 0.1).unwrap();
            for _ in 0..100 {
                let y = dist.sample(&mut rng);
                let eps = 1e-5;
                let d = (m.cdf(y + eps) - m.cdf(y - eps)) / (2.0 * eps);
                assert_abs_diff_eq!(d, m.pdf(y), epsilon = 1e-4);
            }
        }
    }

    #[test]
    fn estimates_standard_normal() {
        let samples = normals(10_000, 2024);
        let h = crate::density::select_bandwidth(&samples, crate::density::BandwidthRule::Silverman).unwrap();
        let m = DensityModel::new(samples, Kernel::Normal, h).unwrap();
        let worst = (0..=400)
            .map(|i| -2.0 + i as f64 * 0.01)
            .map(|y| (m.pdf(y) - normal_pdf(y)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 0.05, "max deviation {worst}");
    }

    #[test]
    fn gap_detection() {
        let m = DensityModel::new(vec![-5.0, -5.0, 5.0, 5.0], Kernel::Epanechnikov, 1.0).unwrap();
        let r = 5f64.sqrt();
        let (l, h) = m.zero_density_gap(0.0).unwrap();
        assert_abs_diff_eq!(l, -5.0 + r, epsilon = 1e-15);
        assert_abs_diff_eq!(h, 5.0 - r, epsilon = 1e-15);
        assert!(m.zero_density_gap(-5.0).is_none());
        let g = DensityModel::new(vec![-5.0, 5.0], Kernel::Normal, 1.0).unwrap();
        assert!(g.zero_density_gap(0.0).is_none());
    }
}
