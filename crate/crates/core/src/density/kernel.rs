use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use crate::numeric::{normal_cdf, normal_pdf, SQRT_PI};

const SQRT_3: f64 = 1.732_050_807_568_877_2;
const SQRT_5: f64 = 2.236_067_977_499_79;
const SQRT_6: f64 = 2.449_489_742_783_178;
const SQRT_7: f64 = 2.645_751_311_064_590_7;

/// sqrt(pi^2 - 8), the frequency scale of the cosine kernel.
fn cosine_scale() -> f64 {
    (PI * PI - 8.0).sqrt()
}

/// Smoothing kernels, each scaled to unit variance so that a bandwidth means
/// the same spread regardless of the kernel picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kernel {
    Uniform,
    Triangular,
    Epanechnikov,
    Biweight,
    Cosine,
    Normal,
    Laplace,
}

impl Kernel {
    pub const ALL: [Kernel; 7] = [
        Kernel::Uniform,
        Kernel::Triangular,
        Kernel::Epanechnikov,
        Kernel::Biweight,
        Kernel::Cosine,
        Kernel::Normal,
        Kernel::Laplace,
    ];

    /// Half-width of the support, `None` for kernels supported on all of R.
    pub fn support_radius(self) -> Option<f64> {
        match self {
            Kernel::Uniform => Some(SQRT_3),
            Kernel::Triangular => Some(SQRT_6),
            Kernel::Epanechnikov => Some(SQRT_5),
            Kernel::Biweight => Some(SQRT_7),
            Kernel::Cosine => Some(PI / cosine_scale()),
            Kernel::Normal | Kernel::Laplace => None,
        }
    }

    pub fn is_bounded(self) -> bool {
        self.support_radius().is_some()
    }

    /// Distance beyond which the kernel is treated as exactly zero (and its
    /// CDF as exactly 0 or 1) during evaluation. For the unbounded kernels
    /// the neglected tail mass is below 1e-23.
    pub(crate) fn evaluation_radius(self) -> f64 {
        match self {
            Kernel::Normal => 10.0,
            Kernel::Laplace => 40.0,
            k => k.support_radius().unwrap(),
        }
    }

    pub fn evaluate(self, u: f64) -> f64 {
        if let Some(r) = self.support_radius() {
            if u.abs() >= r {
                return 0.0;
            }
        }
        // Rounding just inside the support edge can dip below zero.
        let value = match self {
            Kernel::Uniform => 1.0 / (2.0 * SQRT_3),
            Kernel::Triangular => (1.0 - u.abs() / SQRT_6) / SQRT_6,
            Kernel::Epanechnikov => 3.0 * (1.0 - u * u / 5.0) / (4.0 * SQRT_5),
            Kernel::Biweight => {
                let t = 1.0 - u * u / 7.0;
                15.0 * t * t / (16.0 * SQRT_7)
            }
            Kernel::Cosine => {
                let c = cosine_scale();
                c * (c * u / 2.0).cos() / 4.0
            }
            Kernel::Normal => normal_pdf(u),
            Kernel::Laplace => (-SQRT_2 * u.abs()).exp() * FRAC_1_SQRT_2,
        };
        value.max(0.0)
    }

    /// Closed-form kernel CDF, `integral of K from -inf to u`.
    pub fn cdf(self, u: f64) -> f64 {
        if let Some(r) = self.support_radius() {
            if u <= -r {
                return 0.0;
            }
            if u >= r {
                return 1.0;
            }
        }
        match self {
            Kernel::Uniform => (u + SQRT_3) / (2.0 * SQRT_3),
            Kernel::Triangular => {
                let t = u / SQRT_6;
                if t <= 0.0 {
                    0.5 * (1.0 + t) * (1.0 + t)
                } else {
                    1.0 - 0.5 * (1.0 - t) * (1.0 - t)
                }
            }
            Kernel::Epanechnikov => {
                let t = u / SQRT_5;
                0.5 + 0.75 * (t - t * t * t / 3.0)
            }
            Kernel::Biweight => {
                let t = u / SQRT_7;
                let t2 = t * t;
                0.5 + 15.0 / 16.0 * t * (1.0 - 2.0 * t2 / 3.0 + t2 * t2 / 5.0)
            }
            Kernel::Cosine => 0.5 + 0.5 * (cosine_scale() * u / 2.0).sin(),
            Kernel::Normal => normal_cdf(u),
            Kernel::Laplace => {
                if u <= 0.0 {
                    0.5 * (SQRT_2 * u).exp()
                } else {
                    1.0 - 0.5 * (-SQRT_2 * u).exp()
                }
            }
        }
    }

    /// Roughness `R(K) = integral of K^2`.
    pub fn roughness(self) -> f64 {
        match self {
            Kernel::Uniform => 1.0 / (2.0 * SQRT_3),
            Kernel::Triangular => 2.0 / (3.0 * SQRT_6),
            Kernel::Epanechnikov => 3.0 / (5.0 * SQRT_5),
            Kernel::Biweight => 5.0 / (7.0 * SQRT_7),
            Kernel::Cosine => cosine_scale() * PI / 16.0,
            Kernel::Normal => 1.0 / (2.0 * SQRT_PI),
            Kernel::Laplace => 1.0 / (2.0 * SQRT_2),
        }
    }

    /// Factor converting a bandwidth chosen for the Gaussian kernel to the
    /// AMISE-equivalent bandwidth for this kernel. All kernels have unit
    /// variance, so this is `(R(K) / R(phi))^(1/5)`.
    pub fn gaussian_equivalent_factor(self) -> f64 {
        (self.roughness() / Kernel::Normal.roughness()).powf(0.2)
    }

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Uniform => "uniform",
            Kernel::Triangular => "triangular",
            Kernel::Epanechnikov => "epanechnikov",
            Kernel::Biweight => "biweight",
            Kernel::Cosine => "cosine",
            Kernel::Normal => "normal",
            Kernel::Laplace => "laplace",
        }
    }

    pub(crate) fn code(self) -> u8 {
        Kernel::ALL.iter().position(|&k| k == self).unwrap() as u8
    }

    pub(crate) fn from_code(code: u8) -> Option<Self> {
        Kernel::ALL.get(code as usize).copied()
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kernel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(Kernel::Normal),
            name => Kernel::ALL
                .iter()
                .copied()
                .find(|k| k.name() == name)
                .ok_or_else(|| format!("unknown kernel '{s}'")),
        }
    }
}
