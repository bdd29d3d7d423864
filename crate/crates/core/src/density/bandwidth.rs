use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::numeric::{brent, SQRT_PI};

/// How the KDE bandwidth is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandwidthRule {
    /// `0.9 * min(sd, IQR / 1.34) * N^(-1/5)`
    Silverman,
    /// `1.06 * sd * N^(-1/5)`
    Scott,
    /// Improved Sheather-Jones (Botev's diffusion fixed point).
    Isj,
    Fixed(f64),
}

impl BandwidthRule {
    pub fn name(&self) -> &'static str {
        match self {
            BandwidthRule::Silverman => "silverman",
            BandwidthRule::Scott => "scott",
            BandwidthRule::Isj => "isj",
            BandwidthRule::Fixed(_) => "fixed",
        }
    }

    pub(crate) fn code(&self) -> u8 {
        match self {
            BandwidthRule::Silverman => 0,
            BandwidthRule::Scott => 1,
            BandwidthRule::Isj => 2,
            BandwidthRule::Fixed(_) => 3,
        }
    }

    pub(crate) fn from_code(code: u8, fixed: f64) -> Option<Self> {
        Some(match code {
            0 => BandwidthRule::Silverman,
            1 => BandwidthRule::Scott,
            2 => BandwidthRule::Isj,
            3 => BandwidthRule::Fixed(fixed),
            _ => return None,
        })
    }
}

impl fmt::Display for BandwidthRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BandwidthRule::Fixed(h) => write!(f, "fixed:{h}"),
            rule => f.write_str(rule.name()),
        }
    }
}

impl FromStr for BandwidthRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "silverman" => Ok(BandwidthRule::Silverman),
            "scott" => Ok(BandwidthRule::Scott),
            "isj" => Ok(BandwidthRule::Isj),
            other => {
                let h = other
                    .strip_prefix("fixed:")
                    .ok_or_else(|| format!("unknown bandwidth rule '{s}' (expected silverman|scott|isj|fixed:<h>)"))?
                    .parse::<f64>()
                    .map_err(|e| format!("bad fixed bandwidth in '{s}': {e}"))?;
                if h.is_finite() && h > 0.0 {
                    Ok(BandwidthRule::Fixed(h))
                } else {
                    Err(format!("fixed bandwidth must be positive, got {h}"))
                }
            }
        }
    }
}

fn sample_std(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let ss: f64 = samples.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (n - 1.0)).sqrt()
}

/// Linearly interpolated quantile of sorted data.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

pub(crate) fn check_sample(samples: &[f64]) -> Result<()> {
    if samples.len() < 2 {
        return Err(Error::DegenerateSample(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    if let Some((index, &value)) = samples.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    let first = samples[0];
    if samples.iter().all(|&v| v == first) {
        return Err(Error::DegenerateSample(format!(
            "all {} samples equal {first}",
            samples.len()
        )));
    }
    Ok(())
}

/// Bandwidth for a Gaussian-scale kernel. Since every [`Kernel`] has unit
/// variance the value is directly usable with any of them; see
/// [`Kernel::gaussian_equivalent_factor`] for the AMISE-exact conversion.
///
/// [`Kernel`]: crate::density::Kernel
/// [`Kernel::gaussian_equivalent_factor`]: crate::density::Kernel::gaussian_equivalent_factor
pub fn select_bandwidth(samples: &[f64], rule: BandwidthRule) -> Result<f64> {
    if let BandwidthRule::Fixed(h) = rule {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidBandwidth(h));
        }
    }
    check_sample(samples)?;
    let n = samples.len() as f64;
    let h = match rule {
        BandwidthRule::Fixed(h) => h,
        BandwidthRule::Scott => 1.06 * sample_std(samples) * n.powf(-0.2),
        BandwidthRule::Silverman => {
            let sd = sample_std(samples);
            let mut sorted = samples.to_vec();
            sorted.sort_by(f64::total_cmp);
            let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
            // Heavily tied data can have a zero IQR while still varying.
            let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
            0.9 * spread * n.powf(-0.2)
        }
        BandwidthRule::Isj => isj_bandwidth(samples)?,
    };
    if h.is_finite() && h > 0.0 {
        Ok(h)
    } else {
        Err(Error::DegenerateSample(format!("bandwidth rule {rule} produced {h}")))
    }
}

/// Number of grid bins used by the ISJ estimator.
pub const ISJ_GRID: usize = 1 << 14;
const ISJ_REL_TOL: f64 = 1e-7;
const ISJ_MAX_ITER: usize = 50;
/// Order of the highest functional in the fixed-point recursion.
const ISJ_ORDER: i32 = 7;

/// Improved Sheather-Jones bandwidth via the diffusion fixed point.
///
/// Data are binned on a grid of [`ISJ_GRID`] cells spanning the sample range
/// padded by a tenth on each side, transformed with a DCT-II, and the
/// squared bandwidth `t` is found as the smallest root of `t - xi*gamma(t)`.
pub fn isj_bandwidth(samples: &[f64]) -> Result<f64> {
    check_sample(samples)?;
    let (min, max) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    let range = max - min;
    let lo = min - range / 10.0;
    let span = range * 1.2;

    let n = samples.len() as f64;
    let dx = span / (ISJ_GRID - 1) as f64;
    let mut hist = vec![0.0; ISJ_GRID];
    for &v in samples {
        let idx = (((v - lo) / dx) as usize).min(ISJ_GRID - 1);
        hist[idx] += 1.0 / n;
    }
    let coeffs = dct2(&hist);
    // Squared DCT amplitudes paired with k^2, k = 1..GRID-1.
    let terms: Vec<(f64, f64)> = coeffs[1..]
        .iter()
        .enumerate()
        .map(|(k, &c)| (((k + 1) * (k + 1)) as f64, c * c))
        .collect();

    let residual = |t: f64| t - gamma_fixed_point(t, n, &terms);

    // Search for the smallest bracketed root, widening the window as needed.
    let n_c = n.clamp(50.0, 1050.0);
    let mut upper = 1e-12 + 0.01 * (n_c - 50.0) / 1000.0;
    loop {
        if let Some(root) = brent(residual, 0.0, upper, ISJ_REL_TOL, ISJ_MAX_ITER) {
            if !root.converged {
                return Err(Error::IsjConvergenceFailure(format!(
                    "no convergence within {ISJ_MAX_ITER} iterations"
                )));
            }
            if root.x <= 0.0 {
                return Err(Error::IsjConvergenceFailure("non-positive root".into()));
            }
            return Ok(root.x.sqrt() * span);
        }
        if upper >= 0.1 {
            return Err(Error::IsjConvergenceFailure(
                "fixed-point equation has no root in (0, 0.1]".into(),
            ));
        }
        upper = (upper * 2.0).min(0.1);
    }
}

/// `xi * gamma^[l](t)`: plug-in estimate of the squared bandwidth obtained by
/// recursively estimating the density functionals of order `l-1 ... 2`.
fn gamma_fixed_point(t: f64, n: f64, terms: &[(f64, f64)]) -> f64 {
    let pi2 = PI * PI;
    let functional = |s: i32, time: f64| -> f64 {
        2.0 * PI.powi(2 * s)
            * terms
                .iter()
                .map(|&(i, a2)| i.powi(s) * a2 * (-i * pi2 * time).exp())
                .sum::<f64>()
    };
    let mut f = functional(ISJ_ORDER, t);
    for s in (2..ISJ_ORDER).rev() {
        let odd_product: f64 = (1..2 * s).step_by(2).map(|k| k as f64).product();
        let k0 = odd_product / (2.0 * PI).sqrt();
        let c = (1.0 + 0.5f64.powf(s as f64 + 0.5)) / 3.0;
        let time = (2.0 * c * k0 / (n * f)).powf(2.0 / (3.0 + 2.0 * s as f64));
        f = functional(s, time);
    }
    let out = (2.0 * n * SQRT_PI * f).powf(-0.4);
    if out.is_finite() {
        out
    } else {
        f64::NAN
    }
}

/// Unnormalized DCT-II, `X_k = sum_j x_j cos(pi k (2j + 1) / (2N))`, via one FFT.
fn dct2(x: &[f64]) -> Vec<f64> {
    let len = x.len();
    let mut buf: Vec<Complex<f64>> = (0..len)
        .map(|i| {
            let j = if i < len.div_ceil(2) { 2 * i } else { 2 * (len - i) - 1 };
            Complex::new(x[j], 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    buf.iter()
        .enumerate()
        .map(|(k, v)| {
            let angle = -PI * k as f64 / (2.0 * len as f64);
            (v * Complex::from_polar(1.0, angle)).re
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal, StandardNormal};

    fn normals(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    fn bimodal(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let left = Normal::new(-3.0, 1.0).unwrap();
        let right = Normal::new(3.0, 1.0).unwrap();
        (0..n)
            .map(|i| {
                if i % 2 == 0 {
                    left.sample(&mut rng)
                } else {
                    right.sample(&mut rng)
                }
            })
            .collect()
    }

    #[test]
    fn dct_matches_naive_sum() {
        let x: Vec<f64> = (0..16).map(|i| ((i * 7 % 5) as f64).sin() + i as f64 * 0.1).collect();
        let fast = dct2(&x);
        for (k, &v) in fast.iter().enumerate() {
            let naive: f64 = x
                .iter()
                .enumerate()
                .map(|(j, &xj)| xj * (PI * k as f64 * (2 * j + 1) as f64 / 32.0).cos())
                .sum();
            assert_abs_diff_eq!(v, naive, epsilon = 1e-12);
        }
    }

    #[test]
    fn silverman_on_standard_normal() {
        let s = normals(1000, 1);
        let h = select_bandwidth(&s, BandwidthRule::Silverman).unwrap();
        // Independent evaluation of the formula on the same draw.
        let mean = s.iter().sum::<f64>() / 1000.0;
        let sd = (s.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 999.0).sqrt();
        let mut sorted = s.clone();
        sorted.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let pos = p * 999.0;
            let i = pos as usize;
            sorted[i] + (pos - i as f64) * (sorted[i + 1] - sorted[i])
        };
        let direct = 0.9 * sd.min((q(0.75) - q(0.25)) / 1.34) * 1000f64.powf(-0.2);
        assert_abs_diff_eq!(h, direct, epsilon = 1e-14);
        assert!((h - 0.2259).abs() < 0.15 * 0.2259, "h = {h}");
    }

    #[test]
    fn scott_formula() {
        let s = normals(500, 2);
        let h = select_bandwidth(&s, BandwidthRule::Scott).unwrap();
        assert_abs_diff_eq!(h, 1.06 * sample_std(&s) * 500f64.powf(-0.2), epsilon = 1e-15);
    }

    #[test]
    fn degenerate_samples_rejected() {
        for rule in [
            BandwidthRule::Silverman,
            BandwidthRule::Scott,
            BandwidthRule::Isj,
            BandwidthRule::Fixed(1.0),
        ] {
            assert!(matches!(
                select_bandwidth(&[5.0, 5.0, 5.0, 5.0], rule),
                Err(Error::DegenerateSample(_))
            ));
        }
        assert!(select_bandwidth(&[1.0], BandwidthRule::Scott).is_err());
        assert!(matches!(
            select_bandwidth(&[1.0, 2.0], BandwidthRule::Fixed(-1.0)),
            Err(Error::InvalidBandwidth(_))
        ));
    }

    #[test]
    fn isj_close_to_silverman_on_gaussian_data() {
        let s = normals(2000, 5);
        let isj = select_bandwidth(&s, BandwidthRule::Isj).unwrap();
        let silverman = select_bandwidth(&s, BandwidthRule::Silverman).unwrap();
        assert!(
            isj > 0.5 * silverman && isj < 1.5 * silverman,
            "isj {isj} silverman {silverman}"
        );
    }

    #[test]
    fn isj_smaller_than_silverman_on_bimodal() {
        let s = bimodal(2000, 9);
        let isj = select_bandwidth(&s, BandwidthRule::Isj).unwrap();
        let silverman = select_bandwidth(&s, BandwidthRule::Silverman).unwrap();
        assert!(isj < silverman, "isj {isj} silverman {silverman}");
    }

    #[test]
    fn isj_is_deterministic_and_scale_equivariant() {
        let s = bimodal(1500, 4);
        let a = isj_bandwidth(&s).unwrap();
        assert_eq!(a, isj_bandwidth(&s).unwrap());
        let scaled: Vec<f64> = s.iter().map(|v| v * 4.0 + 10.0).collect();
        let b = isj_bandwidth(&scaled).unwrap();
        assert!((b / a - 4.0).abs() < 1e-3 * 4.0, "{a} {b}");
    }

    #[test]
    fn rule_parsing() {
        assert_eq!("ISJ".parse::<BandwidthRule>().unwrap(), BandwidthRule::Isj);
        assert_eq!(
            "fixed:0.25".parse::<BandwidthRule>().unwrap(),
            BandwidthRule::Fixed(0.25)
        );
        assert!("fixed:0".parse::<BandwidthRule>().is_err());
        assert!("fixed:abc".parse::<BandwidthRule>().is_err());
        assert!("wand".parse::<BandwidthRule>().is_err());
        for rule in [
            BandwidthRule::Silverman,
            BandwidthRule::Scott,
            BandwidthRule::Isj,
            BandwidthRule::Fixed(0.5),
        ] {
            assert_eq!(rule.to_string().parse::<BandwidthRule>().unwrap(), rule);
        }
    }
}
