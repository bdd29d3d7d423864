use log::warn;

use crate::density::DensityModel;
use crate::error::{Error, Result};
use crate::numeric::{bisect, normal_quantile};

pub const MIN_ALPHABET: usize = 2;
pub const MAX_ALPHABET: usize = 256;

/// Quantiles are located to this accuracy in CDF value.
pub const CDF_TOLERANCE: f64 = 1e-10;
const MAX_BISECTIONS: usize = 200;

pub(crate) fn check_alphabet(a: usize) -> Result<()> {
    if (MIN_ALPHABET..=MAX_ALPHABET).contains(&a) {
        Ok(())
    } else {
        Err(Error::InvalidAlphabet(a))
    }
}

/// The `a - 1` finite, strictly increasing interior breakpoints of an
/// alphabet of size `a`. Symbol `j` covers `[lower(j), upper(j))`, with
/// `-inf` and `+inf` closing the outer bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Breakpoints {
    interior: Vec<f64>,
}

impl Breakpoints {
    pub fn new(interior: Vec<f64>) -> Result<Self> {
        check_alphabet(interior.len() + 1)?;
        if let Some((index, &value)) = interior.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        if let Some(i) = interior.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::DegenerateDensity(format!(
                "breakpoints not strictly increasing at {}: {} >= {}",
                i + 1,
                interior[i],
                interior[i + 1]
            )));
        }
        Ok(Self { interior })
    }

    pub fn alphabet_size(&self) -> usize {
        self.interior.len() + 1
    }

    /// Interior breakpoints, without the infinite sentinels.
    pub fn interior(&self) -> &[f64] {
        &self.interior
    }

    pub fn lower(&self, symbol: usize) -> f64 {
        if symbol == 0 {
            f64::NEG_INFINITY
        } else {
            self.interior[symbol - 1]
        }
    }

    pub fn upper(&self, symbol: usize) -> f64 {
        self.interior.get(symbol).copied().unwrap_or(f64::INFINITY)
    }

    /// Bin index `j` with `lower(j) <= x < upper(j)`. Values sitting exactly
    /// on a breakpoint go to the upper bin.
    pub fn symbol_of(&self, x: f64) -> usize {
        self.interior.partition_point(|&b| b <= x)
    }
}

/// One representative value per symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct Centroids {
    values: Vec<f64>,
}

impl Centroids {
    /// Centroids must be finite and lie strictly inside their bins.
    pub fn new(values: Vec<f64>, breakpoints: &Breakpoints) -> Result<Self> {
        if values.len() != breakpoints.alphabet_size() {
            return Err(Error::WordMismatch(format!(
                "{} centroids for alphabet of size {}",
                values.len(),
                breakpoints.alphabet_size()
            )));
        }
        for (j, &g) in values.iter().enumerate() {
            if !g.is_finite() || g <= breakpoints.lower(j) || g >= breakpoints.upper(j) {
                return Err(Error::DegenerateDensity(format!(
                    "centroid {j} = {g} outside its bin [{}, {})",
                    breakpoints.lower(j),
                    breakpoints.upper(j)
                )));
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, symbol: usize) -> f64 {
        self.values[symbol]
    }
}

/// Classic SAX breakpoints: standard normal quantiles at `i / a`.
pub fn gaussian_breakpoints(a: usize) -> Result<Breakpoints> {
    check_alphabet(a)?;
    Breakpoints::new((1..a).map(|i| normal_quantile(i as f64 / a as f64)).collect())
}

/// Standard normal conditional medians, `Phi^-1((i - 0.5) / a)`.
pub fn gaussian_centroids(a: usize) -> Result<Centroids> {
    let bp = gaussian_breakpoints(a)?;
    Centroids::new(
        (1..=a).map(|i| normal_quantile((i as f64 - 0.5) / a as f64)).collect(),
        &bp,
    )
}

/// Root of `cdf(y) = target` searched by bisection on `[lo, hi]`.
///
/// If the root falls in a stretch where the density is exactly zero, every
/// point of that stretch solves the equation; the midpoint is returned.
fn invert_cdf(density: &DensityModel, target: f64, lo: f64, hi: f64) -> f64 {
    let root = bisect(|y| density.cdf(y) - target, lo, hi, CDF_TOLERANCE, MAX_BISECTIONS);
    if !root.converged {
        warn!(
            "cdf inversion at {target} stopped after {} bisections at {}",
            root.iterations, root.x
        );
    }
    match density.zero_density_gap(root.x) {
        Some((left, right)) if right > left => {
            let mid = 0.5 * (left + right);
            warn!("zero-density plateau [{left}, {right}] at quantile {target}; using midpoint {mid}");
            mid
        }
        _ => root.x,
    }
}

/// Equiprobable breakpoints of a density, `cdf(beta_i) = i / a`.
pub fn compute_breakpoints(density: &DensityModel, a: usize) -> Result<Breakpoints> {
    check_alphabet(a)?;
    let (mut lo, hi) = density.support();
    let mut interior = Vec::with_capacity(a - 1);
    for i in 1..a {
        let beta = invert_cdf(density, i as f64 / a as f64, lo, hi);
        interior.push(beta);
        lo = beta;
    }
    Breakpoints::new(interior)
}

/// Per-bin medians: each centroid splits the probability mass of its bin in
/// two equal halves. Outer bins are bounded by the density's support.
pub fn compute_centroids(density: &DensityModel, breakpoints: &Breakpoints) -> Result<Centroids> {
    let (support_lo, support_hi) = density.support();
    let a = breakpoints.alphabet_size();
    let values = (0..a)
        .map(|j| {
            let lower = breakpoints.lower(j);
            let upper = breakpoints.upper(j);
            let mass_lo = if j == 0 { 0.0 } else { density.cdf(lower) };
            let mass_hi = if j + 1 == a { 1.0 } else { density.cdf(upper) };
            invert_cdf(
                density,
                0.5 * (mass_lo + mass_hi),
                lower.max(support_lo),
                upper.min(support_hi),
            )
        })
        .collect();
    Centroids::new(values, breakpoints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{select_bandwidth, BandwidthRule, Kernel};
    use crate::numeric::{adaptive_simpson, normal_pdf};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    /// Quantile of N(0,1) by bisection on a quadrature of its density; shares
    /// nothing with `normal_quantile`.
    fn quadrature_normal_quantile(p: f64) -> f64 {
        let cdf = |x: f64| adaptive_simpson(&normal_pdf, -12.0, x, 1e-13);
        let (mut lo, mut hi) = (-12.0, 12.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn uniform_grid_density() -> DensityModel {
        let samples: Vec<f64> = (0..2000).map(|i| (i as f64 + 0.5) / 2000.0).collect();
        DensityModel::new(samples, Kernel::Uniform, 1e-3).unwrap()
    }

    #[test]
    fn gaussian_breakpoints_examples() {
        let b3 = gaussian_breakpoints(3).unwrap();
        assert_abs_diff_eq!(b3.interior()[0], -0.43, epsilon = 0.005);
        assert_abs_diff_eq!(b3.interior()[1], 0.43, epsilon = 0.005);
        assert_eq!(gaussian_breakpoints(2).unwrap().interior(), &[0.0]);
        let b4 = gaussian_breakpoints(4).unwrap();
        for (i, &b) in b4.interior().iter().enumerate() {
            let oracle = quadrature_normal_quantile((i + 1) as f64 / 4.0);
            assert_abs_diff_eq!(b, oracle, epsilon = 1e-3);
        }
        assert_abs_diff_eq!(b4.interior()[0], -0.6745, epsilon = 1e-3);
    }

    #[test]
    fn alphabet_bounds() {
        assert!(matches!(gaussian_breakpoints(1), Err(Error::InvalidAlphabet(1))));
        assert!(matches!(gaussian_breakpoints(257), Err(Error::InvalidAlphabet(257))));
        assert_eq!(gaussian_breakpoints(256).unwrap().alphabet_size(), 256);
    }

    #[test]
    fn gaussian_centroids_are_bin_medians() {
        let c = gaussian_centroids(2).unwrap();
        assert_abs_diff_eq!(c.values()[0], -0.674_489_750_196_081_7, epsilon = 1e-12);
        assert_abs_diff_eq!(c.values()[1], 0.674_489_750_196_081_7, epsilon = 1e-12);
        assert_eq!(gaussian_centroids(3).unwrap().values()[1], 0.0);
    }

    #[test]
    fn symbol_lookup_half_open() {
        let b = Breakpoints::new(vec![-0.43, 0.43]).unwrap();
        assert_eq!(b.symbol_of(-1.0), 0);
        assert_eq!(b.symbol_of(0.0), 1);
        assert_eq!(b.symbol_of(2.0), 2);
        assert_eq!(b.symbol_of(-0.43), 1);
        assert_eq!(b.symbol_of(0.43), 2);
        let t3 = Breakpoints::new(vec![-0.33, -0.01, 0.66, 0.97, 1.54]).unwrap();
        let scan = |x: f64| (0..6).find(|&j| t3.lower(j) <= x && x < t3.upper(j)).unwrap();
        assert_eq!(t3.symbol_of(0.7), scan(0.7));
        assert_eq!(t3.symbol_of(0.7), 3);
    }

    #[test]
    fn rejects_unordered_breakpoints() {
        assert!(Breakpoints::new(vec![0.5, 0.5]).is_err());
        assert!(Breakpoints::new(vec![0.5, 0.1]).is_err());
        assert!(Breakpoints::new(vec![]).is_err());
        assert!(Breakpoints::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn uniform_law_quartiles_and_midpoints() {
        let d = uniform_grid_density();
        let b = compute_breakpoints(&d, 4).unwrap();
        for (got, want) in b.interior().iter().zip([0.25, 0.5, 0.75]) {
            assert_abs_diff_eq!(*got, want, epsilon = 0.02);
        }
        let b2 = compute_breakpoints(&d, 2).unwrap();
        let c = compute_centroids(&d, &b2).unwrap();
        assert_abs_diff_eq!(c.values()[0], 0.25, epsilon = 0.02);
        assert_abs_diff_eq!(c.values()[1], 0.75, epsilon = 0.02);
    }

    #[test]
    fn normal_breakpoints_match_sample_quantiles() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut s: Vec<f64> = (0..10_000).map(|_| StandardNormal.sample(&mut rng)).collect();
        let h = select_bandwidth(&s, BandwidthRule::Silverman).unwrap();
        let d = DensityModel::new(s.clone(), Kernel::Normal, h).unwrap();
        let b = compute_breakpoints(&d, 3).unwrap();
        s.sort_by(f64::total_cmp);
        let q1 = s[3333];
        let q2 = s[6666];
        assert_abs_diff_eq!(b.interior()[0], q1, epsilon = 0.05);
        assert_abs_diff_eq!(b.interior()[1], q2, epsilon = 0.05);
        assert_abs_diff_eq!(b.interior()[0], -0.43, epsilon = 0.05);
        assert_abs_diff_eq!(b.interior()[1], 0.43, epsilon = 0.05);

        let b2 = compute_breakpoints(&d, 2).unwrap();
        assert_abs_diff_eq!(d.cdf(b2.interior()[0]), 0.5, epsilon = 1e-8);
        let c = compute_centroids(&d, &b2).unwrap();
        assert_abs_diff_eq!(c.values()[0], -0.6745, epsilon = 0.05);
        assert_abs_diff_eq!(c.values()[1], 0.6745, epsilon = 0.05);
    }

    #[test]
    fn breakpoints_hit_cdf_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s: Vec<f64> = (0..500).map(|_| StandardNormal.sample(&mut rng)).collect();
        for k in Kernel::ALL {
            let d = DensityModel::new(s.clone(), k, 0.3).unwrap();
            let b = compute_breakpoints(&d, 7).unwrap();
            for (i, &beta) in b.interior().iter().enumerate() {
                assert!((d.cdf(beta) - (i + 1) as f64 / 7.0).abs() <= 1e-8, "{k}");
            }
            let c = compute_centroids(&d, &b).unwrap();
            for j in 0..7 {
                let target = (j as f64 + 0.5) / 7.0;
                assert!((d.cdf(c.get(j)) - target).abs() <= 1e-8, "{k} centroid {j}");
            }
        }
    }

    #[test]
    fn plateau_resolves_to_midpoint() {
        // Two well separated clusters: the median sits in an empty gap.
        let s = vec![-5.0, -5.0, -4.9, 4.9, 5.0, 5.0];
        let d = DensityModel::new(s, Kernel::Epanechnikov, 0.2).unwrap();
        let b = compute_breakpoints(&d, 2).unwrap();
        assert_abs_diff_eq!(b.interior()[0], 0.0, epsilon = 1e-12);
    }
}
