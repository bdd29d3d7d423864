use crate::density::bandwidth::check_sample;
use crate::error::{Error, Result};

/// Histogram bin-width rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BinWidthRule {
    /// `range / (1 + log2 n)`
    SturgesRange,
    /// `C * n^(-1/3)` for a caller-chosen statistic `C`.
    Mise(f64),
    /// `3.49 * sd * n^(-1/3)`
    NormalReference,
}

pub fn histogram_bin_width(samples: &[f64], rule: BinWidthRule) -> Result<f64> {
    if let BinWidthRule::Mise(c) = rule {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidStatistic(c));
        }
    }
    check_sample(samples)?;
    let n = samples.len() as f64;
    Ok(match rule {
        BinWidthRule::SturgesRange => {
            let (lo, hi) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
            (hi - lo) / (1.0 + n.log2())
        }
        BinWidthRule::Mise(c) => c * n.powf(-1.0 / 3.0),
        BinWidthRule::NormalReference => {
            let mean = samples.iter().sum::<f64>() / n;
            let sd = (samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
            3.49 * sd * n.powf(-1.0 / 3.0)
        }
    })
}
