//! Error metrics and the Wilcoxon signed-rank test.

use statrs::function::erf::erfc;
use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};

/// Root-mean-square error between equal-length sequences.
pub fn rmse(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::EmptySeries);
    }
    let ss: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok((ss / a.len() as f64).sqrt())
}

/// Mean and population standard deviation, `None` for an empty slice.
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Some((mean, var.sqrt()))
}

/// Fewest non-zero differences the signed-rank test accepts.
pub const WILCOXON_MIN_PAIRS: usize = 6;
/// Largest number of non-zero differences handled by exact enumeration.
pub const WILCOXON_EXACT_MAX: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WilcoxonMethod {
    /// Exact up to [`WILCOXON_EXACT_MAX`] non-zero pairs, normal beyond.
    #[default]
    Auto,
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilcoxonResult {
    /// Sum of the ranks of the positive differences `x - y`.
    pub w_plus: f64,
    /// Number of non-zero differences.
    pub n: usize,
    /// Two-sided p-value.
    pub p_value: f64,
    /// Branch actually used (never `Auto`).
    pub method: WilcoxonMethod,
}

/// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences
/// are dropped; tied magnitudes get average ranks.
pub fn wilcoxon_signed_rank(x: &[f64], y: &[f64]) -> Result<WilcoxonResult> {
    wilcoxon_signed_rank_with(x, y, WilcoxonMethod::Auto)
}

pub fn wilcoxon_signed_rank_with(x: &[f64], y: &[f64], method: WilcoxonMethod) -> Result<WilcoxonResult> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let diffs: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).filter(|d| *d != 0.0).collect();
    if let Some(d) = diffs.iter().find(|d| !d.is_finite()) {
        return Err(Error::InvalidStatistic(*d));
    }
    let n = diffs.len();
    if n < WILCOXON_MIN_PAIRS {
        return Err(Error::TooFewPairs(n));
    }
    let (ranks2, tie_sizes) = doubled_ranks(&diffs);
    let w2: u64 = diffs
        .iter()
        .zip(&ranks2)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| *r)
        .sum();
    let method = match method {
        WilcoxonMethod::Auto if n <= WILCOXON_EXACT_MAX => WilcoxonMethod::Exact,
        WilcoxonMethod::Auto => WilcoxonMethod::Normal,
        m => m,
    };
    let p_value = match method {
        WilcoxonMethod::Exact => exact_p(&ranks2, w2),
        _ => normal_p(n, &tie_sizes, w2 as f64 / 2.0),
    };
    Ok(WilcoxonResult {
        w_plus: w2 as f64 / 2.0,
        n,
        p_value,
        method,
    })
}

/// Twice the average rank of each |d| (always an integer), plus the sizes of
/// the tie groups.
fn doubled_ranks(diffs: &[f64]) -> (Vec<u64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..diffs.len()).collect();
    order.sort_by(|&i, &j| diffs[i].abs().total_cmp(&diffs[j].abs()));
    let mut ranks2 = vec![0u64; diffs.len()];
    let mut ties = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mag = diffs[order[start]].abs();
        let mut end = start + 1;
        while end < order.len() && diffs[order[end]].abs() == mag {
            end += 1;
        }
        // Positions start+1 ..= end share rank (start + 1 + end) / 2.
        let r2 = (start + 1 + end) as u64;
        for &i in &order[start..end] {
            ranks2[i] = r2;
        }
        ties.push(end - start);
        start = end;
    }
    (ranks2, ties)
}

/// Exact null distribution of the doubled statistic: every sign pattern of
/// the given ranks is equally likely.
fn exact_p(ranks2: &[u64], w2: u64) -> f64 {
    let total: u64 = ranks2.iter().sum();
    let mut counts = vec![0f64; total as usize + 1];
    counts[0] = 1.0;
    let mut reach = 0usize;
    for &r in ranks2 {
        let r = r as usize;
        for s in (0..=reach).rev() {
            if counts[s] != 0.0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    let patterns = 2f64.powi(ranks2.len() as i32);
    let lower: f64 = counts[..=w2 as usize].iter().sum();
    let upper: f64 = counts[w2 as usize..].iter().sum();
    (2.0 * lower.min(upper) / patterns).min(1.0)
}

/// Normal approximation with tie and continuity corrections.
fn normal_p(n: usize, tie_sizes: &[usize], w_plus: f64) -> f64 {
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let tie_term: f64 = tie_sizes.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / 48.0;
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term;
    let dev = ((w_plus - mean).abs() - 0.5).max(0.0);
    let z = dev / var.sqrt();
    erfc(z / SQRT_2).min(1.0)
}
