//! Raw series, z-normalization and Piecewise Aggregate Approximation.

use std::ops::Deref;

use crate::error::{Error, Result};

/// Standard deviations below this are treated as a constant series.
pub const CONSTANT_STD: f64 = 1e-12;

/// A non-empty sequence of finite reals.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Population standard deviation.
    pub fn std(&self) -> f64 {
        let mean = self.mean();
        let ss: f64 = self.values.iter().map(|v| (v - mean) * (v - mean)).sum();
        (ss / self.values.len() as f64).sqrt()
    }
}

impl Deref for TimeSeries {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.values
    }
}

impl TryFrom<Vec<f64>> for TimeSeries {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

/// Result of [`znormalize`]. `constant` is set when the input had
/// (numerically) zero variance, in which case `series` is all zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct ZNormalized {
    pub series: TimeSeries,
    pub constant: bool,
}

/// Shift to zero mean and scale to unit population standard deviation.
pub fn znormalize(series: &TimeSeries) -> ZNormalized {
    let mean = series.mean();
    let std = series.std();
    if std < CONSTANT_STD {
        return ZNormalized {
            series: TimeSeries {
                values: vec![0.0; series.len()],
            },
            constant: true,
        };
    }
    let values = series.iter().map(|v| (v - mean) / std).collect();
    ZNormalized {
        series: TimeSeries { values },
        constant: false,
    }
}

/// How the number of PAA segments is chosen for a series of length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordLength {
    /// Exactly `w` segments.
    Fixed(usize),
    /// Segments of (about) `s` points each: `w = max(1, n / s)`. With `s = 2`
    /// this is the "PAA parameter 2" setting used by the experiments.
    SegmentSize(usize),
}

impl WordLength {
    pub fn resolve(self, n: usize) -> Result<usize> {
        match self {
            WordLength::Fixed(w) => {
                if w == 0 || w > n {
                    Err(Error::InvalidWordLength { w, n })
                } else {
                    Ok(w)
                }
            }
            WordLength::SegmentSize(0) => Err(Error::InvalidSegmentSize(0)),
            WordLength::SegmentSize(s) => Ok((n / s).max(1)),
        }
    }
}

impl Default for WordLength {
    fn default() -> Self {
        WordLength::SegmentSize(2)
    }
}

/// `w` segment means of a series of length `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PaaSeries {
    segments: Vec<f64>,
    source_length: usize,
}

impl PaaSeries {
    pub fn segments(&self) -> &[f64] {
        &self.segments
    }

    pub fn source_length(&self) -> usize {
        self.source_length
    }

    pub fn word_length(&self) -> usize {
        self.segments.len()
    }
}

/// Overlap, in units of `1/w` of a point, between raw point `j` and segment
/// `i` when `n` points are split into `w` equal-width segments.
///
/// Point `j` spans `[j*w, (j+1)*w)` and segment `i` spans `[i*n, (i+1)*n)` on
/// a common integer axis, so all overlaps are exact integers. Each point's
/// overlaps sum to `w`; each segment's sum to `n`.
pub(crate) fn segment_overlaps(n: usize, w: usize, i: usize) -> impl Iterator<Item = (usize, usize)> {
    let start = i * n;
    let end = (i + 1) * n;
    let first = start / w;
    let last = (end - 1) / w;
    (first..=last).filter_map(move |j| {
        let lo = (j * w).max(start);
        let hi = ((j + 1) * w).min(end);
        (hi > lo).then_some((j, hi - lo))
    })
}

/// Piecewise Aggregate Approximation into `w` segments.
///
/// When `w` divides `n` each segment is the plain mean of its `n / w` points.
/// Otherwise points straddling a segment boundary contribute to both segments
/// in proportion to their overlap.
pub fn paa(series: &TimeSeries, w: usize) -> Result<PaaSeries> {
    let n = series.len();
    if w == 0 || w > n {
        return Err(Error::InvalidWordLength { w, n });
    }
    let values = series.values();
    let segments = if n.is_multiple_of(w) {
        let size = n / w;
        values
            .chunks_exact(size)
            .map(|chunk| chunk.iter().sum::<f64>() / size as f64)
            .collect()
    } else {
        (0..w)
            .map(|i| {
                let weighted: f64 = segment_overlaps(n, w, i)
                    .map(|(j, overlap)| overlap as f64 * values[j])
                    .sum();
                weighted / n as f64
            })
            .collect()
    };
    Ok(PaaSeries {
        segments,
        source_length: n,
    })
}
