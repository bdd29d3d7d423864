use std::fmt;
use std::str::FromStr;

use log::warn;

use crate::density::{select_bandwidth, BandwidthRule, DensityModel, Kernel};
use crate::distance::{build_lookup, DistanceTable};
use crate::error::{Error, Result};
use crate::symbolizer::breakpoints::{
    check_alphabet, compute_breakpoints, compute_centroids, gaussian_breakpoints, gaussian_centroids, Breakpoints,
    Centroids,
};
use crate::timeseries::{paa, segment_overlaps, znormalize, PaaSeries, TimeSeries, WordLength};

/// Which values feed the density estimate during training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EstimateOn {
    /// Every z-normalized point of every training series.
    #[default]
    Raw,
    /// The PAA segment means of the z-normalized training series.
    Paa,
}

impl EstimateOn {
    pub fn name(self) -> &'static str {
        match self {
            EstimateOn::Raw => "raw",
            EstimateOn::Paa => "paa",
        }
    }
}

impl FromStr for EstimateOn {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "raw" => Ok(EstimateOn::Raw),
            "paa" => Ok(EstimateOn::Paa),
            _ => Err(format!("unknown estimate-on value '{s}' (expected raw|paa)")),
        }
    }
}

/// Training parameters for the density-driven symbolizer.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub kernel: Kernel,
    pub bandwidth: BandwidthRule,
    pub estimate_on: EstimateOn,
    /// Only consulted when `estimate_on` is [`EstimateOn::Paa`].
    pub word_length: WordLength,
    /// Fall back to Silverman's rule when the ISJ fixed point fails.
    pub isj_fallback: bool,
    /// Z-normalize each training series before pooling. Turn off when the
    /// caller has already normalized the data some other way.
    pub znormalize: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            kernel: Kernel::Epanechnikov,
            bandwidth: BandwidthRule::Isj,
            estimate_on: EstimateOn::Raw,
            word_length: WordLength::SegmentSize(2),
            isj_fallback: true,
            znormalize: true,
        }
    }
}

/// How a fitted density was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySummary {
    pub kernel: Kernel,
    /// The rule that actually produced `bandwidth` (after any fallback).
    pub rule: BandwidthRule,
    pub bandwidth: f64,
    pub sample_count: u64,
    pub estimate_on: EstimateOn,
}

/// Where a model's breakpoints come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    /// Classic SAX: standard normal quantiles.
    Gaussian,
    Kde(DensitySummary),
    /// Breakpoints and centroids supplied directly.
    Custom,
}

/// A trained symbolizer: breakpoints, centroids and the MINDIST table.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolizerModel {
    breakpoints: Breakpoints,
    centroids: Centroids,
    lookup: DistanceTable,
    provenance: Provenance,
}

impl SymbolizerModel {
    pub(crate) fn assemble(breakpoints: Breakpoints, centroids: Centroids, provenance: Provenance) -> Self {
        let lookup = build_lookup(&breakpoints);
        Self {
            breakpoints,
            centroids,
            lookup,
            provenance,
        }
    }

    /// Classic SAX model with Gaussian breakpoints and Gaussian bin medians
    /// as centroids.
    pub fn gaussian(a: usize) -> Result<Self> {
        Ok(Self::assemble(
            gaussian_breakpoints(a)?,
            gaussian_centroids(a)?,
            Provenance::Gaussian,
        ))
    }

    /// Model from explicit breakpoints and centroids.
    pub fn from_parts(breakpoints: Breakpoints, centroids: Centroids) -> Result<Self> {
        if centroids.values().len() != breakpoints.alphabet_size() {
            return Err(Error::WordMismatch(format!(
                "{} centroids for {} bins",
                centroids.values().len(),
                breakpoints.alphabet_size()
            )));
        }
        Ok(Self::assemble(breakpoints, centroids, Provenance::Custom))
    }

    /// Density-driven model for alphabet size `a` from an already fitted
    /// density.
    pub fn from_density(density: &DensityModel, a: usize, summary: DensitySummary) -> Result<Self> {
        let breakpoints = compute_breakpoints(density, a)?;
        let centroids = compute_centroids(density, &breakpoints)?;
        Ok(Self::assemble(breakpoints, centroids, Provenance::Kde(summary)))
    }

    pub fn alphabet_size(&self) -> usize {
        self.breakpoints.alphabet_size()
    }

    pub fn breakpoints(&self) -> &Breakpoints {
        &self.breakpoints
    }

    pub fn centroids(&self) -> &Centroids {
        &self.centroids
    }

    pub fn lookup(&self) -> &DistanceTable {
        &self.lookup
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
}

/// A symbolic word: `w` symbol indices below the alphabet size.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolWord {
    symbols: Vec<u8>,
    alphabet_size: usize,
}

impl SymbolWord {
    pub fn new(symbols: Vec<u8>, alphabet_size: usize) -> Result<Self> {
        check_alphabet(alphabet_size)?;
        if symbols.is_empty() {
            return Err(Error::WordMismatch("empty word".into()));
        }
        if let Some(pos) = symbols.iter().position(|&s| s as usize >= alphabet_size) {
            return Err(Error::WordMismatch(format!(
                "symbol {} at position {pos} outside alphabet of size {alphabet_size}",
                symbols[pos]
            )));
        }
        Ok(Self { symbols, alphabet_size })
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Parse a rendered word: lowercase letters, or whitespace/comma
    /// separated indices (accepted for any alphabet size). Errors carry the
    /// 1-based column of the offending symbol.
    pub fn parse(text: &str, alphabet_size: usize) -> Result<Self> {
        check_alphabet(alphabet_size)?;
        let text = text.trim();
        let numeric = text.chars().next().is_some_and(|c| c.is_ascii_digit());
        let mut symbols = Vec::new();
        if numeric {
            let mut start = None;
            for (pos, ch) in text.char_indices().chain(std::iter::once((text.len(), ' '))) {
                let separator = ch.is_whitespace() || ch == ',';
                match (start, separator) {
                    (None, false) => start = Some(pos),
                    (Some(begin), true) => {
                        let token = &text[begin..pos];
                        let column = begin + 1;
                        let s: usize = token.parse().map_err(|_| Error::Parse {
                            line: 1,
                            column,
                            message: format!("malformed symbol '{token}'"),
                        })?;
                        if s >= alphabet_size {
                            return Err(Error::Parse {
                                line: 1,
                                column,
                                message: format!("symbol {s} outside alphabet of size {alphabet_size}"),
                            });
                        }
                        symbols.push(s as u8);
                        start = None;
                    }
                    _ => {}
                }
            }
        } else {
            for (pos, ch) in text.chars().enumerate() {
                let s = match ch {
                    'a'..='z' => ch as usize - 'a' as usize,
                    _ => usize::MAX,
                };
                if s >= alphabet_size {
                    return Err(Error::Parse {
                        line: 1,
                        column: pos + 1,
                        message: format!("malformed symbol '{ch}' for alphabet of size {alphabet_size}"),
                    });
                }
                symbols.push(s as u8);
            }
        }
        Self::new(symbols, alphabet_size)
    }
}

impl fmt::Display for SymbolWord {
    /// Letters `a, b, c, ...` up to 26 symbols, space-separated indices beyond.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet_size <= 26 {
            for &s in &self.symbols {
                write!(f, "{}", (b'a' + s) as char)?;
            }
        } else {
            for (i, s) in self.symbols.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

/// Collect the values the density is estimated from.
fn training_values(training: &[TimeSeries], config: &TrainConfig) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for series in training {
        let z = if config.znormalize {
            znormalize(series).series
        } else {
            series.clone()
        };
        match config.estimate_on {
            EstimateOn::Raw => values.extend_from_slice(z.values()),
            EstimateOn::Paa => {
                let w = config.word_length.resolve(z.len())?;
                values.extend_from_slice(paa(&z, w)?.segments());
            }
        }
    }
    Ok(values)
}

/// Pool the z-normalized training data and fit the kernel density estimate.
pub fn fit_density(training: &[TimeSeries], config: &TrainConfig) -> Result<(DensityModel, DensitySummary)> {
    if training.is_empty() {
        return Err(Error::DegenerateSample("empty training collection".into()));
    }
    let values = training_values(training, config)?;
    let (rule, bandwidth) = match config.bandwidth {
        BandwidthRule::Isj => match select_bandwidth(&values, BandwidthRule::Isj) {
            Ok(h) => (BandwidthRule::Isj, h * config.kernel.gaussian_equivalent_factor()),
            Err(Error::IsjConvergenceFailure(why)) if config.isj_fallback => {
                warn!("ISJ failed ({why}); falling back to Silverman's rule");
                (
                    BandwidthRule::Silverman,
                    select_bandwidth(&values, BandwidthRule::Silverman)?,
                )
            }
            Err(e) => return Err(e),
        },
        rule => (rule, select_bandwidth(&values, rule)?),
    };
    let summary = DensitySummary {
        kernel: config.kernel,
        rule,
        bandwidth,
        sample_count: values.len() as u64,
        estimate_on: config.estimate_on,
    };
    Ok((DensityModel::new(values, config.kernel, bandwidth)?, summary))
}

/// Train a density-driven model with alphabet size `a`.
pub fn train(training: &[TimeSeries], a: usize, config: &TrainConfig) -> Result<SymbolizerModel> {
    check_alphabet(a)?;
    let (density, summary) = fit_density(training, config)?;
    SymbolizerModel::from_density(&density, a, summary)
}

/// Map each PAA segment to the bin that contains it.
pub fn symbolize(model: &SymbolizerModel, paa: &PaaSeries) -> SymbolWord {
    let symbols = paa
        .segments()
        .iter()
        .map(|&x| model.breakpoints.symbol_of(x) as u8)
        .collect();
    SymbolWord {
        symbols,
        alphabet_size: model.alphabet_size(),
    }
}

/// PAA with `w` segments followed by [`symbolize`].
pub fn encode(model: &SymbolizerModel, series: &TimeSeries, w: usize) -> Result<SymbolWord> {
    Ok(symbolize(model, &paa(series, w)?))
}

/// Expand a word into a series of length `n`, each symbol contributing its
/// centroid over its segment span. Points shared by two segments (when `w`
/// does not divide `n`) take the overlap-weighted mix of both centroids.
pub fn reconstruct(model: &SymbolizerModel, word: &SymbolWord, n: usize) -> Result<TimeSeries> {
    if word.alphabet_size != model.alphabet_size() {
        return Err(Error::WordMismatch(format!(
            "word over alphabet {} decoded with model of size {}",
            word.alphabet_size,
            model.alphabet_size()
        )));
    }
    let w = word.len();
    if n < w {
        return Err(Error::InvalidLength { n, w });
    }
    let gamma = |i: usize| model.centroids.get(word.symbols[i] as usize);
    let values = if n.is_multiple_of(w) {
        (0..w).flat_map(|i| std::iter::repeat_n(gamma(i), n / w)).collect()
    } else {
        let mut values = vec![0.0; n];
        for i in 0..w {
            let g = gamma(i);
            for (j, overlap) in segment_overlaps(n, w, i) {
                values[j] += overlap as f64 * g;
            }
        }
        values.iter_mut().for_each(|v| *v /= w as f64);
        values
    };
    TimeSeries::new(values)
}
