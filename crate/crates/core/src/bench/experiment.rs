//! Tightness-of-lower-bound and reconstruction experiments.

use std::fmt;
use std::str::FromStr;

use log::{info, warn};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bench::dataset::{validate_against_manifest, Dataset};
use crate::bench::report::{Comparison, ConfigEcho, ExperimentReport, ReportRow, SkippedDataset};
use crate::bench::stats::{mean_std, rmse, wilcoxon_signed_rank};
use crate::distance::{euclidean, mindist};
use crate::error::{Error, Result};
use crate::symbolizer::{
    encode, fit_density, reconstruct, SymbolWord, SymbolizerModel, TrainConfig, MAX_ALPHABET, MIN_ALPHABET,
};
use crate::timeseries::{znormalize, TimeSeries, WordLength, CONSTANT_STD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// Gaussian breakpoints and centroids.
    Sax,
    /// Breakpoints and centroids from the trained density.
    EdwSax,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Sax => "sax",
            Method::EdwSax => "edwsax",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sax" => Ok(Method::Sax),
            "edwsax" => Ok(Method::EdwSax),
            _ => Err(format!("unknown method '{s}' (expected sax|edwsax)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    Tlb,
    Rmse,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Tlb => "tlb",
            Metric::Rmse => "rmse",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "tlb" => Ok(Metric::Tlb),
            "rmse" => Ok(Metric::Rmse),
            _ => Err(format!("unknown metric '{s}'")),
        }
    }
}

/// How series are scaled before training and evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Z-normalize every series on its own.
    #[default]
    PerSeries,
    /// One shift and scale for the whole dataset, taken from the train split.
    PerDataset,
}

impl Normalization {
    pub fn name(self) -> &'static str {
        match self {
            Normalization::PerSeries => "per-series",
            Normalization::PerDataset => "per-dataset",
        }
    }
}

impl FromStr for Normalization {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "per-series" => Ok(Normalization::PerSeries),
            "per-dataset" => Ok(Normalization::PerDataset),
            _ => Err(format!("unknown normalization '{s}' (expected per-series|per-dataset)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Density settings for edwSAX. Its `word_length` is overridden by the
    /// field below so that estimation and encoding agree.
    pub train: TrainConfig,
    pub word_length: WordLength,
    pub normalization: Normalization,
    pub methods: Vec<Method>,
    pub seed: u64,
    /// Cap on test pairs per dataset in the TLB experiment.
    pub max_pairs: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            train: TrainConfig::default(),
            word_length: WordLength::SegmentSize(2),
            normalization: Normalization::PerSeries,
            methods: vec![Method::Sax, Method::EdwSax],
            seed: 0,
            max_pairs: 10_000,
        }
    }
}

impl ExperimentConfig {
    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            kernel: self.train.kernel,
            bandwidth: self.train.bandwidth,
            estimate_on: self.train.estimate_on,
            word_length: self.word_length,
            normalization: self.normalization,
            seed: self.seed,
            max_pairs: self.max_pairs,
        }
    }

    fn methods(&self) -> Vec<Method> {
        let mut m = self.methods.clone();
        m.sort();
        m.dedup();
        m
    }
}

fn check_inputs(datasets: &[Dataset], alphabet_sizes: &[usize]) -> Result<Vec<usize>> {
    if datasets.is_empty() {
        return Err(Error::DegenerateSample("no datasets given".into()));
    }
    if alphabet_sizes.is_empty() {
        return Err(Error::InvalidAlphabet(0));
    }
    if let Some(&a) = alphabet_sizes
        .iter()
        .find(|a| !(MIN_ALPHABET..=MAX_ALPHABET).contains(*a))
    {
        return Err(Error::InvalidAlphabet(a));
    }
    let mut sizes = alphabet_sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    Ok(sizes)
}

/// Normalized copies of the train and test splits.
fn prepare(dataset: &Dataset, normalization: Normalization) -> Result<(Vec<TimeSeries>, Vec<TimeSeries>)> {
    match normalization {
        Normalization::PerSeries => {
            let z = |s: &TimeSeries| znormalize(s).series;
            Ok((
                dataset.train_series().map(z).collect(),
                dataset.test_series().map(z).collect(),
            ))
        }
        Normalization::PerDataset => {
            let pooled: Vec<f64> = dataset.train_series().flat_map(|s| s.iter().copied()).collect();
            let (mean, std) = mean_std(&pooled).expect("train split is non-empty");
            if std < CONSTANT_STD {
                return Err(Error::DegenerateSample(format!(
                    "{}: constant train split",
                    dataset.name
                )));
            }
            let scale = |s: &TimeSeries| TimeSeries::new(s.iter().map(|v| (v - mean) / std).collect());
            Ok((
                dataset.train_series().map(scale).collect::<Result<_>>()?,
                dataset.test_series().map(scale).collect::<Result<_>>()?,
            ))
        }
    }
}

/// One model per (method, alphabet size), in that order. The density is
/// fitted once and shared across alphabet sizes.
fn build_models(
    train: &[TimeSeries],
    sizes: &[usize],
    methods: &[Method],
    config: &ExperimentConfig,
) -> Result<Vec<(Method, usize, SymbolizerModel)>> {
    let density = if methods.contains(&Method::EdwSax) {
        let cfg = TrainConfig {
            word_length: config.word_length,
            znormalize: false,
            ..config.train.clone()
        };
        Some(fit_density(train, &cfg)?)
    } else {
        None
    };
    let jobs: Vec<(Method, usize)> = methods
        .iter()
        .flat_map(|&m| sizes.iter().map(move |&a| (m, a)))
        .collect();
    jobs.into_par_iter()
        .map(|(method, a)| {
            let model = match method {
                Method::Sax => SymbolizerModel::gaussian(a)?,
                Method::EdwSax => {
                    let (d, summary) = density.as_ref().expect("density fitted for edwSAX");
                    SymbolizerModel::from_density(d, a, *summary)?
                }
            };
            Ok((method, a, model))
        })
        .collect()
}

fn encode_all(model: &SymbolizerModel, series: &[TimeSeries], word_length: WordLength) -> Result<Vec<SymbolWord>> {
    series
        .iter()
        .map(|s| encode(model, s, word_length.resolve(s.len())?))
        .collect()
}

/// FNV-1a, used to give each dataset its own reproducible pair sample.
fn name_hash(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Distinct pairs `(i, j)`, `i < j < m`: all of them, or a seeded uniform
/// sample of `max_pairs` when there are more.
pub fn sample_pairs(m: usize, max_pairs: usize, seed: u64) -> Vec<(usize, usize)> {
    let total = m * m.saturating_sub(1) / 2;
    if total <= max_pairs {
        return (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    }
    // Row i holds the m - 1 - i pairs (i, i+1) .. (i, m-1).
    let offsets: Vec<usize> = (0..m)
        .scan(0, |acc, i| {
            let start = *acc;
            *acc += m - 1 - i;
            Some(start)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks = index::sample(&mut rng, total, max_pairs).into_vec();
    picks.sort_unstable();
    picks
        .into_iter()
        .map(|k| {
            let i = offsets.partition_point(|&o| o <= k) - 1;
            (i, i + 1 + k - offsets[i])
        })
        .collect()
}

struct DatasetOutcome {
    rows: Vec<ReportRow>,
    comparisons: Vec<Comparison>,
}

fn run_per_dataset<F>(datasets: &[Dataset], job: F) -> (Vec<ReportRow>, Vec<Comparison>, Vec<SkippedDataset>)
where
    F: Fn(&Dataset) -> Result<DatasetOutcome> + Sync,
{
    let outcomes: Vec<Result<DatasetOutcome>> = datasets
        .par_iter()
        .map(|d| {
            for w in validate_against_manifest(d) {
                warn!("{w}");
            }
            job(d)
        })
        .collect();
    let mut rows = Vec::new();
    let mut comparisons = Vec::new();
    let mut skipped = Vec::new();
    for (d, outcome) in datasets.iter().zip(outcomes) {
        match outcome {
            Ok(o) => {
                rows.extend(o.rows);
                comparisons.extend(o.comparisons);
            }
            Err(e) => {
                warn!("skipping dataset {}: {e}", d.name);
                skipped.push(SkippedDataset {
                    name: d.name.clone(),
                    reason: e.to_string(),
                });
            }
        }
    }
    (rows, comparisons, skipped)
}

fn summary_row(
    dataset: &str,
    method: Method,
    alphabet_size: usize,
    metric: Metric,
    values: &[f64],
    skipped: usize,
) -> ReportRow {
    let stats = mean_std(values);
    ReportRow {
        dataset: dataset.to_string(),
        method,
        alphabet_size,
        metric,
        mean: stats.map(|s| s.0),
        std: stats.map(|s| s.1),
        n_pairs: values.len(),
        skipped,
    }
}

/// Mean and std of the lower-bound tightness `MINDIST / ED` over test pairs,
/// per dataset, method and alphabet size. Pairs of unequal length or with
/// `ED = 0` are counted in `skipped`.
pub fn run_tlb_experiment(
    datasets: &[Dataset],
    alphabet_sizes: &[usize],
    config: &ExperimentConfig,
) -> Result<ExperimentReport> {
    let sizes = check_inputs(datasets, alphabet_sizes)?;
    let methods = config.methods();
    let (rows, comparisons, skipped) = run_per_dataset(datasets, |d| {
        info!("tlb: {}", d.name);
        let (train, test) = prepare(d, config.normalization)?;
        let pairs = sample_pairs(test.len(), config.max_pairs, config.seed ^ name_hash(&d.name));
        let mut undefined = 0usize;
        let valid: Vec<(usize, usize, f64)> = pairs
            .iter()
            .filter_map(|&(i, j)| match euclidean(&test[i], &test[j]) {
                Ok(ed) if ed > 0.0 => Some((i, j, ed)),
                _ => {
                    undefined += 1;
                    None
                }
            })
            .collect();
        let models = build_models(&train, &sizes, &methods, config)?;
        let rows = models
            .par_iter()
            .map(|(method, a, model)| {
                let words = encode_all(model, &test, config.word_length)?;
                let tlbs = valid
                    .iter()
                    .map(|&(i, j, ed)| Ok(mindist(&words[i], &words[j], model.lookup(), test[i].len())? / ed))
                    .collect::<Result<Vec<f64>>>()?;
                Ok(summary_row(&d.name, *method, *a, Metric::Tlb, &tlbs, undefined))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DatasetOutcome {
            rows,
            comparisons: Vec::new(),
        })
    });
    Ok(ExperimentReport::new(config.echo(), rows, comparisons, skipped))
}

/// Mean and std of the reconstruction RMSE over test series, per dataset,
/// method and alphabet size, plus a per-series signed-rank comparison of
/// SAX against edwSAX when both methods run.
pub fn run_reconstruction_experiment(
    datasets: &[Dataset],
    alphabet_sizes: &[usize],
    config: &ExperimentConfig,
) -> Result<ExperimentReport> {
    let sizes = check_inputs(datasets, alphabet_sizes)?;
    let methods = config.methods();
    let (rows, comparisons, skipped) = run_per_dataset(datasets, |d| {
        info!("reconstruction: {}", d.name);
        let (train, test) = prepare(d, config.normalization)?;
        let models = build_models(&train, &sizes, &methods, config)?;
        let errors = models
            .par_iter()
            .map(|(_, _, model)| {
                let words = encode_all(model, &test, config.word_length)?;
                test.iter()
                    .zip(&words)
                    .map(|(s, word)| rmse(s, &reconstruct(model, word, s.len())?))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let rows = models
            .iter()
            .zip(&errors)
            .map(|((m, a, _), e)| summary_row(&d.name, *m, *a, Metric::Rmse, e, 0))
            .collect();
        let lookup = |method: Method, a: usize| {
            models
                .iter()
                .position(|(m, s, _)| *m == method && *s == a)
                .map(|k| &errors[k])
        };
        let comparisons = sizes
            .iter()
            .filter_map(|&a| Some((a, lookup(Method::Sax, a)?, lookup(Method::EdwSax, a)?)))
            .map(|(a, sax, edw)| Comparison::paired(&d.name, a, Metric::Rmse, sax, edw))
            .collect();
        Ok(DatasetOutcome { rows, comparisons })
    });
    Ok(ExperimentReport::new(config.echo(), rows, comparisons, skipped))
}

/// Signed-rank test on per-series errors; `None` when too few pairs differ.
pub(crate) fn paired_p(baseline: &[f64], candidate: &[f64]) -> Option<(f64, f64, usize)> {
    match wilcoxon_signed_rank(baseline, candidate) {
        Ok(r) => Some((r.p_value, r.w_plus, r.n)),
        Err(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{self, Shape};

    fn quick_config() -> ExperimentConfig {
        ExperimentConfig {
            max_pairs: 300,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn pair_sampling() {
        assert_eq!(sample_pairs(3, 10, 0), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(sample_pairs(1, 10, 0).is_empty());
        let s = sample_pairs(200, 500, 7);
        assert_eq!(s.len(), 500);
        assert!(s.iter().all(|&(i, j)| i < j && j < 200));
        let mut d = s.clone();
        d.dedup();
        assert_eq!(d.len(), 500);
        assert_eq!(s, sample_pairs(200, 500, 7));
        assert_ne!(s, sample_pairs(200, 500, 8));
    }

    #[test]
    fn tlb_grows_with_alphabet() {
        let d = synthetic::dataset(Shape::RandomWalk, 10, 30, 128, 1);
        let cfg = ExperimentConfig {
            methods: vec![Method::EdwSax],
            max_pairs: 1000,
            ..quick_config()
        };
        let r = run_tlb_experiment(&[d], &[100, 5], &cfg).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.rows[0].alphabet_size, 5);
        let (lo, hi) = (r.rows[0].mean.unwrap(), r.rows[1].mean.unwrap());
        assert!(hi > lo, "{lo} {hi}");
        assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        assert_eq!(r.rows[0].n_pairs, 30 * 29 / 2);
    }

    #[test]
    fn single_test_series_gives_empty_row() {
        let d = synthetic::dataset(Shape::WhiteNoise, 5, 1, 32, 2);
        let r = run_tlb_experiment(&[d], &[4], &quick_config()).unwrap();
        assert_eq!(r.rows.len(), 2);
        for row in &r.rows {
            assert_eq!((row.mean, row.std, row.n_pairs), (None, None, 0));
        }
        assert!(!r.is_partial());
    }

    #[test]
    fn constant_test_series_reconstruct_to_the_middle_centroid() {
        let flat = TimeSeries::new(vec![2.5; 40]).unwrap();
        let varied = synthetic::corpus(Shape::WhiteNoise, 20, 40, 5);
        let d = Dataset::from_series("flat", varied, vec![flat; 4]).unwrap();
        let r = run_reconstruction_experiment(&[d], &[5], &quick_config()).unwrap();
        assert_eq!(r.rows.len(), 2);
        // Odd alphabet: zero sits inside the middle bin, whose Gaussian
        // median is exactly zero.
        assert_eq!(r.rows[0].method, Method::Sax);
        assert_eq!(r.rows[0].mean, Some(0.0));
        let edw = r.rows[1].mean.unwrap();
        assert!(edw < 0.05, "{edw}");
        // Every series has the same error, so nothing ranks.
        assert!(r.comparisons.iter().all(|c| c.p_value.is_none()));
    }

    #[test]
    fn failing_dataset_is_skipped_not_fatal() {
        let flat = TimeSeries::new(vec![1.0; 16]).unwrap();
        let bad = Dataset::from_series("flat", vec![flat.clone(); 3], vec![flat; 3]).unwrap();
        let good = synthetic::dataset(Shape::RandomWalk, 4, 8, 32, 3);
        let cfg = ExperimentConfig {
            methods: vec![Method::EdwSax],
            ..quick_config()
        };
        let r = run_reconstruction_experiment(&[bad, good], &[4], &cfg).unwrap();
        assert!(r.is_partial());
        assert_eq!(r.skipped_datasets[0].name, "flat");
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows[0].dataset, "random-walk");
    }

    #[test]
    fn invalid_inputs() {
        let d = synthetic::dataset(Shape::RandomWalk, 4, 4, 16, 0);
        assert!(run_tlb_experiment(&[], &[4], &quick_config()).is_err());
        assert!(matches!(
            run_tlb_experiment(std::slice::from_ref(&d), &[1], &quick_config()),
            Err(Error::InvalidAlphabet(1))
        ));
        assert!(run_reconstruction_experiment(&[d], &[], &quick_config()).is_err());
    }

    #[test]
    fn seeded_runs_are_bit_identical_and_leave_data_untouched() {
        let data = vec![
            synthetic::dataset(Shape::Skewed, 6, 40, 64, 11),
            synthetic::dataset(Shape::Bimodal, 6, 40, 64, 12),
        ];
        let before = data.clone();
        let cfg = ExperimentConfig {
            max_pairs: 100,
            seed: 42,
            ..ExperimentConfig::default()
        };
        let a = run_tlb_experiment(&data, &[5, 20], &cfg).unwrap();
        let b = run_tlb_experiment(&data, &[5, 20], &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(data, before);
        let r1 = run_reconstruction_experiment(&data, &[5], &cfg).unwrap();
        let r2 = run_reconstruction_experiment(&data, &[5], &cfg).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn per_dataset_normalization_runs() {
        let d = synthetic::dataset(Shape::Bimodal, 6, 10, 64, 4);
        let cfg = ExperimentConfig {
            normalization: Normalization::PerDataset,
            ..quick_config()
        };
        let r = run_reconstruction_experiment(&[d], &[8], &cfg).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!(r.rows.iter().all(|row| row.mean.unwrap() >= 0.0));
        assert_eq!(r.config.normalization, Normalization::PerDataset);
    }
}
