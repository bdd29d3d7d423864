//! Experiment results and their CSV / plot-data renderings.

use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;

use crate::bench::experiment::{paired_p, Method, Metric, Normalization};
use crate::bench::stats::wilcoxon_signed_rank;
use crate::density::{BandwidthRule, Kernel};
use crate::error::{Error, Result};
use crate::symbolizer::EstimateOn;
use crate::timeseries::WordLength;

pub const CSV_HEADER: [&str; 8] = [
    "dataset",
    "method",
    "alphabet_size",
    "metric",
    "mean",
    "std",
    "n_pairs",
    "skipped",
];

/// One (dataset, method, alphabet size) summary. `mean` and `std` are
/// `None` when no valid sample was available; `n_pairs` counts the samples
/// (pairs for TLB, series for RMSE).
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub dataset: String,
    pub method: Method,
    pub alphabet_size: usize,
    pub metric: Metric,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub n_pairs: usize,
    pub skipped: usize,
}

/// Signed-rank comparison of per-series values, SAX against edwSAX.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub dataset: String,
    pub alphabet_size: usize,
    pub metric: Metric,
    /// Two-sided p, `None` when fewer than six pairs differ.
    pub p_value: Option<f64>,
    /// Rank sum of the positive `SAX - edwSAX` differences.
    pub w_plus: Option<f64>,
    pub n_nonzero: usize,
    /// Series where edwSAX had the strictly smaller value.
    pub candidate_wins: usize,
    pub n: usize,
}

impl Comparison {
    pub(crate) fn paired(dataset: &str, alphabet_size: usize, metric: Metric, sax: &[f64], edw: &[f64]) -> Self {
        let test = paired_p(sax, edw);
        Self {
            dataset: dataset.to_string(),
            alphabet_size,
            metric,
            p_value: test.map(|t| t.0),
            w_plus: test.map(|t| t.1),
            n_nonzero: test.map_or(0, |t| t.2),
            candidate_wins: sax.iter().zip(edw).filter(|(s, e)| e < s).count(),
            n: sax.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedDataset {
    pub name: String,
    pub reason: String,
}

/// Settings an experiment ran with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfigEcho {
    pub kernel: Kernel,
    pub bandwidth: BandwidthRule,
    pub estimate_on: EstimateOn,
    pub word_length: WordLength,
    pub normalization: Normalization,
    pub seed: u64,
    pub max_pairs: usize,
}

impl ConfigEcho {
    pub fn lines(&self) -> Vec<String> {
        let word = match self.word_length {
            WordLength::Fixed(w) => format!("word-length={w}"),
            WordLength::SegmentSize(s) => format!("segment-size={s}"),
        };
        vec![
            format!("kernel={}", self.kernel),
            format!("bandwidth={}", self.bandwidth),
            format!("estimate-on={}", self.estimate_on.name()),
            word,
            format!("normalization={}", self.normalization.name()),
            format!("seed={}", self.seed),
            format!("max-pairs={}", self.max_pairs),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ConfigEcho,
    pub rows: Vec<ReportRow>,
    pub comparisons: Vec<Comparison>,
    pub skipped_datasets: Vec<SkippedDataset>,
}

impl ExperimentReport {
    /// Rows are ordered by dataset (input order), metric, method and
    /// ascending alphabet size.
    pub(crate) fn new(
        config: ConfigEcho,
        mut rows: Vec<ReportRow>,
        comparisons: Vec<Comparison>,
        skipped_datasets: Vec<SkippedDataset>,
    ) -> Self {
        let order: Vec<String> = rows.iter().map(|r| r.dataset.clone()).fold(Vec::new(), |mut v, d| {
            if !v.contains(&d) {
                v.push(d);
            }
            v
        });
        rows.sort_by_key(|r| {
            (
                order.iter().position(|d| *d == r.dataset),
                r.metric,
                r.method,
                r.alphabet_size,
            )
        });
        Self {
            config,
            rows,
            comparisons,
            skipped_datasets,
        }
    }

    /// Append another report's rows (e.g. reconstruction after TLB). Datasets
    /// skipped by either run are listed once.
    pub fn merge(mut self, other: ExperimentReport) -> Self {
        self.rows.extend(other.rows);
        self.comparisons.extend(other.comparisons);
        for s in other.skipped_datasets {
            if !self.skipped_datasets.iter().any(|k| k.name == s.name) {
                self.skipped_datasets.push(s);
            }
        }
        self
    }

    /// True when at least one dataset was skipped.
    pub fn is_partial(&self) -> bool {
        !self.skipped_datasets.is_empty()
    }

    pub fn row(&self, dataset: &str, method: Method, alphabet_size: usize, metric: Metric) -> Option<&ReportRow> {
        self.rows.iter().find(|r| {
            r.dataset == dataset && r.method == method && r.alphabet_size == alphabet_size && r.metric == metric
        })
    }

    /// Signed-rank test across datasets on the per-dataset means of SAX and
    /// edwSAX at one alphabet size.
    pub fn cross_dataset_test(&self, metric: Metric, alphabet_size: usize) -> Result<(f64, usize)> {
        let mut sax = Vec::new();
        let mut edw = Vec::new();
        for r in self
            .rows
            .iter()
            .filter(|r| r.metric == metric && r.alphabet_size == alphabet_size && r.method == Method::Sax)
        {
            let other = self.row(&r.dataset, Method::EdwSax, alphabet_size, metric);
            if let (Some(s), Some(e)) = (r.mean, other.and_then(|o| o.mean)) {
                sax.push(s);
                edw.push(e);
            }
        }
        let result = wilcoxon_signed_rank(&sax, &edw)?;
        Ok((result.p_value, sax.len()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Csv,
    Plot,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "plot" | "plot-data" => Ok(ReportFormat::Plot),
            _ => Err(format!("unknown format '{s}' (expected csv|plot)")),
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn emit_report(report: &ExperimentReport, format: ReportFormat, out: impl Write) -> Result<()> {
    match format {
        ReportFormat::Csv => emit_csv(report, out),
        ReportFormat::Plot => emit_plot(report, out).map_err(|e| Error::io("<report output>", e)),
    }
}

pub fn report_bytes(report: &ExperimentReport, format: ReportFormat) -> Vec<u8> {
    let mut buf = Vec::new();
    emit_report(report, format, &mut buf).expect("writing to memory cannot fail");
    buf
}

fn emit_csv(report: &ExperimentReport, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &report.rows {
        w.write_record([
            r.dataset.clone(),
            r.method.to_string(),
            r.alphabet_size.to_string(),
            r.metric.to_string(),
            opt(r.mean),
            opt(r.std),
            r.n_pairs.to_string(),
            r.skipped.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<report output>", e))?;
    Ok(())
}

/// Whitespace-separated blocks, one per (dataset, metric), separated by two
/// blank lines. Columns: alphabet size, then mean and std for each method.
/// Missing values are written as `nan`.
fn emit_plot(report: &ExperimentReport, mut out: impl Write) -> std::io::Result<()> {
    for line in report.config.lines() {
        writeln!(out, "# {line}")?;
    }
    let mut blocks: Vec<(&str, Metric)> = Vec::new();
    for r in &report.rows {
        if !blocks.contains(&(r.dataset.as_str(), r.metric)) {
            blocks.push((r.dataset.as_str(), r.metric));
        }
    }
    for (dataset, metric) in blocks {
        let rows: Vec<&ReportRow> = report
            .rows
            .iter()
            .filter(|r| r.dataset == dataset && r.metric == metric)
            .collect();
        let mut methods: Vec<Method> = rows.iter().map(|r| r.method).collect();
        methods.sort();
        methods.dedup();
        let mut by_size: BTreeMap<usize, Vec<&ReportRow>> = BTreeMap::new();
        for r in &rows {
            by_size.entry(r.alphabet_size).or_default().push(r);
        }
        writeln!(out, "\n\n# dataset={dataset} metric={metric}")?;
        write!(out, "# alphabet_size")?;
        for m in &methods {
            write!(out, " {m}_mean {m}_std")?;
        }
        writeln!(out)?;
        for (a, group) in by_size {
            write!(out, "{a}")?;
            for m in &methods {
                let r = group.iter().find(|r| r.method == *m);
                let fmt = |v: Option<f64>| v.map_or("nan".to_string(), |x| x.to_string());
                write!(out, " {} {}", fmt(r.and_then(|r| r.mean)), fmt(r.and_then(|r| r.std)))?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Parse rows back from [`emit_report`]'s CSV output.
pub fn parse_csv_report(bytes: &[u8]) -> Result<Vec<ReportRow>> {
    let mut reader = csv::Reader::from_reader(bytes);
    let header = reader.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record?;
        let line = k + 2;
        let field = |i: usize| record.get(i).unwrap_or("");
        let bad = |column: usize, what: &str| Error::Parse {
            line,
            column: column + 1,
            message: format!("malformed {what} '{}'", field(column)),
        };
        let float = |i: usize, what: &str| -> Result<Option<f64>> {
            match field(i) {
                "" => Ok(None),
                s => s.parse().map(Some).map_err(|_| bad(i, what)),
            }
        };
        rows.push(ReportRow {
            dataset: field(0).to_string(),
            method: field(1).parse().map_err(|_| bad(1, "method"))?,
            alphabet_size: field(2).parse().map_err(|_| bad(2, "alphabet size"))?,
            metric: field(3).parse().map_err(|_| bad(3, "metric"))?,
            mean: float(4, "mean")?,
            std: float(5, "std")?,
            n_pairs: field(6).parse().map_err(|_| bad(6, "pair count"))?,
            skipped: field(7).parse().map_err(|_| bad(7, "skipped count"))?,
        });
    }
    Ok(rows)
}
