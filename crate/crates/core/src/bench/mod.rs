//! Benchmark harness: UCR loading, error metrics, significance testing and
//! the two experiment families with their reports.

mod dataset;
mod experiment;
mod report;
mod stats;

pub use dataset::{
    discover_datasets, load_ucr, manifest_entry, parse_ucr, validate_against_manifest, Dataset, Delimiter,
    LabeledSeries, ManifestEntry, MANIFEST,
};
pub use experiment::{
    run_reconstruction_experiment, run_tlb_experiment, sample_pairs, ExperimentConfig, Method, Metric, Normalization,
};
pub use report::{
    emit_report, parse_csv_report, report_bytes, Comparison, ConfigEcho, ExperimentReport, ReportFormat, ReportRow,
    SkippedDataset, CSV_HEADER,
};
pub use stats::{
    mean_std, rmse, wilcoxon_signed_rank, wilcoxon_signed_rank_with, WilcoxonMethod, WilcoxonResult,
    WILCOXON_EXACT_MAX, WILCOXON_MIN_PAIRS,
};
