// Lower-bound tightness across alphabet sizes on synthetic datasets.

use std::error::Error;

use edwsax::bench::{emit_report, run_tlb_experiment, ExperimentConfig, ReportFormat};
use edwsax::synthetic::{dataset, Shape};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let datasets = [
        dataset(Shape::RandomWalk, 20, 40, 128, 1),
        dataset(Shape::Skewed, 20, 40, 128, 2),
    ];
    let config = ExperimentConfig {
        max_pairs: 500,
        ..ExperimentConfig::default()
    };
    let report = run_tlb_experiment(&datasets, &[5, 10, 20, 40], &config)?;
    emit_report(&report, ReportFormat::Csv, std::io::stdout())?;
    for window in report.rows.windows(2) {
        if window[0].dataset == window[1].dataset && window[0].method == window[1].method {
            assert!(window[1].mean >= window[0].mean);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
