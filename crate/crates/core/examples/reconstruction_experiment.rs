// Reconstruction error of SAX and edwSAX on a bimodal corpus, with a
// signed-rank test on the per-series errors.

use std::error::Error;

use edwsax::bench::{run_reconstruction_experiment, ExperimentConfig, Method, Metric};
use edwsax::synthetic::{dataset, Shape};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let data = [dataset(Shape::Bimodal, 20, 40, 64, 8)];
    let report = run_reconstruction_experiment(&data, &[5, 10], &ExperimentConfig::default())?;
    for row in &report.rows {
        println!(
            "{:<8} a={:<3} rmse {:.4} +- {:.4}",
            row.method,
            row.alphabet_size,
            row.mean.unwrap_or(f64::NAN),
            row.std.unwrap_or(f64::NAN)
        );
    }
    for c in &report.comparisons {
        println!(
            "a={}: edwsax better on {}/{} series, p = {:?}",
            c.alphabet_size, c.candidate_wins, c.n, c.p_value
        );
    }
    let sax = report
        .row("bimodal", Method::Sax, 10, Metric::Rmse)
        .and_then(|r| r.mean);
    let edw = report
        .row("bimodal", Method::EdwSax, 10, Metric::Rmse)
        .and_then(|r| r.mean);
    assert!(edw < sax);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
