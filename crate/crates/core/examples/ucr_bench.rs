// Load UCR-format datasets from a directory and run both experiments.
//
// Uses `$EDWSAX_UCR_DIR` when set; otherwise writes a small synthetic
// dataset in UCR layout to a temporary directory first.

use std::error::Error;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use edwsax::bench::{
    discover_datasets, emit_report, run_reconstruction_experiment, run_tlb_experiment, validate_against_manifest,
    Dataset, Delimiter, ExperimentConfig, ReportFormat,
};
use edwsax::synthetic::{corpus, Shape};

fn write_split(path: &PathBuf, shapes: &[(i64, Shape)], count: usize, seed: u64) -> std::io::Result<()> {
    let mut text = String::new();
    for (k, &(label, shape)) in shapes.iter().enumerate() {
        for s in corpus(shape, count, 60, seed + k as u64) {
            let _ = write!(text, "{label}");
            for v in s.iter() {
                let _ = write!(text, "\t{v}");
            }
            text.push('\n');
        }
    }
    fs::write(path, text)
}

fn sample_root() -> std::io::Result<PathBuf> {
    let root = std::env::temp_dir().join(format!("edwsax-ucr-{}", std::process::id()));
    let dir = root.join("Toy");
    fs::create_dir_all(&dir)?;
    let classes = [(1, Shape::RandomWalk), (2, Shape::Bimodal)];
    write_split(&dir.join("Toy_TRAIN.tsv"), &classes, 5, 10)?;
    write_split(&dir.join("Toy_TEST.tsv"), &classes, 8, 20)?;
    Ok(root)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let (root, temporary) = match std::env::var_os("EDWSAX_UCR_DIR") {
        Some(dir) => (PathBuf::from(dir), false),
        None => (sample_root()?, true),
    };
    let mut datasets = Vec::new();
    for dir in discover_datasets(&root)? {
        let d = Dataset::load_dir(&dir, Delimiter::Auto)?;
        for warning in validate_against_manifest(&d) {
            eprintln!("warning: {warning}");
        }
        datasets.push(d);
    }
    let config = ExperimentConfig {
        max_pairs: 1000,
        ..ExperimentConfig::default()
    };
    let report = run_tlb_experiment(&datasets, &[5, 10], &config)?.merge(run_reconstruction_experiment(
        &datasets,
        &[5, 10],
        &config,
    )?);
    emit_report(&report, ReportFormat::Plot, std::io::stdout())?;
    if temporary {
        fs::remove_dir_all(&root)?;
    }
    assert!(!report.is_partial());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
