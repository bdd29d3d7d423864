// Save a trained model, load it back and check it is unchanged.

use std::error::Error;

use edwsax::symbolizer::{train, Provenance, SymbolizerModel, TrainConfig};
use edwsax::synthetic::{corpus, Shape};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let model = train(&corpus(Shape::Skewed, 10, 100, 2), 8, &TrainConfig::default())?;
    let path = std::env::temp_dir().join(format!("edwsax-model-io-{}.bin", std::process::id()));
    model.save(&path)?;
    let loaded = SymbolizerModel::load(&path)?;
    std::fs::remove_file(&path)?;

    assert_eq!(loaded, model);
    println!("{} bytes, alphabet {}", model.to_bytes().len(), loaded.alphabet_size());
    if let Provenance::Kde(s) = loaded.provenance() {
        println!(
            "{} kernel, {} bandwidth {:.4}, {} samples",
            s.kernel, s.rule, s.bandwidth, s.sample_count
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
