// Encode a series to a word, reconstruct it and measure the error.

use std::error::Error;

use edwsax::bench::rmse;
use edwsax::symbolizer::{encode, reconstruct, train, SymbolizerModel, TrainConfig};
use edwsax::synthetic::{corpus, Shape};
use edwsax::timeseries::{znormalize, WordLength};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let training = corpus(Shape::Bimodal, 30, 40, 3);
    let series = znormalize(&corpus(Shape::Bimodal, 1, 40, 99)[0]).series;
    let w = WordLength::SegmentSize(2).resolve(series.len())?;

    for (label, model) in [
        ("sax", SymbolizerModel::gaussian(5)?),
        ("edwsax", train(&training, 5, &TrainConfig::default())?),
    ] {
        let word = encode(&model, &series, w)?;
        let approx = reconstruct(&model, &word, series.len())?;
        println!("{label:<7} {word}  rmse {:.4}", rmse(&series, &approx)?);
        assert_eq!(encode(&model, &approx, w)?, word);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
