// Gaussian breakpoints against breakpoints learned from skewed data.

use std::error::Error;

use edwsax::symbolizer::{gaussian_breakpoints, train, TrainConfig};
use edwsax::synthetic::{corpus, Shape};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let a = 6;
    let training = corpus(Shape::Skewed, 40, 256, 7);
    let model = train(&training, a, &TrainConfig::default())?;
    let gaussian = gaussian_breakpoints(a)?;

    println!("{:>3} {:>10} {:>10}", "i", "gaussian", "learned");
    for (i, (g, l)) in gaussian
        .interior()
        .iter()
        .zip(model.breakpoints().interior())
        .enumerate()
    {
        println!("{:>3} {:>10.4} {:>10.4}", i + 1, g, l);
    }
    println!("centroids: {:?}", model.centroids().values());

    // Learned breakpoints are strictly increasing and bracket every centroid.
    let b = model.breakpoints();
    for j in 0..a {
        let c = model.centroids().get(j);
        assert!(b.lower(j) < c && c < b.upper(j));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
