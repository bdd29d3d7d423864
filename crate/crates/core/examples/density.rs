// Kernel density estimation: kernels, bandwidth rules, pdf and cdf.

use std::error::Error;

use edwsax::density::{select_bandwidth, BandwidthRule, DensityModel, Kernel};
use edwsax::synthetic::{corpus, Shape};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let values: Vec<f64> = corpus(Shape::Bimodal, 5, 400, 1)
        .iter()
        .flat_map(|s| s.to_vec())
        .collect();

    println!("{:<14} {:>10}", "rule", "h");
    for rule in [BandwidthRule::Silverman, BandwidthRule::Scott, BandwidthRule::Isj] {
        println!("{:<14} {:>10.4}", rule.to_string(), select_bandwidth(&values, rule)?);
    }

    let h = select_bandwidth(&values, BandwidthRule::Isj)?;
    println!("\n{:<13} {:>9} {:>9} {:>9}", "kernel", "f(-3)", "f(0)", "F(0)");
    for kernel in Kernel::ALL {
        let kde = DensityModel::new(values.clone(), kernel, h * kernel.gaussian_equivalent_factor())?;
        println!(
            "{:<13} {:>9.4} {:>9.4} {:>9.4}",
            kernel.name(),
            kde.pdf(-3.0),
            kde.pdf(0.0),
            kde.cdf(0.0)
        );
        assert!((0.0..=1.0).contains(&kde.cdf(0.0)));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
