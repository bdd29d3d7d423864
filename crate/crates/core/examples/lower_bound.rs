// MINDIST between two words never exceeds the Euclidean distance between
// the series they came from.

use std::error::Error;

use edwsax::distance::{euclidean, mindist, tlb};
use edwsax::symbolizer::{encode, train, TrainConfig};
use edwsax::synthetic::{corpus, Shape};
use edwsax::timeseries::znormalize;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let training = corpus(Shape::RandomWalk, 20, 128, 5);
    let pair: Vec<_> = corpus(Shape::RandomWalk, 2, 128, 6)
        .iter()
        .map(|s| znormalize(s).series)
        .collect();
    let (q, c) = (&pair[0], &pair[1]);
    let ed = euclidean(q, c)?;
    println!("euclidean {ed:.4}");
    println!("{:>4} {:>9} {:>7}", "a", "mindist", "tlb");
    for a in [4, 8, 16, 32, 64] {
        let model = train(&training, a, &TrainConfig::default())?;
        let d = mindist(
            &encode(&model, q, 64)?,
            &encode(&model, c, 64)?,
            model.lookup(),
            q.len(),
        )?;
        let t = tlb(q, c, &model, 64)?.expect("distinct series");
        println!("{a:>4} {d:>9.4} {t:>7.4}");
        assert!(d <= ed + 1e-9);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
