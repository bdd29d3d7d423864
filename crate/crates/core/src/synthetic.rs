//! Seeded synthetic corpora for examples, tests and offline benchmarks.
//!
//! Every generator draws from a `ChaCha8Rng` seeded by the caller, so a
//! given seed reproduces the same series on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::bench::Dataset;
use crate::timeseries::TimeSeries;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss(rng: &mut impl Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn wrap(values: Vec<f64>) -> TimeSeries {
    TimeSeries::new(values).expect("generators produce finite values")
}

/// I.i.d. standard normal draws.
pub fn white_noise(len: usize, rng: &mut impl Rng) -> TimeSeries {
    wrap((0..len).map(|_| gauss(rng)).collect())
}

/// Cumulative sum of standard normal steps.
pub fn random_walk(len: usize, rng: &mut impl Rng) -> TimeSeries {
    let mut level = 0.0;
    wrap(
        (0..len)
            .map(|_| {
                level += gauss(rng);
                level
            })
            .collect(),
    )
}

/// Exponentiated random walk: a right-skewed marginal.
pub fn skewed_walk(len: usize, rng: &mut impl Rng) -> TimeSeries {
    let walk = random_walk(len, rng);
    wrap(walk.iter().map(|v| (0.25 * v).exp()).collect())
}

/// Alternation between a low and a high level with AR(1) noise. The series
/// is cut into eight blocks, exactly half of them (chosen at random) high,
/// so every series has the same bimodal marginal before and after
/// z-normalization.
pub fn regime_switching(len: usize, rng: &mut impl Rng) -> TimeSeries {
    let blocks = 8.min(len.max(1));
    let mut high: Vec<bool> = (0..blocks).map(|b| b < blocks / 2).collect();
    high.shuffle(rng);
    let mut noise = 0.0;
    wrap(
        (0..len)
            .map(|i| {
                noise = 0.6 * noise + 0.4 * gauss(rng);
                let level = if high[i * blocks / len] { 3.0 } else { -3.0 };
                level + noise
            })
            .collect(),
    )
}

/// Marginal shape of a synthetic corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    WhiteNoise,
    RandomWalk,
    Skewed,
    Bimodal,
}

impl Shape {
    pub const ALL: [Shape; 4] = [Shape::WhiteNoise, Shape::RandomWalk, Shape::Skewed, Shape::Bimodal];

    pub fn name(self) -> &'static str {
        match self {
            Shape::WhiteNoise => "white-noise",
            Shape::RandomWalk => "random-walk",
            Shape::Skewed => "skewed",
            Shape::Bimodal => "bimodal",
        }
    }

    pub fn generate(self, len: usize, rng: &mut impl Rng) -> TimeSeries {
        match self {
            Shape::WhiteNoise => white_noise(len, rng),
            Shape::RandomWalk => random_walk(len, rng),
            Shape::Skewed => skewed_walk(len, rng),
            Shape::Bimodal => regime_switching(len, rng),
        }
    }
}

pub fn corpus(shape: Shape, count: usize, len: usize, seed: u64) -> Vec<TimeSeries> {
    let mut rng = rng(seed);
    (0..count).map(|_| shape.generate(len, &mut rng)).collect()
}

/// A train/test split of one shape, named after it.
pub fn dataset(shape: Shape, train: usize, test: usize, len: usize, seed: u64) -> Dataset {
    let mut rng = rng(seed);
    let train = (0..train).map(|_| shape.generate(len, &mut rng)).collect();
    let test = (0..test).map(|_| shape.generate(len, &mut rng)).collect();
    Dataset::from_series(shape.name(), train, test).expect("non-empty train split")
}
