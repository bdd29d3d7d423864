//! Symbolic time-series representation with data-driven breakpoints.
//!
//! Classic SAX assumes z-normalized data is standard normal and cuts the
//! value axis at Gaussian quantiles. This crate instead fits a kernel density
//! estimate to the training data and cuts at its equiprobable quantiles,
//! using the conditional medians of each bin as reconstruction centroids.
//!
//! ```
//! use edwsax::symbolizer::{encode, reconstruct, train, TrainConfig};
//! use edwsax::timeseries::{znormalize, TimeSeries};
//!
//! let series: Vec<TimeSeries> = (0..8)
//!     .map(|k| TimeSeries::new((0..64).map(|i| ((i + k) as f64 * 0.3).sin()).collect()).unwrap())
//!     .collect();
//! let model = train(&series, 5, &TrainConfig::default()).unwrap();
//! let z = znormalize(&series[0]).series;
//! let word = encode(&model, &z, 16).unwrap();
//! let approx = reconstruct(&model, &word, z.len()).unwrap();
//! assert_eq!(word.len(), 16);
//! assert_eq!(approx.len(), 64);
//! ```

pub mod bench;
pub mod cli;
pub mod density;
pub mod distance;
pub mod error;
pub mod numeric;
pub mod symbolizer;
pub mod synthetic;
pub mod timeseries;

pub use error::{Error, Result};
