//! Training (breakpoints and centroids from a density), symbolization and
//! reconstruction.

mod breakpoints;
mod io;
mod model;

pub use breakpoints::{
    compute_breakpoints, compute_centroids, gaussian_breakpoints, gaussian_centroids, Breakpoints, Centroids,
    CDF_TOLERANCE, MAX_ALPHABET, MIN_ALPHABET,
};
pub use io::{deserialize_model, serialize_model, FORMAT_VERSION, MAGIC};
pub use model::{
    encode, fit_density, reconstruct, symbolize, train, DensitySummary, EstimateOn, Provenance, SymbolWord,
    SymbolizerModel, TrainConfig,
};
