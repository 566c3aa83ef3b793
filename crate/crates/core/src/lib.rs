//! Resampling statistics: the delete-1 and delete-d jackknife, the Monte
//! Carlo and exact bootstrap, permutation tests for correlation, Fisher and
//! EASE over-representation scores, and a uniform-maximum simulation.
//!
//! Engines are generic over [`Observations`] (what can be resampled) and
//! [`Estimator`] (what is computed), so the same code serves univariate and
//! paired data. With the default `parallel` feature the inner loops run on
//! rayon; results are identical with the feature disabled.

pub mod bootstrap;
pub mod combinatorics;
pub mod csv_io;
pub mod enrichment;
mod error;
pub mod exec;
pub mod jackknife;
pub mod numeric;
pub mod permutation;
pub mod rng;
pub mod sample;
pub mod simulation;
pub mod statistic;

pub use error::{Error, Result};
pub use rng::{SeededStream, DEFAULT_SEED};
pub use sample::{Dataset, Observations, PairedSample, Sample};
pub use statistic::{Arity, Estimator, Statistic};
