//! Dirichlet process mixture models.

pub mod cli;
pub mod data;
pub mod dp;
pub mod error;
pub mod hdp;
pub mod kernels;
pub mod measure;
pub mod rng;
pub mod stats;

pub use data::{Observations, ParamBlock, Theta};
pub use error::{Error, ErrorClass, Result};
pub use kernels::{Conjugacy, Kernel, KernelRegistry, MixingDistribution, Model};
pub use rng::RandomSource;
