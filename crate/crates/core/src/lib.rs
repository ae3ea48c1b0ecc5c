//! Long-memory time series generated by circular convolution of a
//! symmetric circulant operator with Gaussian noise.
//!
//! The operator's first row is the (normalized) modulus of the inverse
//! unitary DFT of a `|f|^(-beta/2)` density, so its eigenvalues are known in
//! closed form. [`SpectralModel::eigen_report`] turns them into estimates of
//! intrinsic dimension, symmetric-beta shape, variance and condition number;
//! [`montecarlo::Study`] measures the same quantities from sampled series.

pub mod cli;
pub mod dft;
pub mod error;
pub mod estimators;
pub mod montecarlo;
pub mod output;
pub mod sampler;
pub mod spectral;

pub use error::{Error, Result};
pub use estimators::{Histogram, SampleStats};
pub use montecarlo::{MonteCarloReport, Study, Summary};
pub use sampler::{RngStream, SeriesSample};
pub use spectral::{EigenReport, FrequencyGrid, RealMatrix, SpectralModel};
