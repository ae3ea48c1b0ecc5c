//! Stochastic realizations of the model.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::dft::{self, Path};
use crate::error::{Error, Result};
use crate::spectral::SpectralModel;

/// Name of the normal generator, echoed in output metadata.
pub const GENERATOR_NAME: &str = "chacha8-ziggurat";

/// Seeded normal stream for one replicate.
///
/// `(seed, stream_index)` fully determines the draw sequence. Distinct
/// indices select distinct ChaCha streams under the same key.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_index);
        Self {
            seed,
            stream_index,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}

/// `rn` independent standard-normal draws.
pub fn draw_epsilon(rng: &mut RngStream, rn: usize) -> Result<Vec<f64>> {
    if rn < 3 || rn.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "noise length must be odd and at least 3, got {rn}"
        )));
    }
    Ok((0..rn).map(|_| rng.standard_normal()).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesSample {
    pub epsilon: Vec<f64>,
    pub series: Vec<f64>,
    /// Series divided by the product of the row norm and the noise norm.
    pub cosvec: Vec<f64>,
    /// `cosvec` mapped affinely onto `[0, 1]`.
    pub standardized: Vec<f64>,
    pub seed: u64,
    pub stream_index: u64,
}

pub fn generate(model: &SpectralModel, rng: &mut RngStream) -> Result<SeriesSample> {
    generate_with(model, rng, Path::Fast)
}

pub fn generate_with(
    model: &SpectralModel,
    rng: &mut RngStream,
    path: Path,
) -> Result<SeriesSample> {
    let epsilon = draw_epsilon(rng, model.rn())?;
    let mut sample = sample_from_noise(model, epsilon, path)?;
    sample.seed = rng.seed();
    sample.stream_index = rng.stream_index();
    Ok(sample)
}

/// Builds a sample from caller-supplied noise. `seed` and `stream_index`
/// are left at zero.
pub fn sample_from_noise(
    model: &SpectralModel,
    epsilon: Vec<f64>,
    path: Path,
) -> Result<SeriesSample> {
    let series = dft::circular_convolve_with(model.first_row(), &epsilon, path)?;
    let noise_norm = epsilon.iter().map(|e| e * e).sum::<f64>().sqrt();
    let denom = model.row_norm() * noise_norm;
    if denom == 0.0 {
        return Err(Error::DegenerateSample(
            "noise vector is identically zero".into(),
        ));
    }
    let cosvec: Vec<f64> = series.iter().map(|x| x / denom).collect();
    let standardized = standardize(&cosvec)?;
    Ok(SeriesSample {
        epsilon,
        series,
        cosvec,
        standardized,
        seed: 0,
        stream_index: 0,
    })
}

/// Location-scale map onto `[0, 1]`; the minimum lands on exactly 0 and the
/// maximum on exactly 1.
pub fn standardize(values: &[f64]) -> Result<Vec<f64>> {
    let (min, max) = min_max(values)
        .ok_or_else(|| Error::DegenerateSample("cannot standardize an empty vector".into()))?;
    let range = max - min;
    if range.is_nan() || range <= 0.0 {
        return Err(Error::DegenerateSample(format!(
            "vector has zero range (all values {min})"
        )));
    }
    Ok(values.iter().map(|x| (x - min) / range).collect())
}

pub(crate) fn min_max(values: &[f64]) -> Option<(f64, f64)> {
    let first = *values.first()?;
    Some(
        values
            .iter()
            .fold((first, first), |(lo, hi), &x| (lo.min(x), hi.max(x))),
    )
}
