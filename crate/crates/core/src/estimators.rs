//! Sample-based statistics: the variance/range² ratio and its inversion to
//! the symmetric-beta shape parameter, plus the pooled histogram.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampler::min_max;

pub const DEFAULT_BINS: usize = 100;

/// Minimum pooled sample count for [`fit_alpha_from_histogram`].
pub const MIN_FIT_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleStats {
    /// Unbiased (`len - 1` denominator) sample variance.
    pub variance: f64,
    pub range: f64,
    /// `variance / range^2`, at most 1/4 for any bounded sample.
    pub ratio: f64,
    pub alpha_meas: f64,
    pub d_meas: f64,
}

/// Symmetric-beta shape parameter for a variance/range² ratio: inverts
/// `ratio = 1 / (8 alpha + 4)`.
pub fn alpha_from_ratio(ratio: f64) -> f64 {
    1.0 / (8.0 * ratio) - 0.5
}

/// Intrinsic dimension for a shape parameter, `d = 2 alpha + 1`.
pub fn dimension_from_alpha(alpha: f64) -> f64 {
    2.0 * alpha + 1.0
}

pub fn sample_variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

pub fn sample_stats(series: &[f64]) -> Result<SampleStats> {
    if series.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 values, got {}",
            series.len()
        )));
    }
    let (min, max) = min_max(series).expect("non-empty");
    let range = max - min;
    if range.is_nan() || range <= 0.0 {
        return Err(Error::DegenerateSample("series is constant".into()));
    }
    let variance = sample_variance(series);
    let ratio = variance / (range * range);
    let alpha_meas = alpha_from_ratio(ratio);
    Ok(SampleStats {
        variance,
        range,
        ratio,
        alpha_meas,
        d_meas: dimension_from_alpha(alpha_meas),
    })
}

/// Area-normalized histogram on uniform bins over `[0, 1]`.
///
/// Bins are right-closed, `(left, right]`. Counts are kept so histograms
/// with identical edges merge by addition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    edges: Vec<f64>,
    counts: Vec<u64>,
    sample_count: u64,
}

impl Histogram {
    pub fn new(bin_count: usize) -> Result<Self> {
        if bin_count < 2 {
            return Err(Error::InvalidArgument(format!(
                "histogram needs at least 2 bins, got {bin_count}"
            )));
        }
        let edges = (0..=bin_count)
            .map(|i| i as f64 / bin_count as f64)
            .collect();
        Ok(Self {
            edges,
            counts: vec![0; bin_count],
            sample_count: 0,
        })
    }

    /// Adds one standardized vector. Values exactly equal to 0 or 1 are
    /// construction artifacts of standardization and are dropped, as are
    /// values outside `[0, 1]`.
    pub fn add(&mut self, values: &[f64]) {
        let bins = self.counts.len();
        for &x in values {
            if !(x > 0.0 && x < 1.0) {
                continue;
            }
            // first bin whose right edge is >= x
            let idx = self.edges[1..].partition_point(|&e| e < x).min(bins - 1);
            self.counts[idx] += 1;
            self.sample_count += 1;
        }
    }

    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if self.edges != other.edges {
            return Err(Error::InvalidArgument(
                "cannot merge histograms with different edges".into(),
            ));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.sample_count += other.sample_count;
        Ok(())
    }

    pub fn bin_count(&self) -> usize {
        self.counts.len()
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn sample_count(&self) -> u64 {
        self.sample_count
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Densities integrating to one; all zeros for an empty histogram.
    pub fn densities(&self) -> Vec<f64> {
        let total = self.sample_count as f64;
        self.counts
            .iter()
            .zip(self.edges.windows(2))
            .map(|(&c, w)| {
                if total > 0.0 {
                    c as f64 / (total * (w[1] - w[0]))
                } else {
                    0.0
                }
            })
            .collect()
    }

    pub fn area(&self) -> f64 {
        self.densities()
            .iter()
            .zip(self.edges.windows(2))
            .map(|(d, w)| d * (w[1] - w[0]))
            .sum()
    }
}

/// Pools standardized vectors into one histogram.
pub fn accumulate_histogram<V: AsRef<[f64]>>(samples: &[V], bin_count: usize) -> Result<Histogram> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples to histogram".into()));
    }
    let mut hist = Histogram::new(bin_count)?;
    for s in samples {
        hist.add(s.as_ref());
    }
    Ok(hist)
}

/// Moment fit of the symmetric-beta shape parameter: uses the histogram's
/// variance about 1/2, evaluated at bin centres.
pub fn fit_alpha_from_histogram(hist: &Histogram) -> Result<f64> {
    if hist.sample_count < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "histogram holds {} samples, need at least {MIN_FIT_SAMPLES}",
            hist.sample_count
        )));
    }
    let total = hist.sample_count as f64;
    let variance: f64 = hist
        .centers()
        .iter()
        .zip(&hist.counts)
        .map(|(c, &k)| k as f64 / total * (c - 0.5).powi(2))
        .sum();
    // a distribution on [0, 1] has variance in [0, 1/4]
    let variance = variance.clamp(0.0, 0.25);
    if variance == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(alpha_from_ratio(variance))
}
