//! Replicated studies. Replicate `i` always draws from stream `(seed, i)`
//! and results are reduced in index order, so reports do not depend on the
//! worker count.

use rayon::prelude::*;
use serde::Serialize;

use crate::dft::Path;
use crate::error::{Error, Result};
use crate::estimators::{self, Histogram, SampleStats};
use crate::sampler::{self, RngStream, SeriesSample};
use crate::spectral::{EigenReport, SpectralModel};

pub const DEFAULT_SEED: u64 = 5;
pub const DEFAULT_REPLICATES: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation over the mean.
    pub cv: f64,
}

impl Summary {
    /// Requires at least two values.
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Self {
            mean,
            cv: var.sqrt() / mean,
        }
    }

    /// Standard error of the mean over `count` replicates.
    pub fn standard_error(&self, count: usize) -> f64 {
        (self.cv * self.mean).abs() / (count as f64).sqrt()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloReport {
    pub beta: f64,
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
    pub eigen: EigenReport,
    pub d: Summary,
    pub alpha: Summary,
    /// Mean of per-replicate variances, not the variance of pooled values.
    pub variance: Summary,
    pub per_replicate: Vec<SampleStats>,
}

/// Parameters of a replicated run.
#[derive(Debug, Clone)]
pub struct Study {
    pub beta: f64,
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
    pub workers: usize,
    pub path: Path,
}

impl Study {
    pub fn new(beta: f64, n: usize) -> Self {
        Self {
            beta,
            n,
            replicates: DEFAULT_REPLICATES,
            seed: DEFAULT_SEED,
            workers: 1,
            path: Path::Fast,
        }
    }

    pub fn replicates(mut self, replicates: usize) -> Self {
        self.replicates = replicates;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn path(mut self, path: Path) -> Self {
        self.path = path;
        self
    }

    pub fn model(&self) -> Result<SpectralModel> {
        SpectralModel::with_path(self.beta, self.n, self.path)
    }

    /// Runs `f` on every replicate's sample, in parallel, and returns the
    /// results in replicate order. The first failing index aborts the run.
    fn map_replicates<T, F>(&self, model: &SpectralModel, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(SeriesSample) -> Result<T> + Sync,
    {
        if self.workers == 0 {
            return Err(Error::InvalidArgument(
                "worker count must be positive".into(),
            ));
        }
        let run_one = |i: usize| -> Result<T> {
            let mut rng = RngStream::new(self.seed, i as u64);
            sampler::generate_with(model, &mut rng, self.path).and_then(&f)
        };
        let results: Vec<Result<T>> = if self.workers == 1 {
            (0..self.replicates).map(run_one).collect()
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.workers)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
            pool.install(|| (0..self.replicates).into_par_iter().map(run_one).collect())
        };
        results
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.map_err(|e| Error::Replicate {
                    index: i as u64,
                    source: Box::new(e),
                })
            })
            .collect()
    }

    /// Measures d, alpha and variance per replicate and summarizes them next
    /// to the eigenvalue predictions.
    pub fn run(&self) -> Result<MonteCarloReport> {
        if self.replicates < 2 {
            return Err(Error::InvalidArgument(format!(
                "a study needs at least 2 replicates, got {}",
                self.replicates
            )));
        }
        let model = self.model()?;
        let per_replicate = self.map_replicates(&model, |s| estimators::sample_stats(&s.series))?;

        let column =
            |f: fn(&SampleStats) -> f64| -> Vec<f64> { per_replicate.iter().map(f).collect() };
        Ok(MonteCarloReport {
            beta: self.beta,
            n: self.n,
            replicates: self.replicates,
            seed: self.seed,
            eigen: model.eigen_report(),
            d: Summary::of(&column(|s| s.d_meas)),
            alpha: Summary::of(&column(|s| s.alpha_meas)),
            variance: Summary::of(&column(|s| s.variance)),
            per_replicate,
        })
    }

    /// Pools the standardized vectors of every replicate into one histogram.
    pub fn histogram(&self, bin_count: usize) -> Result<Histogram> {
        if self.replicates == 0 {
            return Err(Error::InvalidArgument("no replicates requested".into()));
        }
        let model = self.model()?;
        let mut hist = Histogram::new(bin_count)?;
        let parts = self.map_replicates(&model, |s| {
            let mut h = Histogram::new(bin_count)?;
            h.add(&s.standardized);
            Ok(h)
        })?;
        for part in &parts {
            hist.merge(part)?;
        }
        Ok(hist)
    }
}

/// `Study::new(beta, n)` with the given replicate count and seed, run on one worker.
pub fn run_study(beta: f64, n: usize, replicates: usize, seed: u64) -> Result<MonteCarloReport> {
    Study::new(beta, n).replicates(replicates).seed(seed).run()
}
