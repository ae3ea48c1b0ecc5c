//! The deterministic half of the model: frequency grid, power-law density,
//! circulant first row and the analytic eigenvalue spectrum.

use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::dft::{self, Direction, Path};
use crate::error::{Error, Result};

pub const MIN_BETA: f64 = 0.0;
pub const MAX_BETA: f64 = 10.0;

/// Empirical calibration constant of the two-step dimension estimate.
pub const DIMENSION_CALIBRATION: f64 = 4.2;

/// Largest operator dimension [`SpectralModel::dense_operator`] will allocate.
pub const DENSE_OPERATOR_LIMIT: usize = 4096;

/// Nyquist-range frequency grid `-1/2, ..., -1/n, 1/(2n), 1/n, ..., 1/2`.
///
/// The grid never contains zero frequency; the centre point is shifted to
/// `1/(2n)`. Its length `rn` is always odd: `n` for odd `n`, `n + 1` for even.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyGrid {
    n: usize,
    frequencies: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid parameter n must be at least 2, got {n}"
            )));
        }
        let step = 1.0 / n as f64;
        // negative half: -1/2 + k/n for every k with -1/2 + k/n <= -1/n
        let count = (n - 2) / 2 + 1;
        let negative: Vec<f64> = (0..count).map(|k| -0.5 + k as f64 * step).collect();
        let centre = 1.0 / (2.0 * n as f64);

        let mut frequencies = Vec::with_capacity(2 * count + 1);
        frequencies.extend_from_slice(&negative);
        frequencies.push(centre);
        frequencies.extend(negative.iter().rev().map(|f| -f));
        Ok(Self { n, frequencies })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Measured length of the grid, always odd.
    pub fn rn(&self) -> usize {
        self.frequencies.len()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }
}

/// Power-law spectral model with slope `beta` on a [`FrequencyGrid`].
///
/// Immutable once built. The eigenvalues are sorted in descending order.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralModel {
    beta: f64,
    grid: FrequencyGrid,
    density: Vec<f64>,
    first_row: Vec<f64>,
    eigenvalues: Vec<f64>,
}

impl SpectralModel {
    pub fn new(beta: f64, n: usize) -> Result<Self> {
        Self::with_path(beta, n, Path::Fast)
    }

    pub fn with_path(beta: f64, n: usize, path: Path) -> Result<Self> {
        if !(MIN_BETA..=MAX_BETA).contains(&beta) {
            return Err(Error::InvalidArgument(format!(
                "beta must lie in [{MIN_BETA}, {MAX_BETA}], got {beta}"
            )));
        }
        let grid = FrequencyGrid::new(n)?;
        let rn = grid.rn();
        let scale = (rn as f64).sqrt();

        let density: Vec<f64> = grid
            .frequencies()
            .iter()
            .map(|f| f.abs().powf(-beta / 2.0))
            .collect();
        if density.iter().any(|d| !d.is_finite()) {
            return Err(Error::ModelConstruction(format!(
                "density overflows for beta = {beta}, n = {n}"
            )));
        }

        let spectrum: Vec<Complex64> = density.iter().map(|&d| Complex64::new(d, 0.0)).collect();
        let first_row: Vec<f64> = dft::unitary_dft_with(&spectrum, Direction::Inverse, path)?
            .iter()
            .map(|z| z.norm() / scale)
            .collect();

        let row: Vec<Complex64> = first_row.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        let coefficients = dft::unitary_dft_with(&row, Direction::Forward, path)?;
        let mut eigenvalues = Vec::with_capacity(rn);
        let mut largest = 0.0_f64;
        let mut residue = 0.0_f64;
        for z in &coefficients {
            let lambda = z * scale;
            largest = largest.max(lambda.re);
            residue = residue.max(lambda.im.abs());
            eigenvalues.push(lambda.re);
        }
        if residue > 1e-8 * largest {
            return Err(Error::ModelConstruction(format!(
                "eigenvalues have imaginary residue {residue:e} against largest {largest:e}"
            )));
        }
        if let Some(bad) = eigenvalues.iter().find(|&&l| l <= 0.0 || !l.is_finite()) {
            return Err(Error::ModelConstruction(format!(
                "operator is not positive definite: eigenvalue {bad:e} (beta = {beta}, n = {n})"
            )));
        }
        eigenvalues.sort_by(|a, b| b.total_cmp(a));

        Ok(Self {
            beta,
            grid,
            density,
            first_row,
            eigenvalues,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn rn(&self) -> usize {
        self.grid.rn()
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// First row of the normalized circulant operator.
    pub fn first_row(&self) -> &[f64] {
        &self.first_row
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Euclidean norm of one operator row (all rows share it).
    pub fn row_norm(&self) -> f64 {
        self.first_row.iter().map(|r| r * r).sum::<f64>().sqrt()
    }

    pub fn eigen_report(&self) -> EigenReport {
        EigenReport::from_eigenvalues(&self.eigenvalues)
    }

    /// Full `rn x rn` operator, for oracle checks and debugging.
    pub fn dense_operator(&self) -> Result<RealMatrix> {
        if self.rn() > DENSE_OPERATOR_LIMIT {
            return Err(Error::ResourceLimit(format!(
                "dense operator of order {} exceeds the limit of {DENSE_OPERATOR_LIMIT}",
                self.rn()
            )));
        }
        RealMatrix::circulant(&self.first_row)
    }
}

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    order: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    /// Circulant whose first row is `row` and whose every later row is the
    /// row above shifted one place to the right. Odd orders only.
    pub fn circulant(row: &[f64]) -> Result<Self> {
        let n = row.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty circulant row".into()));
        }
        if n.is_multiple_of(2) {
            return Err(Error::UnsupportedLength(n));
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            data.extend((0..n).map(|j| row[(j + n - i) % n]));
        }
        Ok(Self { order: n, data })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.order + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.order).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.order)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Statistics read directly off the operator's eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenReport {
    /// Trace over spectral norm.
    pub d_raw: f64,
    /// First step of the calibrated estimate.
    pub e: f64,
    pub d_est: f64,
    pub alpha_est: f64,
    /// Variance predicted from the non-leading eigenvalues.
    pub var_est: f64,
    /// Condition number, largest over smallest eigenvalue.
    pub kappa: f64,
    /// Least-squares slope of `ln(lambda)` against `ln(rank)`.
    pub slope_fit: f64,
}

impl EigenReport {
    /// `eigenvalues` must be positive and sorted in descending order.
    pub fn from_eigenvalues(eigenvalues: &[f64]) -> Self {
        let rn = eigenvalues.len();
        let largest = eigenvalues[0];
        let smallest = eigenvalues[rn - 1];
        let trace: f64 = eigenvalues.iter().sum();

        let d_raw = trace / largest;
        let e = trace / (std::f64::consts::SQRT_2 * largest) + 1.0;
        let d_est = e - (e - 3.0) / DIMENSION_CALIBRATION;
        let alpha_est = (d_est - 1.0) / 2.0;
        let var_est = if rn > 1 {
            eigenvalues[1..].iter().map(|l| l * l).sum::<f64>() / (rn - 1) as f64
        } else {
            0.0
        };

        Self {
            d_raw,
            e,
            d_est,
            alpha_est,
            var_est,
            kappa: largest / smallest,
            slope_fit: log_log_slope(eigenvalues),
        }
    }
}

/// Slope over ranks `2..=ceil(rn/2)`: skips the near-zero-frequency spike
/// and the mirrored half of the spectrum.
fn log_log_slope(eigenvalues: &[f64]) -> f64 {
    let upper = eigenvalues.len().div_ceil(2);
    if upper < 3 {
        return 0.0;
    }
    let points: Vec<(f64, f64)> = (2..=upper)
        .map(|rank| ((rank as f64).ln(), eigenvalues[rank - 1].ln()))
        .collect();
    let m = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = points
        .iter()
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    sxy / sxx
}
