//! Unitary discrete Fourier transforms and circular convolution.
//!
//! Both directions are scaled by `len^(-1/2)`, so the transform is an
//! isometry and `inverse(forward(x)) == x`. Every operation has a fast
//! `O(n log n)` route backed by `rustfft` and a dense `O(n^2)` route by
//! direct summation; the dense route is kept as an independent oracle and
//! can be selected at runtime with [`Path::Dense`].

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Which algorithm evaluates a transform or convolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Path {
    #[default]
    Fast,
    Dense,
}

/// Largest imaginary residue a real convolution may leave, relative to the
/// magnitude of its output.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-9;

fn check_input(x: &[Complex64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::InvalidArgument("transform input is empty".into()));
    }
    if let Some(i) = x
        .iter()
        .position(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::InvalidArgument(format!(
            "transform input has a non-finite component at index {i}"
        )));
    }
    Ok(())
}

/// Unitary DFT using the default fast path.
pub fn unitary_dft(x: &[Complex64], direction: Direction) -> Result<Vec<Complex64>> {
    unitary_dft_with(x, direction, Path::Fast)
}

pub fn unitary_dft_with(
    x: &[Complex64],
    direction: Direction,
    path: Path,
) -> Result<Vec<Complex64>> {
    check_input(x)?;
    Ok(match path {
        Path::Fast => fast_dft(x, direction),
        Path::Dense => dense_dft(x, direction),
    })
}

fn fast_dft(x: &[Complex64], direction: Direction) -> Vec<Complex64> {
    let n = x.len();
    let mut planner = FftPlanner::<f64>::new();
    let fft = match direction {
        Direction::Forward => planner.plan_fft_forward(n),
        Direction::Inverse => planner.plan_fft_inverse(n),
    };
    let mut buf = x.to_vec();
    fft.process(&mut buf);
    let scale = (n as f64).sqrt().recip();
    buf.iter_mut().for_each(|z| *z *= scale);
    buf
}

fn dense_dft(x: &[Complex64], direction: Direction) -> Vec<Complex64> {
    let n = x.len();
    let sign = match direction {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    let scale = (n as f64).sqrt().recip();
    (0..n)
        .map(|k| {
            let acc: Complex64 = x
                .iter()
                .enumerate()
                .map(|(j, &xj)| {
                    // reduce the index product first so the angle stays small
                    let m = (j * k) % n;
                    xj * Complex64::from_polar(1.0, sign * 2.0 * PI * m as f64 / n as f64)
                })
                .sum();
            acc * scale
        })
        .collect()
}

fn check_operator_lengths(row: &[f64], v: &[f64]) -> Result<()> {
    if row.len() != v.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: row has {} elements, vector has {}",
            row.len(),
            v.len()
        )));
    }
    if row.is_empty() {
        return Err(Error::InvalidArgument("empty operator row".into()));
    }
    if row.len().is_multiple_of(2) {
        return Err(Error::UnsupportedLength(row.len()));
    }
    if row.iter().chain(v).any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(
            "convolution input has a non-finite component".into(),
        ));
    }
    Ok(())
}

/// Circular convolution `w_i = sum_j row[(i - j) mod n] * v[j]` on the fast path.
pub fn circular_convolve(row: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    circular_convolve_with(row, v, Path::Fast)
}

pub fn circular_convolve_with(row: &[f64], v: &[f64], path: Path) -> Result<Vec<f64>> {
    check_operator_lengths(row, v)?;
    match path {
        Path::Fast => fast_convolve(row, v),
        Path::Dense => Ok(dense_convolve(row, v)),
    }
}

fn to_complex(x: &[f64]) -> Vec<Complex64> {
    x.iter().map(|&re| Complex64::new(re, 0.0)).collect()
}

fn fast_convolve(row: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    let n = row.len();
    let row_hat = fast_dft(&to_complex(row), Direction::Forward);
    let v_hat = fast_dft(&to_complex(v), Direction::Forward);
    // unitary scaling on both transforms leaves one factor of sqrt(n) to restore
    let scale = (n as f64).sqrt();
    let product: Vec<Complex64> = row_hat
        .iter()
        .zip(&v_hat)
        .map(|(a, b)| a * b * scale)
        .collect();
    let w = fast_dft(&product, Direction::Inverse);

    let magnitude = w.iter().map(|z| z.re.abs()).fold(1.0_f64, f64::max);
    let residue = w.iter().map(|z| z.im.abs()).fold(0.0_f64, f64::max);
    if residue > IMAGINARY_RESIDUE_TOL * magnitude {
        return Err(Error::InternalConsistency(format!(
            "real convolution left imaginary residue {residue:e} (output magnitude {magnitude:e})"
        )));
    }
    Ok(w.into_iter().map(|z| z.re).collect())
}

fn dense_convolve(row: &[f64], v: &[f64]) -> Vec<f64> {
    let n = row.len();
    (0..n)
        .map(|i| {
            v.iter()
                .enumerate()
                .map(|(j, &vj)| row[(i + n - j) % n] * vj)
                .sum()
        })
        .collect()
}
