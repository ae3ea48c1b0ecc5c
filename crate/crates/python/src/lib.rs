//! Python bindings for `longmem-core`.

use longmem::dft::{self, Direction, Path};
use longmem::{estimators, sampler, Error, RngStream, SpectralModel as CoreModel, Study};
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(err: Error) -> PyErr {
    match err {
        Error::InvalidArgument(_)
        | Error::UnsupportedLength(_)
        | Error::DegenerateSample(_)
        | Error::InsufficientData(_)
        | Error::ResourceLimit(_) => PyValueError::new_err(err.to_string()),
        _ => PyRuntimeError::new_err(err.to_string()),
    }
}

fn path(dense: bool) -> Path {
    if dense {
        Path::Dense
    } else {
        Path::Fast
    }
}

#[pyclass(name = "EigenReport", frozen, get_all)]
struct PyEigenReport {
    d_raw: f64,
    e: f64,
    d_est: f64,
    alpha_est: f64,
    var_est: f64,
    kappa: f64,
    slope_fit: f64,
}

#[pymethods]
impl PyEigenReport {
    fn __repr__(&self) -> String {
        format!(
            "EigenReport(d_raw={}, d_est={}, alpha_est={}, var_est={:e}, kappa={:e}, slope_fit={})",
            self.d_raw, self.d_est, self.alpha_est, self.var_est, self.kappa, self.slope_fit
        )
    }
}

#[pyclass(name = "SpectralModel", frozen)]
struct PySpectralModel {
    inner: CoreModel,
}

#[pymethods]
impl PySpectralModel {
    #[new]
    #[pyo3(signature = (beta, n, dense=false))]
    fn new(beta: f64, n: usize, dense: bool) -> PyResult<Self> {
        let inner = CoreModel::with_path(beta, n, path(dense)).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.grid().n()
    }

    #[getter]
    fn rn(&self) -> usize {
        self.inner.rn()
    }

    #[getter]
    fn frequencies(&self) -> Vec<f64> {
        self.inner.grid().frequencies().to_vec()
    }

    #[getter]
    fn density(&self) -> Vec<f64> {
        self.inner.density().to_vec()
    }

    #[getter]
    fn first_row(&self) -> Vec<f64> {
        self.inner.first_row().to_vec()
    }

    #[getter]
    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues().to_vec()
    }

    fn eigen_report(&self) -> PyEigenReport {
        let r = self.inner.eigen_report();
        PyEigenReport {
            d_raw: r.d_raw,
            e: r.e,
            d_est: r.d_est,
            alpha_est: r.alpha_est,
            var_est: r.var_est,
            kappa: r.kappa,
            slope_fit: r.slope_fit,
        }
    }

    fn dense_operator(&self) -> PyResult<Vec<Vec<f64>>> {
        let m = self.inner.dense_operator().map_err(to_py)?;
        Ok((0..m.order()).map(|i| m.row(i).to_vec()).collect())
    }

    /// One realization drawn from stream `(seed, stream_index)`.
    #[pyo3(signature = (seed=5, stream_index=0))]
    fn generate<'py>(
        &self,
        py: Python<'py>,
        seed: u64,
        stream_index: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let mut rng = RngStream::new(seed, stream_index);
        let s = sampler::generate(&self.inner, &mut rng).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("epsilon", s.epsilon)?;
        d.set_item("series", s.series)?;
        d.set_item("cosvec", s.cosvec)?;
        d.set_item("standardized", s.standardized)?;
        d.set_item("seed", s.seed)?;
        d.set_item("stream_index", s.stream_index)?;
        d.set_item("generator", sampler::GENERATOR_NAME)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "SpectralModel(beta={}, n={}, rn={})",
            self.inner.beta(),
            self.inner.grid().n(),
            self.inner.rn()
        )
    }
}

#[pyfunction]
fn build_grid(n: usize) -> PyResult<Vec<f64>> {
    Ok(longmem::FrequencyGrid::new(n)
        .map_err(to_py)?
        .frequencies()
        .to_vec())
}

#[pyfunction]
#[pyo3(signature = (x, inverse=false, dense=false))]
fn unitary_dft(x: Vec<Complex64>, inverse: bool, dense: bool) -> PyResult<Vec<Complex64>> {
    let direction = if inverse {
        Direction::Inverse
    } else {
        Direction::Forward
    };
    dft::unitary_dft_with(&x, direction, path(dense)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (row, v, dense=false))]
fn circular_convolve(row: Vec<f64>, v: Vec<f64>, dense: bool) -> PyResult<Vec<f64>> {
    dft::circular_convolve_with(&row, &v, path(dense)).map_err(to_py)
}

#[pyfunction]
fn standardize(values: Vec<f64>) -> PyResult<Vec<f64>> {
    sampler::standardize(&values).map_err(to_py)
}

#[pyfunction]
fn sample_stats<'py>(py: Python<'py>, series: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    let s = estimators::sample_stats(&series).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("variance", s.variance)?;
    d.set_item("range", s.range)?;
    d.set_item("ratio", s.ratio)?;
    d.set_item("alpha_meas", s.alpha_meas)?;
    d.set_item("d_meas", s.d_meas)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (beta, n, replicates=200, bins=100, seed=5, workers=1))]
fn histogram<'py>(
    py: Python<'py>,
    beta: f64,
    n: usize,
    replicates: usize,
    bins: usize,
    seed: u64,
    workers: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let study = Study::new(beta, n)
        .replicates(replicates)
        .seed(seed)
        .workers(workers);
    let h = py.detach(|| study.histogram(bins)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("edges", h.edges().to_vec())?;
    d.set_item("densities", h.densities())?;
    d.set_item("sample_count", h.sample_count())?;
    d.set_item("fit_alpha", estimators::fit_alpha_from_histogram(&h).ok())?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (beta, n, replicates=500, seed=5, workers=1))]
fn run_study<'py>(
    py: Python<'py>,
    beta: f64,
    n: usize,
    replicates: usize,
    seed: u64,
    workers: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let study = Study::new(beta, n)
        .replicates(replicates)
        .seed(seed)
        .workers(workers);
    let r = py.detach(|| study.run()).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("beta", r.beta)?;
    d.set_item("n", r.n)?;
    d.set_item("replicates", r.replicates)?;
    d.set_item("seed", r.seed)?;
    d.set_item("d_est", r.eigen.d_est)?;
    d.set_item("alpha_est", r.eigen.alpha_est)?;
    d.set_item("var_est", r.eigen.var_est)?;
    d.set_item("kappa", r.eigen.kappa)?;
    for (name, s) in [("d", r.d), ("alpha", r.alpha), ("variance", r.variance)] {
        d.set_item(format!("mean_{name}"), s.mean)?;
        d.set_item(format!("cv_{name}"), s.cv)?;
    }
    Ok(d)
}

#[pymodule(name = "longmem")]
fn longmem_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GENERATOR", sampler::GENERATOR_NAME)?;
    m.add_class::<PySpectralModel>()?;
    m.add_class::<PyEigenReport>()?;
    m.add_function(wrap_pyfunction!(build_grid, m)?)?;
    m.add_function(wrap_pyfunction!(unitary_dft, m)?)?;
    m.add_function(wrap_pyfunction!(circular_convolve, m)?)?;
    m.add_function(wrap_pyfunction!(standardize, m)?)?;
    m.add_function(wrap_pyfunction!(sample_stats, m)?)?;
    m.add_function(wrap_pyfunction!(histogram, m)?)?;
    m.add_function(wrap_pyfunction!(run_study, m)?)?;
    Ok(())
}
