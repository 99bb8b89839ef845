use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use moea_lab::algorithms::{self, Algorithm, ArchiveRun, RunConfig, RunRecord};
use moea_lab::bitcore::{self, BitString, RandomSource};
use moea_lab::control::{ControllerMode, DEFAULT_UPDATE_STRENGTH};
use moea_lab::harness::{
    self, experiment::LambdaSchedule, sweep::build_template, BoundReport, LogBase,
};
use moea_lab::objectives::{self, Benchmark};
use moea_lab::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Internal(_) | Error::Io(_) | Error::Csv(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn bits(s: &str) -> PyResult<BitString> {
    s.parse().map_err(to_py)
}

#[pyclass(name = "RunRecord", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRunRecord {
    inner: RunRecord,
}

#[pymethods]
impl PyRunRecord {
    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[getter]
    fn evaluations(&self) -> u64 {
        self.inner.evaluations
    }

    #[getter]
    fn iterations(&self) -> u64 {
        self.inner.iterations
    }

    #[getter]
    fn status(&self) -> &'static str {
        self.inner.status.name()
    }

    #[getter]
    fn covered(&self) -> bool {
        self.inner.status == algorithms::RunStatus::Covered
    }

    #[getter]
    fn final_level(&self) -> usize {
        self.inner.final_level
    }

    #[getter]
    fn lambda_total(&self) -> u64 {
        self.inner.lambda_total
    }

    #[getter]
    fn lambda_trajectory(&self) -> Option<Vec<f64>> {
        self.inner.lambda_trajectory.clone()
    }

    /// `(level, evaluations)` pairs.
    #[getter]
    fn milestones(&self) -> Vec<(usize, u64)> {
        self.inner
            .milestones
            .iter()
            .map(|m| (m.level, m.evaluations))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "RunRecord(seed={}, evaluations={}, iterations={}, status='{}')",
            self.inner.seed, self.inner.evaluations, self.inner.iterations, self.inner.status
        )
    }
}

#[pyclass(name = "BoundReport", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyBoundReport {
    inner: BoundReport,
}

#[pymethods]
impl PyBoundReport {
    #[getter]
    fn bound(&self) -> f64 {
        self.inner.bound()
    }

    #[getter]
    fn estimate(&self) -> f64 {
        self.inner.estimate()
    }

    #[getter]
    fn trials(&self) -> usize {
        self.inner.trials
    }

    #[getter]
    fn passed(&self) -> bool {
        self.inner.pass
    }

    #[getter]
    fn mutation(&self) -> (f64, f64, bool) {
        let m = &self.inner.mutation;
        (m.bound, m.estimate, m.pass)
    }

    #[getter]
    fn crossover(&self) -> (f64, f64, bool) {
        let m = &self.inner.crossover;
        (m.bound, m.estimate, m.pass)
    }

    #[getter]
    fn largest_constant(&self) -> Option<f64> {
        self.inner.largest_constant
    }

    fn __repr__(&self) -> String {
        self.inner.to_string()
    }
}

/// Step-by-step GSEMO or (1+(λ,λ)) GSEMO run.
#[pyclass(name = "ArchiveRun", unsendable)]
struct PyArchiveRun {
    inner: ArchiveRun,
}

#[pymethods]
impl PyArchiveRun {
    #[new]
    #[pyo3(signature = (algorithm, n, seed=0, controller=None, lambda_=None, k=None, c=None, update_strength=None, budget=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        algorithm: &str,
        n: usize,
        seed: u64,
        controller: Option<&str>,
        lambda_: Option<&str>,
        k: Option<f64>,
        c: Option<f64>,
        update_strength: Option<f64>,
        budget: Option<u64>,
    ) -> PyResult<Self> {
        let cfg = config(
            algorithm,
            None,
            n,
            seed,
            controller,
            lambda_,
            k,
            c,
            update_strength,
            budget,
            false,
        )?;
        Ok(Self {
            inner: ArchiveRun::new(cfg).map_err(to_py)?,
        })
    }

    /// Advance one iteration. Returns `(coverage_before, coverage_after, lambda)`.
    fn step(&mut self) -> PyResult<(usize, usize, Option<usize>)> {
        let r = self.inner.step().map_err(to_py)?;
        Ok((
            r.coverage_before,
            r.coverage_after,
            r.params.map(|p| p.lambda),
        ))
    }

    #[getter]
    fn coverage(&self) -> usize {
        self.inner.archive().coverage()
    }

    #[getter]
    fn evaluations(&self) -> u64 {
        self.inner.evaluations()
    }

    #[getter]
    fn iterations(&self) -> u64 {
        self.inner.iterations()
    }

    #[getter]
    fn done(&self) -> bool {
        self.inner.is_done()
    }

    /// Objective pairs currently in the archive, sorted by `f1`.
    fn front(&self) -> Vec<(i64, i64)> {
        let mut v: Vec<_> = self
            .inner
            .archive()
            .objective_values()
            .map(|p| (p.f1, p.f2))
            .collect();
        v.sort_unstable();
        v
    }
}

#[allow(clippy::too_many_arguments)]
fn config(
    algorithm: &str,
    benchmark: Option<&str>,
    n: usize,
    seed: u64,
    controller: Option<&str>,
    lambda: Option<&str>,
    k: Option<f64>,
    c: Option<f64>,
    update_strength: Option<f64>,
    budget: Option<u64>,
    record_lambda: bool,
) -> PyResult<RunConfig> {
    let algorithm: Algorithm = algorithm.parse().map_err(to_py)?;
    let benchmark = match benchmark {
        Some(b) => b.parse().map_err(to_py)?,
        None if algorithm == Algorithm::OpllGa => Benchmark::OneMax,
        None => Benchmark::OneMinMax,
    };
    let mut cfg = RunConfig::new(algorithm, benchmark, n, seed);
    if algorithm != Algorithm::Gsemo {
        let mode: ControllerMode = controller.unwrap_or("static").parse().map_err(to_py)?;
        let lambda = lambda
            .map(|l| l.parse::<LambdaSchedule>())
            .transpose()
            .map_err(to_py)?;
        let template = build_template(mode, lambda, k, c, update_strength).map_err(to_py)?;
        cfg.controller = Some(template.resolve(n, LogBase::Natural));
    }
    if let Some(b) = budget {
        cfg.budget = b;
    }
    cfg.record_lambda = record_lambda;
    cfg.validate().map_err(to_py)?;
    Ok(cfg)
}

/// Run one algorithm to full coverage (or the budget). `lambda_` accepts a
/// number or a schedule such as `"7log"`.
#[pyfunction]
#[pyo3(signature = (algorithm, n, seed=0, controller=None, lambda_=None, k=None, c=None, update_strength=None, budget=None, benchmark=None, record_lambda=false))]
#[allow(clippy::too_many_arguments)]
fn run(
    py: Python<'_>,
    algorithm: &str,
    n: usize,
    seed: u64,
    controller: Option<&str>,
    lambda_: Option<&str>,
    k: Option<f64>,
    c: Option<f64>,
    update_strength: Option<f64>,
    budget: Option<u64>,
    benchmark: Option<&str>,
    record_lambda: bool,
) -> PyResult<PyRunRecord> {
    let cfg = config(
        algorithm,
        benchmark,
        n,
        seed,
        controller,
        lambda_,
        k,
        c,
        update_strength,
        budget,
        record_lambda,
    )?;
    let inner = py.detach(|| algorithms::run(cfg)).map_err(to_py)?;
    Ok(PyRunRecord { inner })
}

#[pyfunction]
fn one_min_max(x: &str) -> PyResult<(i64, i64)> {
    let p = objectives::one_min_max(&bits(x)?);
    Ok((p.f1, p.f2))
}

#[pyfunction]
fn one_max(x: &str) -> PyResult<i64> {
    Ok(objectives::one_max(&bits(x)?))
}

#[pyfunction]
fn hamming_distance(x: &str, y: &str) -> PyResult<usize> {
    bitcore::hamming_distance(&bits(x)?, &bits(y)?).map_err(to_py)
}

/// Flip exactly `ell` uniformly chosen bits of `x`.
#[pyfunction]
#[pyo3(signature = (x, ell, seed=0))]
fn flip_exact(x: &str, ell: usize, seed: u64) -> PyResult<String> {
    let mut rng = RandomSource::new(seed);
    Ok(bitcore::flip_exact(&bits(x)?, ell, &mut rng)
        .map_err(to_py)?
        .to_string())
}

#[pyfunction]
fn mutation_phase_bound(n: usize, d: usize, lambda_: usize, ell: usize) -> PyResult<f64> {
    harness::mutation_phase_bound(n, d, lambda_, ell).map_err(to_py)
}

#[pyfunction]
fn crossover_phase_bound(c: f64, ell: usize, lambda_: usize) -> PyResult<f64> {
    harness::crossover_phase_bound(c, ell, lambda_).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, d, lambda_, k, constant=1.0))]
fn step_probability_bound(
    n: usize,
    d: usize,
    lambda_: f64,
    k: f64,
    constant: f64,
) -> PyResult<f64> {
    harness::step_probability_bound(n, d, lambda_, k, constant).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, d, lambda_, k=None, c=None, trials=100_000, seed=0))]
#[allow(clippy::too_many_arguments)]
fn validate_step_bounds(
    py: Python<'_>,
    n: usize,
    d: usize,
    lambda_: usize,
    k: Option<f64>,
    c: Option<f64>,
    trials: usize,
    seed: u64,
) -> PyResult<PyBoundReport> {
    let k = k.unwrap_or(lambda_ as f64);
    let c = c.unwrap_or(1.0 / k);
    let inner = py
        .detach(|| {
            let mut rng = RandomSource::new(seed);
            harness::validate_step_bounds(n, d, lambda_, k, c, trials, &mut rng)
        })
        .map_err(to_py)?;
    Ok(PyBoundReport { inner })
}

/// Run a sweep described in the key-value format and return the summary as
/// CSV text (files are also written when the sweep names an `out` path).
#[pyfunction]
fn run_sweep(py: Python<'_>, text: &str) -> PyResult<String> {
    let spec = harness::parse_sweep(text).map_err(to_py)?;
    let result = py
        .detach(|| harness::run_experiment(&spec))
        .map_err(to_py)?;
    harness::experiment::summary_to_csv_string(&result.rows).map_err(to_py)
}

/// `sqrt(n / (n - min(o1, o2)))`.
#[pyfunction]
#[pyo3(signature = (n, o1=None, o2=None))]
fn state_dependent_lambda(n: usize, o1: Option<i64>, o2: Option<i64>) -> PyResult<f64> {
    moea_lab::control::state_dependent_lambda(n, o1, o2).map_err(to_py)
}

#[pymodule]
fn moea_lab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRunRecord>()?;
    m.add_class::<PyBoundReport>()?;
    m.add_class::<PyArchiveRun>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(one_min_max, m)?)?;
    m.add_function(wrap_pyfunction!(one_max, m)?)?;
    m.add_function(wrap_pyfunction!(hamming_distance, m)?)?;
    m.add_function(wrap_pyfunction!(flip_exact, m)?)?;
    m.add_function(wrap_pyfunction!(mutation_phase_bound, m)?)?;
    m.add_function(wrap_pyfunction!(crossover_phase_bound, m)?)?;
    m.add_function(wrap_pyfunction!(step_probability_bound, m)?)?;
    m.add_function(wrap_pyfunction!(validate_step_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(state_dependent_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add("DEFAULT_UPDATE_STRENGTH", DEFAULT_UPDATE_STRENGTH)?;
    Ok(())
}
