//! Python bindings for power-law random uniform hypergraphs.

use hyperphase::experiment::{compare_to_theory, run_experiment, summarize, ExperimentConfig};
use hyperphase::powerlaw::{self, tail_prob};
use hyperphase::sampler::{self, sample_weights};
use hyperphase::stats::motif_counts;
use hyperphase::theory::prediction_for;
use hyperphase::{Body, Method, ModelConfig, Statistic};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: hyperphase::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr<Err = hyperphase::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

fn body(s: &str) -> PyResult<Body> {
    match s {
        "pure_pareto" => Ok(Body::PurePareto),
        "uniform_body" => Ok(Body::UniformBody),
        other => Err(PyValueError::new_err(format!("unknown body `{other}`"))),
    }
}

/// Weight law with tail `P(W > x) = lambda x^-alpha` for `x >= x0`.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct PowerLaw(hyperphase::PowerLawParams);

#[pymethods]
impl PowerLaw {
    #[new]
    #[pyo3(signature = (alpha, x0 = 1.0, lam = None, body = "pure_pareto"))]
    fn new(alpha: f64, x0: f64, lam: Option<f64>, body: &str) -> PyResult<Self> {
        let b = self::body(body)?;
        let lam = match (lam, b) {
            (Some(l), _) => l,
            (None, Body::PurePareto) => x0.powf(alpha),
            (None, Body::UniformBody) => return Err(PyValueError::new_err("lam is required for the uniform body")),
        };
        hyperphase::PowerLawParams::new(alpha, lam, x0, b)
            .map(PowerLaw)
            .map_err(err)
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha
    }

    #[getter]
    fn lam(&self) -> f64 {
        self.0.lambda
    }

    #[getter]
    fn x0(&self) -> f64 {
        self.0.x0
    }

    fn tail(&self, x: f64) -> f64 {
        tail_prob(&self.0, x)
    }

    fn mean(&self) -> PyResult<f64> {
        powerlaw::mean(&self.0).map_err(err)
    }

    fn product_tail(&self, m: usize, x: f64) -> PyResult<f64> {
        powerlaw::product_tail_asymptotic(&self.0, m, x).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "PowerLaw(alpha={}, x0={}, lam={}, body={:?})",
            self.0.alpha, self.0.x0, self.0.lambda, self.0.body
        )
    }
}

#[pyclass(frozen)]
struct Hypergraph(hyperphase::Hypergraph);

#[pymethods]
impl Hypergraph {
    #[new]
    fn new(n: u32, m: usize, edges: Vec<Vec<u32>>) -> PyResult<Self> {
        hyperphase::Hypergraph::from_tuples(n, m, &edges)
            .map(Hypergraph)
            .map_err(err)
    }

    #[getter]
    fn n(&self) -> u32 {
        self.0.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    fn edges(&self) -> Vec<Vec<u32>> {
        self.0.edges().map(<[u32]>::to_vec).collect()
    }

    fn __contains__(&self, tuple: Vec<u32>) -> bool {
        self.0.contains(&tuple)
    }

    fn __len__(&self) -> usize {
        self.0.edge_count()
    }

    fn loose2_count(&self) -> PyResult<u128> {
        Ok(motif_counts(&self.0).map_err(err)?.loose2_count)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        hyperphase::Hypergraph::parse(text, "<python>")
            .map(Hypergraph)
            .map_err(err)
    }
}

/// Draw weights and a hypergraph; returns `(weights, hypergraph)`.
#[pyfunction]
#[pyo3(signature = (n, m, law, seed = 0, tau = 1.0, method = "skip", weights = None))]
fn sample(
    n: u32,
    m: usize,
    law: &PowerLaw,
    seed: u64,
    tau: f64,
    method: &str,
    weights: Option<Vec<f64>>,
) -> PyResult<(Vec<f64>, Hypergraph)> {
    let c = ModelConfig::new(n, m, law.0, seed)
        .with_tau(tau)
        .with_method(parse::<Method>(method)?);
    c.validate().map_err(err)?;
    let mut rng = c.rng();
    let w = match weights {
        Some(v) => hyperphase::WeightAssignment::supplied(v).map_err(err)?,
        None => sample_weights(&c, &mut rng),
    };
    let h = sampler::sample_hypergraph(&c, &w, &mut rng).map_err(err)?;
    Ok((w.weights().to_vec(), Hypergraph(h)))
}

/// Leading-order growth `constant * n^a (log n)^b` of a statistic.
#[pyfunction]
#[pyo3(signature = (statistic, law, m, tau = 1.0))]
fn predict<'py>(py: Python<'py>, statistic: &str, law: &PowerLaw, m: usize, tau: f64) -> PyResult<Bound<'py, PyDict>> {
    let p = prediction_for(&law.0, parse::<Statistic>(statistic)?, m, tau).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n_exponent", p.n_exponent)?;
    d.set_item("log_exponent", p.log_exponent)?;
    d.set_item("constant", p.constant)?;
    d.set_item("upper_bound_constant", p.upper_bound_constant)?;
    d.set_item("concentration", p.concentration)?;
    d.set_item("regime", p.regime.label())?;
    Ok(d)
}

type Rows<'py> = Vec<Bound<'py, PyDict>>;

/// Monte Carlo sweep over `alphas x ns x reps`; returns `(summary, report)`.
#[pyfunction]
#[pyo3(signature = (law, alphas, ns, reps, m = 3, statistic = "edges", seed = 0, tau = 1.0))]
#[allow(clippy::too_many_arguments)]
fn experiment<'py>(
    py: Python<'py>,
    law: &PowerLaw,
    alphas: Vec<f64>,
    ns: Vec<u32>,
    reps: u32,
    m: usize,
    statistic: &str,
    seed: u64,
    tau: f64,
) -> PyResult<(Rows<'py>, Rows<'py>)> {
    let stat = parse::<Statistic>(statistic)?;
    let cfg = ExperimentConfig::new(alphas, ns, reps, m, law.0)
        .with_seed(seed)
        .with_tau(tau)
        .with_statistics(vec![stat]);
    let records = run_experiment(&cfg).map_err(err)?;
    let mut summary = Vec::new();
    for c in summarize(&records, stat) {
        let d = PyDict::new(py);
        d.set_item("alpha", c.alpha)?;
        d.set_item("n", c.n)?;
        d.set_item("reps", c.reps)?;
        d.set_item("mean", c.mean)?;
        d.set_item("sd", c.sd)?;
        d.set_item("median", c.median)?;
        summary.push(d);
    }
    let mut report = Vec::new();
    for r in compare_to_theory(&records, &law.0, stat).map_err(err)? {
        let d = PyDict::new(py);
        d.set_item("alpha", r.alpha)?;
        d.set_item("regime", r.regime.label())?;
        d.set_item("predicted_n_exponent", r.predicted_n_exponent)?;
        d.set_item("log_exponent", r.log_exponent)?;
        d.set_item("fitted_n_exponent", r.pairwise.n_exponent_hat)?;
        d.set_item("stderr", r.pairwise.stderr)?;
        d.set_item("tolerance", r.tolerance)?;
        d.set_item("predicted_constant", r.predicted_constant)?;
        d.set_item("fitted_constant", r.fitted_constant)?;
        d.set_item("below_upper_bound", r.below_upper_bound)?;
        d.set_item("pass", r.pass)?;
        report.push(d);
    }
    Ok((summary, report))
}

#[pymodule]
fn pyhyperphase(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PowerLaw>()?;
    m.add_class::<Hypergraph>()?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(predict, m)?)?;
    m.add_function(wrap_pyfunction!(experiment, m)?)?;
    Ok(())
}
