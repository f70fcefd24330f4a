//! Python bindings: load a scenario, normalize and evaluate words, run the
//! verification suites.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use gpmult_core::config::{LoadedScenario, ScenarioConfig};
use gpmult_core::matalg::C64;
use gpmult_core::multipliers::gp_multiplier;
use gpmult_core::verifier::{check_setup, run_all, Status, Suite};
use gpmult_core::wordcraft::normalize;
use gpmult_core::Error;

create_exception!(gpmult, ConfigError, PyException);
create_exception!(gpmult, BudgetExceeded, PyException);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded(_) => BudgetExceeded::new_err(format!("{}: {e}", e.code())),
        _ => PyValueError::new_err(format!("{}: {e}", e.code())),
    }
}

/// A scenario built from a JSON config document.
#[pyclass(frozen)]
struct Scenario {
    inner: LoadedScenario,
}

#[pymethods]
impl Scenario {
    #[staticmethod]
    #[pyo3(signature = (text, seed=None))]
    fn from_json(text: &str, seed: Option<u64>) -> PyResult<Self> {
        let mut cfg = ScenarioConfig::from_json(text).map_err(|e| ConfigError::new_err(e.to_string()))?;
        if let Some(s) = seed {
            cfg.verify.seed = s;
        }
        let inner = cfg.build().map_err(|e| ConfigError::new_err(e.to_string()))?;
        Ok(Scenario { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (path, seed=None))]
    fn from_file(path: std::path::PathBuf, seed: Option<u64>) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| ConfigError::new_err(format!("IoError: {}: {e}", path.display())))?;
        Self::from_json(&text, seed)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.config.name.clone()
    }

    /// Vertices in sorted order.
    #[getter]
    fn vertices(&self) -> Vec<usize> {
        self.inner.scenario.ctx.system().gp().graph().vertices().to_vec()
    }

    /// Canonical form of a word given as `[(vertex, element), ...]`.
    fn normalize(&self, word: Vec<(usize, usize)>) -> PyResult<Vec<(usize, usize)>> {
        let x = normalize(&word, self.inner.scenario.ctx.system().gp()).map_err(to_py)?;
        Ok(x.letters().iter().map(|&l| l.into()).collect())
    }

    /// The graph-product multiplier at a word, one complex number per block.
    fn eval(&self, word: Vec<(usize, usize)>) -> PyResult<Vec<C64>> {
        let ctx = &self.inner.scenario.ctx;
        let value = normalize(&word, ctx.system().gp()).and_then(|x| gp_multiplier(&x, ctx)).map_err(to_py)?;
        Ok(value.scalars().to_vec())
    }

    /// Located commutation problems, as "Code at /pointer: message".
    fn setup_problems(&self) -> Vec<String> {
        self.inner.setup_problems().iter().map(ToString::to_string).collect()
    }

    /// `(positive, lambda_min)` for each vertex multiplier.
    fn vertex_positivity(&self) -> Vec<(bool, f64)> {
        self.inner.scenario.vertex_positivity().iter().map(|p| (p.positive, p.lambda_min)).collect()
    }

    fn setup_ok(&self) -> PyResult<bool> {
        let o = check_setup(&self.inner.scenario).map_err(to_py)?;
        Ok(o.status == Status::Pass && self.inner.setup_problems().is_empty())
    }

    /// Runs a suite ("all", "main", "lemmas", ...) and returns the report as a dict.
    #[pyo3(signature = (suite="all"))]
    fn verify<'py>(&self, py: Python<'py>, suite: &str) -> PyResult<Bound<'py, PyAny>> {
        let suite: Suite = suite.parse().map_err(|e: Error| ConfigError::new_err(format!("{}: {e}", e.code())))?;
        let report = py.detach(|| run_all(&self.inner.scenario, suite)).map_err(to_py)?;
        let text = serde_json::to_string(&self.inner.report_json(&report)).expect("report serializes");
        py.import("json")?.call_method1("loads", (text,))
    }

    fn __repr__(&self) -> String {
        format!("Scenario({:?}, vertices={:?})", self.inner.config.name, self.vertices())
    }
}

#[pymodule]
fn gpmult(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Scenario>()?;
    m.add("ConfigError", m.py().get_type::<ConfigError>())?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    Ok(())
}
