//! Python bindings.
//!
//! Projects, configurations and reports cross the boundary as JSON strings;
//! library errors become `ValueError` carrying the CLI's JSON error object.

use defectlab::cli::{error_json, run_args};
use defectlab::defects::residue_report;
use defectlab::groups::{ext_group, FgAbelianGroup};
use defectlab::project::{fixture_names as names, fixture_project, resolve_fixture, ProjectFile};
use defectlab::Error;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(error_json(&e))
}

/// Every bundled project and configuration name.
#[pyfunction]
fn fixture_names() -> Vec<String> {
    names()
}

/// A bundled project as JSON.
#[pyfunction]
fn fixture(name: &str) -> PyResult<String> {
    Ok(fixture_project(name).map_err(py_err)?.to_json())
}

/// `Ext(H, G)` for groups written like `Z^2+Z/4`.
#[pyfunction]
fn ext(h: &str, g: &str) -> PyResult<String> {
    let h = FgAbelianGroup::parse(h).map_err(py_err)?;
    let g = FgAbelianGroup::parse(g).map_err(py_err)?;
    Ok(ext_group(&h, &g).to_string())
}

/// Residue report (JSON) for a configuration of a project given as JSON or as
/// a fixture name.
#[pyfunction]
#[pyo3(signature = (project, config=None, cocycle=None, radius=1))]
fn residues(project: &str, config: Option<&str>, cocycle: Option<&str>, radius: usize) -> PyResult<String> {
    let (p, fixture_config) = if project.trim_start().starts_with('{') {
        (ProjectFile::from_json(project).map_err(py_err)?, None)
    } else {
        resolve_fixture(project).map_err(py_err)?
    };
    let cfg = p.pick_configuration(config.or(fixture_config.as_deref())).map_err(py_err)?;
    let rule = p.pick_cocycle(cocycle).map_err(py_err)?;
    let rep = residue_report(&cfg.configuration, &p.sft, rule, radius).map_err(py_err)?;
    serde_json::to_string(&rep).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Run a CLI command (arguments after the program name); returns the exit
/// code and standard output.
#[pyfunction]
fn run_cli(args: Vec<String>) -> PyResult<(i32, String)> {
    let out = run_args(std::iter::once("defectlab".to_string()).chain(args)).map_err(py_err)?;
    Ok((out.code, out.stdout))
}

#[pymodule]
pub fn defectlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(fixture_names, m)?)?;
    m.add_function(wrap_pyfunction!(fixture, m)?)?;
    m.add_function(wrap_pyfunction!(ext, m)?)?;
    m.add_function(wrap_pyfunction!(residues, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
