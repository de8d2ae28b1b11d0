//! Python bindings: thin wrappers returning the same strings the CLI emits.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use er2_core::bss::{self, BssCaps, BssSpace};
use er2_core::er2 as ring;
use er2_core::fgl::{self, Convention};
use er2_core::obstruct::{self, ObstructCaps, ObstructError, ReportFormat};

create_exception!(er2, GateRefused, PyException, "The query was refused by a gate or a cap.");

fn obstruct_err(e: ObstructError) -> PyErr {
    if e.is_refusal() {
        GateRefused::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn space_of(space: &str, big_k: Option<u32>) -> PyResult<BssSpace> {
    match (space, big_k) {
        ("point", _) => Ok(BssSpace::Point),
        ("rp-infty", _) => Ok(BssSpace::RPInfty),
        ("rp-odd", Some(k)) => Ok(BssSpace::RPOdd { k }),
        ("rp-odd", None) => Err(PyValueError::new_err("rp-odd needs K")),
        (other, _) => Err(PyValueError::new_err(format!("unknown space {other:?}"))),
    }
}

/// `n`, `k`, `alpha(m)` and residues for `m`.
#[pyfunction]
fn derive_parameters<'py>(py: Python<'py>, m: u64) -> PyResult<Bound<'py, PyDict>> {
    let p = obstruct::derive_parameters(m).map_err(obstruct_err)?;
    let d = PyDict::new(py);
    d.set_item("m", m)?;
    d.set_item("alpha", p.alpha_m)?;
    d.set_item("n", p.n)?;
    d.set_item("k", p.k)?;
    d.set_item("residues", p.residues)?;
    d.set_item("passes_gates", obstruct::check_gates(&p).passed)?;
    Ok(d)
}

/// Run a non-immersion query and render the report.
#[pyfunction]
#[pyo3(signature = (m=None, n=None, k=None, l=None, alpha_cap=None, format="json"))]
fn check(
    m: Option<u64>,
    n: Option<u64>,
    k: Option<u64>,
    l: Option<u32>,
    alpha_cap: Option<u32>,
    format: &str,
) -> PyResult<String> {
    let p = match (m, n, k) {
        (Some(m), None, None) => obstruct::derive_parameters(m).map_err(obstruct_err)?,
        (None, Some(n), Some(k)) => obstruct::explicit_parameters(n, k),
        _ => return Err(PyValueError::new_err("give m, or both n and k")),
    };
    let format = match format {
        "json" => ReportFormat::Json,
        "csv" => ReportFormat::Csv,
        "text" => ReportFormat::Text,
        other => return Err(PyValueError::new_err(format!("unknown format {other:?}"))),
    };
    let mut caps = ObstructCaps::default();
    if let Some(a) = alpha_cap {
        caps.alpha = a;
    }
    let report = obstruct::run_query(&p, l, &caps).map_err(obstruct_err)?;
    Ok(report.without_wallclock().render(format))
}

/// Spectral sequence pages as CSV (`page=None` for all pages).
#[pyfunction]
#[pyo3(signature = (space, big_k=None, page=None, repair=false))]
fn bss_pages(space: &str, big_k: Option<u32>, page: Option<u32>, repair: bool) -> PyResult<String> {
    let ss = bss::compute(space_of(space, big_k)?, BssCaps::default(), repair).map_err(value_err)?;
    if let Some(r) = page {
        ss.page(r).map_err(value_err)?;
    }
    Ok(ss.pages_csv(page))
}

/// Comparison against the printed tables, as JSON.
#[pyfunction]
#[pyo3(signature = (space, big_k=None))]
fn erratum_report(space: &str, big_k: Option<u32>) -> PyResult<String> {
    Ok(bss::erratum_report(space_of(space, big_k)?, BssCaps::default())
        .map_err(value_err)?
        .to_json())
}

#[pyfunction]
#[pyo3(signature = (convention="araki", depth=4))]
fn fgl_csv(convention: &str, depth: u32) -> PyResult<String> {
    let conv = match convention {
        "araki" => Convention::Araki,
        "hazewinkel" => Convention::Hazewinkel,
        other => return Err(PyValueError::new_err(format!("unknown convention {other:?}"))),
    };
    let f = fgl::standard_fgl(conv, depth).map_err(value_err)?;
    fgl::coefficients_csv(&f).map_err(value_err)
}

/// Normal form of a sum of words in `ER(2)^*`, e.g. `"w*alpha_2 + 2*x"`.
#[pyfunction]
fn er2_normalize(words: &str) -> PyResult<String> {
    Ok(ring::er2_normalize(words).map_err(value_err)?.render())
}

/// Degree-8* basis of `ER(2)^*(RP^{16K+9})` as CSV.
#[pyfunction]
#[pyo3(signature = (big_k, alpha_cap=12))]
fn basis_csv(big_k: u32, alpha_cap: u32) -> String {
    ring::basis_csv(big_k, alpha_cap)
}

#[pymodule]
fn er2(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GateRefused", m.py().get_type::<GateRefused>())?;
    m.add_function(wrap_pyfunction!(derive_parameters, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(bss_pages, m)?)?;
    m.add_function(wrap_pyfunction!(erratum_report, m)?)?;
    m.add_function(wrap_pyfunction!(fgl_csv, m)?)?;
    m.add_function(wrap_pyfunction!(er2_normalize, m)?)?;
    m.add_function(wrap_pyfunction!(basis_csv, m)?)?;
    Ok(())
}
