//! Python module `vwpy`: thin wrappers returning strings, booleans and JSON
//! text. Errors map to `ValueError` (bad input) or `RuntimeError`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use vwcore::report::{format_series, VerificationReport};
use vwcore::{blowup, direct, modular, nekrasov, universal, vw, Error};

fn err(e: Error) -> PyErr {
    match e {
        Error::Parse(_) | Error::InvalidSurface(_) | Error::InvalidSubstitution(_) | Error::Unsupported(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// `Θ_{A_{r−1},ℓ}` through `q^order` as text in `y`.
#[pyfunction]
fn theta(rank: usize, ell: i64, order: usize) -> String {
    format_series(&modular::theta_lattice(rank, ell, order))
}

/// `χ̂(M(r,n))` at `y = 1`, as a rational string.
#[pyfunction]
#[pyo3(signature = (rank, n, seed = 0))]
fn euler_specialization(rank: usize, n: usize, seed: u64) -> PyResult<String> {
    nekrasov::euler_specialization(rank, n, seed).map(|v| v.to_string()).map_err(err)
}

fn report(r: VerificationReport) -> (bool, String) {
    (r.pass, r.to_string())
}

/// Runs a named identity check; returns `(passed, report text)`.
#[pyfunction]
#[pyo3(signature = (identity, rank, order, ell = 0, seed = 0, trials = 25))]
fn verify(identity: &str, rank: usize, order: usize, ell: i64, seed: u64, trials: usize) -> PyResult<(bool, String)> {
    let sym = |s: nekrasov::SymmetryReport| (s.pass, format!("{} r={} n={} seed={}: {} comparisons", s.identity, s.r, s.n, s.seed, s.comparisons.len()));
    let out = match identity {
        "permutation" => sym(nekrasov::verify_framing_permutation(rank, order, trials, seed).map_err(err)?),
        "inversion" => sym(nekrasov::verify_framing_inversion(rank, order, trials, seed).map_err(err)?),
        "klt" => report(blowup::verify_klt(rank, ell, order).map_err(err)?),
        "route-equality" => report(direct::verify_route_equality(rank, order).map_err(err)?),
        "a-formula" => report(universal::verify_a_closed_form(&universal::extract(rank, order).map_err(err)?, order).map_err(err)?),
        "symmetry-relations" => report(universal::verify_symmetry_relations(&universal::extract(rank, order).map_err(err)?, order)),
        "blowup-relations" => {
            let u = universal::extract(rank, order.max(2)).map_err(err)?;
            report(universal::verify_blowup_relations(&u, order, 2.min(order)).map_err(err)?)
        }
        other => return Err(PyValueError::new_err(format!("unknown identity {other:?}"))),
    };
    Ok(out)
}

/// Universal series through `q^order` as JSON text.
#[pyfunction]
fn extract(rank: usize, order: usize) -> PyResult<String> {
    let u = universal::extract(rank, order).map_err(err)?;
    serde_json::to_string(&u.export()).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Vertical partition function of a surface given as JSON text.
#[pyfunction]
#[pyo3(signature = (surface_json, rank, order, closed_form = false))]
fn partition_function(surface_json: &str, rank: usize, order: usize, closed_form: bool) -> PyResult<String> {
    let s = vw::SurfaceInput::from_json(surface_json).map_err(err)?;
    let z = if closed_form {
        if rank != 2 {
            return Err(PyValueError::new_err("closed forms exist for rank 2 only"));
        }
        let u = vw::rank2_closed_form_series(vw::required_series_order(&s, 2, order)).map_err(err)?;
        vw::vertical_partition_function(&s, 2, order, &u)
    } else {
        vw::vertical_partition_function_auto(&s, rank, order)
    }
    .map_err(err)?;
    Ok(format_series(&z))
}

#[pymodule]
fn vwpy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(euler_specialization, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(extract, m)?)?;
    m.add_function(wrap_pyfunction!(partition_function, m)?)?;
    Ok(())
}
