use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use multipole_core::angular::{self, HalfInt, SphDirection};
use multipole_core::beams::{self, BeamError, BeamMode, BeamSpec, QuadratureOptions};
use multipole_core::coupling::constants::SPEED_OF_LIGHT;
use multipole_core::coupling::{self, Character, CouplingError, Objective};
use multipole_core::frames::helicity_frame;
use multipole_core::polarization::{jones_to_cvec, JonesVector};
use multipole_core::scenario::{self, Cell, ResultTable, RunOptions};
use multipole_core::{selfcheck, vsh};

create_exception!(multipole, ScenarioError, PyValueError, "Malformed or invalid scenario.");
create_exception!(multipole, NotConvergedError, PyRuntimeError, "Beam quadrature missed its tolerance.");
create_exception!(multipole, InfeasibleError, PyRuntimeError, "No geometry satisfies the requested objective.");

fn coupling_err(e: CouplingError) -> PyErr {
    match e {
        CouplingError::NotFound { .. } => InfeasibleError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn beam_err(e: BeamError) -> PyErr {
    match e {
        BeamError::NotConverged { .. } => NotConvergedError::new_err(e.to_string()),
        BeamError::Coupling(c) => coupling_err(c),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn scenario_err(e: scenario::ScenarioError) -> PyErr {
    match e.exit_code() {
        scenario::exit_code::NOT_CONVERGED => NotConvergedError::new_err(e.to_string()),
        scenario::exit_code::INFEASIBLE => InfeasibleError::new_err(e.to_string()),
        scenario::exit_code::PARSE => ScenarioError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn half(x: f64) -> PyResult<HalfInt> {
    HalfInt::try_from_f64(x).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn direction(theta: f64, phi: f64) -> PyResult<SphDirection> {
    SphDirection::new(theta, phi).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn jones(j: (Complex64, Complex64)) -> JonesVector {
    JonesVector::new(j.0, j.1)
}

fn check_component(rank: i32, p: i32) -> PyResult<()> {
    if rank < 1 || p.abs() > rank {
        return Err(PyValueError::new_err(format!("need rank ≥ 1 and |p| ≤ rank, got rank {rank}, p {p}")));
    }
    Ok(())
}

/// Wigner 3j symbol; arguments may be half-integers.
#[pyfunction]
fn wigner3j(j1: f64, j2: f64, j3: f64, m1: f64, m2: f64, m3: f64) -> PyResult<f64> {
    Ok(angular::wigner3j(half(j1)?, half(j2)?, half(j3)?, half(m1)?, half(m2)?, half(m3)?))
}

/// Wigner 6j symbol {j1 j2 j3; j4 j5 j6}.
#[pyfunction]
fn wigner6j(j1: f64, j2: f64, j3: f64, j4: f64, j5: f64, j6: f64) -> PyResult<f64> {
    Ok(angular::wigner6j(half(j1)?, half(j2)?, half(j3)?, half(j4)?, half(j5)?, half(j6)?))
}

/// Condon–Shortley Y_lm(θ, φ).
#[pyfunction]
fn sph_harm(degree: i32, order: i32, theta: f64, phi: f64) -> PyResult<Complex64> {
    let d = direction(theta, phi)?;
    Ok(angular::sph_harm(degree, order, d))
}

/// Cartesian components of Y^(λ)_{K,p}(θ, φ), λ = 1 or 0.
#[pyfunction]
#[pyo3(signature = (rank, p, theta, phi, lam = 1))]
fn vector_harmonic(rank: i32, p: i32, theta: f64, phi: f64, lam: i32) -> PyResult<[Complex64; 3]> {
    check_component(rank, p)?;
    let kind = vsh::VshType::from_lambda(lam).ok_or_else(|| PyValueError::new_err(format!("λ must be 0 or 1, got {lam}")))?;
    Ok(vsh::vsh(kind, rank, p, direction(theta, phi)?).value.to_array())
}

/// ε·Y^(+1)_{K,−Δm}(k̂) for the Jones vector (J_ϑ, J_φ) of a wave along (θ, φ).
#[pyfunction]
fn plane_wave_coupling(rank: u32, delta_m: i32, theta: f64, phi: f64, polarization: (Complex64, Complex64)) -> PyResult<Complex64> {
    let k_dir = direction(theta, phi)?;
    let eps = jones_to_cvec(jones(polarization), &helicity_frame(k_dir));
    coupling::plane_wave_coupling(rank, delta_m, k_dir, eps).map_err(coupling_err)
}

/// Σ over unwanted Δm of |ε·Y^(+1)_{K,−Δm}(k̂)|.
#[pyfunction]
fn selectivity(rank: u32, delta_m: i32, theta: f64, phi: f64, polarization: (Complex64, Complex64)) -> PyResult<f64> {
    let k_dir = direction(theta, phi)?;
    check_component(rank as i32, delta_m)?;
    let eps = jones_to_cvec(jones(polarization), &helicity_frame(k_dir));
    Ok(coupling::selectivity(rank, delta_m, k_dir, eps))
}

/// Best plane-wave geometry for one Δm: "max_coupling" or "zero_selectivity".
#[pyfunction]
#[pyo3(signature = (rank, delta_m, objective = "max_coupling"))]
fn optimize_geometry<'py>(py: Python<'py>, rank: u32, delta_m: i32, objective: &str) -> PyResult<Bound<'py, PyDict>> {
    let objective = match objective {
        "max_coupling" => Objective::MaxCoupling,
        "zero_selectivity" => Objective::MaxCouplingZeroSelectivity,
        other => return Err(PyValueError::new_err(format!("unknown objective {other:?}"))),
    };
    let g = py
        .detach(|| coupling::optimize_geometry(rank, delta_m, objective))
        .map_err(coupling_err)?;
    let out = PyDict::new(py);
    out.set_item("theta", g.k_dir.theta())?;
    out.set_item("phi", g.k_dir.phi())?;
    out.set_item("jones", (g.jones.jx, g.jones.jy))?;
    out.set_item("coupling", g.coupling)?;
    out.set_item("selectivity", g.selectivity)?;
    Ok(out)
}

fn beam_mode(mode: &str, m: u32, n: u32, l: i32) -> PyResult<BeamMode> {
    Ok(match mode {
        "gaussian" => BeamMode::gaussian(),
        "hg" => BeamMode::HermiteGauss { m, n },
        "lg" => BeamMode::LaguerreGauss { n, l },
        "radial" => BeamMode::radial_donut(),
        "plane" => BeamMode::PlaneWave,
        other => return Err(PyValueError::new_err(format!("unknown beam mode {other:?}"))),
    })
}

/// Beam-coupling integral N_{K,−Δm} for a paraxial beam (lengths in metres).
#[pyfunction]
#[pyo3(signature = (
    rank, delta_m, *, theta, phi, wavelength, w0, polarization = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
    mode = "gaussian", m = 0, n = 0, l = 0, offset = (0.0, 0.0), tolerance = beams::DEFAULT_QUADRATURE_TOL,
    reproject_polarization = false, magnetic = false,
))]
#[allow(clippy::too_many_arguments)]
fn beam_coupling(
    py: Python<'_>,
    rank: u32,
    delta_m: i32,
    theta: f64,
    phi: f64,
    wavelength: f64,
    w0: f64,
    polarization: (Complex64, Complex64),
    mode: &str,
    m: u32,
    n: u32,
    l: i32,
    offset: (f64, f64),
    tolerance: f64,
    reproject_polarization: bool,
    magnetic: bool,
) -> PyResult<Complex64> {
    if !(wavelength > 0.0 && wavelength.is_finite()) {
        return Err(PyValueError::new_err(format!("wavelength must be positive, got {wavelength}")));
    }
    let spec = BeamSpec {
        mode: beam_mode(mode, m, n, l)?,
        w0,
        k_mag: 2.0 * std::f64::consts::PI / wavelength,
        k_dir: direction(theta, phi)?,
        jones: jones(polarization),
        offset: [offset.0, offset.1],
        amplitude: 1.0,
        phase: 0.0,
    };
    let opts = QuadratureOptions {
        tolerance,
        reproject_polarization,
        character: if magnetic { Character::Magnetic } else { Character::Electric },
    };
    py.detach(|| beams::beam_coupling_integral_with(&spec, rank, delta_m, &opts))
        .map(|c| c.value)
        .map_err(beam_err)
}

fn cell(py: Python<'_>, c: &Cell) -> PyResult<Py<PyAny>> {
    Ok(match c {
        Cell::Int(v) => v.into_pyobject(py)?.into_any().unbind(),
        Cell::Real(v) => v.into_pyobject(py)?.into_any().unbind(),
        Cell::Complex(v) => v.into_pyobject(py)?.into_any().unbind(),
        Cell::Text(v) => v.into_pyobject(py)?.into_any().unbind(),
    })
}

fn table<'py>(py: Python<'py>, t: &ResultTable) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("columns", &t.columns)?;
    let rows = PyList::empty(py);
    for r in &t.rows {
        let cells = r.iter().map(|c| cell(py, c)).collect::<PyResult<Vec<_>>>()?;
        rows.append(cells)?;
    }
    out.set_item("rows", rows)?;
    out.set_item("metadata", t.metadata.clone())?;
    Ok(out)
}

/// Evaluate every output of a TOML scenario; one dict per request with
/// "columns", "rows" and "metadata".
#[pyfunction]
#[pyo3(signature = (text, tolerance = beams::DEFAULT_QUADRATURE_TOL, reproject_polarization = false))]
fn run_scenario<'py>(py: Python<'py>, text: &str, tolerance: f64, reproject_polarization: bool) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let s = scenario::parse_scenario(text).map_err(scenario_err)?;
    let opts = RunOptions {
        tolerance,
        reproject_polarization,
    };
    let tables = py.detach(|| scenario::run_scenario(&s, &opts)).map_err(scenario_err)?;
    tables.iter().map(|t| table(py, t)).collect()
}

/// The scenario rewritten with SI keys and explicit Jones vectors.
#[pyfunction]
fn canonical_toml(text: &str) -> PyResult<String> {
    let s = scenario::parse_scenario(text).map_err(scenario_err)?;
    Ok(scenario::to_canonical_toml(&s))
}

/// Built-in reference-table checks: (name, passed, cases, max_error, tolerance).
#[pyfunction]
fn verify(py: Python<'_>) -> Vec<(&'static str, bool, usize, f64, f64)> {
    py.detach(selfcheck::run_all)
        .into_iter()
        .map(|o| (o.name, o.passed(), o.cases, o.max_error, o.tolerance))
        .collect()
}

#[pymodule]
fn multipole(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("ScenarioError", py.get_type::<ScenarioError>())?;
    m.add("NotConvergedError", py.get_type::<NotConvergedError>())?;
    m.add("InfeasibleError", py.get_type::<InfeasibleError>())?;
    m.add("SPEED_OF_LIGHT", SPEED_OF_LIGHT)?;
    m.add_function(wrap_pyfunction!(wigner3j, m)?)?;
    m.add_function(wrap_pyfunction!(wigner6j, m)?)?;
    m.add_function(wrap_pyfunction!(sph_harm, m)?)?;
    m.add_function(wrap_pyfunction!(vector_harmonic, m)?)?;
    m.add_function(wrap_pyfunction!(plane_wave_coupling, m)?)?;
    m.add_function(wrap_pyfunction!(selectivity, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_geometry, m)?)?;
    m.add_function(wrap_pyfunction!(beam_coupling, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_toml, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
