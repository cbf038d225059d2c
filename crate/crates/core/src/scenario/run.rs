//! Evaluation of output requests into result tables.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{Cell, DriveKind, OutputRequest, Quantity, ResultTable, Scenario, ScenarioError};
use crate::beams::{beam_coupling_integral_with, gouy_correction, BeamError, QuadratureOptions, DEFAULT_QUADRATURE_TOL};
use crate::coupling::{
    optimize_geometry, plane_wave_coupling, rabi_frequency, Character, CouplingError,
};
use crate::polarization::beta_vector;
use crate::vsh::vsh_grid;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOptions {
    pub tolerance: f64,
    pub reproject_polarization: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            tolerance: DEFAULT_QUADRATURE_TOL,
            reproject_polarization: false,
        }
    }
}

enum Failure {
    Beam(BeamError),
    Coupling(CouplingError),
    Parameter(String, String),
}

impl From<BeamError> for Failure {
    fn from(e: BeamError) -> Self {
        Failure::Beam(e)
    }
}

impl From<CouplingError> for Failure {
    fn from(e: CouplingError) -> Self {
        Failure::Coupling(e)
    }
}

impl Failure {
    fn attach(self, index: usize, kind: &'static str) -> ScenarioError {
        match self {
            Failure::Beam(source) => ScenarioError::Beam { index, kind, source },
            Failure::Coupling(source) => ScenarioError::Coupling { index, kind, source },
            Failure::Parameter(path, message) => ScenarioError::Parse { line: 0, path, message },
        }
    }
}

/// Per-drive geometric factor (with e^{iφ}) and Gouy factor for Δm.
fn drive_factors(s: &Scenario, delta_m: i32, opts: &RunOptions) -> Result<Vec<(Complex64, f64, f64)>, Failure> {
    let t = &s.transition;
    s.drives
        .iter()
        .map(|d| {
            let phase = Complex64::from_polar(1.0, d.phase);
            if delta_m.unsigned_abs() > t.rank {
                return Ok((Complex64::new(0.0, 0.0), 1.0, d.amplitude));
            }
            match &d.kind {
                DriveKind::PlaneWave => {
                    let pw = d.plane_wave().expect("plane-wave drive")?;
                    let field = match t.character {
                        Character::Electric => pw.eps,
                        Character::Magnetic => beta_vector(pw.k_dir, pw.eps).map_err(CouplingError::from)?,
                    };
                    let g = plane_wave_coupling(t.rank, delta_m, pw.k_dir, field)?;
                    Ok((g * phase, 1.0, d.amplitude))
                }
                DriveKind::Beam { mode, w0, .. } => {
                    let spec = d.beam_spec(t.omega).expect("beam drive");
                    let q = QuadratureOptions {
                        tolerance: opts.tolerance,
                        reproject_polarization: opts.reproject_polarization,
                        character: t.character,
                    };
                    let n = beam_coupling_integral_with(&spec, t.rank, delta_m, &q)?.value;
                    let gouy = gouy_correction(t.rank, mode, spec.k_mag, *w0)?.factor;
                    Ok((n * phase, gouy, d.amplitude))
                }
            }
        })
        .collect()
}

/// Amplitude-weighted geometric factor Σ_i (E0_i/ΣE0) g_i e^{iφ_i}.
fn coupling_value(s: &Scenario, delta_m: i32, opts: &RunOptions) -> Result<Complex64, Failure> {
    let f = drive_factors(s, delta_m, opts)?;
    let total: f64 = f.iter().map(|x| x.2).sum();
    let n = f.len() as f64;
    Ok(f.iter()
        .map(|&(g, _, a)| g * if total > 0.0 { a / total } else { 1.0 / n })
        .sum())
}

/// Coherent sum of single-drive Rabi frequencies, Gouy factors applied to beams.
fn rabi_value(s: &Scenario, opts: &RunOptions) -> Result<Complex64, Failure> {
    let f = drive_factors(s, s.transition.component(), opts)?;
    f.iter().try_fold(Complex64::new(0.0, 0.0), |acc, &(g, gouy, a)| {
        Ok(acc + rabi_frequency(&s.transition, g * gouy, a)?)
    })
}

fn selectivity_value(s: &Scenario, opts: &RunOptions) -> Result<f64, Failure> {
    let k = s.transition.rank as i32;
    let target = s.transition.component();
    (-k..=k)
        .filter(|&p| p != target)
        .map(|p| coupling_value(s, p, opts).map(|c| c.norm()))
        .sum()
}

fn quantity_value(s: &Scenario, q: Quantity, opts: &RunOptions) -> Result<Cell, Failure> {
    Ok(match q {
        Quantity::Rabi => Cell::Complex(rabi_value(s, opts)?),
        Quantity::Coupling => Cell::Complex(coupling_value(s, s.transition.component(), opts)?),
        Quantity::Selectivity => Cell::Real(selectivity_value(s, opts)?),
    })
}

fn magnitude(c: &Cell) -> f64 {
    match c {
        Cell::Complex(z) => z.norm(),
        Cell::Real(x) => x.abs(),
        _ => f64::NAN,
    }
}

fn base_metadata(t: &mut ResultTable, kind: &str, opts: &RunOptions) {
    t.metadata.insert("kind".into(), kind.into());
    t.metadata.insert("constants".into(), "CODATA 2018".into());
    t.metadata.insert("quadrature_tolerance".into(), format!("{:e}", opts.tolerance));
    t.metadata.insert("reproject_polarization".into(), opts.reproject_polarization.to_string());
    t.metadata.insert("tool_version".into(), env!("CARGO_PKG_VERSION").into());
}

/// Table for output request `index`.
pub fn run_output(s: &Scenario, index: usize, opts: &RunOptions) -> Result<ResultTable, ScenarioError> {
    let request = &s.outputs[index];
    let kind = request.kind();
    let fail = |e: Failure| e.attach(index, kind);
    let mut table = match request {
        OutputRequest::Rabi => {
            let mut t = ResultTable::new(&["rabi", "rabi_abs"]);
            let r = rabi_value(s, opts).map_err(fail)?;
            t.push(vec![Cell::Complex(r), Cell::Real(r.norm())]);
            t
        }
        OutputRequest::Coupling => {
            let mut t = ResultTable::new(&["delta_m", "coupling", "coupling_abs"]);
            let dm = s.transition.component();
            let c = coupling_value(s, dm, opts).map_err(fail)?;
            t.push(vec![Cell::Int(dm.into()), Cell::Complex(c), Cell::Real(c.norm())]);
            t
        }
        OutputRequest::Selectivity => {
            let mut t = ResultTable::new(&["selectivity"]);
            t.push(vec![Cell::Real(selectivity_value(s, opts).map_err(fail)?)]);
            t
        }
        OutputRequest::Scan {
            parameter,
            start,
            stop,
            steps,
            quantity,
        } => {
            let mut t = ResultTable::new(&["output", "point", "parameter", "parameter_value", "quantity", "value", "magnitude"]);
            let rows: Vec<Result<Vec<Cell>, Failure>> = (0..=*steps)
                .into_par_iter()
                .map(|j| {
                    let v = start + (stop - start) * j as f64 / *steps as f64;
                    let point = s
                        .with_parameter(parameter, v)
                        .map_err(|m| Failure::Parameter(parameter.path.clone(), m))?;
                    let value = quantity_value(&point, *quantity, opts)?;
                    let mag = magnitude(&value);
                    Ok(vec![
                        Cell::Int(index as i64),
                        Cell::Int(j as i64),
                        Cell::Text(parameter.path.clone()),
                        Cell::Real(v),
                        Cell::Text(quantity.name().into()),
                        value,
                        Cell::Real(mag),
                    ])
                })
                .collect();
            for r in rows {
                t.push(r.map_err(fail)?);
            }
            t.metadata.insert("parameter".into(), parameter.path.clone());
            t.metadata.insert("quantity".into(), quantity.name().into());
            t
        }
        OutputRequest::VshGrid {
            rank,
            p,
            kind: vsh_kind,
            n_theta,
            n_phi,
        } => {
            let mut t = ResultTable::new(&["theta", "phi", "x", "y", "z", "W"]);
            for g in vsh_grid(*rank as i32, *p, *vsh_kind, *n_theta, *n_phi) {
                t.push(vec![
                    Cell::Real(g.dir.theta()),
                    Cell::Real(g.dir.phi()),
                    Cell::Complex(g.value.x),
                    Cell::Complex(g.value.y),
                    Cell::Complex(g.value.z),
                    Cell::Real(g.w),
                ]);
            }
            t.metadata.insert("rank".into(), rank.to_string());
            t.metadata.insert("p".into(), p.to_string());
            t.metadata.insert("lambda".into(), vsh_kind.lambda().to_string());
            t
        }
        OutputRequest::Optimize { objective } => {
            let dm = s.transition.component();
            let g = optimize_geometry(s.transition.rank, dm, *objective)
                .map_err(|e| fail(Failure::Coupling(e)))?;
            let mut t = ResultTable::new(&[
                "delta_m", "theta_k", "phi_k", "jones_x", "jones_y", "coupling", "coupling_abs", "selectivity",
            ]);
            t.push(vec![
                Cell::Int(dm.into()),
                Cell::Real(g.k_dir.theta()),
                Cell::Real(g.k_dir.phi()),
                Cell::Complex(g.jones.jx),
                Cell::Complex(g.jones.jy),
                Cell::Complex(g.coupling),
                Cell::Real(g.coupling.norm()),
                Cell::Real(g.selectivity),
            ]);
            t.metadata.insert("objective".into(), format!("{objective:?}"));
            t
        }
    };
    base_metadata(&mut table, kind, opts);
    Ok(table)
}

/// One table per output request, in request order.
pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> Result<Vec<ResultTable>, ScenarioError> {
    (0..s.outputs.len()).map(|i| run_output(s, i, opts)).collect()
}
