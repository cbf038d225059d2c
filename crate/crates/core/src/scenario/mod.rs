//! Scenario files: a TOML description of a transition, its drives and the
//! requested outputs, evaluated into flat result tables.

mod emit;
mod parse;
mod run;
mod serialize;
mod table;

use thiserror::Error;

use crate::angular::SphDirection;
use crate::beams::{BeamError, BeamMode};
use crate::coupling::{CouplingError, Objective, TransitionSpec};
use crate::polarization::{JonesVector, WavePlate};
use crate::vsh::VshType;

pub use emit::{emit, emit_to_path, Format};
pub use parse::parse_scenario;
pub use run::{run_output, run_scenario, RunOptions};
pub use serialize::to_canonical_toml;
pub use table::{Cell, ResultTable};

/// Process exit codes used by the command-line front end.
pub mod exit_code {
    pub const SUCCESS: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const NOT_CONVERGED: i32 = 3;
    pub const INFEASIBLE: i32 = 4;
}

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("line {line}: {path}: {message}")]
    Parse { line: usize, path: String, message: String },
    #[error("output {index} ({kind}): {source}")]
    Beam {
        index: usize,
        kind: &'static str,
        #[source]
        source: BeamError,
    },
    #[error("output {index} ({kind}): {source}")]
    Coupling {
        index: usize,
        kind: &'static str,
        #[source]
        source: CouplingError,
    },
    #[error("writing {path}: {message}")]
    Io { path: String, message: String },
}

impl ScenarioError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Parse { .. } => exit_code::PARSE,
            ScenarioError::Beam {
                source: BeamError::NotConverged { .. },
                ..
            } => exit_code::NOT_CONVERGED,
            ScenarioError::Coupling {
                source: CouplingError::NotFound { .. },
                ..
            } => exit_code::INFEASIBLE,
            ScenarioError::Beam {
                source: BeamError::Coupling(CouplingError::NotFound { .. }),
                ..
            } => exit_code::INFEASIBLE,
            _ => exit_code::FAILURE,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DriveKind {
    PlaneWave,
    Beam {
        mode: BeamMode,
        /// Metres.
        w0: f64,
        /// (x', y') in metres.
        offset: [f64; 2],
    },
}

/// One laser drive. Beams take k = ω/c from the transition.
#[derive(Clone, Debug, PartialEq)]
pub struct Drive {
    pub kind: DriveKind,
    pub k_dir: SphDirection,
    /// Polarization before the optional wave plate.
    pub jones: JonesVector,
    pub waveplate: Option<WavePlate>,
    /// V/m.
    pub amplitude: f64,
    pub phase: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantity {
    Rabi,
    Coupling,
    Selectivity,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Rabi => "rabi",
            Quantity::Coupling => "coupling",
            Quantity::Selectivity => "selectivity",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitionField {
    Omega,
    EinsteinA,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DriveField {
    Theta,
    Phi,
    Amplitude,
    Phase,
    Waist,
    OffsetX,
    OffsetY,
    WaveplateAngle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanTarget {
    Transition(TransitionField),
    Drive { index: usize, field: DriveField },
}

/// Scanned parameter: `path` as written (for example `drive.0.theta_deg`),
/// its resolved target, and the factor from the path's unit to SI.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanParameter {
    pub path: String,
    pub target: ScanTarget,
    pub to_si: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum OutputRequest {
    Rabi,
    Coupling,
    Selectivity,
    /// `steps` intervals, so steps + 1 points from `start` to `stop` (path units).
    Scan {
        parameter: ScanParameter,
        start: f64,
        stop: f64,
        steps: usize,
        quantity: Quantity,
    },
    VshGrid {
        rank: u32,
        p: i32,
        kind: VshType,
        n_theta: usize,
        n_phi: usize,
    },
    Optimize { objective: Objective },
}

impl OutputRequest {
    pub fn kind(&self) -> &'static str {
        match self {
            OutputRequest::Rabi => "rabi",
            OutputRequest::Coupling => "coupling",
            OutputRequest::Selectivity => "selectivity",
            OutputRequest::Scan { .. } => "scan",
            OutputRequest::VshGrid { .. } => "vsh_grid",
            OutputRequest::Optimize { .. } => "optimize",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub transition: TransitionSpec,
    pub drives: Vec<Drive>,
    pub outputs: Vec<OutputRequest>,
}
