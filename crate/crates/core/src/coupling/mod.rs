//! Coupling strengths: multipole prefactors, Rabi frequencies from Einstein A
//! coefficients, coherent sums of plane waves, and geometry search.

pub mod constants;
mod drive;
mod optimize;
mod transition;

use thiserror::Error;

use crate::angular::HalfInt;
use crate::polarization::PolarizationError;

pub use drive::{
    couple, multi_beam_coupling, plane_wave_coupling, selectivity, suppression_phase,
    CouplingResult, PlaneWaveDrive,
};
pub use optimize::{optimize_geometry, Objective, OptimizedGeometry, OPTIMIZER_GRID};
pub use transition::{
    einstein_a_from_reduced, hyperfine_factor_exact, multipole_prefactor_radicands,
    multipole_prefactors, rabi_frequency, rabi_frequency_hyperfine, reduced_matrix_element_from_a,
    Character, Hyperfine, MultipolePrefactors, PrefactorRadicands, Sign, TransitionSpec,
};

#[derive(Debug, Error, PartialEq)]
pub enum CouplingError {
    #[error("multipole rank must be at least 1")]
    RankZero,
    #[error("angular momenta must be non-negative")]
    NegativeAngularMomentum,
    #[error("projection {m} is not allowed for angular momentum {j}")]
    ProjectionOutOfRange { m: HalfInt, j: HalfInt },
    #[error("Einstein A must be finite and non-negative, got {0}")]
    InvalidEinsteinA(f64),
    #[error("transition angular frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),
    #[error("s_J must be +1 or -1, got {0}")]
    InvalidSign(i32),
    #[error("nuclear spin {nuclear_spin} cannot couple to F_e = {f_e} and F_g = {f_g}")]
    InconsistentNuclearSpin {
        nuclear_spin: HalfInt,
        f_e: HalfInt,
        f_g: HalfInt,
    },
    #[error("|Δm| = {} exceeds rank {rank}", delta_m.abs())]
    DeltaMOutOfRange { delta_m: i32, rank: u32 },
    #[error("field amplitude must be finite and non-negative, got {0}")]
    InvalidAmplitude(f64),
    #[error("at least one drive is required")]
    NoDrives,
    #[error("no geometry with zero selectivity and finite coupling exists for K={rank}, Δm={delta_m}")]
    NotFound { rank: u32, delta_m: i32 },
    #[error(transparent)]
    Polarization(#[from] PolarizationError),
}
