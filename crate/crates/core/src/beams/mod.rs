//! Paraxial beams: Hermite– and Laguerre–Gauss modes, vector superpositions,
//! the Fourier-space coupling integral and real-space fields.

mod field;
mod integral;
mod profile;

use num_complex::Complex64;
use thiserror::Error;

use crate::angular::SphDirection;
use crate::coupling::CouplingError;
use crate::frames::{helicity_frame, CVec3};
use crate::polarization::{jones_to_cvec, JonesVector};

pub use field::{beam_field, curvature_radius, gouy_correction, gouy_phase, rayleigh_range, waist_radius, GouyCorrection};
pub use integral::{
    beam_coupling_integral, beam_coupling_integral_with, BeamCoupling, QuadratureOptions,
    DEFAULT_QUADRATURE_TOL,
};
pub use profile::{fourier_profile, hermite, laguerre, profile_power};

/// Hard lower bound on k·w0 for the paraxial description.
pub const MIN_KW0: f64 = 2.0;
/// Below this k·w0 the paraxial series are poor and a warning is raised.
pub const WARN_KW0: f64 = 10.0;
pub const MAX_HG_ORDER: u32 = 4;
pub const MAX_LG_AZIMUTHAL: u32 = 3;
pub const MAX_LG_RADIAL: u32 = 2;
const WEIGHT_NORM_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum BeamError {
    #[error("beam waist must be positive and finite, got {0} m")]
    InvalidWaist(f64),
    #[error("wavenumber must be positive and finite, got {0} rad/m")]
    InvalidWavenumber(f64),
    #[error("k·w0 = {0} is below the paraxial limit {MIN_KW0}")]
    NotParaxial(f64),
    #[error("unsupported mode {0}")]
    UnsupportedMode(String),
    #[error("vector mode needs at least one term")]
    EmptyVectorMode,
    #[error("vector-mode terms must be scalar modes")]
    NestedVectorMode,
    #[error("vector-mode weights have total norm² {0}, expected 1")]
    VectorWeightsNotUnit(f64),
    #[error("jones vector has norm² {0}, expected 1")]
    JonesNotUnit(f64),
    #[error("operation needs a scalar mode, got a vector mode")]
    VectorModeNotScalar,
    #[error("plane waves have no transverse profile")]
    PlaneWaveHasNoProfile,
    #[error("vector-mode terms have different Gouy orders")]
    MixedGouyOrders,
    #[error("offset and amplitude must be finite")]
    NonFinite,
    #[error("quadrature did not converge: relative change {achieved:e} with {nodes} radial nodes")]
    NotConverged { achieved: f64, nodes: usize },
    #[error(transparent)]
    Coupling(#[from] CouplingError),
}

/// One polarization-weighted scalar term of a vector beam.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorTerm {
    pub polarization: JonesVector,
    pub mode: BeamMode,
}

#[derive(Clone, Debug, PartialEq)]
pub enum BeamMode {
    PlaneWave,
    HermiteGauss { m: u32, n: u32 },
    LaguerreGauss { n: u32, l: i32 },
    /// Σ_i J_i u_i with Σ_i ‖J_i‖² = 1. The beam's own jones vector is unused.
    Vector(Vec<VectorTerm>),
}

impl BeamMode {
    pub fn gaussian() -> Self {
        BeamMode::HermiteGauss { m: 0, n: 0 }
    }

    /// Radially polarized donut (x̂ HG₁₀ + ŷ HG₀₁)/√2 in the helicity frame.
    pub fn radial_donut() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        BeamMode::Vector(vec![
            VectorTerm {
                polarization: JonesVector::real(s, 0.0),
                mode: BeamMode::HermiteGauss { m: 1, n: 0 },
            },
            VectorTerm {
                polarization: JonesVector::real(0.0, s),
                mode: BeamMode::HermiteGauss { m: 0, n: 1 },
            },
        ])
    }

    pub fn is_scalar(&self) -> bool {
        !matches!(self, BeamMode::Vector(_))
    }

    /// Gouy order μ: m+n+1 for HG, 2n+|ℓ|+1 for LG, 0 for a plane wave.
    pub fn gouy_order(&self) -> Option<u32> {
        match *self {
            BeamMode::PlaneWave => Some(0),
            BeamMode::HermiteGauss { m, n } => Some(m + n + 1),
            BeamMode::LaguerreGauss { n, l } => Some(2 * n + l.unsigned_abs() + 1),
            BeamMode::Vector(_) => None,
        }
    }

    fn validate_scalar(&self) -> Result<(), BeamError> {
        match *self {
            BeamMode::HermiteGauss { m, n } if m + n > MAX_HG_ORDER => Err(BeamError::UnsupportedMode(
                format!("HG{m}{n}: m+n must not exceed {MAX_HG_ORDER}"),
            )),
            BeamMode::LaguerreGauss { n, l }
                if n > MAX_LG_RADIAL || l.unsigned_abs() > MAX_LG_AZIMUTHAL =>
            {
                Err(BeamError::UnsupportedMode(format!(
                    "LG{n},{l}: need n ≤ {MAX_LG_RADIAL} and |ℓ| ≤ {MAX_LG_AZIMUTHAL}"
                )))
            }
            BeamMode::Vector(_) => Err(BeamError::NestedVectorMode),
            _ => Ok(()),
        }
    }

    pub fn validate(&self) -> Result<(), BeamError> {
        match self {
            BeamMode::Vector(terms) => {
                if terms.is_empty() {
                    return Err(BeamError::EmptyVectorMode);
                }
                for t in terms {
                    t.mode.validate_scalar()?;
                }
                let total: f64 = terms.iter().map(|t| t.polarization.norm_sqr()).sum();
                if (total - 1.0).abs() > WEIGHT_NORM_TOL {
                    return Err(BeamError::VectorWeightsNotUnit(total));
                }
                Ok(())
            }
            scalar => scalar.validate_scalar(),
        }
    }

    /// (polarization, scalar mode) pairs; a scalar mode pairs with `jones`.
    pub(crate) fn terms(&self, jones: JonesVector) -> Vec<(JonesVector, &BeamMode)> {
        match self {
            BeamMode::Vector(terms) => terms.iter().map(|t| (t.polarization, &t.mode)).collect(),
            scalar => vec![(jones, scalar)],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BeamSpec {
    pub mode: BeamMode,
    /// 1/e² intensity radius at the waist, metres.
    pub w0: f64,
    /// Wavenumber k = ω/c, rad/m.
    pub k_mag: f64,
    pub k_dir: SphDirection,
    pub jones: JonesVector,
    /// Beam-axis position (x', y') in the helicity frame relative to the atom, metres.
    pub offset: [f64; 2],
    /// E0 in V/m.
    pub amplitude: f64,
    pub phase: f64,
}

/// Raised when k·w0 lies between the hard limit and [`WARN_KW0`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParaxialWarning {
    pub kw0: f64,
}

impl std::fmt::Display for ParaxialWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "k·w0 = {} is below {WARN_KW0}; paraxial corrections may be inaccurate", self.kw0)
    }
}

impl BeamSpec {
    /// Gaussian beam with a unit Jones vector, no offset, unit amplitude and zero phase.
    pub fn gaussian(w0: f64, k_mag: f64, k_dir: SphDirection, jones: JonesVector) -> Self {
        BeamSpec {
            mode: BeamMode::gaussian(),
            w0,
            k_mag,
            k_dir,
            jones,
            offset: [0.0, 0.0],
            amplitude: 1.0,
            phase: 0.0,
        }
    }

    pub fn kw0(&self) -> f64 {
        self.k_mag * self.w0
    }

    pub fn validate(&self) -> Result<(), BeamError> {
        if !(self.k_mag > 0.0 && self.k_mag.is_finite()) {
            return Err(BeamError::InvalidWavenumber(self.k_mag));
        }
        if !matches!(self.mode, BeamMode::PlaneWave) {
            if !(self.w0 > 0.0 && self.w0.is_finite()) {
                return Err(BeamError::InvalidWaist(self.w0));
            }
            if self.kw0() <= MIN_KW0 {
                return Err(BeamError::NotParaxial(self.kw0()));
            }
        }
        if !(self.offset.iter().all(|x| x.is_finite()) && self.amplitude.is_finite() && self.phase.is_finite()) {
            return Err(BeamError::NonFinite);
        }
        if self.amplitude < 0.0 {
            return Err(CouplingError::InvalidAmplitude(self.amplitude).into());
        }
        if self.mode.is_scalar() && (self.jones.norm_sqr() - 1.0).abs() > WEIGHT_NORM_TOL {
            return Err(BeamError::JonesNotUnit(self.jones.norm_sqr()));
        }
        self.mode.validate()
    }

    pub fn paraxial_warning(&self) -> Option<ParaxialWarning> {
        let kw0 = self.kw0();
        (!matches!(self.mode, BeamMode::PlaneWave) && kw0 < WARN_KW0).then_some(ParaxialWarning { kw0 })
    }

    /// Polarization vector of the beam axis in the quantization frame (scalar modes).
    pub fn polarization(&self) -> CVec3 {
        jones_to_cvec(self.jones, &helicity_frame(self.k_dir))
    }

    /// E0 e^{iφ}: the factor that multiplies the coupling integral.
    pub fn complex_amplitude(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.phase)
    }
}
