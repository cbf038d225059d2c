//! Jones vectors in the helicity frame, wave plates, and the magnetic
//! polarization β̂ = k̂ × ε̂.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use thiserror::Error;

use crate::angular::SphDirection;
use crate::frames::{CVec3, HelicityFrame};

/// Transversality and unit-norm tolerance on user polarizations.
pub const TRANSVERSE_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum PolarizationError {
    #[error("polarization has a longitudinal component |ε·k̂| = {0:e}")]
    NotTransverse(f64),
    #[error("polarization norm {0} is not 1")]
    NotUnit(f64),
    #[error("zero Jones vector cannot be normalized")]
    ZeroJones,
}

/// Components (ε·ϑ̂, ε·φ̂) of a polarization along the helicity frame's x', y'.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JonesVector {
    pub jx: Complex64,
    pub jy: Complex64,
}

impl JonesVector {
    pub const fn new(jx: Complex64, jy: Complex64) -> Self {
        JonesVector { jx, jy }
    }

    pub fn real(jx: f64, jy: f64) -> Self {
        JonesVector::new(jx.into(), jy.into())
    }

    /// Linear polarization along ϑ̂.
    pub fn theta_hat() -> Self {
        JonesVector::real(1.0, 0.0)
    }

    /// Linear polarization along φ̂.
    pub fn phi_hat() -> Self {
        JonesVector::real(0.0, 1.0)
    }

    /// Left circular, positive helicity: ε'_{-1} = 1.
    pub fn lcp() -> Self {
        JonesVector::new(FRAC_1_SQRT_2.into(), Complex64::new(0.0, FRAC_1_SQRT_2))
    }

    /// Right circular, negative helicity: ε'_{+1} = 1.
    pub fn rcp() -> Self {
        JonesVector::new(FRAC_1_SQRT_2.into(), Complex64::new(0.0, -FRAC_1_SQRT_2))
    }

    /// Linear polarization at angle `a` from ϑ̂ toward φ̂.
    pub fn linear(a: f64) -> Self {
        JonesVector::real(a.cos(), a.sin())
    }

    /// From helicity components: J = (−ε'_{+1} + ε'_{−1}, iε'_{+1} + iε'_{−1})/√2.
    pub fn from_circular(plus: Complex64, minus: Complex64) -> Self {
        let i = Complex64::i();
        JonesVector::new((minus - plus) * FRAC_1_SQRT_2, (plus + minus) * i * FRAC_1_SQRT_2)
    }

    /// Helicity components (ε'_{+1}, ε'_{−1}).
    pub fn to_circular(self) -> (Complex64, Complex64) {
        let i = Complex64::i();
        (
            -(self.jx + i * self.jy) * FRAC_1_SQRT_2,
            (self.jx - i * self.jy) * FRAC_1_SQRT_2,
        )
    }

    pub fn norm_sqr(self) -> f64 {
        self.jx.norm_sqr() + self.jy.norm_sqr()
    }

    pub fn normalized(self) -> Result<Self, PolarizationError> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(PolarizationError::ZeroJones);
        }
        Ok(JonesVector::new(self.jx / n, self.jy / n))
    }

    pub fn scale(self, s: Complex64) -> Self {
        JonesVector::new(self.jx * s, self.jy * s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WavePlateKind {
    Half,
    Quarter,
}

/// Wave plate with its fast axis rotated about +k̂ by `fast_axis_angle` from φ̂.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WavePlate {
    pub kind: WavePlateKind,
    pub fast_axis_angle: f64,
}

impl WavePlate {
    pub fn half(angle: f64) -> Self {
        WavePlate {
            kind: WavePlateKind::Half,
            fast_axis_angle: angle,
        }
    }

    pub fn quarter(angle: f64) -> Self {
        WavePlate {
            kind: WavePlateKind::Quarter,
            fast_axis_angle: angle,
        }
    }

    /// Jones matrix with global phase dropped.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let t = self.fast_axis_angle;
        let i = Complex64::i();
        match self.kind {
            WavePlateKind::Half => {
                let (s2, c2) = (2.0 * t).sin_cos();
                [[c2.into(), s2.into()], [s2.into(), (-c2).into()]]
            }
            WavePlateKind::Quarter => {
                let (s, c) = t.sin_cos();
                let off = (1.0 + i) * c * s;
                [[c * c - i * s * s, off], [off, s * s - i * c * c]]
            }
        }
    }
}

pub fn apply_waveplate(j: JonesVector, plate: WavePlate) -> JonesVector {
    let m = plate.matrix();
    JonesVector::new(
        m[0][0] * j.jx + m[0][1] * j.jy,
        m[1][0] * j.jx + m[1][1] * j.jy,
    )
}

/// ε = J_x ϑ̂ + J_y φ̂ in the quantization frame.
pub fn jones_to_cvec(j: JonesVector, frame: &HelicityFrame) -> CVec3 {
    frame.e_xp * j.jx + frame.e_yp * j.jy
}

fn check_transverse_unit(eps: CVec3, khat: CVec3) -> Result<(), PolarizationError> {
    let long = eps.dot(khat).norm();
    if long > TRANSVERSE_TOL {
        return Err(PolarizationError::NotTransverse(long));
    }
    let n = eps.norm();
    if (n - 1.0).abs() > TRANSVERSE_TOL {
        return Err(PolarizationError::NotUnit(n));
    }
    Ok(())
}

/// Bilinear projections (ε·ϑ̂, ε·φ̂); fails unless ε is a transverse unit vector.
pub fn cvec_to_jones(eps: CVec3, frame: &HelicityFrame) -> Result<JonesVector, PolarizationError> {
    check_transverse_unit(eps, frame.e_zero)?;
    Ok(JonesVector::new(eps.dot(frame.e_xp), eps.dot(frame.e_yp)))
}

/// Helicity components (ε·e'_{+1}, ε·e'_{−1}).
pub fn circular_components(eps: CVec3, frame: &HelicityFrame) -> (Complex64, Complex64) {
    (eps.dot(frame.e_plus), eps.dot(frame.e_minus))
}

/// Magnetic polarization β̂ = k̂ × ε̂.
pub fn beta_vector(k_dir: SphDirection, eps: CVec3) -> Result<CVec3, PolarizationError> {
    let khat = CVec3::real(k_dir.unit_vector());
    check_transverse_unit(eps, khat)?;
    Ok(khat.cross(eps))
}
