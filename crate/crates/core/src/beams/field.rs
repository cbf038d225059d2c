//! Real-space paraxial fields away from the waist and the Gouy correction to
//! the coupling.

use num_complex::Complex64;

use super::profile::waist_profile;
use super::{BeamError, BeamMode, BeamSpec};
use crate::coupling::constants::SPEED_OF_LIGHT;
use crate::frames::{helicity_frame, CVec3};
use crate::polarization::jones_to_cvec;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GouyCorrection {
    /// Gouy order of the mode (0 for a plane wave).
    pub mu: u32,
    /// 1 − 2μ(K−1)/(k w0)².
    pub factor: f64,
}

/// Leading-order Gouy-phase factor for a rank-K coupling. Vector modes are
/// accepted when every term shares one Gouy order.
pub fn gouy_correction(rank: u32, mode: &BeamMode, k_mag: f64, w0: f64) -> Result<GouyCorrection, BeamError> {
    let mu = match mode {
        BeamMode::Vector(terms) => {
            let mut orders = terms.iter().filter_map(|t| t.mode.gouy_order());
            let first = orders.next().ok_or(BeamError::EmptyVectorMode)?;
            if orders.any(|m| m != first) {
                return Err(BeamError::MixedGouyOrders);
            }
            first
        }
        scalar => scalar.gouy_order().expect("scalar modes have a Gouy order"),
    };
    let kw0 = k_mag * w0;
    let factor = if mu == 0 || rank <= 1 {
        1.0
    } else {
        1.0 - 2.0 * f64::from(mu) * f64::from(rank - 1) / (kw0 * kw0)
    };
    Ok(GouyCorrection { mu, factor })
}

/// z_R = k w0²/2.
pub fn rayleigh_range(k_mag: f64, w0: f64) -> f64 {
    0.5 * k_mag * w0 * w0
}

/// w(z) = w0 √(1 + (z/z_R)²).
pub fn waist_radius(k_mag: f64, w0: f64, z: f64) -> f64 {
    w0 * (1.0 + (z / rayleigh_range(k_mag, w0)).powi(2)).sqrt()
}

/// R(z) = z + z_R²/z; infinite at the waist.
pub fn curvature_radius(k_mag: f64, w0: f64, z: f64) -> f64 {
    if z == 0.0 {
        return f64::INFINITY;
    }
    z + rayleigh_range(k_mag, w0).powi(2) / z
}

/// μ·arctan(z/z_R).
pub fn gouy_phase(mu: u32, k_mag: f64, w0: f64, z: f64) -> f64 {
    f64::from(mu) * (z / rayleigh_range(k_mag, w0)).atan()
}

/// Complex envelope of a centred scalar mode at beam coordinates (x', y', z').
fn envelope(mode: &BeamMode, k: f64, w0: f64, x: f64, y: f64, z: f64) -> Complex64 {
    if let BeamMode::PlaneWave = mode {
        return Complex64::new(1.0, 0.0);
    }
    let zr = rayleigh_range(k, w0);
    let w = waist_radius(k, w0, z);
    let inv_r = z / (z * z + zr * zr);
    let mu = mode.gouy_order().expect("scalar mode");
    let phase = 0.5 * k * (x * x + y * y) * inv_r - gouy_phase(mu, k, w0, z);
    waist_profile(mode, w, [x, y]) * (w0 / w) * Complex64::from_polar(1.0, phase)
}

/// Re[E0 Σ ε_i u_i(r) e^{i(k z' − ωt + φ)}] in V/m, with r in metres and t in
/// seconds; ω = c k.
pub fn beam_field(spec: &BeamSpec, r: [f64; 3], t: f64) -> Result<CVec3, BeamError> {
    spec.validate()?;
    let frame = helicity_frame(spec.k_dir);
    let proj = |v: CVec3| v.x.re * r[0] + v.y.re * r[1] + v.z.re * r[2];
    let x = proj(frame.e_xp) - spec.offset[0];
    let y = proj(frame.e_yp) - spec.offset[1];
    let z = proj(frame.e_zero);
    let k = spec.k_mag;
    let carrier = spec.complex_amplitude() * Complex64::from_polar(1.0, k * z - SPEED_OF_LIGHT * k * t);
    let total = spec
        .mode
        .terms(spec.jones)
        .into_iter()
        .fold(CVec3::ZERO, |acc, (j, mode)| {
            acc + jones_to_cvec(j, &frame) * envelope(mode, k, spec.w0, x, y, z)
        })
        * carrier;
    Ok(CVec3::real([total.x.re, total.y.re, total.z.re]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::SphDirection;
    use crate::polarization::JonesVector;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn spec(mode: BeamMode) -> BeamSpec {
        BeamSpec {
            mode,
            w0: 2e-6,
            k_mag: 2.0 * PI / 800e-9,
            k_dir: SphDirection::new(1.0, 0.4).unwrap(),
            jones: JonesVector::real(0.6, 0.8),
            offset: [0.0, 0.0],
            amplitude: 3.0,
            phase: 0.0,
        }
    }

    #[test]
    fn gouy_examples() {
        let kw = 150.0;
        let g = |k, mode: BeamMode| gouy_correction(k, &mode, kw, 1.0).unwrap();
        for mode in [BeamMode::gaussian(), BeamMode::LaguerreGauss { n: 2, l: 3 }, BeamMode::HermiteGauss { m: 1, n: 3 }] {
            assert_eq!(g(1, mode).factor, 1.0);
        }
        assert_eq!(g(2, BeamMode::gaussian()), GouyCorrection { mu: 1, factor: 1.0 - 2.0 / (kw * kw) });
        let lg = g(3, BeamMode::LaguerreGauss { n: 1, l: 2 });
        assert_eq!(lg.mu, 5);
        assert!((lg.factor - (1.0 - 20.0 / (kw * kw))).abs() < 1e-16);
        assert_eq!(g(4, BeamMode::PlaneWave).factor, 1.0);
        assert_eq!(g(2, BeamMode::radial_donut()).mu, 2);
        let mixed = BeamMode::Vector(vec![
            super::super::VectorTerm { polarization: JonesVector::real(0.6, 0.0), mode: BeamMode::gaussian() },
            super::super::VectorTerm { polarization: JonesVector::real(0.0, 0.8), mode: BeamMode::HermiteGauss { m: 1, n: 0 } },
        ]);
        assert_eq!(gouy_correction(2, &mixed, kw, 1.0), Err(BeamError::MixedGouyOrders));
    }

    #[test]
    fn gaussian_at_origin_is_polarization() {
        let s = spec(BeamMode::gaussian());
        let e = beam_field(&s, [0.0; 3], 0.0).unwrap();
        let want = s.polarization() * s.amplitude;
        assert!(e.max_abs_diff(CVec3::real([want.x.re, want.y.re, want.z.re])) < 1e-15);
    }

    #[test]
    fn waist_and_gouy_limits() {
        let (k, w0) = (2.0 * PI / 1e-6, 3e-6);
        let lambda = 2.0 * PI / k;
        for z in [0.0, 1e-5, -4e-5, 2e-3] {
            let want = w0 * (1.0 + (lambda * z / (PI * w0 * w0)).powi(2)).sqrt();
            assert!((waist_radius(k, w0, z) - want).abs() < 1e-15 * want.max(1e-6) * 10.0);
        }
        assert!((gouy_phase(3, k, w0, 1e9) - 3.0 * FRAC_PI_2).abs() < 1e-6);
        assert_eq!(curvature_radius(k, w0, 0.0), f64::INFINITY);
        let zr = rayleigh_range(k, w0);
        assert!((curvature_radius(k, w0, zr) - 2.0 * zr).abs() < 1e-12 * zr);
    }

    #[test]
    fn field_is_transverse_and_propagates() {
        let s = spec(BeamMode::LaguerreGauss { n: 1, l: -2 });
        let khat = s.k_dir.unit_vector();
        let frame = helicity_frame(s.k_dir);
        let zr = rayleigh_range(s.k_mag, s.w0);
        let point = |x: f64, z: f64| {
            let e = frame.e_xp;
            [e.x.re * x + khat[0] * z, e.y.re * x + khat[1] * z, e.z.re * x + khat[2] * z]
        };
        let e = beam_field(&s, point(1.3e-6, 0.7 * zr), 1e-16).unwrap();
        let along: f64 = (0..3).map(|i| e.to_array()[i].re * khat[i]).sum();
        assert!(along.abs() < 1e-12 * e.norm());
        // Intensity on axis falls as (w0/w)² for a Gaussian.
        let g = spec(BeamMode::gaussian());
        let peak = |z: f64| {
            let period = 2.0 * PI / (SPEED_OF_LIGHT * g.k_mag);
            (0..64)
                .map(|i| beam_field(&g, point(0.0, z), period * f64::from(i) / 64.0).unwrap().norm_sqr())
                .sum::<f64>()
                / 32.0
        };
        let ratio = peak(zr) / peak(0.0);
        assert!((ratio - 0.5).abs() < 1e-12);
    }

    #[test]
    fn offset_moves_the_axis() {
        let mut s = spec(BeamMode::gaussian());
        s.offset = [1e-6, -5e-7];
        let frame = helicity_frame(s.k_dir);
        let c = frame.e_xp * s.offset[0] + frame.e_yp * s.offset[1];
        let e = beam_field(&s, [c.x.re, c.y.re, c.z.re], 0.0).unwrap();
        assert!((e.norm() - s.amplitude).abs() < 1e-12);
    }
}
