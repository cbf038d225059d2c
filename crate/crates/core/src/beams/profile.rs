//! Transverse mode profiles in the waist plane and their Fourier transforms.
//!
//! Fourier convention: ũ(k⊥) = (1/2π)∬ d²ρ e^{−ik⊥·ρ} u(ρ). With it the
//! transform is unitary and a centred Gaussian has (1/2π)∬ ũ d²k⊥ = u(0) = 1.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use super::{BeamError, BeamMode, BeamSpec};

/// Physicists' Hermite polynomial H_n(x).
pub fn hermite(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * f64::from(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial L_n^α(x).
pub fn laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + alpha - x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let k = f64::from(k);
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// (−i)^n.
fn neg_i_pow(n: u32) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// ũ(k⊥)/((w0²/2) e^{−k⊥²w0²/4}) for a centred scalar mode: the polynomial
/// part left after the Gaussian envelope is factored out.
pub(crate) fn reduced_transform(mode: &BeamMode, w0: f64, k_perp: [f64; 2]) -> Complex64 {
    let s = w0 / SQRT_2;
    match *mode {
        BeamMode::PlaneWave => Complex64::new(1.0, 0.0),
        BeamMode::HermiteGauss { m, n } => {
            neg_i_pow(m + n) * hermite(m, k_perp[0] * s) * hermite(n, k_perp[1] * s)
        }
        BeamMode::LaguerreGauss { n, l } => {
            let a = l.unsigned_abs();
            let kappa = k_perp[0].hypot(k_perp[1]);
            let x = kappa * s;
            let winding = Complex64::from_polar(1.0, f64::from(l) * k_perp[1].atan2(k_perp[0]));
            neg_i_pow(2 * n + a) * x.powi(a as i32) * laguerre(n, f64::from(a), x * x) * winding
        }
        BeamMode::Vector(_) => unreachable!("vector modes are expanded term by term"),
    }
}

/// e^{−ik⊥·ρ_offs}: the shift of the beam axis to ρ_offs in the transverse plane.
pub(crate) fn offset_phase(offset: [f64; 2], k_perp: [f64; 2]) -> Complex64 {
    Complex64::from_polar(1.0, -(k_perp[0] * offset[0] + k_perp[1] * offset[1]))
}

/// Transverse Fourier transform ũ(k⊥) of a scalar beam, k⊥ = (k_x', k_y') in rad/m.
pub fn fourier_profile(spec: &BeamSpec, k_perp: [f64; 2]) -> Result<Complex64, BeamError> {
    match spec.mode {
        BeamMode::Vector(_) => Err(BeamError::VectorModeNotScalar),
        BeamMode::PlaneWave => Err(BeamError::PlaneWaveHasNoProfile),
        ref mode => {
            let w = spec.w0;
            let envelope = 0.5 * w * w * (-0.25 * (k_perp[0].powi(2) + k_perp[1].powi(2)) * w * w).exp();
            Ok(reduced_transform(mode, w, k_perp) * offset_phase(spec.offset, k_perp) * envelope)
        }
    }
}

/// Waist-plane profile u(ρ) of a centred scalar mode; a Gaussian is 1 on axis.
pub(crate) fn waist_profile(mode: &BeamMode, w0: f64, rho: [f64; 2]) -> Complex64 {
    let s = SQRT_2 / w0;
    let r2 = (rho[0] * rho[0] + rho[1] * rho[1]) / (w0 * w0);
    let gauss = (-r2).exp();
    match *mode {
        BeamMode::PlaneWave => Complex64::new(1.0, 0.0),
        BeamMode::HermiteGauss { m, n } => {
            Complex64::new(hermite(m, rho[0] * s) * hermite(n, rho[1] * s) * gauss, 0.0)
        }
        BeamMode::LaguerreGauss { n, l } => {
            let a = l.unsigned_abs();
            let winding = Complex64::from_polar(1.0, f64::from(l) * rho[1].atan2(rho[0]));
            winding * (2.0 * r2).sqrt().powi(a as i32) * laguerre(n, f64::from(a), 2.0 * r2) * gauss
        }
        BeamMode::Vector(_) => unreachable!("vector modes are expanded term by term"),
    }
}

/// ∬|u|² d²ρ in closed form for a scalar Gaussian-family mode.
pub fn profile_power(mode: &BeamMode, w0: f64) -> Option<f64> {
    let base = 0.5 * PI * w0 * w0;
    match *mode {
        BeamMode::HermiteGauss { m, n } => {
            Some(base * 2f64.powi((m + n) as i32) * factorial(m) * factorial(n))
        }
        BeamMode::LaguerreGauss { n, l } => {
            Some(base * factorial(n + l.unsigned_abs()) / factorial(n))
        }
        BeamMode::PlaneWave | BeamMode::Vector(_) => None,
    }
}
