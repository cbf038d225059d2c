use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use super::exact::float_factorial;

#[derive(Debug, Error, PartialEq)]
pub enum DirectionError {
    #[error("polar angle {0} outside [0, pi]")]
    PolarOutOfRange(f64),
    #[error("non-finite angle")]
    NonFinite,
    #[error("zero-length direction vector")]
    ZeroVector,
}

/// Direction on the unit sphere, polar angle in [0, π], azimuth in [0, 2π).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphDirection {
    theta: f64,
    phi: f64,
}

impl SphDirection {
    /// Azimuth is reduced modulo 2π and set to zero at the poles; polar angles
    /// within 1e-12 of the range are clamped.
    pub fn new(theta: f64, phi: f64) -> Result<Self, DirectionError> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(DirectionError::NonFinite);
        }
        let theta = if (-1e-12..0.0).contains(&theta) {
            0.0
        } else if theta > PI && theta < PI + 1e-12 {
            PI
        } else {
            theta
        };
        if !(0.0..=PI).contains(&theta) {
            return Err(DirectionError::PolarOutOfRange(theta));
        }
        let mut phi = phi.rem_euclid(2.0 * PI);
        if phi >= 2.0 * PI || theta == 0.0 || theta == PI {
            phi = 0.0;
        }
        Ok(SphDirection { theta, phi })
    }

    pub fn from_cartesian(v: [f64; 3]) -> Result<Self, DirectionError> {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if r == 0.0 {
            return Err(DirectionError::ZeroVector);
        }
        if !r.is_finite() {
            return Err(DirectionError::NonFinite);
        }
        let theta = (v[2] / r).clamp(-1.0, 1.0).acos();
        let phi = v[1].atan2(v[0]);
        SphDirection::new(theta, phi)
    }

    pub const fn z_axis() -> Self {
        SphDirection { theta: 0.0, phi: 0.0 }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// True at θ = 0 or π, where the azimuth is gauge-fixed to zero.
    pub fn is_pole(&self) -> bool {
        self.theta == 0.0 || self.theta == PI
    }
}

/// Orthonormal associated Legendre values P̄_l^m(cos θ) for l = m..=lmax,
/// Condon–Shortley phase included, so that Y_lm = P̄_l^m e^{imφ}.
fn legendre_column(lmax: usize, m: usize, theta: f64) -> Vec<f64> {
    let (s, x) = theta.sin_cos();
    let mut out = vec![0.0; lmax + 1];
    if m > lmax {
        return out;
    }
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for i in 1..=m {
        let fi = i as f64;
        pmm *= -((2.0 * fi + 1.0) / (2.0 * fi)).sqrt() * s;
    }
    out[m] = pmm;
    if m == lmax {
        return out;
    }
    out[m + 1] = x * (2.0 * m as f64 + 3.0).sqrt() * pmm;
    let mf = m as f64;
    for l in (m + 2)..=lmax {
        let lf = l as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
        out[l] = a * (x * out[l - 1] - b * out[l - 2]);
    }
    out
}

/// Scalar spherical harmonic Y_{degree,order}(θ, φ), Condon–Shortley convention.
///
/// Returns zero for |order| > degree.
pub fn sph_harm(degree: i32, order: i32, dir: SphDirection) -> Complex64 {
    sph_harm_angles(degree, order, dir.theta, dir.phi)
}

/// As [`sph_harm`] with raw angles.
pub fn sph_harm_angles(degree: i32, order: i32, theta: f64, phi: f64) -> Complex64 {
    if degree < 0 || order.abs() > degree {
        return Complex64::new(0.0, 0.0);
    }
    let m = order.unsigned_abs() as usize;
    let p = legendre_column(degree as usize, m, theta)[degree as usize];
    let y = Complex64::from_polar(p, m as f64 * phi);
    if order < 0 {
        let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        y.conj() * sign
    } else {
        y
    }
}

/// Rotation-matrix element D^(K)_{σ,m}(0, θ, φ) for σ = ±1, built from scalar
/// spherical harmonics of rank K.
pub fn wigner_d_pm1(rank: i32, sigma: i32, m: i32, theta: f64, phi: f64) -> Complex64 {
    assert!(sigma == 1 || sigma == -1, "row index must be +1 or -1");
    if rank < 1 || m.abs() > rank {
        return Complex64::new(0.0, 0.0);
    }
    let k = f64::from(rank);
    let mf = f64::from(m);
    let s = f64::from(sigma);
    let (st, ct) = theta.sin_cos();
    let norm = (4.0 * PI / (k * (k + 1.0) * (2.0 * k + 1.0))).sqrt();
    let y = |q: i32| sph_harm_angles(rank, q, theta, phi);
    let up = 0.5 * ((k - mf) * (k + mf + 1.0)).sqrt() * (1.0 - s * ct);
    let down = 0.5 * ((k + mf) * (k - mf + 1.0)).sqrt() * (1.0 + s * ct);
    let e = Complex64::from_polar(1.0, phi);
    let bracket = y(-m - 1) * e * up - y(-m) * (s * mf * st) - y(-m + 1) * e.conj() * down;
    bracket * (-s * norm)
}

/// Same element from the explicit finite sum in powers of cos(θ/2), sin(θ/2).
pub fn wigner_d_pm1_closed(rank: i32, sigma: i32, m: i32, theta: f64, phi: f64) -> Complex64 {
    assert!(sigma == 1 || sigma == -1, "row index must be +1 or -1");
    if rank < 1 || m.abs() > rank {
        return Complex64::new(0.0, 0.0);
    }
    let (k, m, s) = (i64::from(rank), i64::from(m), i64::from(sigma));
    let (sh, ch) = (0.5 * theta).sin_cos();
    let f = float_factorial;
    let pre = (f(k + s) * f(k - s) * f(k + m) * f(k - m)).sqrt();
    let mut sum = 0.0;
    for j in 0..=2 * k {
        let args = [j, k - j - s, k - m - j, m + j + s];
        if args.iter().any(|&a| a < 0) {
            continue;
        }
        let den: f64 = args.iter().map(|&a| f(a)).product();
        let cos_pow = (m + s + 2 * j) as i32;
        let sin_pow = (2 * k - m - s - 2 * j) as i32;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * ch.powi(cos_pow) * sh.powi(sin_pow) / den;
    }
    let phase = if (k - m).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Complex64::from_polar(phase * pre * sum, -(m as f64) * phi)
}
