//! Transverse vector spherical harmonics Y^(+1)_{K,p} and Y^(0)_{K,p}.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::angular::{sph_harm_angles, wigner_d_pm1, SphDirection};
use crate::frames::{CVec3, HelicityFrame};

/// Which of the two transverse harmonic families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VshType {
    /// λ = 0, the quadrature partner −i r̂ × Y^(+1).
    Zero,
    /// λ = +1, the far-field polarization pattern of a 2^K-pole.
    PlusOne,
}

impl VshType {
    pub fn lambda(self) -> i32 {
        match self {
            VshType::Zero => 0,
            VshType::PlusOne => 1,
        }
    }

    pub fn from_lambda(l: i32) -> Option<Self> {
        match l {
            0 => Some(VshType::Zero),
            1 => Some(VshType::PlusOne),
            _ => None,
        }
    }
}

/// A harmonic value split into magnitude and polarization direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VshValue {
    pub value: CVec3,
    /// W_{K,|p|}(θ), the squared Hermitian norm of `value`.
    pub magnitude_sq: f64,
    /// Unit vector along `value`, or zero where the harmonic vanishes.
    pub direction: CVec3,
}

const VANISHING_W: f64 = 1e-28;

impl VshValue {
    fn from_parts(value: CVec3, magnitude_sq: f64) -> Self {
        let n = value.norm();
        let direction = if magnitude_sq <= VANISHING_W || n == 0.0 {
            CVec3::ZERO
        } else {
            value * (1.0 / n)
        };
        VshValue {
            value,
            magnitude_sq,
            direction,
        }
    }
}

fn check_indices(rank: i32, p: i32) {
    assert!(rank >= 1, "rank must be at least 1, got {rank}");
    assert!(p.abs() <= rank, "|p| = {} exceeds rank {rank}", p.abs());
}

fn helicity_coefficients(rank: i32, p: i32, dir: SphDirection) -> (Complex64, Complex64) {
    let norm = ((2.0 * f64::from(rank) + 1.0) / (8.0 * PI)).sqrt();
    let (t, f) = (dir.theta(), dir.phi());
    (
        wigner_d_pm1(rank, -1, -p, t, f) * norm,
        wigner_d_pm1(rank, 1, -p, t, f) * norm,
    )
}

/// Y^(+1)_{K,p} at `dir` in quantization-frame Cartesian components.
pub fn vsh_plus1(rank: i32, p: i32, dir: SphDirection) -> VshValue {
    check_indices(rank, p);
    let frame = HelicityFrame::new(dir);
    let (a, b) = helicity_coefficients(rank, p, dir);
    let value = frame.e_plus * a + frame.e_minus * b;
    VshValue::from_parts(value, vsh_magnitude_w(rank, p, dir.theta()))
}

/// Y^(0)_{K,p} at `dir`, equal to −i k̂ × Y^(+1)_{K,p}.
pub fn vsh_zero(rank: i32, p: i32, dir: SphDirection) -> VshValue {
    check_indices(rank, p);
    let frame = HelicityFrame::new(dir);
    let (a, b) = helicity_coefficients(rank, p, dir);
    let value = frame.e_minus * b - frame.e_plus * a;
    VshValue::from_parts(value, vsh_magnitude_w(rank, p, dir.theta()))
}

pub fn vsh(kind: VshType, rank: i32, p: i32, dir: SphDirection) -> VshValue {
    match kind {
        VshType::Zero => vsh_zero(rank, p, dir),
        VshType::PlusOne => vsh_plus1(rank, p, dir),
    }
}

/// Angular power distribution W_{K,|p|}(θ) from three scalar harmonics.
pub fn vsh_magnitude_w(rank: i32, p: i32, theta: f64) -> f64 {
    check_indices(rank, p);
    let k = f64::from(rank);
    let pf = f64::from(p);
    let y2 = |q: i32| sph_harm_angles(rank, q, theta, 0.0).norm_sqr();
    let w = (k + pf) * (k - pf + 1.0) * y2(p - 1)
        + 2.0 * pf * pf * y2(p)
        + (k - pf) * (k + pf + 1.0) * y2(p + 1);
    w / (2.0 * k * (k + 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VshGridPoint {
    pub dir: SphDirection,
    pub value: CVec3,
    pub w: f64,
}

/// Row-major samples over θ_i = πi/(n_θ−1), φ_j = 2πj/n_φ.
pub fn vsh_grid(rank: i32, p: i32, kind: VshType, n_theta: usize, n_phi: usize) -> Vec<VshGridPoint> {
    assert!(n_theta >= 2 && n_phi >= 2, "grid needs at least 2 points per axis");
    check_indices(rank, p);
    (0..n_theta)
        .into_par_iter()
        .flat_map_iter(|i| {
            let theta = PI * i as f64 / (n_theta - 1) as f64;
            (0..n_phi).map(move |j| {
                let phi = 2.0 * PI * j as f64 / n_phi as f64;
                let dir = SphDirection::new(theta, phi).expect("grid angles in range");
                let v = vsh(kind, rank, p, dir);
                VshGridPoint {
                    dir,
                    value: v.value,
                    w: v.magnitude_sq,
                }
            })
        })
        .collect()
}
