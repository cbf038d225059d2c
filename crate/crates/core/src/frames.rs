//! Complex 3-vectors, the spherical basis of the quantization frame, and the
//! helicity frame attached to a propagation direction.

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::angular::SphDirection;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Complex vector in quantization-frame Cartesian components.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct CVec3 {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl CVec3 {
    pub const ZERO: CVec3 = CVec3 {
        x: Complex64 { re: 0.0, im: 0.0 },
        y: Complex64 { re: 0.0, im: 0.0 },
        z: Complex64 { re: 0.0, im: 0.0 },
    };

    pub const fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        CVec3 { x, y, z }
    }

    pub fn real(v: [f64; 3]) -> Self {
        CVec3::new(v[0].into(), v[1].into(), v[2].into())
    }

    pub fn x_hat() -> Self {
        CVec3::real([1.0, 0.0, 0.0])
    }

    pub fn y_hat() -> Self {
        CVec3::real([0.0, 1.0, 0.0])
    }

    pub fn z_hat() -> Self {
        CVec3::real([0.0, 0.0, 1.0])
    }

    pub fn to_array(self) -> [Complex64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [Complex64; 3]) -> Self {
        CVec3::new(a[0], a[1], a[2])
    }

    pub fn conj(self) -> Self {
        CVec3::new(self.x.conj(), self.y.conj(), self.z.conj())
    }

    /// Bilinear product Σ a_i b_i (no conjugation).
    pub fn dot(self, rhs: CVec3) -> Complex64 {
        self.x * rhs.x + self.y * rhs.y + self.z * rhs.z
    }

    /// Hermitian product Σ a_i* b_i.
    pub fn hdot(self, rhs: CVec3) -> Complex64 {
        self.conj().dot(rhs)
    }

    /// Componentwise complex cross product.
    pub fn cross(self, rhs: CVec3) -> CVec3 {
        CVec3::new(
            self.y * rhs.z - self.z * rhs.y,
            self.z * rhs.x - self.x * rhs.z,
            self.x * rhs.y - self.y * rhs.x,
        )
    }

    pub fn norm_sqr(self) -> f64 {
        self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()
    }

    /// Hermitian norm √(v*·v).
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: Complex64) -> CVec3 {
        CVec3::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn max_abs_diff(self, rhs: CVec3) -> f64 {
        let d = self - rhs;
        d.x.norm().max(d.y.norm()).max(d.z.norm())
    }
}

impl Add for CVec3 {
    type Output = CVec3;
    fn add(self, r: CVec3) -> CVec3 {
        CVec3::new(self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl AddAssign for CVec3 {
    fn add_assign(&mut self, r: CVec3) {
        *self = *self + r;
    }
}

impl Sub for CVec3 {
    type Output = CVec3;
    fn sub(self, r: CVec3) -> CVec3 {
        CVec3::new(self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl Neg for CVec3 {
    type Output = CVec3;
    fn neg(self) -> CVec3 {
        CVec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<Complex64> for CVec3 {
    type Output = CVec3;
    fn mul(self, s: Complex64) -> CVec3 {
        self.scale(s)
    }
}

impl Mul<f64> for CVec3 {
    type Output = CVec3;
    fn mul(self, s: f64) -> CVec3 {
        CVec3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Bilinear (unconjugated) dot product.
pub fn bilinear_dot(a: CVec3, b: CVec3) -> Complex64 {
    a.dot(b)
}

/// Quantization-frame spherical unit vector ê_q for q ∈ {+1, 0, -1}.
pub fn spherical_unit(q: i32) -> CVec3 {
    let s = FRAC_1_SQRT_2;
    match q {
        1 => CVec3::new((-s).into(), -I * s, 0.0.into()),
        0 => CVec3::z_hat(),
        -1 => CVec3::new(s.into(), -I * s, 0.0.into()),
        _ => panic!("spherical index {q} not in {{-1, 0, 1}}"),
    }
}

/// Components A_q = A·ê_q in the order (+1, 0, -1).
pub fn spherical_components(v: CVec3) -> [Complex64; 3] {
    [1, 0, -1].map(|q| v.dot(spherical_unit(q)))
}

/// Inverse of [`spherical_components`]: A = Σ_q A_q ê_q*.
pub fn from_spherical_components(c: [Complex64; 3]) -> CVec3 {
    [1, 0, -1]
        .iter()
        .zip(c)
        .fold(CVec3::ZERO, |acc, (&q, a)| acc + spherical_unit(q).conj() * a)
}

/// Polar unit vector ϑ̂(θ, φ).
pub fn theta_hat(dir: SphDirection) -> CVec3 {
    let (st, ct) = dir.theta().sin_cos();
    let (sp, cp) = dir.phi().sin_cos();
    CVec3::real([ct * cp, ct * sp, -st])
}

/// Azimuthal unit vector φ̂(φ).
pub fn phi_hat(dir: SphDirection) -> CVec3 {
    let (sp, cp) = dir.phi().sin_cos();
    CVec3::real([-sp, cp, 0.0])
}

/// Orthonormal frame with e'_0 along the propagation direction and
/// transverse axes x' = ϑ̂, y' = φ̂.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HelicityFrame {
    pub k_dir: SphDirection,
    pub e_plus: CVec3,
    pub e_minus: CVec3,
    pub e_zero: CVec3,
    pub e_xp: CVec3,
    pub e_yp: CVec3,
}

impl HelicityFrame {
    pub fn new(k_dir: SphDirection) -> Self {
        let e_xp = theta_hat(k_dir);
        let e_yp = phi_hat(k_dir);
        let s = FRAC_1_SQRT_2;
        HelicityFrame {
            k_dir,
            e_plus: -(e_xp + e_yp * I) * s,
            e_minus: (e_xp - e_yp * I) * s,
            e_zero: CVec3::real(k_dir.unit_vector()),
            e_xp,
            e_yp,
        }
    }

    /// e'_q for q ∈ {+1, 0, -1}.
    pub fn unit(&self, q: i32) -> CVec3 {
        match q {
            1 => self.e_plus,
            0 => self.e_zero,
            -1 => self.e_minus,
            _ => panic!("helicity index {q} not in {{-1, 0, 1}}"),
        }
    }

    /// Vector from transverse coordinates (x', y') and a longitudinal part.
    pub fn compose(&self, xp: Complex64, yp: Complex64, zp: Complex64) -> CVec3 {
        self.e_xp * xp + self.e_yp * yp + self.e_zero * zp
    }
}

pub fn helicity_frame(k_dir: SphDirection) -> HelicityFrame {
    HelicityFrame::new(k_dir)
}
