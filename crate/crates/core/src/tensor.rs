//! Irreducible spherical tensor products and an executable check of the
//! identity linking stretched products of k̂ with ε to ε·Y^(+1)_K(k̂).

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::angular::{sph_harm, wigner3j, HalfInt, SphDirection};
use crate::frames::{spherical_components, CVec3};
use crate::polarization::TRANSVERSE_TOL;
use crate::vsh::vsh_plus1;

#[derive(Debug, Error, PartialEq)]
pub enum TensorError {
    #[error("rank {k} is outside the coupling range of ranks {ka} and {kb}")]
    RankTriangle { ka: u32, kb: u32, k: u32 },
    #[error("rank-{rank} tensor needs {} components, got {got}", 2 * rank + 1)]
    ComponentCount { rank: u32, got: usize },
    #[error("polarization has a longitudinal component |ε·k̂| = {0:e}")]
    NotTransverse(f64),
    #[error("polarization norm {0} is not 1")]
    NotUnit(f64),
    #[error("identity needs rank ≥ 1")]
    RankZero,
}

/// Components T_p for p = −K..K, stored at index p + K.
#[derive(Clone, Debug, PartialEq)]
pub struct SphTensor {
    rank: u32,
    components: Vec<Complex64>,
}

impl SphTensor {
    pub fn new(rank: u32, components: Vec<Complex64>) -> Result<Self, TensorError> {
        if components.len() != 2 * rank as usize + 1 {
            return Err(TensorError::ComponentCount {
                rank,
                got: components.len(),
            });
        }
        Ok(SphTensor { rank, components })
    }

    pub fn scalar(value: Complex64) -> Self {
        SphTensor {
            rank: 0,
            components: vec![value],
        }
    }

    /// Rank-1 tensor with components a_q = a·ê_q.
    pub fn from_vector(a: CVec3) -> Self {
        let [plus, zero, minus] = spherical_components(a);
        SphTensor {
            rank: 1,
            components: vec![minus, zero, plus],
        }
    }

    /// Y_{K,p}(n̂) for every p.
    pub fn from_harmonic(rank: u32, dir: SphDirection) -> Self {
        let k = rank as i32;
        SphTensor {
            rank,
            components: (-k..=k).map(|p| sph_harm(k, p, dir)).collect(),
        }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn components(&self) -> &[Complex64] {
        &self.components
    }

    /// T_p; zero outside |p| ≤ K.
    pub fn component(&self, p: i32) -> Complex64 {
        let k = self.rank as i32;
        if p.abs() > k {
            return Complex64::new(0.0, 0.0);
        }
        self.components[(p + k) as usize]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        SphTensor {
            rank: self.rank,
            components: self.components.iter().map(|c| c * s).collect(),
        }
    }

    /// Largest componentwise modulus of the difference; ranks must match.
    pub fn max_abs_diff(&self, other: &SphTensor) -> f64 {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Rank-`rank` irreducible product of `a` and `b`.
pub fn tensor_product(rank: u32, a: &SphTensor, b: &SphTensor) -> Result<SphTensor, TensorError> {
    let (ka, kb) = (a.rank as i32, b.rank as i32);
    let k = rank as i32;
    if k < (ka - kb).abs() || k > ka + kb {
        return Err(TensorError::RankTriangle {
            ka: a.rank,
            kb: b.rank,
            k: rank,
        });
    }
    let h = HalfInt::from_int;
    let norm = f64::from(2 * k + 1).sqrt();
    let components = (-k..=k)
        .map(|p| {
            let sign = if (ka - kb + p).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let mut acc = Complex64::new(0.0, 0.0);
            for ma in -ka..=ka {
                let mb = p - ma;
                if mb.abs() > kb {
                    continue;
                }
                let w = wigner3j(h(ka), h(kb), h(k), h(ma), h(mb), h(-p));
                if w != 0.0 {
                    acc += a.component(ma) * b.component(mb) * w;
                }
            }
            acc * (sign * norm)
        })
        .collect();
    Ok(SphTensor { rank, components })
}

/// T^(K)[a, a, …, a], coupling each new factor to the top rank.
pub fn nested_stretched(rank: u32, a: CVec3) -> SphTensor {
    let v = SphTensor::from_vector(a);
    (1..=rank).fold(SphTensor::scalar(1.0.into()), |acc, k| {
        tensor_product(k, &acc, &v).expect("stretched ranks always couple")
    })
}

fn odd_double_factorial(n: u32) -> f64 {
    (1..=n).rev().step_by(2).map(f64::from).product()
}

fn factorial_f64(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// √(K!·4π/(2K+1)!!), the constant relating nested products to |a|^K Y_K(â).
pub fn solid_harmonic_factor(rank: u32) -> f64 {
    (factorial_f64(rank) * 4.0 * PI / odd_double_factorial(2 * rank + 1)).sqrt()
}

/// √((K−1)!(K+1)4π/(2K+1)!!) in front of ε·Y^(+1)_K(k̂).
pub fn polarization_identity_factor(rank: u32) -> f64 {
    assert!(rank >= 1, "identity needs rank ≥ 1");
    let k = f64::from(rank);
    (factorial_f64(rank - 1) * (k + 1.0) * 4.0 * PI / odd_double_factorial(2 * rank + 1)).sqrt()
}

/// max_p |T^(K)[T^(K−1)[k̂,…], ε]_p − c_K ε·Y^(+1)_{K,p}(k̂)|.
pub fn verify_polarization_identity(
    rank: u32,
    k_dir: SphDirection,
    eps: CVec3,
) -> Result<f64, TensorError> {
    if rank == 0 {
        return Err(TensorError::RankZero);
    }
    let khat = CVec3::real(k_dir.unit_vector());
    let long = eps.dot(khat).norm();
    if long > TRANSVERSE_TOL {
        return Err(TensorError::NotTransverse(long));
    }
    let n = eps.norm();
    if (n - 1.0).abs() > TRANSVERSE_TOL {
        return Err(TensorError::NotUnit(n));
    }
    let inner = nested_stretched(rank - 1, khat);
    let lhs = tensor_product(rank, &inner, &SphTensor::from_vector(eps))?;
    let factor = polarization_identity_factor(rank);
    let k = rank as i32;
    Ok((-k..=k)
        .map(|p| {
            let rhs = eps.dot(vsh_plus1(k, p, k_dir).value) * factor;
            (lhs.component(p) - rhs).norm()
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::helicity_frame;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn v(a: &[f64]) -> SphTensor {
        SphTensor::new(((a.len() - 1) / 2) as u32, a.iter().map(|&x| c(x)).collect()).unwrap()
    }

    #[test]
    fn product_examples() {
        // K = 0 of two rank-1 tensors: expand the 3j(1 1 0) column directly.
        let cs = [c(0.3), Complex64::new(-0.2, 0.7), c(1.1)];
        let t = SphTensor::new(1, cs.to_vec()).unwrap();
        let s = tensor_product(0, &t, &t).unwrap();
        let want = -(cs[0] * cs[2] * -1.0 + cs[1] * cs[1] - cs[2] * cs[0]) / 3f64.sqrt();
        assert!((s.component(0) - want).norm() < 1e-15);

        let z = SphTensor::from_vector(CVec3::z_hat());
        let t = tensor_product(1, &z, &z).unwrap();
        assert!(t.components().iter().all(|x| x.norm() < 1e-16));

        assert_eq!(
            tensor_product(3, &z, &z),
            Err(TensorError::RankTriangle { ka: 1, kb: 1, k: 3 })
        );
        assert!(tensor_product(0, &z, &v(&[0.0; 5])).is_err());
        assert_eq!(
            SphTensor::new(2, vec![c(0.0); 3]),
            Err(TensorError::ComponentCount { rank: 2, got: 3 })
        );
    }

    #[test]
    fn scalar_product_is_minus_dot_over_root3() {
        let a = CVec3::new(Complex64::new(0.2, 0.1), c(-0.5), Complex64::new(0.0, 0.9));
        let b = CVec3::new(c(0.4), Complex64::new(0.3, -0.3), c(0.7));
        let s = tensor_product(0, &SphTensor::from_vector(a), &SphTensor::from_vector(b)).unwrap();
        assert!((s.component(0) + a.dot(b) / 3f64.sqrt()).norm() < 1e-15);
    }

    #[test]
    fn nested_examples() {
        assert_eq!(nested_stretched(0, CVec3::x_hat()).components(), &[c(1.0)]);
        let t = nested_stretched(1, CVec3::z_hat());
        assert!(t.max_abs_diff(&v(&[0.0, 1.0, 0.0])) < 1e-15);
        // √5·3j(1 1 2; 0 0 0) = √5·√(2/15)
        let t = nested_stretched(2, CVec3::z_hat());
        assert!(t.max_abs_diff(&v(&[0.0, 0.0, (2.0f64 / 3.0).sqrt(), 0.0, 0.0])) < 1e-15);
    }

    #[test]
    fn identity_factors() {
        let want = [8.0 * PI / 3.0, 4.0 * PI / 5.0, 32.0 * PI / 105.0];
        for (k, w) in (1..=3).zip(want) {
            assert!((polarization_identity_factor(k) - w.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_rejects_bad_polarization() {
        let z = SphDirection::z_axis();
        assert!(matches!(
            verify_polarization_identity(2, z, CVec3::z_hat()),
            Err(TensorError::NotTransverse(_))
        ));
        assert!(matches!(
            verify_polarization_identity(2, z, CVec3::x_hat() * 2.0),
            Err(TensorError::NotUnit(_))
        ));
        assert_eq!(verify_polarization_identity(0, z, CVec3::x_hat()), Err(TensorError::RankZero));
    }

    #[test]
    fn z_rotation_is_diagonal_phase() {
        // Rotating a about ẑ by α multiplies T_p by e^{ipα} under bilinear components.
        let a = [0.3, -0.8, 0.5];
        let alpha = 0.73f64;
        let (s, co) = alpha.sin_cos();
        let ra = [co * a[0] - s * a[1], s * a[0] + co * a[1], a[2]];
        for k in 1..=4 {
            let t = nested_stretched(k, CVec3::real(a));
            let tr = nested_stretched(k, CVec3::real(ra));
            for p in -(k as i32)..=k as i32 {
                let want = t.component(p) * Complex64::from_polar(1.0, f64::from(p) * alpha);
                assert!((tr.component(p) - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn rank1_rotation_matches_wigner_rows() {
        // Quantization components follow T_p = Σ_σ D^(1)_{−σ,−p} T'_σ; a transverse
        // vector has only σ = ±1 helicity components.
        use crate::angular::wigner_d_pm1;
        for &(th, ph) in &[(0.4, 1.1), (2.0, 4.0), (1.3, 0.0), (0.0, 0.0)] {
            let f = helicity_frame(SphDirection::new(th, ph).unwrap());
            let eps = f.compose(Complex64::new(0.3, -0.4), Complex64::new(0.5, 0.2), 0.0.into());
            let t = SphTensor::from_vector(eps);
            for p in -1..=1 {
                let rotated: Complex64 = [1, -1]
                    .iter()
                    .map(|&s| wigner_d_pm1(1, -s, -p, th, ph) * eps.dot(f.unit(s)))
                    .sum();
                assert!((t.component(p) - rotated).norm() < 1e-15, "p={p}");
            }
        }
    }

    fn real_vec() -> impl Strategy<Value = [f64; 3]> {
        proptest::array::uniform3(-2.0..2.0f64).prop_filter("nonzero", |a| {
            a.iter().map(|x| x * x).sum::<f64>() > 1e-2
        })
    }

    fn transverse_pair() -> impl Strategy<Value = (SphDirection, CVec3)> {
        (0.0..=PI, 0.0..(2.0 * PI), proptest::array::uniform4(-1.0..1.0f64))
            .prop_filter("nonzero jones", |(_, _, j)| j.iter().map(|x| x * x).sum::<f64>() > 1e-3)
            .prop_map(|(t, p, j)| {
                let d = SphDirection::new(t, p).unwrap();
                let f = helicity_frame(d);
                let n = j.iter().map(|x| x * x).sum::<f64>().sqrt();
                let eps = f.compose(
                    Complex64::new(j[0] / n, j[1] / n),
                    Complex64::new(j[2] / n, j[3] / n),
                    0.0.into(),
                );
                (d, eps)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn nested_is_solid_harmonic(a in real_vec()) {
            let len = a.iter().map(|x| x * x).sum::<f64>().sqrt();
            let dir = SphDirection::from_cartesian(a).unwrap();
            for k in 0..=4 {
                let t = nested_stretched(k, CVec3::real(a));
                let want = SphTensor::from_harmonic(k, dir)
                    .scale(c(solid_harmonic_factor(k) * len.powi(k as i32)));
                prop_assert!(t.max_abs_diff(&want) < 1e-11, "K={k}");
            }
        }

        #[test]
        fn raising_inner_rank_scales(pair in transverse_pair()) {
            let (d, eps) = pair;
            let e = SphTensor::from_vector(eps);
            for k in 1..=4u32 {
                let up = tensor_product(k, &SphTensor::from_harmonic(k + 1, d), &e).unwrap();
                let down = tensor_product(k, &SphTensor::from_harmonic(k - 1, d), &e).unwrap();
                let ratio = (f64::from(k) / f64::from(k + 1)).sqrt();
                prop_assert!(up.max_abs_diff(&down.scale(c(ratio))) < 1e-12, "K={k}");
            }
        }

        #[test]
        fn polarization_identity_holds(pair in transverse_pair()) {
            let (d, eps) = pair;
            for k in 1..=4 {
                let r = verify_polarization_identity(k, d, eps).unwrap();
                prop_assert!(r < 1e-10, "K={k}: residual {r}");
            }
        }
    }
}
