//! Transition parameters, the K-dependent multipole prefactors, and the
//! resonant Rabi frequency built from an Einstein A coefficient.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use super::constants::{ELEMENTARY_CHARGE, FINE_STRUCTURE, HBAR, SPEED_OF_LIGHT};
use super::CouplingError;
use crate::angular::{
    double_factorial, factorial, ratio_to_f64, triangle, wigner3j, wigner6j_exact, HalfInt,
    SqrtRational,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Character {
    Electric,
    Magnetic,
}

/// Sign of the reduced matrix element, with any i^(K−1) phase absorbed by the caller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn from_i32(s: i32) -> Result<Self, CouplingError> {
        match s {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(CouplingError::InvalidSign(s)),
        }
    }
}

/// Nuclear spin and the hyperfine levels of the two states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Hyperfine {
    pub nuclear_spin: HalfInt,
    pub f_e: HalfInt,
    pub f_g: HalfInt,
}

/// One line of a 2^K-pole transition. With hyperfine structure present,
/// `m_e` and `m_g` are projections of F rather than J.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransitionSpec {
    pub rank: u32,
    pub character: Character,
    pub j_e: HalfInt,
    pub j_g: HalfInt,
    pub m_e: HalfInt,
    pub m_g: HalfInt,
    pub hyperfine: Option<Hyperfine>,
    /// Einstein A of the J_e → J_g multiplet, s⁻¹.
    pub einstein_a: f64,
    /// Angular frequency of the transition, rad/s.
    pub omega: f64,
    pub s_j: Sign,
}

fn check_projection(m: HalfInt, j: HalfInt) -> Result<(), CouplingError> {
    if m.abs() > j || !(j - m).is_integer() {
        return Err(CouplingError::ProjectionOutOfRange { m, j });
    }
    Ok(())
}

impl TransitionSpec {
    /// Checks everything except angular-momentum triangles, which make the
    /// coupling vanish rather than fail.
    pub fn validate(&self) -> Result<(), CouplingError> {
        if self.rank == 0 {
            return Err(CouplingError::RankZero);
        }
        if self.j_e < HalfInt::ZERO || self.j_g < HalfInt::ZERO {
            return Err(CouplingError::NegativeAngularMomentum);
        }
        if !(self.einstein_a >= 0.0 && self.einstein_a.is_finite()) {
            return Err(CouplingError::InvalidEinsteinA(self.einstein_a));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(CouplingError::NonPositiveFrequency(self.omega));
        }
        match self.hyperfine {
            None => {
                check_projection(self.m_e, self.j_e)?;
                check_projection(self.m_g, self.j_g)?;
            }
            Some(h) => {
                let i = h.nuclear_spin;
                let coupled = |j: HalfInt, f: HalfInt| f >= HalfInt::ZERO && (j + i + f).is_integer();
                if i < HalfInt::ZERO || !coupled(self.j_e, h.f_e) || !coupled(self.j_g, h.f_g) {
                    return Err(CouplingError::InconsistentNuclearSpin {
                        nuclear_spin: i,
                        f_e: h.f_e,
                        f_g: h.f_g,
                    });
                }
                check_projection(self.m_e, h.f_e)?;
                check_projection(self.m_g, h.f_g)?;
            }
        }
        Ok(())
    }

    /// Spherical component p = M_e − M_g driven by this line.
    pub fn component(&self) -> i32 {
        (self.m_e - self.m_g).as_int().expect("validated projections differ by an integer")
    }
}

/// The three K-dependent numerical coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultipolePrefactors {
    /// In front of the operator–field product in the interaction Hamiltonian.
    pub hamiltonian: f64,
    /// In front of (ω/c)^(2K+1) in the Einstein A coefficient.
    pub einstein: f64,
    /// In front of ε·Y^(+1) in the stretched-tensor identity.
    pub identity: f64,
}

/// Exact forms: hamiltonian = √(π·h), einstein = a, identity = √(π·g).
#[derive(Clone, Debug, PartialEq)]
pub struct PrefactorRadicands {
    pub hamiltonian_over_pi: BigRational,
    pub einstein: BigRational,
    pub identity_over_pi: BigRational,
}

pub fn multipole_prefactor_radicands(rank: u32) -> PrefactorRadicands {
    assert!(rank >= 1, "multipole rank must be at least 1");
    let k = BigInt::from(rank);
    let kp1 = BigInt::from(rank + 1);
    let df_hi = double_factorial(2 * i64::from(rank) + 1);
    let df_lo = double_factorial(2 * i64::from(rank) - 1);
    let einstein = BigRational::new(BigInt::from(2) * &kp1, &k * &df_lo * &df_hi);
    PrefactorRadicands {
        hamiltonian_over_pi: &einstein * BigInt::from(2),
        identity_over_pi: BigRational::new(
            BigInt::from(4) * factorial(rank - 1) * &kp1,
            df_hi,
        ),
        einstein,
    }
}

pub fn multipole_prefactors(rank: u32) -> MultipolePrefactors {
    let r = multipole_prefactor_radicands(rank);
    MultipolePrefactors {
        hamiltonian: (PI * ratio_to_f64(&r.hamiltonian_over_pi)).sqrt(),
        einstein: ratio_to_f64(&r.einstein),
        identity: (PI * ratio_to_f64(&r.identity_over_pi)).sqrt(),
    }
}

/// |⟨J_e‖T^(K)‖J_g⟩|/e from the Einstein A coefficient. Electric lines give
/// m^K; magnetic lines give m^(K+1)/s, the extra c coming from the magnetic
/// rate formula.
pub fn reduced_matrix_element_from_a(spec: &TransitionSpec) -> Result<f64, CouplingError> {
    spec.validate()?;
    let k = f64::from(spec.rank);
    let c_over_w = SPEED_OF_LIGHT / spec.omega;
    let electric = (spec.einstein_a / (FINE_STRUCTURE * SPEED_OF_LIGHT)
        * (2.0 * spec.j_e.to_f64() + 1.0)
        * c_over_w.powf(2.0 * k + 1.0)
        / multipole_prefactors(spec.rank).einstein)
        .sqrt();
    Ok(match spec.character {
        Character::Electric => electric,
        Character::Magnetic => electric * SPEED_OF_LIGHT,
    })
}

/// Inverse of [`reduced_matrix_element_from_a`]: the Einstein A coefficient
/// of a line with the given reduced element.
pub fn einstein_a_from_reduced(
    rank: u32,
    character: Character,
    j_e: HalfInt,
    omega: f64,
    reduced: f64,
) -> f64 {
    let k = f64::from(rank);
    let r = match character {
        Character::Electric => reduced,
        Character::Magnetic => reduced / SPEED_OF_LIGHT,
    };
    multipole_prefactors(rank).einstein
        * (omega / SPEED_OF_LIGHT).powf(2.0 * k + 1.0)
        * FINE_STRUCTURE
        * SPEED_OF_LIGHT
        * r
        * r
        / (2.0 * j_e.to_f64() + 1.0)
}

/// (e/ħ)√(2πA/(αc)(2J_e+1)(c/ω)³), the factor in front of E0, the 3j symbol
/// and the geometric amplitude.
fn rabi_scale(spec: &TransitionSpec) -> f64 {
    let c_over_w = SPEED_OF_LIGHT / spec.omega;
    ELEMENTARY_CHARGE / HBAR
        * (2.0 * PI * spec.einstein_a / (FINE_STRUCTURE * SPEED_OF_LIGHT)
            * (2.0 * spec.j_e.to_f64() + 1.0)
            * c_over_w.powi(3))
        .sqrt()
}

fn parity(x: HalfInt) -> f64 {
    f64::from(x.parity_sign())
}

/// (−1)^(J_e−M_g) times the 3j symbol (J_e K J_g; −M_e p M_g) on the level
/// pair that carries the projections.
fn wigner_eckart_angle(upper: HalfInt, lower: HalfInt, spec: &TransitionSpec) -> f64 {
    let k = HalfInt::from_int(spec.rank as i32);
    let p = spec.m_e - spec.m_g;
    if !triangle(upper, k, lower) || p.abs() > k {
        return 0.0;
    }
    let w = wigner3j(upper, k, lower, -spec.m_e, p, spec.m_g);
    if w == 0.0 {
        return 0.0;
    }
    parity(upper - spec.m_g) * w
}

/// Resonant Rabi frequency in rad/s. For electric lines `geometric_amplitude`
/// is ε·Y^(+1)_{K,−p}(k̂) and `amplitude` is E0 in V/m. For magnetic lines the
/// caller passes β̂·Y^(+1)_{K,−p}(k̂) with β̂ = k̂ × ε and c·B0. A spec carrying
/// hyperfine levels is routed to [`rabi_frequency_hyperfine`].
pub fn rabi_frequency(
    spec: &TransitionSpec,
    geometric_amplitude: Complex64,
    amplitude: f64,
) -> Result<Complex64, CouplingError> {
    if let Some(h) = spec.hyperfine {
        return rabi_frequency_hyperfine(spec, h, geometric_amplitude, amplitude);
    }
    spec.validate()?;
    let angle = wigner_eckart_angle(spec.j_e, spec.j_g, spec);
    if angle == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(geometric_amplitude * (spec.s_j.value() * amplitude * rabi_scale(spec) * angle))
}

/// (−1)^(J_e+I+F_g+K)√((2F_g+1)(2F_e+1)){J_e F_e I; F_g J_g K}, exactly.
pub fn hyperfine_factor_exact(
    j_e: HalfInt,
    j_g: HalfInt,
    hf: Hyperfine,
    rank: u32,
) -> SqrtRational {
    let k = HalfInt::from_int(rank as i32);
    let six = wigner6j_exact(j_e, hf.f_e, hf.nuclear_spin, hf.f_g, j_g, k);
    if six.is_zero() {
        return six;
    }
    let sign = (j_e + hf.nuclear_spin + hf.f_g + k).parity_sign() as i8;
    let dims = i64::from((hf.f_g.twice() + 1) * (hf.f_e.twice() + 1));
    SqrtRational::from_ratio(sign, dims, 1) * six
}

/// Rabi frequency between hyperfine levels using the multiplet's A(J_e, J_g).
pub fn rabi_frequency_hyperfine(
    spec: &TransitionSpec,
    hf: Hyperfine,
    geometric_amplitude: Complex64,
    amplitude: f64,
) -> Result<Complex64, CouplingError> {
    let spec = TransitionSpec {
        hyperfine: Some(hf),
        ..*spec
    };
    spec.validate()?;
    let angle = wigner_eckart_angle(hf.f_e, hf.f_g, &spec);
    if angle == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let reduction = hyperfine_factor_exact(spec.j_e, spec.j_g, hf, spec.rank).to_f64();
    Ok(geometric_amplitude
        * (spec.s_j.value() * amplitude * rabi_scale(&spec) * angle * reduction))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn h(twice: i32) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    pub(crate) fn e1_spec() -> TransitionSpec {
        TransitionSpec {
            rank: 1,
            character: Character::Electric,
            j_e: h(2),
            j_g: h(0),
            m_e: h(0),
            m_g: h(0),
            hyperfine: None,
            einstein_a: 1.0e7,
            omega: 2.0 * PI * 4.0e14,
            s_j: Sign::Plus,
        }
    }

    #[test]
    fn prefactor_examples() {
        let want = [
            ((8, 3), (4, 3), (8, 3)),
            ((2, 15), (1, 15), (4, 5)),
            ((16, 4725), (8, 4725), (32, 105)),
        ];
        for (k, (hm, ei, id)) in (1..=3).zip(want) {
            let r = multipole_prefactor_radicands(k);
            assert_eq!(r.hamiltonian_over_pi, ratio(hm.0, hm.1));
            assert_eq!(r.einstein, ratio(ei.0, ei.1));
            assert_eq!(r.identity_over_pi, ratio(id.0, id.1));
            let f = multipole_prefactors(k);
            let s = |n: i64, d: i64| (PI * n as f64 / d as f64).sqrt();
            assert!((f.hamiltonian - s(hm.0, hm.1)).abs() < 1e-15);
            assert!((f.einstein - ei.0 as f64 / ei.1 as f64).abs() < 1e-16);
            assert!((f.identity - s(id.0, id.1)).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_factor_matches_tensor_module() {
        for k in 1..=6 {
            let a = multipole_prefactors(k).identity;
            let b = crate::tensor::polarization_identity_factor(k);
            assert!((a - b).abs() < 1e-14 * b);
        }
    }

    #[test]
    fn reduced_element_round_trip() {
        let mut spec = e1_spec();
        spec.einstein_a = 0.0;
        assert_eq!(reduced_matrix_element_from_a(&spec).unwrap(), 0.0);
        for (k, ch) in [(1, Character::Electric), (2, Character::Electric), (3, Character::Magnetic)] {
            spec.rank = k;
            spec.character = ch;
            spec.einstein_a = 3.7e5;
            let r = reduced_matrix_element_from_a(&spec).unwrap();
            let a = einstein_a_from_reduced(k, ch, spec.j_e, spec.omega, r);
            assert!((a - spec.einstein_a).abs() < 1e-12 * spec.einstein_a);
        }
        spec.omega = 0.0;
        assert_eq!(
            reduced_matrix_element_from_a(&spec),
            Err(CouplingError::NonPositiveFrequency(0.0))
        );
    }

    #[test]
    fn reduced_element_rank_ratio() {
        // At equal A and ω the ratio is (c/ω)√(a_1/a_2) with a_K the rate factor.
        let mut spec = e1_spec();
        let r1 = reduced_matrix_element_from_a(&spec).unwrap();
        spec.rank = 2;
        let r2 = reduced_matrix_element_from_a(&spec).unwrap();
        let c_over_w = SPEED_OF_LIGHT / spec.omega;
        let want = c_over_w * ((4.0 / 3.0) / (1.0 / 15.0_f64)).sqrt();
        assert!((r2 / r1 - want).abs() < 1e-12 * want);
    }

    #[test]
    fn rabi_zero_cases() {
        let mut spec = e1_spec();
        spec.einstein_a = 0.0;
        assert_eq!(rabi_frequency(&spec, 1.0.into(), 100.0).unwrap(), Complex64::new(0.0, 0.0));
        let mut spec = e1_spec();
        spec.j_e = h(4);
        spec.m_e = h(4);
        assert_eq!(rabi_frequency(&spec, 1.0.into(), 100.0).unwrap(), Complex64::new(0.0, 0.0));
        // J_e = 3, J_g = 0 is outside the rank-1 triangle: zero, not an error.
        spec.j_e = h(6);
        spec.m_e = h(0);
        assert_eq!(rabi_frequency(&spec, 1.0.into(), 100.0).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn rabi_absolute_value() {
        // J_e = 1 → J_g = 0, M_e = 0: 3j = −1/√3 with (−1)^{1} in front.
        let spec = e1_spec();
        let e0 = 250.0;
        let om = rabi_frequency(&spec, 1.0.into(), e0).unwrap();
        let c_over_w = SPEED_OF_LIGHT / spec.omega;
        let want = ELEMENTARY_CHARGE * e0 / HBAR
            * (2.0 * PI * spec.einstein_a / (FINE_STRUCTURE * SPEED_OF_LIGHT) * 3.0 * c_over_w.powi(3))
                .sqrt()
            / 3f64.sqrt();
        assert!((om.re - want).abs() < 1e-12 * want && om.im == 0.0);
        let flipped = TransitionSpec { s_j: Sign::Minus, ..spec };
        assert_eq!(rabi_frequency(&flipped, 1.0.into(), e0).unwrap(), -om);
    }

    #[test]
    fn invalid_specs() {
        let mut spec = e1_spec();
        spec.m_e = h(4);
        assert!(matches!(
            rabi_frequency(&spec, 1.0.into(), 1.0),
            Err(CouplingError::ProjectionOutOfRange { .. })
        ));
        let mut spec = e1_spec();
        spec.m_e = h(1);
        assert!(spec.validate().is_err());
        let mut spec = e1_spec();
        spec.einstein_a = -1.0;
        assert!(matches!(spec.validate(), Err(CouplingError::InvalidEinsteinA(_))));
        let mut spec = e1_spec();
        spec.rank = 0;
        assert_eq!(spec.validate(), Err(CouplingError::RankZero));
        assert_eq!(Sign::from_i32(0), Err(CouplingError::InvalidSign(0)));
    }

    #[test]
    fn hyperfine_without_nuclear_spin_is_fine_structure() {
        for (je, jg, k) in [(2, 0, 1), (3, 1, 1), (4, 0, 2), (5, 1, 2), (7, 1, 3), (3, 3, 2)] {
            let (je, jg) = (h(je), h(jg));
            let hf = Hyperfine {
                nuclear_spin: HalfInt::ZERO,
                f_e: je,
                f_g: jg,
            };
            let mut me = -je;
            while me <= je {
                let mut mg = -jg;
                while mg <= jg {
                    let spec = TransitionSpec { rank: k, j_e: je, j_g: jg, m_e: me, m_g: mg, ..e1_spec() };
                    let a = rabi_frequency(&spec, Complex64::new(0.3, -0.7), 40.0).unwrap();
                    let b = rabi_frequency_hyperfine(&spec, hf, Complex64::new(0.3, -0.7), 40.0).unwrap();
                    assert_eq!(a, b, "J_e={je} J_g={jg} M_e={me} M_g={mg}");
                    mg = mg + HalfInt::ONE;
                }
                me = me + HalfInt::ONE;
            }
        }
    }

    #[test]
    fn hyperfine_branch_ratio() {
        // J = 1/2 → 1/2, I = 1/2, F_e = 1, M_e = 1, M_g = 0. Squared 3j values
        // are 1/3 (F_g = 0) and 1/6 (F_g = 1). The 6j values follow from the
        // zero-argument formula (1/√6) and orthogonality over F_g (1/3).
        let spec = |fg: i32| TransitionSpec {
            j_e: h(1),
            j_g: h(1),
            m_e: h(2),
            m_g: h(0),
            hyperfine: Some(Hyperfine { nuclear_spin: h(1), f_e: h(2), f_g: h(fg) }),
            ..e1_spec()
        };
        let f0 = hyperfine_factor_exact(h(1), h(1), spec(0).hyperfine.unwrap(), 1);
        let f1 = hyperfine_factor_exact(h(1), h(1), spec(2).hyperfine.unwrap(), 1);
        assert_eq!(f0.square(), ratio(3, 6));
        assert_eq!(f1.square(), ratio(9, 9));
        let w0 = rabi_frequency(&spec(0), 1.0.into(), 1.0).unwrap().norm_sqr();
        let w1 = rabi_frequency(&spec(2), 1.0.into(), 1.0).unwrap().norm_sqr();
        let want = (1.0 / 3.0 * 0.5) / (1.0 / 6.0 * 1.0);
        assert!((w0 / w1 - want).abs() < 1e-12);
    }

    #[test]
    fn hyperfine_forbidden_and_inconsistent() {
        // F_e = 5/2 with J_e = 1/2, I = 1/2 breaks the (J, I, F) triangle: zero.
        let mut spec = TransitionSpec {
            j_e: h(1),
            j_g: h(1),
            m_e: h(0),
            m_g: h(0),
            hyperfine: Some(Hyperfine { nuclear_spin: h(1), f_e: h(4), f_g: h(2) }),
            ..e1_spec()
        };
        assert_eq!(rabi_frequency(&spec, 1.0.into(), 1.0).unwrap(), Complex64::new(0.0, 0.0));
        spec.hyperfine = Some(Hyperfine { nuclear_spin: h(2), f_e: h(2), f_g: h(2) });
        assert!(matches!(
            spec.validate(),
            Err(CouplingError::InconsistentNuclearSpin { .. })
        ));
    }

    proptest! {
        #[test]
        fn sum_rule_over_components(je2 in 0i32..8, k in 1u32..4, jg_off in 0i32..7, me_idx in 0i32..9) {
            let jg2 = je2 + 2 * k as i32 - 2 * jg_off;
            prop_assume!(jg2 >= 0);
            let me2 = -je2 + 2 * (me_idx % (je2 + 1));
            let mut total = 0.0;
            let base = TransitionSpec { rank: k, j_e: h(je2), j_g: h(jg2), m_e: h(me2), m_g: h(0), ..e1_spec() };
            let scale = rabi_scale(&base);
            let mut mg2 = -jg2;
            while mg2 <= jg2 {
                let spec = TransitionSpec { m_g: h(mg2), ..base };
                let om = rabi_frequency(&spec, 1.0.into(), 1.0).unwrap();
                total += om.norm_sqr() / (scale * scale);
                mg2 += 2;
            }
            let want = if triangle(h(je2), h(2 * k as i32), h(jg2)) {
                1.0 / f64::from(je2 + 1)
            } else {
                0.0
            };
            prop_assert!((total - want).abs() < 1e-12, "total {total}, want {want}");
        }
    }

    #[test]
    fn einstein_radicand_is_reciprocal_rate_factor() {
        for k in 1..=5 {
            let r = multipole_prefactor_radicands(k);
            let prod = &r.hamiltonian_over_pi / &r.einstein;
            assert_eq!(prod.to_f64().unwrap(), 2.0);
        }
    }
}
