//! N_{K,−Δm} = (1/2π)∬ d²k⊥ (ε·Y^(+1)_{K,−Δm})(ℓ̂) ũ(k⊥).
//!
//! With t = k⊥²w0²/4 the Gaussian envelope of every mode becomes e^{−t} and
//! d²k⊥ ũ = dt dφ e^{−t} P(k⊥), so the radial integral is a Gauss–Laguerre
//! sum and the azimuthal one a trapezoid rule.

use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::{FiniteAboveNegOneF64, GaussLaguerre, GaussLegendre};
use num_complex::Complex64;
use rayon::prelude::*;

use super::profile::{offset_phase, reduced_transform};
use super::{BeamError, BeamMode, BeamSpec};
use crate::angular::SphDirection;
use crate::coupling::{plane_wave_coupling, Character, CouplingError};
use crate::frames::{helicity_frame, CVec3, HelicityFrame};
use crate::polarization::{beta_vector, jones_to_cvec, JonesVector};
use crate::vsh::vsh_plus1;

pub const DEFAULT_QUADRATURE_TOL: f64 = 1e-9;
/// Radial node counts tried in order; the azimuthal count matches.
const LEVELS: [usize; 6] = [16, 32, 64, 128, 256, 512];
/// Below this cutoff t_max = (k w0/2)² the e^{−t} mass beyond the light cone
/// matters and the radial rule switches to the finite disc.
const DISC_T_MAX: f64 = 40.0;
/// Results smaller than this fraction of Σ|integrand| count as zero.
const ZERO_FLOOR: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureOptions {
    /// Relative change between successive node doublings accepted as converged.
    pub tolerance: f64,
    /// Project ε transverse to each plane-wave component and renormalize.
    pub reproject_polarization: bool,
    /// Magnetic transitions couple through β̂ = ℓ̂ × ε.
    pub character: Character,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            tolerance: DEFAULT_QUADRATURE_TOL,
            reproject_polarization: false,
            character: Character::Electric,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamCoupling {
    pub value: Complex64,
    pub radial_nodes: usize,
    pub azimuthal_nodes: usize,
    /// Relative change at the last doubling.
    pub achieved: f64,
}

fn laguerre_rule(level: usize) -> &'static [(f64, f64)] {
    static RULES: [OnceLock<Vec<(f64, f64)>>; LEVELS.len()] = [const { OnceLock::new() }; LEVELS.len()];
    RULES[level].get_or_init(|| {
        let degree = NonZeroUsize::new(LEVELS[level]).expect("nonzero degree");
        let alpha = FiniteAboveNegOneF64::new(0.0).expect("α = 0 is valid");
        GaussLaguerre::new(degree, alpha).as_node_weight_pairs().to_vec()
    })
}

/// Gauss–Legendre nodes and weights on [0, 1].
fn legendre_rule(level: usize) -> &'static [(f64, f64)] {
    static RULES: [OnceLock<Vec<(f64, f64)>>; LEVELS.len()] = [const { OnceLock::new() }; LEVELS.len()];
    RULES[level].get_or_init(|| {
        let degree = NonZeroUsize::new(LEVELS[level]).expect("nonzero degree");
        GaussLegendre::new(degree)
            .iter()
            .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .collect()
    })
}

/// Radial (t, weight) pairs for ∫₀^t_max dt e^{−t} f(t). With t = t_max(1 − s²)
/// the k_z ∝ √(t_max − t) edge becomes linear in s, so Gauss–Legendre in s
/// converges quickly.
fn radial_rule(level: usize, t_max: f64) -> Vec<(f64, f64)> {
    if t_max >= DISC_T_MAX {
        return laguerre_rule(level).to_vec();
    }
    legendre_rule(level)
        .iter()
        .map(|&(s, w)| {
            let t = t_max * (1.0 - s * s);
            (t, w * 2.0 * t_max * s * (-t).exp())
        })
        .collect()
}

fn reproject(eps: CVec3, dir: CVec3) -> CVec3 {
    let t = eps - dir * eps.dot(dir);
    let n = t.norm();
    if n == 0.0 {
        t
    } else {
        t * (1.0 / n)
    }
}

struct Integrand<'a> {
    terms: Vec<(CVec3, &'a BeamMode)>,
    frame: HelicityFrame,
    k: f64,
    w0: f64,
    offset: [f64; 2],
    rank: i32,
    p: i32,
    opts: QuadratureOptions,
}

impl Integrand<'_> {
    /// Σ_terms (ε·Y)(ℓ̂) P(k⊥) at t = k⊥²w0²/4, azimuth φ.
    fn eval(&self, t: f64, phi: f64) -> Complex64 {
        let kappa = 2.0 * t.sqrt() / self.w0;
        if kappa >= self.k {
            return Complex64::new(0.0, 0.0);
        }
        let k_perp = [kappa * phi.cos(), kappa * phi.sin()];
        let kz = (self.k * self.k - kappa * kappa).sqrt();
        let f = &self.frame;
        let ell = (f.e_xp * k_perp[0] + f.e_yp * k_perp[1] + f.e_zero * kz) * (1.0 / self.k);
        let dir = SphDirection::from_cartesian([ell.x.re, ell.y.re, ell.z.re])
            .expect("on-shell direction is a nonzero real vector");
        let y = vsh_plus1(self.rank, self.p, dir).value;
        let shift = offset_phase(self.offset, k_perp);
        self.terms
            .iter()
            .map(|&(eps, mode)| {
                let eps = if self.opts.reproject_polarization { reproject(eps, ell) } else { eps };
                let field = match self.opts.character {
                    Character::Electric => eps,
                    Character::Magnetic => ell.cross(eps),
                };
                field.dot(y) * reduced_transform(mode, self.w0, k_perp)
            })
            .sum::<Complex64>()
            * shift
    }

    /// Product-rule estimate and Σ|terms| at one level.
    fn estimate(&self, level: usize) -> (Complex64, f64) {
        let half_kw0 = 0.5 * self.k * self.w0;
        let rule = radial_rule(level, half_kw0 * half_kw0);
        let n_phi = LEVELS[level];
        let dphi = 2.0 * PI / n_phi as f64;
        let rows: Vec<(Complex64, f64)> = rule
            .par_iter()
            .map(|&(t, w)| {
                (0..n_phi).fold((Complex64::new(0.0, 0.0), 0.0), |(s, a), j| {
                    let v = self.eval(t, dphi * j as f64) * w;
                    (s + v, a + v.norm())
                })
            })
            .collect();
        let (sum, abs) = rows
            .iter()
            .fold((Complex64::new(0.0, 0.0), 0.0), |(s, a), &(v, b)| (s + v, a + b));
        (sum / n_phi as f64, abs / n_phi as f64)
    }
}

/// Beam-coupling integral with default options (electric, ε fixed, 1e−9).
pub fn beam_coupling_integral(spec: &BeamSpec, rank: u32, delta_m: i32) -> Result<Complex64, BeamError> {
    beam_coupling_integral_with(spec, rank, delta_m, &QuadratureOptions::default()).map(|c| c.value)
}

/// Beam-coupling integral N_{K,−Δm}. Amplitude and phase of the beam are not
/// included; multiply by [`BeamSpec::complex_amplitude`] for the drive.
pub fn beam_coupling_integral_with(
    spec: &BeamSpec,
    rank: u32,
    delta_m: i32,
    opts: &QuadratureOptions,
) -> Result<BeamCoupling, BeamError> {
    if rank == 0 {
        return Err(CouplingError::RankZero.into());
    }
    if delta_m.unsigned_abs() > rank {
        return Err(CouplingError::DeltaMOutOfRange { delta_m, rank }.into());
    }
    spec.validate()?;
    let frame = helicity_frame(spec.k_dir);

    if let BeamMode::PlaneWave = spec.mode {
        let eps = spec.polarization();
        let field = match opts.character {
            Character::Electric => eps,
            Character::Magnetic => beta_vector(spec.k_dir, eps).map_err(CouplingError::from)?,
        };
        return Ok(BeamCoupling {
            value: plane_wave_coupling(rank, delta_m, spec.k_dir, field)?,
            radial_nodes: 0,
            azimuthal_nodes: 0,
            achieved: 0.0,
        });
    }

    let terms = spec
        .mode
        .terms(spec.jones)
        .into_iter()
        .map(|(j, m): (JonesVector, &BeamMode)| (jones_to_cvec(j, &frame), m))
        .collect();
    let integrand = Integrand {
        terms,
        frame,
        k: spec.k_mag,
        w0: spec.w0,
        offset: spec.offset,
        rank: rank as i32,
        p: -delta_m,
        opts: *opts,
    };

    let (mut prev, _) = integrand.estimate(0);
    let mut achieved = f64::INFINITY;
    for (level, &nodes) in LEVELS.iter().enumerate().skip(1) {
        let (cur, abs) = integrand.estimate(level);
        let scale = cur.norm().max(ZERO_FLOOR * abs);
        let diff = (cur - prev).norm();
        achieved = if scale > 0.0 { diff / scale } else { 0.0 };
        if achieved <= opts.tolerance {
            return Ok(BeamCoupling {
                value: cur,
                radial_nodes: nodes,
                azimuthal_nodes: nodes,
                achieved,
            });
        }
        prev = cur;
    }
    Err(BeamError::NotConverged {
        achieved,
        nodes: LEVELS[LEVELS.len() - 1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beams::{VectorTerm, BeamMode};
    use crate::frames::theta_hat;
    use crate::polarization::JonesVector;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    const W0: f64 = 1.0;

    fn beam(mode: BeamMode, kw0: f64, k_dir: SphDirection, jones: JonesVector) -> BeamSpec {
        BeamSpec {
            mode,
            w0: W0,
            k_mag: kw0 / W0,
            k_dir,
            jones,
            offset: [0.0, 0.0],
            amplitude: 1.0,
            phase: 0.0,
        }
    }

    fn x_dir() -> SphDirection {
        SphDirection::new(FRAC_PI_2, 0.0).unwrap()
    }

    fn i() -> Complex64 {
        Complex64::new(0.0, 1.0)
    }

    #[test]
    fn gaussian_e1_closed_form() {
        // ε = ϑ̂ = −ẑ: ε·Y = −√(3/8π)(1 − k_x'²/k²), and ⟨k_x'²⟩ = 2/w0².
        for kw0 in [20.0, 50.0, 200.0] {
            let b = beam(BeamMode::gaussian(), kw0, x_dir(), JonesVector::theta_hat());
            let got = beam_coupling_integral(&b, 1, 0).unwrap();
            let want = -(3.0 / (8.0 * PI)).sqrt() * (1.0 - 2.0 / (kw0 * kw0));
            assert!((got - want).norm() < 1e-12, "kw0 = {kw0}: {got}");
        }
    }

    #[test]
    fn tightly_focused_gaussian_keeps_only_propagating_waves() {
        // Only k⊥ < k contributes: ∫₀^T e^{−t}(1 − 2t/(kw0)²) dt with T = (kw0/2)².
        for kw0 in [2.5, 4.0, 8.0, 12.0, 12.7] {
            let b = beam(BeamMode::gaussian(), kw0, x_dir(), JonesVector::theta_hat());
            let got = beam_coupling_integral(&b, 1, 0).unwrap();
            let t = 0.25 * kw0 * kw0;
            let tail = (-t).exp();
            let want = -(3.0 / (8.0 * PI)).sqrt() * ((1.0 - tail) - 2.0 / (kw0 * kw0) * (1.0 - (1.0 + t) * tail));
            assert!((got - want).norm() < 1e-12, "kw0 = {kw0}: {got} vs {want}");
        }
    }

    #[test]
    fn plane_wave_mode_is_exact() {
        let dir = SphDirection::new(0.7, 1.1).unwrap();
        let b = beam(BeamMode::PlaneWave, 1e3, dir, JonesVector::lcp());
        let want = plane_wave_coupling(2, 1, dir, b.polarization()).unwrap();
        assert_eq!(beam_coupling_integral(&b, 2, 1).unwrap(), want);
    }

    #[test]
    fn plane_wave_limit() {
        let dir = SphDirection::new(FRAC_PI_4, 0.3).unwrap();
        for (k, dm, j) in [(1, 0, JonesVector::theta_hat()), (2, 1, JonesVector::phi_hat()), (3, -2, JonesVector::lcp())] {
            let b = beam(BeamMode::gaussian(), 1e4, dir, j);
            let got = beam_coupling_integral(&b, k, dm).unwrap();
            let want = plane_wave_coupling(k, dm, dir, b.polarization()).unwrap();
            assert!((got - want).norm() <= 1e-6 * want.norm(), "K={k} Δm={dm}");
        }
    }

    /// Richardson-extrapolated coefficient c of value ≈ c/(kw0).
    fn first_order_coefficient(f: impl Fn(f64) -> Complex64) -> Complex64 {
        let (a, b) = (f(200.0) * 200.0, f(400.0) * 400.0);
        (b * 4.0 - a) / 3.0
    }

    #[test]
    fn offset_gaussian_e1() {
        // k̂ = ẑ, ε = x̂ ∥ offset: i√(3/8π)(2/kw0)(ρ/w0)e^{−ρ²/w0²}.
        for rho in [0.3, FRAC_PI_4, 1.2] {
            let coeff = first_order_coefficient(|kw0| {
                let mut b = beam(BeamMode::gaussian(), kw0, SphDirection::z_axis(), JonesVector::theta_hat());
                b.offset = [rho, 0.0];
                beam_coupling_integral(&b, 1, 0).unwrap()
            });
            let want = i() * (3.0 / (8.0 * PI)).sqrt() * 2.0 * rho * (-rho * rho).exp();
            assert!((coeff - want).norm() < 1e-7 * want.norm(), "ρ={rho}: {coeff} vs {want}");
        }
    }

    #[test]
    fn schmiegelow_geometry() {
        let dir = SphDirection::new(FRAC_PI_4, 0.0).unwrap();
        for rho in [0.0f64, 0.5, 1.0] {
            // φ̂ polarization, offset along φ̂: zeroth order survives. The
            // first-order gradient term is removed by extrapolation in 1/kw0.
            let want = -i() * (5.0 / (32.0 * PI)).sqrt() * (-rho * rho).exp();
            for dm in [1, -1] {
                let at = |kw0: f64| {
                    let mut b = beam(BeamMode::gaussian(), kw0, dir, JonesVector::phi_hat());
                    b.offset = [0.0, rho];
                    beam_coupling_integral(&b, 2, dm).unwrap()
                };
                let zeroth = at(2e4) * 2.0 - at(1e4);
                assert!((zeroth.norm() - want.norm()).abs() < 1e-7, "Δm={dm} ρ={rho}: {zeroth} vs {want}");
            }
            // ϑ̂ polarization: first order in 1/kw0 from an offset along ϑ̂.
            let coeff = first_order_coefficient(|kw0| {
                let mut b = beam(BeamMode::gaussian(), kw0, dir, JonesVector::theta_hat());
                b.offset = [rho, 0.0];
                beam_coupling_integral(&b, 2, 1).unwrap()
            });
            let want = (5.0 / PI).sqrt() * rho * (-rho * rho).exp();
            assert!((coeff.norm() - want).abs() < 1e-6, "ρ={rho}: {coeff}");
        }
    }

    #[test]
    fn hg10_quadrupole() {
        let coeff = first_order_coefficient(|kw0| {
            let b = beam(BeamMode::HermiteGauss { m: 1, n: 0 }, kw0, x_dir(), JonesVector::theta_hat());
            beam_coupling_integral(&b, 2, 0).unwrap()
        });
        let mag = (15.0 / (8.0 * PI)).sqrt() * 2.0 * SQRT_2;
        assert!((coeff.norm() - mag).abs() < 1e-6 * mag, "{coeff}");
        assert!(coeff.re.abs() < 1e-9 * mag);
    }

    #[test]
    fn lg_quadrupole_winding() {
        let lg = BeamMode::LaguerreGauss { n: 0, l: 1 };
        let coeff = first_order_coefficient(|kw0| {
            let b = beam(lg.clone(), kw0, SphDirection::z_axis(), JonesVector::lcp());
            beam_coupling_integral(&b, 2, 2).unwrap()
        });
        let mag = (5.0 / (8.0 * PI)).sqrt() * 2.0 * SQRT_2;
        assert!((coeff.norm() - mag).abs() < 1e-6 * mag, "{coeff}");
        let b = beam(lg, 200.0, SphDirection::z_axis(), JonesVector::lcp());
        assert!(beam_coupling_integral(&b, 2, -2).unwrap().norm() < 1e-10);
    }

    #[test]
    fn donut_beats_separable() {
        let donut = first_order_coefficient(|kw0| {
            let b = beam(BeamMode::radial_donut(), kw0, SphDirection::z_axis(), JonesVector::theta_hat());
            beam_coupling_integral(&b, 1, 0).unwrap()
        });
        let want = i() * (3.0 / (8.0 * PI)).sqrt() * 4.0;
        assert!((donut - want).norm() < 1e-6 * want.norm(), "{donut}");
        let separable = first_order_coefficient(|kw0| {
            let b = beam(BeamMode::HermiteGauss { m: 1, n: 0 }, kw0, SphDirection::z_axis(), JonesVector::theta_hat());
            beam_coupling_integral(&b, 1, 0).unwrap()
        });
        assert!((separable.norm() / donut.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6);
    }

    #[test]
    fn vector_mode_is_sum_of_terms() {
        let dir = SphDirection::new(0.4, 2.0).unwrap();
        let terms = vec![
            VectorTerm { polarization: JonesVector::real(0.6, 0.0), mode: BeamMode::HermiteGauss { m: 1, n: 0 } },
            VectorTerm { polarization: JonesVector::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.8)), mode: BeamMode::LaguerreGauss { n: 1, l: -1 } },
        ];
        let mut v = beam(BeamMode::Vector(terms.clone()), 60.0, dir, JonesVector::theta_hat());
        v.offset = [0.2, -0.1];
        let total = beam_coupling_integral(&v, 2, -1).unwrap();
        let parts: Complex64 = terms
            .iter()
            .map(|t| {
                let norm = t.polarization.norm_sqr().sqrt();
                let mut s = v.clone();
                s.mode = t.mode.clone();
                s.jones = t.polarization.scale(Complex64::new(1.0 / norm, 0.0));
                beam_coupling_integral(&s, 2, -1).unwrap() * norm
            })
            .sum();
        assert!((total - parts).norm() < 1e-10);
    }

    #[test]
    fn reprojection_changes_only_higher_orders() {
        let b = beam(BeamMode::gaussian(), 200.0, x_dir(), JonesVector::theta_hat());
        let fixed = beam_coupling_integral(&b, 1, 0).unwrap();
        let opts = QuadratureOptions { reproject_polarization: true, ..Default::default() };
        let re = beam_coupling_integral_with(&b, 1, 0, &opts).unwrap().value;
        assert!((fixed - re).norm() > 1e-9);
        assert!((fixed - re).norm() < 10.0 / (200.0f64 * 200.0));
    }

    #[test]
    fn magnetic_uses_cross_product() {
        // β̂ = k̂ × φ̂ = −ϑ̂ for a plane wave; the Gaussian should agree at large kw0.
        let b = beam(BeamMode::gaussian(), 1e4, x_dir(), JonesVector::phi_hat());
        let opts = QuadratureOptions { character: Character::Magnetic, ..Default::default() };
        let m = beam_coupling_integral_with(&b, 1, 0, &opts).unwrap().value;
        let want = plane_wave_coupling(1, 0, x_dir(), -theta_hat(x_dir())).unwrap();
        assert!((m - want).norm() < 1e-6);
    }

    #[test]
    fn non_convergence_reports_tolerance() {
        let mut b = beam(BeamMode::gaussian(), 50.0, x_dir(), JonesVector::theta_hat());
        b.offset = [40.0, 0.0];
        let opts = QuadratureOptions { tolerance: 1e-15, ..Default::default() };
        match beam_coupling_integral_with(&b, 1, 0, &opts) {
            Err(BeamError::NotConverged { achieved, nodes }) => {
                assert!(achieved > 1e-15);
                assert_eq!(nodes, 512);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_delta_m() {
        let b = beam(BeamMode::gaussian(), 100.0, x_dir(), JonesVector::theta_hat());
        assert!(matches!(beam_coupling_integral(&b, 1, 2), Err(BeamError::Coupling(_))));
    }
}
