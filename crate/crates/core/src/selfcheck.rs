//! Built-in consistency suites: closed-form tables of rotation-matrix rows,
//! vector spherical harmonics and polarization states, checked against the
//! general-rank routines of this crate.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::angular::{wigner_d_pm1, wigner_d_pm1_closed, SphDirection};
use crate::coupling::multipole_prefactor_radicands;
use crate::frames::{helicity_frame, spherical_components, CVec3, HelicityFrame};
use crate::polarization::{circular_components, cvec_to_jones, jones_to_cvec, JonesVector};
use crate::tensor::verify_polarization_identity;
use crate::vsh::{vsh_magnitude_w, vsh_plus1};

/// Result of one suite: worst deviation over `cases` comparisons.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub max_error: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.max_error.is_finite() && self.max_error <= self.tolerance
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cis(n: i32, phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, f64::from(n) * phi)
}

/// `n` directions spread over the sphere by a golden-angle spiral, clear of
/// the poles.
pub fn spiral_directions(n: usize) -> Vec<SphDirection> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let u = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let phi = (golden * i as f64).rem_euclid(2.0 * PI);
            SphDirection::new(u.acos(), phi).expect("finite angles")
        })
        .collect()
}

/// Tabulated D^(K)_{σ,m}(0, θ, φ) for K ≤ 3, σ = ±1.
pub fn wigner_d_table_entry(rank: i32, sigma: i32, m: i32, theta: f64, phi: f64) -> Option<Complex64> {
    let (sh, ch) = (0.5 * theta).sin_cos();
    let (s1, s2, s3) = (theta.sin(), (2.0 * theta).sin(), (3.0 * theta).sin());
    let (c1, c2, c3) = (theta.cos(), (2.0 * theta).cos(), (3.0 * theta).cos());
    let e = |n: i32| cis(n, phi);
    let r52 = (2.5f64).sqrt() / 16.0;
    let v = match (rank, sigma, m) {
        (1, -1, -1) => e(1) * ch * ch,
        (1, 1, -1) => e(1) * sh * sh,
        (1, -1, 0) => c(s1 * FRAC_1_SQRT_2, 0.0),
        (1, 1, 0) => c(-s1 * FRAC_1_SQRT_2, 0.0),
        (1, -1, 1) => e(-1) * sh * sh,
        (1, 1, 1) => e(-1) * ch * ch,

        (2, -1, -2) => -e(2) * s1 * ch * ch,
        (2, 1, -2) => -e(2) * s1 * sh * sh,
        (2, -1, -1) => e(1) * 0.5 * (c1 + c2),
        (2, 1, -1) => e(1) * 0.5 * (c1 - c2),
        (2, -1, 0) => c((3.0f64 / 8.0).sqrt() * s2, 0.0),
        (2, 1, 0) => c(-(3.0f64 / 8.0).sqrt() * s2, 0.0),
        (2, -1, 1) => e(-1) * 0.5 * (c1 - c2),
        (2, 1, 1) => e(-1) * 0.5 * (c1 + c2),
        (2, -1, 2) => e(-2) * s1 * sh * sh,
        (2, 1, 2) => e(-2) * s1 * ch * ch,

        (3, -1, -3) => e(3) * 15f64.sqrt() * ch.powi(4) * sh * sh,
        (3, 1, -3) => e(3) * 15f64.sqrt() * sh.powi(4) * ch * ch,
        (3, -1, -2) => e(2) * r52 * (s1 - 4.0 * s2 - 3.0 * s3),
        (3, 1, -2) => -e(2) * r52 * (s1 + 4.0 * s2 - 3.0 * s3),
        (3, -1, -1) => e(1) * (6.0 + c1 + 10.0 * c2 + 15.0 * c3) / 32.0,
        (3, 1, -1) => e(1) * (6.0 - c1 + 10.0 * c2 - 15.0 * c3) / 32.0,
        (3, -1, 0) => c(3f64.sqrt() / 8.0 * s1 * (3.0 + 5.0 * c2), 0.0),
        (3, 1, 0) => c(-(3f64.sqrt()) / 8.0 * s1 * (3.0 + 5.0 * c2), 0.0),
        (3, -1, 1) => e(-1) * (6.0 - c1 + 10.0 * c2 - 15.0 * c3) / 32.0,
        (3, 1, 1) => e(-1) * (6.0 + c1 + 10.0 * c2 + 15.0 * c3) / 32.0,
        (3, -1, 2) => e(-2) * r52 * (s1 + 4.0 * s2 - 3.0 * s3),
        (3, 1, 2) => -e(-2) * r52 * (s1 - 4.0 * s2 - 3.0 * s3),
        (3, -1, 3) => e(-3) * 15f64.sqrt() * sh.powi(4) * ch * ch,
        (3, 1, 3) => e(-3) * 15f64.sqrt() * ch.powi(4) * sh * sh,
        _ => return None,
    };
    Some(v)
}

fn table_indices() -> impl Iterator<Item = (i32, i32, i32)> {
    (1..=3).flat_map(|k| (-k..=k).flat_map(move |m| [-1, 1].map(move |s| (k, s, m))))
}

/// Every tabulated rotation-matrix entry against both general-rank forms.
pub fn wigner_d_table() -> CheckOutcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for d in spiral_directions(20) {
        let (t, p) = (d.theta(), d.phi());
        for (k, s, m) in table_indices() {
            let want = wigner_d_table_entry(k, s, m, t, p).expect("tabulated entry");
            worst = worst
                .max((wigner_d_pm1(k, s, m, t, p) - want).norm())
                .max((wigner_d_pm1_closed(k, s, m, t, p) - want).norm());
            cases += 1;
        }
    }
    CheckOutcome {
        name: "rotation-matrix table",
        cases,
        max_error: worst,
        tolerance: 1e-12,
    }
}

/// Explicit Y^(+1)_{K,p} for K ≤ 3 written with ϑ̂ and φ̂.
pub fn vsh_linear_entry(rank: i32, p: i32, f: &HelicityFrame) -> Option<CVec3> {
    let (t, ph) = (f.k_dir.theta(), f.k_dir.phi());
    let (th, fh) = (f.e_xp, f.e_yp);
    let (s1, s2, s3) = (t.sin(), (2.0 * t).sin(), (3.0 * t).sin());
    let (c1, c2, c3) = (t.cos(), (2.0 * t).cos(), (3.0 * t).cos());
    let e = |n: i32| cis(n, ph);
    let i = c(0.0, 1.0);
    let n = |num: f64, den: f64| (num / (den * PI)).sqrt();
    let v = match (rank, p) {
        (1, -1) => (th * c1 - fh * i) * (e(-1) * n(3.0, 16.0)),
        (1, 0) => th * (-n(3.0, 8.0) * s1),
        (1, 1) => (th * c1 + fh * i) * (-e(1) * n(3.0, 16.0)),

        (2, -2) => (th * c1 - fh * i) * (e(-2) * n(5.0, 16.0) * s1),
        (2, -1) => (th * c2 - fh * (i * c1)) * (e(-1) * n(5.0, 16.0)),
        (2, 0) => th * (-n(15.0, 32.0) * s2),
        (2, 1) => (th * c2 + fh * (i * c1)) * (-e(1) * n(5.0, 16.0)),
        (2, 2) => (th * c1 + fh * i) * (e(2) * n(5.0, 16.0) * s1),

        (3, -3) => (th * c1 - fh * i) * (e(-3) * n(105.0, 256.0) * s1 * s1),
        (3, -2) => (th * (s1 - 3.0 * s3) + fh * (i * 4.0 * s2)) * (-e(-2) * n(35.0, 2048.0)),
        (3, -1) => (th * (c1 + 15.0 * c3) - fh * (i * (6.0 + 10.0 * c2))) * (e(-1) * n(7.0, 4096.0)),
        (3, 0) => th * (-n(21.0, 256.0) * s1 * (3.0 + 5.0 * c2)),
        (3, 1) => (th * (c1 + 15.0 * c3) + fh * (i * (6.0 + 10.0 * c2))) * (-e(1) * n(7.0, 4096.0)),
        (3, 2) => (th * (s1 - 3.0 * s3) - fh * (i * 4.0 * s2)) * (-e(2) * n(35.0, 2048.0)),
        (3, 3) => (th * c1 + fh * i) * (-e(3) * n(105.0, 256.0) * s1 * s1),
        _ => return None,
    };
    Some(v)
}

/// Explicit Y^(+1)_{K,p} for K ≤ 3 written with ê'_{±1}.
pub fn vsh_circular_entry(rank: i32, p: i32, f: &HelicityFrame) -> Option<CVec3> {
    let (t, ph) = (f.k_dir.theta(), f.k_dir.phi());
    let (ep, em) = (f.e_plus, f.e_minus);
    let (sh2, ch2) = ((0.5 * t).sin().powi(2), (0.5 * t).cos().powi(2));
    let (s1, s2, s3) = (t.sin(), (2.0 * t).sin(), (3.0 * t).sin());
    let (c1, c2, c3) = (t.cos(), (2.0 * t).cos(), (3.0 * t).cos());
    let e = |n: i32| cis(n, ph);
    let n = |num: f64, den: f64| (num / (den * PI)).sqrt();
    let (a3, b3) = (6.0 + c1 + 10.0 * c2 + 15.0 * c3, 6.0 - c1 + 10.0 * c2 - 15.0 * c3);
    let (u2, w2) = (s1 + 4.0 * s2 - 3.0 * s3, s1 - 4.0 * s2 - 3.0 * s3);
    let v = match (rank, p) {
        (1, -1) => (ep * sh2 + em * ch2) * (e(-1) * n(3.0, 8.0)),
        (1, 0) => (ep - em) * (n(3.0, 16.0) * s1),
        (1, 1) => (ep * ch2 + em * sh2) * (e(1) * n(3.0, 8.0)),

        (2, -2) => (ep * sh2 + em * ch2) * (e(-2) * n(5.0, 8.0) * s1),
        (2, -1) => (ep * (c1 - c2) + em * (c1 + c2)) * (e(-1) * n(5.0, 32.0)),
        (2, 0) => (ep - em) * (n(15.0, 64.0) * s2),
        (2, 1) => (ep * (c1 + c2) + em * (c1 - c2)) * (e(1) * n(5.0, 32.0)),
        (2, 2) => (ep * ch2 + em * sh2) * (-e(2) * n(5.0, 8.0) * s1),

        (3, -3) => (ep * sh2 + em * ch2) * (e(-3) * n(105.0, 128.0) * s1 * s1),
        (3, -2) => (ep * u2 - em * w2) * (e(-2) * n(35.0, 4096.0)),
        (3, -1) => (ep * b3 + em * a3) * (e(-1) * n(7.0, 8192.0)),
        (3, 0) => (ep - em) * (n(21.0, 512.0) * s1 * (3.0 + 5.0 * c2)),
        (3, 1) => (ep * a3 + em * b3) * (e(1) * n(7.0, 8192.0)),
        (3, 2) => (ep * w2 - em * u2) * (e(2) * n(35.0, 4096.0)),
        (3, 3) => (ep * ch2 + em * sh2) * (e(3) * n(105.0, 128.0) * s1 * s1),
        _ => return None,
    };
    Some(v)
}

/// Tabulated W_{K,|p|}(θ) and the two un-normalized direction columns
/// (circular, linear) for K ≤ 3.
pub fn vsh_magnitude_direction_entry(rank: i32, p: i32, f: &HelicityFrame) -> Option<(f64, CVec3, CVec3)> {
    let (t, ph) = (f.k_dir.theta(), f.k_dir.phi());
    let (th, fh) = (f.e_xp, f.e_yp);
    let sg = f64::from(p.signum());
    // ê'_{±1} and ê'_{∓1} for the sign of p
    let (eu, el) = if p >= 0 { (f.e_plus, f.e_minus) } else { (f.e_minus, f.e_plus) };
    let (sh2, ch2) = ((0.5 * t).sin().powi(2), (0.5 * t).cos().powi(2));
    let (s1, s2, s3) = (t.sin(), (2.0 * t).sin(), (3.0 * t).sin());
    let (c1, c2, c3) = (t.cos(), (2.0 * t).cos(), (3.0 * t).cos());
    let e = cis(p, ph);
    let i = c(0.0, 1.0);
    let entry = match (rank, p.abs()) {
        (1, 0) => (3.0 / (8.0 * PI) * s1 * s1, f.e_plus - f.e_minus, th * -1.0),
        (1, 1) => (
            3.0 / (16.0 * PI) * (1.0 + c1 * c1),
            (eu * ch2 + el * sh2) * e,
            (th * c1 + fh * (i * sg)) * (-sg * e),
        ),
        (2, 0) => (
            15.0 / (8.0 * PI) * s1 * s1 * c1 * c1,
            (f.e_plus - f.e_minus) * c1,
            th * -c1,
        ),
        (2, 1) => (
            5.0 / (16.0 * PI) * (1.0 - 3.0 * c1 * c1 + 4.0 * c1.powi(4)),
            (eu * (c1 + c2) + el * (c1 - c2)) * e,
            (th * c2 + fh * (i * sg * c1)) * (-sg * e),
        ),
        (2, 2) => (
            5.0 / (16.0 * PI) * (1.0 - c1.powi(4)),
            (eu * ch2 + el * sh2) * (-sg * e),
            (th * c1 + fh * (i * sg)) * e,
        ),
        (3, 0) => (
            21.0 / (64.0 * PI) * s1 * s1 * (1.0 - 5.0 * c1 * c1).powi(2),
            (f.e_plus - f.e_minus) * (3.0 + 5.0 * c2),
            th * -(3.0 + 5.0 * c2),
        ),
        (3, 1) => (
            7.0 * (1.0 + 111.0 * c1 * c1 - 305.0 * c1.powi(4) + 225.0 * c1.powi(6)) / (256.0 * PI),
            (eu * (6.0 + c1 + 10.0 * c2 + 15.0 * c3) + el * (6.0 - c1 + 10.0 * c2 - 15.0 * c3)) * e,
            (th * (c1 + 15.0 * c3) + fh * (i * sg * (6.0 + 10.0 * c2))) * (-sg * e),
        ),
        (3, 2) => (
            35.0 * s1 * s1 * (1.0 - 2.0 * c1 * c1 + 9.0 * c1.powi(4)) / (128.0 * PI),
            (eu * (s1 - 4.0 * s2 - 3.0 * s3) - el * (s1 + 4.0 * s2 - 3.0 * s3)) * (sg * e),
            (th * (s1 - 3.0 * s3) - fh * (i * sg * 4.0 * s2)) * -e,
        ),
        (3, 3) => (
            105.0 / (256.0 * PI) * s1.powi(4) * (1.0 + c1 * c1),
            (eu * ch2 + el * sh2) * e,
            (th * c1 + fh * (i * sg)) * (-sg * e),
        ),
        _ => return None,
    };
    Some(entry)
}

fn vsh_indices() -> impl Iterator<Item = (i32, i32)> {
    (1..=3).flat_map(|k| (-k..=k).map(move |p| (k, p)))
}

/// Explicit harmonic lists in both transverse bases.
pub fn vsh_explicit_lists() -> CheckOutcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for d in spiral_directions(20) {
        let f = helicity_frame(d);
        for (k, p) in vsh_indices() {
            let y = vsh_plus1(k, p, d).value;
            for want in [vsh_linear_entry(k, p, &f), vsh_circular_entry(k, p, &f)] {
                worst = worst.max(y.max_abs_diff(want.expect("tabulated harmonic")));
                cases += 1;
            }
        }
    }
    CheckOutcome {
        name: "vector harmonic lists",
        cases,
        max_error: worst,
        tolerance: 1e-12,
    }
}

/// Harmonics rebuilt as √W · â from the magnitude/direction table.
pub fn vsh_magnitude_direction() -> CheckOutcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for d in spiral_directions(20) {
        let f = helicity_frame(d);
        for (k, p) in vsh_indices() {
            let (w, circ, lin) = vsh_magnitude_direction_entry(k, p, &f).expect("tabulated harmonic");
            let y = vsh_plus1(k, p, d).value;
            worst = worst.max((w - vsh_magnitude_w(k, p, d.theta())).abs());
            for a in [circ, lin] {
                let n = a.norm();
                let rebuilt = if n > 0.0 { a * (w.sqrt() / n) } else { CVec3::ZERO };
                worst = worst.max(y.max_abs_diff(rebuilt));
                cases += 1;
            }
        }
    }
    CheckOutcome {
        name: "magnitude/direction table",
        cases,
        max_error: worst,
        tolerance: 1e-12,
    }
}

/// One row of the polarization-state table: a geometry, the polarization it
/// describes, and the stated (ε'_{+1}, ε'_{−1}, ε'_{x'}, ε'_{y'}).
pub struct PolarizationRow {
    pub k_dir: SphDirection,
    pub eps: CVec3,
    pub stated: [Complex64; 4],
}

/// The tabulated principal polarization states, instantiated at a few
/// representative directions and angles.
pub fn polarization_rows() -> Vec<PolarizationRow> {
    let r = FRAC_1_SQRT_2;
    let dir = |t: f64, p: f64| SphDirection::new(t, p).expect("finite angles");
    let mut rows = Vec::new();
    for d in spiral_directions(5) {
        let f = helicity_frame(d);
        rows.push(PolarizationRow {
            k_dir: d,
            eps: jones_to_cvec(JonesVector::lcp(), &f),
            stated: [c(0.0, 0.0), c(1.0, 0.0), c(r, 0.0), c(0.0, r)],
        });
        rows.push(PolarizationRow {
            k_dir: d,
            eps: jones_to_cvec(JonesVector::rcp(), &f),
            stated: [c(1.0, 0.0), c(0.0, 0.0), c(r, 0.0), c(0.0, -r)],
        });
    }
    // σ⁺ light: ε ∝ x̂ + iŷ
    let sigma_plus = CVec3::new(c(r, 0.0), c(0.0, r), c(0.0, 0.0));
    rows.push(PolarizationRow {
        k_dir: dir(0.0, 0.0),
        eps: sigma_plus,
        stated: [c(0.0, 0.0), c(1.0, 0.0), c(r, 0.0), c(0.0, r)],
    });
    rows.push(PolarizationRow {
        k_dir: dir(PI, 0.0),
        eps: sigma_plus,
        stated: [c(1.0, 0.0), c(0.0, 0.0), c(r, 0.0), c(0.0, -r)],
    });
    for phi in [0.0, 1.1, 4.0] {
        rows.push(PolarizationRow {
            k_dir: dir(PI / 2.0, phi),
            eps: CVec3::z_hat(),
            stated: [c(r, 0.0), c(-r, 0.0), c(-1.0, 0.0), c(0.0, 0.0)],
        });
    }
    // linear at angle γ from the plane holding k̂ and ẑ
    for (theta, phi) in [(PI / 2.0, 0.3), (0.7, 2.0), (2.5, 5.5)] {
        for gamma in [0.0f64, 0.4, 1.3, 2.9] {
            let d = dir(theta, phi);
            let khat = CVec3::real(d.unit_vector());
            let in_plane = CVec3::z_hat() - khat * theta.cos();
            let in_plane = in_plane * (1.0 / in_plane.norm());
            let f = helicity_frame(d);
            let eps = in_plane * gamma.cos() - f.e_yp * gamma.sin();
            rows.push(PolarizationRow {
                k_dir: d,
                eps,
                stated: [
                    cis(1, gamma) * r,
                    -cis(-1, gamma) * r,
                    c(-gamma.cos(), 0.0),
                    c(-gamma.sin(), 0.0),
                ],
            });
        }
    }
    rows.push(PolarizationRow {
        k_dir: dir(PI / 2.0, 1.5 * PI),
        eps: CVec3::x_hat(),
        stated: [c(0.0, -r), c(0.0, -r), c(0.0, 0.0), c(1.0, 0.0)],
    });
    rows.push(PolarizationRow {
        k_dir: dir(PI / 2.0, PI),
        eps: CVec3::y_hat(),
        stated: [c(0.0, r), c(0.0, r), c(0.0, 0.0), c(-1.0, 0.0)],
    });
    rows.push(PolarizationRow {
        k_dir: dir(0.0, 0.0),
        eps: CVec3::x_hat(),
        stated: [c(-r, 0.0), c(r, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
    });
    for beta in [0.2f64, 1.0, 2.2, 3.0] {
        rows.push(PolarizationRow {
            k_dir: dir(0.0, 0.0),
            eps: CVec3::real([beta.cos(), beta.sin(), 0.0]),
            stated: [-cis(1, beta) * r, cis(-1, beta) * r, c(beta.cos(), 0.0), c(beta.sin(), 0.0)],
        });
    }
    rows
}

/// Smallest max-deviation between `got` and `want` after one global phase.
fn phase_aligned_error(got: &[Complex64], want: &[Complex64]) -> f64 {
    let overlap: Complex64 = got.iter().zip(want).map(|(g, w)| g.conj() * w).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { c(1.0, 0.0) };
    got.iter()
        .zip(want)
        .map(|(g, w)| (g * phase - w).norm())
        .fold(0.0, f64::max)
}

/// Principal polarization states: components and Jones vectors round-trip.
pub fn polarization_table() -> CheckOutcome {
    let mut worst = 0.0f64;
    let rows = polarization_rows();
    for row in &rows {
        let f = helicity_frame(row.k_dir);
        let (plus, minus) = circular_components(row.eps, &f);
        let j = match cvec_to_jones(row.eps, &f) {
            Ok(j) => j,
            Err(_) => return CheckOutcome {
                name: "polarization-state table",
                cases: rows.len(),
                max_error: f64::INFINITY,
                tolerance: 1e-14,
            },
        };
        // each column group carries its own phase; see `rcp_rows_flip_sign`
        worst = worst
            .max(phase_aligned_error(&[plus, minus], &row.stated[..2]))
            .max(phase_aligned_error(&[j.jx, j.jy], &row.stated[2..]));
        let from_circular = JonesVector::from_circular(row.stated[0], row.stated[1]);
        worst = worst.max(phase_aligned_error(&[from_circular.jx, from_circular.jy], &row.stated[2..]));
        let back = jones_to_cvec(j, &f);
        worst = worst.max(back.max_abs_diff(row.eps));
    }
    CheckOutcome {
        name: "polarization-state table",
        cases: rows.len(),
        max_error: worst,
        tolerance: 1e-14,
    }
}

/// Deterministic transverse (k̂, ε) pairs with generic elliptical ε.
pub fn transverse_pairs(n: usize) -> Vec<(SphDirection, CVec3)> {
    spiral_directions(n)
        .into_iter()
        .enumerate()
        .map(|(i, d)| {
            let x = i as f64;
            let chi = (0.7 + 1.3 * x).rem_euclid(PI);
            let delta = (0.2 + 2.1 * x).rem_euclid(2.0 * PI);
            let j = JonesVector::new(c(chi.cos(), 0.0), Complex64::from_polar(chi.sin(), delta));
            (d, jones_to_cvec(j, &helicity_frame(d)))
        })
        .collect()
}

/// The nested-tensor identity for ranks 1–4.
pub fn polarization_identity() -> CheckOutcome {
    let pairs = transverse_pairs(100);
    let mut worst = 0.0f64;
    for k in 1..=4 {
        for &(d, eps) in &pairs {
            let r = verify_polarization_identity(k, d, eps).unwrap_or(f64::INFINITY);
            worst = worst.max(r);
        }
    }
    CheckOutcome {
        name: "polarization identity",
        cases: 4 * pairs.len(),
        max_error: worst,
        tolerance: 1e-10,
    }
}

/// √(8π/3) ε·Y^(+1)_{1,−p}(k̂) against the spherical component ε_{−p}.
pub fn dipole_reduction() -> CheckOutcome {
    let pairs = transverse_pairs(100);
    let mut worst = 0.0f64;
    let factor = (8.0 * PI / 3.0).sqrt();
    for &(d, eps) in &pairs {
        let comps = spherical_components(eps);
        for p in -1..=1 {
            let lhs = eps.dot(vsh_plus1(1, -p, d).value) * factor;
            // components are stored in the order (+1, 0, −1)
            let rhs = comps[(1 + p) as usize];
            worst = worst.max((lhs - rhs).norm());
        }
    }
    CheckOutcome {
        name: "dipole reduction",
        cases: 3 * pairs.len(),
        max_error: worst,
        tolerance: 1e-12,
    }
}

/// Exact radicands of the rank-dependent prefactors for K = 1, 2, 3.
pub fn prefactor_table() -> CheckOutcome {
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let expected = [
        (1, q(8, 3), q(4, 3), q(8, 3)),
        (2, q(2, 15), q(1, 15), q(4, 5)),
        (3, q(16, 4725), q(8, 4725), q(32, 105)),
    ];
    let mismatches = expected
        .iter()
        .filter(|(k, h, e, i)| {
            let r = multipole_prefactor_radicands(*k);
            r.hamiltonian_over_pi != *h || r.einstein != *e || r.identity_over_pi != *i
        })
        .count();
    CheckOutcome {
        name: "prefactor radicands",
        cases: 3 * expected.len(),
        max_error: mismatches as f64,
        tolerance: 0.0,
    }
}

/// Every suite, in a fixed order.
pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        wigner_d_table(),
        vsh_explicit_lists(),
        vsh_magnitude_direction(),
        polarization_table(),
        polarization_identity(),
        dipole_reduction(),
        prefactor_table(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for o in run_all() {
            assert!(o.passed(), "{o:?}");
        }
    }

    #[test]
    fn table_covers_all_rows() {
        assert_eq!(table_indices().count(), 30);
        assert!(wigner_d_table_entry(4, 1, 0, 0.3, 0.0).is_none());
    }

    #[test]
    fn spiral_avoids_poles() {
        for d in spiral_directions(20) {
            assert!(!d.is_pole());
        }
    }

    #[test]
    fn a_wrong_table_entry_is_caught() {
        let f = helicity_frame(spiral_directions(3)[1]);
        let y = vsh_plus1(2, 1, f.k_dir).value;
        let flipped = vsh_linear_entry(2, -1, &f).unwrap();
        assert!(y.max_abs_diff(flipped) > 1e-3);
    }

    /// The tabulated negative-helicity rows list circular and linear columns
    /// that agree only up to a relative sign, so a single phase per row
    /// cannot reproduce them.
    #[test]
    fn rcp_rows_flip_sign() {
        let flipped: Vec<usize> = polarization_rows()
            .iter()
            .enumerate()
            .filter(|(_, row)| {
                let j = JonesVector::from_circular(row.stated[0], row.stated[1]);
                phase_aligned_error(&[row.stated[0], row.stated[1], j.jx, j.jy], &row.stated[..]) > 1e-12
            })
            .map(|(i, _)| i)
            .collect();
        assert_eq!(flipped, vec![1, 3, 5, 7, 9, 11]);
    }
}
