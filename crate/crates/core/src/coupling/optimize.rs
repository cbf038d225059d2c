//! Deterministic search over propagation polar angle and polarization
//! ellipse for the plane wave that best drives one Δm component.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use super::CouplingError;
use crate::angular::SphDirection;
use crate::frames::{phi_hat, theta_hat};
use crate::polarization::JonesVector;
use crate::vsh::vsh_plus1;

/// Coarse grid sizes: polar angle, ellipse orientation, ellipticity.
pub const OPTIMIZER_GRID: (usize, usize, usize) = (181, 73, 37);

const STEP_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100_000;
/// Weight of leakage into other components under the zero-selectivity objective.
const LEAK_PENALTY: f64 = 10.0;
/// Residual selectivity and minimum coupling accepted as a zero-selectivity optimum.
const ZERO_SELECTIVITY_TOL: f64 = 1e-9;
const MIN_COUPLING: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    MaxCoupling,
    MaxCouplingZeroSelectivity,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizedGeometry {
    pub k_dir: SphDirection,
    pub jones: JonesVector,
    /// ε·Y^(+1)_{K,−Δm}(k̂) at the optimum.
    pub coupling: Complex64,
    pub selectivity: f64,
}

/// Rotated ellipse: R(ψ)(cos χ, i sin χ). Covers every polarization up to phase.
fn ellipse(orientation: f64, ellipticity: f64) -> JonesVector {
    let (so, co) = orientation.sin_cos();
    let (se, ce) = ellipticity.sin_cos();
    JonesVector::new(Complex64::new(co * ce, -so * se), Complex64::new(so * ce, co * se))
}

/// (Y·ϑ̂, Y·φ̂) of Y^(+1)_{K,−p} at (θ, 0) for p = −K..K.
fn transverse_parts(rank: u32, theta: f64) -> Vec<(Complex64, Complex64)> {
    let dir = SphDirection::new(theta, 0.0).expect("polar angle within [0, π]");
    let (th, ph) = (theta_hat(dir), phi_hat(dir));
    let k = rank as i32;
    (-k..=k)
        .map(|p| {
            let y = vsh_plus1(k, -p, dir).value;
            (y.dot(th), y.dot(ph))
        })
        .collect()
}

struct Evaluator {
    rank: u32,
    delta_m: i32,
    objective: Objective,
}

impl Evaluator {
    fn couplings(&self, parts: &[(Complex64, Complex64)], j: JonesVector) -> (Complex64, f64) {
        let k = self.rank as i32;
        let mut target = Complex64::new(0.0, 0.0);
        let mut leak = 0.0;
        for (p, &(a, b)) in (-k..=k).zip(parts) {
            let c = j.jx * a + j.jy * b;
            if p == self.delta_m {
                target = c;
            } else {
                leak += c.norm();
            }
        }
        (target, leak)
    }

    fn score(&self, parts: &[(Complex64, Complex64)], j: JonesVector) -> f64 {
        let (target, leak) = self.couplings(parts, j);
        match self.objective {
            Objective::MaxCoupling => target.norm(),
            Objective::MaxCouplingZeroSelectivity => target.norm() - LEAK_PENALTY * leak,
        }
    }

    fn at(&self, x: [f64; 3]) -> f64 {
        self.score(&transverse_parts(self.rank, x[0]), ellipse(x[1], x[2]))
    }
}

fn clamp(x: [f64; 3]) -> [f64; 3] {
    [x[0].clamp(0.0, PI), x[1], x[2].clamp(-FRAC_PI_4, FRAC_PI_4)]
}

/// Best plane wave (k̂ in the xz plane, any polarization) for Δm. Rotations
/// about ẑ only rephase the coupling, so φ_k = 0 loses nothing.
pub fn optimize_geometry(
    rank: u32,
    delta_m: i32,
    objective: Objective,
) -> Result<OptimizedGeometry, CouplingError> {
    if rank == 0 {
        return Err(CouplingError::RankZero);
    }
    if delta_m.unsigned_abs() > rank {
        return Err(CouplingError::DeltaMOutOfRange { delta_m, rank });
    }
    let ev = Evaluator {
        rank,
        delta_m,
        objective,
    };
    let (nt, no, ne) = OPTIMIZER_GRID;
    let spacing = [
        PI / (nt - 1) as f64,
        PI / (no - 1) as f64,
        2.0 * FRAC_PI_4 / (ne - 1) as f64,
    ];
    let point = |i: usize, j: usize, l: usize| {
        [
            spacing[0] * i as f64,
            spacing[1] * j as f64,
            -FRAC_PI_4 + spacing[2] * l as f64,
        ]
    };

    // Best cell per polar angle, then a sequential first-wins reduction so the
    // answer is independent of scheduling.
    let rows: Vec<(f64, [f64; 3])> = (0..nt)
        .into_par_iter()
        .map(|i| {
            let parts = transverse_parts(rank, point(i, 0, 0)[0]);
            let mut best = (f64::NEG_INFINITY, point(i, 0, 0));
            for j in 0..no {
                for l in 0..ne {
                    let x = point(i, j, l);
                    let s = ev.score(&parts, ellipse(x[1], x[2]));
                    if s > best.0 {
                        best = (s, x);
                    }
                }
            }
            best
        })
        .collect();
    let (mut best, mut x) = rows
        .into_iter()
        .fold((f64::NEG_INFINITY, [0.0; 3]), |acc, r| if r.0 > acc.0 { r } else { acc });

    let mut step = spacing;
    for _ in 0..MAX_SWEEPS {
        if step.iter().all(|&s| s < STEP_TOL) {
            break;
        }
        let mut moved = false;
        for c in 0..3 {
            for dir in [1.0, -1.0] {
                let mut y = x;
                y[c] += dir * step[c];
                let y = clamp(y);
                let s = ev.at(y);
                if s > best {
                    best = s;
                    x = y;
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            step.iter_mut().for_each(|s| *s *= 0.5);
        }
    }

    let k_dir = SphDirection::new(x[0], 0.0).expect("clamped polar angle");
    let jones = ellipse(x[1], x[2]);
    let (coupling, leak) = ev.couplings(&transverse_parts(rank, x[0]), jones);
    if objective == Objective::MaxCouplingZeroSelectivity
        && (leak > ZERO_SELECTIVITY_TOL || coupling.norm() < MIN_COUPLING)
    {
        return Err(CouplingError::NotFound { rank, delta_m });
    }
    Ok(OptimizedGeometry {
        k_dir,
        jones,
        coupling,
        selectivity: leak,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::{plane_wave_coupling, selectivity};
    use crate::frames::helicity_frame;
    use crate::polarization::jones_to_cvec;
    use crate::vsh::vsh_magnitude_w;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn ellipse_is_unit() {
        for &(o, e) in &[(0.0, 0.0), (0.3, -0.7), (2.0, FRAC_PI_4)] {
            assert!((ellipse(o, e).norm_sqr() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn e1_pi_optimum() {
        let g = optimize_geometry(1, 0, Objective::MaxCoupling).unwrap();
        assert!((g.k_dir.theta() - FRAC_PI_2).abs() < 1e-6);
        assert!((g.coupling.norm() - (3.0 / (8.0 * PI)).sqrt()).abs() < 1e-12);
        // ε ∝ ϑ̂ up to a phase.
        assert!((g.jones.jx.norm() - 1.0).abs() < 1e-9 && g.jones.jy.norm() < 1e-5);
        let z = optimize_geometry(1, 0, Objective::MaxCouplingZeroSelectivity).unwrap();
        assert!(z.selectivity < 1e-9);
    }

    #[test]
    fn e1_sigma_optimum_is_on_axis_and_circular() {
        for dm in [1, -1] {
            let g = optimize_geometry(1, dm, Objective::MaxCouplingZeroSelectivity).unwrap();
            let t = g.k_dir.theta();
            assert!(t < 1e-6 || (PI - t) < 1e-6, "θ = {t}");
            assert!((g.jones.jx.norm() - g.jones.jy.norm()).abs() < 1e-6);
            let eps = jones_to_cvec(g.jones, &helicity_frame(g.k_dir));
            assert!(selectivity(1, dm, g.k_dir, eps) < 1e-9);
            let want = plane_wave_coupling(1, dm, g.k_dir, eps).unwrap();
            assert!((want - g.coupling).norm() < 1e-12);
        }
    }

    #[test]
    fn e2_stretched_optimum_leaks() {
        let g = optimize_geometry(2, 2, Objective::MaxCoupling).unwrap();
        assert!((g.k_dir.theta() - FRAC_PI_2).abs() < 1e-6);
        assert!((g.jones.jy.norm() - 1.0).abs() < 1e-9);
        assert!((g.coupling.norm() - vsh_magnitude_w(2, -2, FRAC_PI_2).sqrt()).abs() < 1e-12);
        assert!(g.selectivity > 0.1);
        assert_eq!(
            optimize_geometry(2, 2, Objective::MaxCouplingZeroSelectivity),
            Err(CouplingError::NotFound { rank: 2, delta_m: 2 })
        );
    }

    #[test]
    fn max_coupling_reaches_vsh_magnitude() {
        // For fixed k̂ the best ε is Y*/|Y|, so the optimum is max_θ √W(θ).
        for (k, dm) in [(1, 1), (2, 1), (2, 0), (3, 2), (3, -1)] {
            let g = optimize_geometry(k, dm, Objective::MaxCoupling).unwrap();
            let best = (0..=20_000)
                .map(|i| vsh_magnitude_w(k as i32, -dm, PI * f64::from(i) / 20_000.0))
                .fold(0.0, f64::max)
                .sqrt();
            assert!(g.coupling.norm() >= best - 1e-9, "K={k} Δm={dm}");
        }
    }

    #[test]
    fn rejects_bad_delta_m() {
        assert_eq!(
            optimize_geometry(1, 3, Objective::MaxCoupling),
            Err(CouplingError::DeltaMOutOfRange { delta_m: 3, rank: 1 })
        );
    }
}
