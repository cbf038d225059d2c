//! Canonical TOML rendering of a parsed scenario, all quantities in SI units.

use toml::{Table, Value};

use super::{Drive, DriveKind, OutputRequest, Scenario};
use crate::angular::HalfInt;
use crate::beams::BeamMode;
use crate::coupling::{Character, Objective, Sign, TransitionSpec};
use crate::polarization::{JonesVector, WavePlateKind};
use crate::vsh::VshType;

fn half_int(h: HalfInt) -> Value {
    if h.is_integer() {
        Value::Integer((h.twice() / 2).into())
    } else {
        Value::String(h.to_string())
    }
}

fn jones(j: JonesVector) -> Value {
    let pair = |z: num_complex::Complex64| Value::Array(vec![Value::Float(z.re), Value::Float(z.im)]);
    Value::Array(vec![pair(j.jx), pair(j.jy)])
}

fn transition(t: &TransitionSpec) -> Table {
    let mut out = Table::new();
    out.insert("rank".into(), Value::Integer(t.rank.into()));
    let character = match t.character {
        Character::Electric => "electric",
        Character::Magnetic => "magnetic",
    };
    out.insert("character".into(), character.into());
    out.insert("J_e".into(), half_int(t.j_e));
    out.insert("J_g".into(), half_int(t.j_g));
    out.insert("M_e".into(), half_int(t.m_e));
    out.insert("M_g".into(), half_int(t.m_g));
    out.insert("einstein_A_per_s".into(), Value::Float(t.einstein_a));
    out.insert("omega_rad_per_s".into(), Value::Float(t.omega));
    let s = match t.s_j {
        Sign::Plus => 1,
        Sign::Minus => -1,
    };
    out.insert("s_J".into(), Value::Integer(s));
    if let Some(h) = t.hyperfine {
        let mut hf = Table::new();
        hf.insert("I".into(), half_int(h.nuclear_spin));
        hf.insert("F_e".into(), half_int(h.f_e));
        hf.insert("F_g".into(), half_int(h.f_g));
        out.insert("hyperfine".into(), Value::Table(hf));
    }
    out
}

fn scalar_mode(mode: &BeamMode, out: &mut Table) {
    match *mode {
        BeamMode::HermiteGauss { m, n } => {
            out.insert("mode".into(), "hg".into());
            out.insert("m".into(), Value::Integer(m.into()));
            out.insert("n".into(), Value::Integer(n.into()));
        }
        BeamMode::LaguerreGauss { n, l } => {
            out.insert("mode".into(), "lg".into());
            out.insert("n".into(), Value::Integer(n.into()));
            out.insert("l".into(), Value::Integer(l.into()));
        }
        // Plane-wave and nested vector modes are rejected by validation.
        BeamMode::PlaneWave | BeamMode::Vector(_) => unreachable!("not a scalar beam mode"),
    }
}

fn drive(d: &Drive) -> Table {
    let mut out = Table::new();
    out.insert("theta_rad".into(), Value::Float(d.k_dir.theta()));
    out.insert("phi_rad".into(), Value::Float(d.k_dir.phi()));
    out.insert("E0_V_per_m".into(), Value::Float(d.amplitude));
    out.insert("phase_rad".into(), Value::Float(d.phase));
    out.insert("jones".into(), jones(d.jones));
    if let Some(p) = d.waveplate {
        let mut w = Table::new();
        let kind = match p.kind {
            WavePlateKind::Quarter => "quarter",
            WavePlateKind::Half => "half",
        };
        w.insert("kind".into(), kind.into());
        w.insert("angle_rad".into(), Value::Float(p.fast_axis_angle));
        out.insert("waveplate".into(), Value::Table(w));
    }
    match &d.kind {
        DriveKind::PlaneWave => {
            out.insert("type".into(), "plane_wave".into());
        }
        DriveKind::Beam { mode, w0, offset } => {
            out.insert("type".into(), "beam".into());
            out.insert("w0_m".into(), Value::Float(*w0));
            out.insert("offset_x_m".into(), Value::Float(offset[0]));
            out.insert("offset_y_m".into(), Value::Float(offset[1]));
            match mode {
                BeamMode::Vector(terms) => {
                    out.insert("mode".into(), "vector".into());
                    let terms = terms
                        .iter()
                        .map(|t| {
                            let mut tt = Table::new();
                            tt.insert("jones".into(), jones(t.polarization));
                            scalar_mode(&t.mode, &mut tt);
                            Value::Table(tt)
                        })
                        .collect();
                    out.insert("term".into(), Value::Array(terms));
                }
                scalar => scalar_mode(scalar, &mut out),
            }
        }
    }
    out
}

fn output(o: &OutputRequest) -> Table {
    let mut out = Table::new();
    out.insert("kind".into(), o.kind().into());
    match o {
        OutputRequest::Rabi | OutputRequest::Coupling | OutputRequest::Selectivity => {}
        OutputRequest::Scan {
            parameter,
            start,
            stop,
            steps,
            quantity,
        } => {
            out.insert("parameter".into(), parameter.path.clone().into());
            out.insert("start".into(), Value::Float(*start));
            out.insert("stop".into(), Value::Float(*stop));
            out.insert("steps".into(), Value::Integer(*steps as i64));
            out.insert("quantity".into(), quantity.name().into());
        }
        OutputRequest::VshGrid {
            rank,
            p,
            kind,
            n_theta,
            n_phi,
        } => {
            out.insert("rank".into(), Value::Integer((*rank).into()));
            out.insert("p".into(), Value::Integer((*p).into()));
            let lambda = match kind {
                VshType::Zero => 0,
                VshType::PlusOne => 1,
            };
            out.insert("lambda".into(), Value::Integer(lambda));
            out.insert("n_theta".into(), Value::Integer(*n_theta as i64));
            out.insert("n_phi".into(), Value::Integer(*n_phi as i64));
        }
        OutputRequest::Optimize { objective } => {
            let name = match objective {
                Objective::MaxCoupling => "max_coupling",
                Objective::MaxCouplingZeroSelectivity => "zero_selectivity",
            };
            out.insert("objective".into(), name.into());
        }
    }
    out
}

/// Render `s` as a scenario document that parses back to an equal value.
/// Angles are in radians, lengths in metres and the transition frequency is
/// given as ω; polarizations are written as explicit Jones arrays.
pub fn to_canonical_toml(s: &Scenario) -> String {
    let mut doc = Table::new();
    doc.insert("transition".into(), Value::Table(transition(&s.transition)));
    doc.insert(
        "drive".into(),
        Value::Array(s.drives.iter().map(|d| Value::Table(drive(d))).collect()),
    );
    doc.insert(
        "output".into(),
        Value::Array(s.outputs.iter().map(|o| Value::Table(output(o))).collect()),
    );
    doc.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;
    use proptest::prelude::*;

    const RICH: &str = r#"
[transition]
rank = 2
J_e = "5/2"
J_g = "1/2"
M_e = 1
M_g = 0
einstein_A_per_s = 22.0
wavelength_nm = 729
s_J = -1

[transition.hyperfine]
I = "7/2"
F_e = 3
F_g = 4

[[drive]]
theta_deg = 90
phi_deg = 30
E0_V_per_m = 1.0e4
linear_angle_deg = 45

[drive.waveplate]
kind = "quarter"
angle_deg = 22.5

[[drive]]
type = "beam"
mode = "vector"
theta_deg = 10
E0_V_per_m = 200
w0_um = 2.5
offset_y_um = 0.3

[[drive.term]]
jones = [[0.6, 0.0], [0.0, 0.0]]
mode = "hg"
m = 1
n = 0

[[drive.term]]
jones = [[0.0, 0.0], [0.0, 0.8]]
mode = "lg"
n = 0
l = -1

[[output]]
kind = "scan"
parameter = "drive.1.offset_y_um"
start = -1
stop = 1
steps = 4
quantity = "coupling"

[[output]]
kind = "vsh_grid"
rank = 2
p = -1
lambda = 0

[[output]]
kind = "optimize"
objective = "zero_selectivity"
"#;

    #[test]
    fn rich_document_round_trips() {
        let s = parse_scenario(RICH).unwrap();
        let text = to_canonical_toml(&s);
        assert_eq!(parse_scenario(&text).unwrap(), s, "{text}");
    }

    #[allow(clippy::too_many_arguments)]
    fn scenario_text(
        rank: u32,
        theta: f64,
        phi: f64,
        amp: f64,
        phase: f64,
        a: f64,
        b: f64,
        beam: Option<(u8, f64, f64)>,
    ) -> String {
        let norm = (a * a + b * b).sqrt();
        let beam = match beam {
            None => String::new(),
            Some((mode, w0, dx)) => {
                let mode = match mode {
                    0 => "mode = \"gaussian\"",
                    1 => "mode = \"hg\"\nm = 1\nn = 0",
                    _ => "mode = \"lg\"\nn = 0\nl = 1",
                };
                format!("type = \"beam\"\n{mode}\nw0_um = {w0:?}\noffset_x_nm = {dx:?}\n")
            }
        };
        format!(
            "[transition]\nrank = {rank}\nJ_e = {rank}\nJ_g = 0\nM_e = 0\nM_g = 0\n\
             einstein_A_per_s = 1.0\nwavelength_nm = 500\n\n\
             [[drive]]\n{beam}theta_rad = {theta:?}\nphi_rad = {phi:?}\nE0_V_per_m = {amp:?}\nphase_rad = {phase:?}\n\
             jones = [[{:?}, 0.0], [0.0, {:?}]]\n\n\
             [[output]]\nkind = \"scan\"\nparameter = \"drive.0.theta_deg\"\nstart = 5\nstop = 175\nsteps = 3\n\n\
             [[output]]\nkind = \"rabi\"\n",
            a / norm,
            b / norm,
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn parse_of_canonical_form_is_identity(
            rank in 1u32..=3,
            theta in 0.01f64..3.13,
            phi in 0.0f64..std::f64::consts::TAU,
            amp in 1e-3f64..1e6,
            phase in -3.0f64..3.0,
            a in 0.1f64..1.0,
            b in -1.0f64..1.0,
            beam in proptest::option::of((0u8..3, 1.0f64..20.0, -500.0f64..500.0)),
        ) {
            let text = scenario_text(rank, theta, phi, amp, phase, a, b, beam);
            let s = parse_scenario(&text).unwrap();
            let canonical = to_canonical_toml(&s);
            prop_assert_eq!(parse_scenario(&canonical).unwrap(), s);
        }
    }
}
