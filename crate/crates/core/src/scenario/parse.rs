//! TOML scenario documents with unit-suffixed keys and line-numbered errors.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use toml::de::{DeTable, DeValue};
use toml::Spanned;

use super::{
    Drive, DriveField, DriveKind, OutputRequest, Quantity, ScanParameter, ScanTarget, Scenario,
    ScenarioError, TransitionField,
};
use crate::angular::{HalfInt, SphDirection};
use crate::beams::{BeamMode, BeamSpec, VectorTerm};
use crate::coupling::constants::SPEED_OF_LIGHT;
use crate::coupling::{Character, Hyperfine, Objective, PlaneWaveDrive, Sign, TransitionSpec};
use crate::frames::{helicity_frame, CVec3};
use crate::polarization::{apply_waveplate, cvec_to_jones, jones_to_cvec, JonesVector, WavePlate, WavePlateKind};
use crate::vsh::VshType;

pub(super) const LENGTH_UNITS: &[(&str, f64)] = &[("m", 1.0), ("mm", 1e-3), ("um", 1e-6), ("nm", 1e-9)];
pub(super) const ANGLE_UNITS: &[(&str, f64)] = &[("rad", 1.0), ("deg", PI / 180.0)];
pub(super) const FIELD_UNITS: &[(&str, f64)] = &[("V_per_m", 1.0)];
pub(super) const RATE_UNITS: &[(&str, f64)] = &[("per_s", 1.0)];
pub(super) const ANGULAR_FREQUENCY_UNITS: &[(&str, f64)] = &[("rad_per_s", 1.0)];
const JONES_NORM_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
enum Node {
    Int(i64),
    Float(f64),
    Str(String),
    Bool,
    Array(Vec<Item>),
    Table(Vec<(String, Item)>),
}

#[derive(Clone, Debug)]
struct Item {
    line: usize,
    node: Node,
}

struct Lines<'a>(&'a str);

impl Lines<'_> {
    fn at(&self, offset: usize) -> usize {
        self.0.as_bytes()[..offset.min(self.0.len())]
            .iter()
            .filter(|&&b| b == b'\n')
            .count()
            + 1
    }
}

fn err(line: usize, path: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Parse {
        line,
        path: path.to_string(),
        message: message.into(),
    }
}

fn convert_table(t: &DeTable<'_>, lines: &Lines<'_>, path: &str) -> Result<Vec<(String, Item)>, ScenarioError> {
    t.iter()
        .map(|(k, v)| {
            let key = k.get_ref().to_string();
            let child = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
            Ok((key, convert(v, lines, &child)?))
        })
        .collect()
}

fn convert(v: &Spanned<DeValue<'_>>, lines: &Lines<'_>, path: &str) -> Result<Item, ScenarioError> {
    let line = lines.at(v.span().start);
    let node = match v.get_ref() {
        DeValue::Integer(i) => {
            let digits = i.as_str().replace('_', "");
            let (sign, body) = match digits.strip_prefix('-') {
                Some(b) => (-1, b.to_string()),
                None => (1, digits.trim_start_matches('+').to_string()),
            };
            let body = body
                .trim_start_matches("0x")
                .trim_start_matches("0o")
                .trim_start_matches("0b");
            let n = i64::from_str_radix(body, i.radix()).map_err(|e| err(line, path, e.to_string()))?;
            Node::Int(sign * n)
        }
        DeValue::Float(f) => {
            let s = f.as_str().replace('_', "");
            Node::Float(s.parse().map_err(|_| err(line, path, format!("bad float {s}")))?)
        }
        DeValue::String(s) => Node::Str(s.to_string()),
        DeValue::Boolean(_) => Node::Bool,
        DeValue::Datetime(_) => return Err(err(line, path, "dates are not supported")),
        DeValue::Array(a) => Node::Array(
            a.iter()
                .enumerate()
                .map(|(i, x)| convert(x, lines, &format!("{path}.{i}")))
                .collect::<Result<_, _>>()?,
        ),
        DeValue::Table(t) => Node::Table(convert_table(t, lines, path)?),
    };
    Ok(Item { line, node })
}

/// A table being read: tracks which keys were used so leftovers are reported.
struct Reader<'a> {
    path: String,
    line: usize,
    entries: &'a [(String, Item)],
    used: BTreeSet<&'a str>,
}

impl<'a> Reader<'a> {
    fn new(path: &str, item: &'a Item) -> Result<Self, ScenarioError> {
        match &item.node {
            Node::Table(entries) => Ok(Reader {
                path: path.to_string(),
                line: item.line,
                entries,
                used: BTreeSet::new(),
            }),
            _ => Err(err(item.line, path, "expected a table")),
        }
    }

    fn child(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    fn get(&mut self, key: &str) -> Option<&'a Item> {
        let found = self.entries.iter().find(|(k, _)| k == key)?;
        self.used.insert(found.0.as_str());
        Some(&found.1)
    }

    fn has(&self, key: &str) -> bool {
        self.entries.iter().any(|(k, _)| k == key)
    }

    fn missing(&self, key: &str) -> ScenarioError {
        err(self.line, &self.child(key), "required key is missing")
    }

    fn number(&mut self, key: &str) -> Result<Option<f64>, ScenarioError> {
        let path = self.child(key);
        match self.get(key) {
            None => Ok(None),
            Some(Item { node: Node::Int(i), .. }) => Ok(Some(*i as f64)),
            Some(Item { node: Node::Float(x), line }) => {
                if x.is_finite() {
                    Ok(Some(*x))
                } else {
                    Err(err(*line, &path, "value must be finite"))
                }
            }
            Some(it) => Err(err(it.line, &path, "expected a number")),
        }
    }

    fn integer(&mut self, key: &str) -> Result<Option<i64>, ScenarioError> {
        let path = self.child(key);
        match self.get(key) {
            None => Ok(None),
            Some(Item { node: Node::Int(i), .. }) => Ok(Some(*i)),
            Some(it) => Err(err(it.line, &path, "expected an integer")),
        }
    }

    fn req_integer(&mut self, key: &str) -> Result<i64, ScenarioError> {
        self.integer(key)?.ok_or_else(|| self.missing(key))
    }

    fn bounded<T: TryFrom<i64>>(&mut self, key: &str, lo: i64) -> Result<Option<T>, ScenarioError> {
        let line = self.line_of(key);
        match self.integer(key)? {
            None => Ok(None),
            Some(v) if v >= lo => T::try_from(v)
                .map(Some)
                .map_err(|_| err(line, &self.child(key), "integer out of range")),
            Some(v) => Err(err(line, &self.child(key), format!("must be at least {lo}, got {v}"))),
        }
    }

    fn string(&mut self, key: &str) -> Result<Option<&'a str>, ScenarioError> {
        let path = self.child(key);
        match self.get(key) {
            None => Ok(None),
            Some(Item { node: Node::Str(s), .. }) => Ok(Some(s)),
            Some(it) => Err(err(it.line, &path, "expected a string")),
        }
    }

    fn req_string(&mut self, key: &str) -> Result<&'a str, ScenarioError> {
        self.string(key)?.ok_or_else(|| self.missing(key))
    }

    fn line_of(&self, key: &str) -> usize {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map_or(self.line, |(_, v)| v.line)
    }

    fn half_int(&mut self, key: &str) -> Result<HalfInt, ScenarioError> {
        let path = self.child(key);
        let item = self.get(key).ok_or_else(|| self.missing(key))?;
        let parsed = match &item.node {
            Node::Int(i) => i32::try_from(*i)
                .map(HalfInt::from_int)
                .map_err(|_| "out of range".to_string()),
            Node::Float(x) => HalfInt::try_from_f64(*x).map_err(|e| e.to_string()),
            Node::Str(s) => s.parse::<HalfInt>().map_err(|e| e.to_string()),
            _ => Err("expected a number or a string like \"3/2\"".to_string()),
        };
        parsed.map_err(|m| err(item.line, &path, m))
    }

    /// Value of `<base>_<unit>` in SI. Exactly one unit variant may appear; a
    /// bare `<base>` is rejected as a missing unit.
    fn quantity(&mut self, base: &str, units: &[(&str, f64)]) -> Result<Option<f64>, ScenarioError> {
        let present: Vec<(&str, f64)> = units
            .iter()
            .filter(|(u, _)| self.has(&format!("{base}_{u}")))
            .copied()
            .collect();
        if self.has(base) {
            let allowed: Vec<String> = units.iter().map(|(u, _)| format!("{base}_{u}")).collect();
            return Err(err(
                self.line_of(base),
                &self.child(base),
                format!("missing unit suffix; use one of {}", allowed.join(", ")),
            ));
        }
        match present.as_slice() {
            [] => Ok(None),
            [(u, factor)] => {
                let key = format!("{base}_{u}");
                Ok(self.number(&key)?.map(|v| v * factor))
            }
            _ => {
                let key = format!("{base}_{}", present[1].0);
                Err(err(self.line_of(&key), &self.child(base), "given with more than one unit"))
            }
        }
    }

    fn req_quantity(&mut self, base: &str, units: &[(&str, f64)]) -> Result<f64, ScenarioError> {
        self.quantity(base, units)?
            .ok_or_else(|| err(self.line, &self.child(&format!("{base}_{}", units[0].0)), "required key is missing"))
    }

    fn table(&mut self, key: &str) -> Result<Option<Reader<'a>>, ScenarioError> {
        let path = self.child(key);
        self.get(key).map(|it| Reader::new(&path, it)).transpose()
    }

    fn tables(&mut self, key: &str) -> Result<Vec<Reader<'a>>, ScenarioError> {
        let path = self.child(key);
        match self.get(key) {
            None => Ok(Vec::new()),
            Some(Item { node: Node::Array(items), .. }) => items
                .iter()
                .enumerate()
                .map(|(i, it)| Reader::new(&format!("{path}.{i}"), it))
                .collect(),
            Some(it) => Err(err(it.line, &path, "expected an array of tables")),
        }
    }

    fn finish(self) -> Result<(), ScenarioError> {
        match self.entries.iter().find(|(k, _)| !self.used.contains(k.as_str())) {
            Some((k, v)) => Err(err(v.line, &self.child(k), "unknown key")),
            None => Ok(()),
        }
    }
}

fn character(r: &mut Reader<'_>) -> Result<Character, ScenarioError> {
    match r.string("character")?.unwrap_or("electric") {
        "electric" | "E" => Ok(Character::Electric),
        "magnetic" | "M" => Ok(Character::Magnetic),
        other => Err(err(r.line_of("character"), &r.child("character"), format!("unknown character {other:?}"))),
    }
}

fn transition(mut r: Reader<'_>) -> Result<TransitionSpec, ScenarioError> {
    let rank = r.bounded::<u32>("rank", 1)?.ok_or_else(|| r.missing("rank"))?;
    let character = character(&mut r)?;
    let j_e = r.half_int("J_e")?;
    let j_g = r.half_int("J_g")?;
    let m_e = r.half_int("M_e")?;
    let m_g = r.half_int("M_g")?;
    let einstein_a = r.req_quantity("einstein_A", RATE_UNITS)?;
    let omega = match (
        r.quantity("omega", ANGULAR_FREQUENCY_UNITS)?,
        r.quantity("wavelength", LENGTH_UNITS)?,
    ) {
        (Some(w), None) => w,
        (None, Some(l)) => 2.0 * PI * SPEED_OF_LIGHT / l,
        (Some(_), Some(_)) => return Err(err(r.line, &r.child("omega_rad_per_s"), "give omega or wavelength, not both")),
        (None, None) => return Err(err(r.line, &r.child("omega_rad_per_s"), "required key is missing (or a wavelength_* key)")),
    };
    let s_line = r.line_of("s_J");
    let s_j = match r.integer("s_J")? {
        None => Sign::Plus,
        Some(s) => Sign::from_i32(s as i32).map_err(|e| err(s_line, &r.child("s_J"), e.to_string()))?,
    };
    let hyperfine = match r.table("hyperfine")? {
        None => None,
        Some(mut h) => {
            let hf = Hyperfine {
                nuclear_spin: h.half_int("I")?,
                f_e: h.half_int("F_e")?,
                f_g: h.half_int("F_g")?,
            };
            h.finish()?;
            Some(hf)
        }
    };
    let spec = TransitionSpec {
        rank,
        character,
        j_e,
        j_g,
        m_e,
        m_g,
        hyperfine,
        einstein_a,
        omega,
        s_j,
    };
    spec.validate().map_err(|e| err(r.line, &r.path, e.to_string()))?;
    r.finish()?;
    Ok(spec)
}

fn complex_array<const N: usize>(item: &Item, path: &str, shape: &str) -> Result<[Complex64; N], ScenarioError> {
    let bad = || err(item.line, path, format!("expected {shape}"));
    let num = |it: &Item| match it.node {
        Node::Int(i) => Ok(i as f64),
        Node::Float(x) if x.is_finite() => Ok(x),
        _ => Err(bad()),
    };
    let pair = |it: &Item| match &it.node {
        Node::Array(v) if v.len() == 2 => Ok(Complex64::new(num(&v[0])?, num(&v[1])?)),
        _ => Err(bad()),
    };
    match &item.node {
        Node::Array(v) if v.len() == N => {
            let mut out = [Complex64::new(0.0, 0.0); N];
            for (o, it) in out.iter_mut().zip(v) {
                *o = pair(it)?;
            }
            Ok(out)
        }
        _ => Err(bad()),
    }
}

/// Polarization from `polarization = "theta" | "phi" | "lcp" | "rcp" | "z"`,
/// `linear_angle_<unit>`, an explicit `jones` array, or a Cartesian `eps`
/// array. The last two forms that name lab-frame vectors (`"z"`, `eps`) need
/// the drive direction, so they are unavailable inside vector-mode terms,
/// which is also where unit norm is not required.
fn polarization(r: &mut Reader<'_>, k_dir: Option<SphDirection>) -> Result<Option<JonesVector>, ScenarioError> {
    let named = r.string("polarization")?;
    let linear = r.quantity("linear_angle", ANGLE_UNITS)?;
    let explicit = match r.get("jones") {
        Some(it) => {
            let [jx, jy] = complex_array::<2>(it, &r.child("jones"), "[[re, im], [re, im]]")?;
            Some(JonesVector::new(jx, jy))
        }
        None => None,
    };
    let cartesian = match r.get("eps") {
        Some(it) if k_dir.is_some() => {
            Some(CVec3::from_array(complex_array::<3>(it, &r.child("eps"), "[[re, im], [re, im], [re, im]]")?))
        }
        Some(it) => return Err(err(it.line, &r.child("eps"), "eps is only allowed on a drive")),
        None => None,
    };
    let given = [named.is_some(), linear.is_some(), explicit.is_some(), cartesian.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    if given > 1 {
        return Err(err(r.line, &r.child("polarization"), "give only one of polarization, linear_angle_*, jones, eps"));
    }
    let project = |eps: CVec3, key: &str, r: &Reader<'_>| {
        let frame = helicity_frame(k_dir.expect("drive direction"));
        cvec_to_jones(eps, &frame).map_err(|e| err(r.line_of(key), &r.child(key), e.to_string()))
    };
    let j = match (named, linear, explicit, cartesian) {
        (Some(name), ..) => match name {
            "theta" => JonesVector::theta_hat(),
            "phi" => JonesVector::phi_hat(),
            "lcp" => JonesVector::lcp(),
            "rcp" => JonesVector::rcp(),
            "z" if k_dir.is_some() => project(CVec3::z_hat(), "polarization", r)?,
            other => {
                return Err(err(
                    r.line_of("polarization"),
                    &r.child("polarization"),
                    format!("unknown polarization {other:?}; use theta, phi, lcp, rcp or z"),
                ))
            }
        },
        (_, Some(a), ..) => JonesVector::linear(a),
        (_, _, Some(j), _) => j,
        (.., Some(eps)) => project(eps, "eps", r)?,
        _ => return Ok(None),
    };
    if k_dir.is_some() && (j.norm_sqr() - 1.0).abs() > JONES_NORM_TOL {
        return Err(err(r.line_of("jones"), &r.child("jones"), format!("jones vector must have unit norm, got norm² {}", j.norm_sqr())));
    }
    Ok(Some(j))
}

fn scalar_mode(r: &mut Reader<'_>) -> Result<BeamMode, ScenarioError> {
    let name = r.req_string("mode")?;
    let line = r.line_of("mode");
    Ok(match name {
        "gaussian" => BeamMode::gaussian(),
        "hg" => BeamMode::HermiteGauss {
            m: r.bounded::<u32>("m", 0)?.ok_or_else(|| r.missing("m"))?,
            n: r.bounded::<u32>("n", 0)?.ok_or_else(|| r.missing("n"))?,
        },
        "lg" => BeamMode::LaguerreGauss {
            n: r.bounded::<u32>("n", 0)?.ok_or_else(|| r.missing("n"))?,
            l: i32::try_from(r.req_integer("l")?).map_err(|_| err(line, &r.child("l"), "out of range"))?,
        },
        other => return Err(err(line, &r.child("mode"), format!("unknown scalar mode {other:?}; use gaussian, hg or lg"))),
    })
}

fn beam_mode(r: &mut Reader<'_>) -> Result<BeamMode, ScenarioError> {
    match r.req_string("mode")? {
        "donut" => Ok(BeamMode::radial_donut()),
        "vector" => {
            let terms = r
                .tables("term")?
                .into_iter()
                .map(|mut t| {
                    let polarization = polarization(&mut t, None)?.ok_or_else(|| t.missing("jones"))?;
                    let mode = scalar_mode(&mut t)?;
                    t.finish()?;
                    Ok(VectorTerm { polarization, mode })
                })
                .collect::<Result<Vec<_>, ScenarioError>>()?;
            Ok(BeamMode::Vector(terms))
        }
        _ => scalar_mode(r),
    }
}

fn waveplate(mut w: Reader<'_>) -> Result<WavePlate, ScenarioError> {
    let kind = match w.req_string("kind")? {
        "quarter" => WavePlateKind::Quarter,
        "half" => WavePlateKind::Half,
        other => return Err(err(w.line_of("kind"), &w.child("kind"), format!("unknown wave plate {other:?}"))),
    };
    let fast_axis_angle = w.req_quantity("angle", ANGLE_UNITS)?;
    w.finish()?;
    Ok(WavePlate { kind, fast_axis_angle })
}

fn drive(mut r: Reader<'_>) -> Result<Drive, ScenarioError> {
    let kind_name = r.string("type")?.unwrap_or("plane_wave");
    let theta = r.req_quantity("theta", ANGLE_UNITS)?;
    let phi = r.quantity("phi", ANGLE_UNITS)?.unwrap_or(0.0);
    let k_dir = SphDirection::new(theta, phi).map_err(|e| err(r.line, &r.child("theta"), e.to_string()))?;
    let amplitude = r.req_quantity("E0", FIELD_UNITS)?;
    let phase = r.quantity("phase", ANGLE_UNITS)?.unwrap_or(0.0);
    let waveplate = r.table("waveplate")?.map(waveplate).transpose()?;
    let kind = match kind_name {
        "plane_wave" => DriveKind::PlaneWave,
        "beam" => {
            let mode = beam_mode(&mut r)?;
            let w0 = r.req_quantity("w0", LENGTH_UNITS)?;
            let offset = [
                r.quantity("offset_x", LENGTH_UNITS)?.unwrap_or(0.0),
                r.quantity("offset_y", LENGTH_UNITS)?.unwrap_or(0.0),
            ];
            DriveKind::Beam { mode, w0, offset }
        }
        other => return Err(err(r.line_of("type"), &r.child("type"), format!("unknown drive type {other:?}; use plane_wave or beam"))),
    };
    let vector = matches!(&kind, DriveKind::Beam { mode: BeamMode::Vector(_), .. });
    let jones = match polarization(&mut r, Some(k_dir))? {
        Some(j) => j,
        None if vector => JonesVector::theta_hat(),
        None => return Err(r.missing("polarization")),
    };
    r.finish()?;
    Ok(Drive {
        kind,
        k_dir,
        jones,
        waveplate,
        amplitude,
        phase,
    })
}

impl Drive {
    /// Polarization after the wave plate.
    pub fn effective_jones(&self) -> JonesVector {
        match self.waveplate {
            Some(p) => apply_waveplate(self.jones, p),
            None => self.jones,
        }
    }

    /// Beam description for beam drives, with k = ω/c.
    pub fn beam_spec(&self, omega: f64) -> Option<BeamSpec> {
        match &self.kind {
            DriveKind::PlaneWave => None,
            DriveKind::Beam { mode, w0, offset } => Some(BeamSpec {
                mode: mode.clone(),
                w0: *w0,
                k_mag: omega / SPEED_OF_LIGHT,
                k_dir: self.k_dir,
                jones: self.effective_jones(),
                offset: *offset,
                amplitude: self.amplitude,
                phase: self.phase,
            }),
        }
    }

    pub fn plane_wave(&self) -> Option<Result<PlaneWaveDrive, crate::coupling::CouplingError>> {
        match self.kind {
            DriveKind::PlaneWave => {
                let eps = jones_to_cvec(self.effective_jones(), &helicity_frame(self.k_dir));
                Some(PlaneWaveDrive::new(self.amplitude, self.k_dir, eps, self.phase))
            }
            DriveKind::Beam { .. } => None,
        }
    }

    fn validate(&self, omega: f64) -> Result<(), String> {
        match self.beam_spec(omega) {
            Some(b) => b.validate().map_err(|e| e.to_string()),
            None => self
                .plane_wave()
                .expect("plane-wave drive")
                .map(|_| ())
                .map_err(|e| e.to_string()),
        }
    }
}

fn parse_scan_path(path: &str, drives: &[Drive]) -> Result<ScanParameter, String> {
    let unit_of = |field: &str, base: &str, units: &[(&str, f64)]| -> Option<f64> {
        let u = field.strip_prefix(base)?.strip_prefix('_')?;
        units.iter().find(|(name, _)| *name == u).map(|(_, f)| *f)
    };
    let parts: Vec<&str> = path.split('.').collect();
    let resolved = match parts.as_slice() {
        ["transition", field] => {
            if let Some(f) = unit_of(field, "omega", ANGULAR_FREQUENCY_UNITS) {
                Some((ScanTarget::Transition(TransitionField::Omega), f))
            } else {
                unit_of(field, "einstein_A", RATE_UNITS).map(|f| (ScanTarget::Transition(TransitionField::EinsteinA), f))
            }
        }
        ["drive", index, rest @ ..] => {
            let index: usize = index.parse().map_err(|_| format!("bad drive index in {path:?}"))?;
            let d = drives.get(index).ok_or_else(|| format!("no drive {index}"))?;
            let is_beam = matches!(d.kind, DriveKind::Beam { .. });
            let field = match rest {
                ["waveplate", f] if d.waveplate.is_some() => {
                    unit_of(f, "angle", ANGLE_UNITS).map(|s| (DriveField::WaveplateAngle, s))
                }
                [f] => [
                    ("theta", DriveField::Theta, ANGLE_UNITS, true),
                    ("phi", DriveField::Phi, ANGLE_UNITS, true),
                    ("E0", DriveField::Amplitude, FIELD_UNITS, true),
                    ("phase", DriveField::Phase, ANGLE_UNITS, true),
                    ("w0", DriveField::Waist, LENGTH_UNITS, is_beam),
                    ("offset_x", DriveField::OffsetX, LENGTH_UNITS, is_beam),
                    ("offset_y", DriveField::OffsetY, LENGTH_UNITS, is_beam),
                ]
                .into_iter()
                .filter(|e| e.3)
                .find_map(|(base, field, units, _)| unit_of(f, base, units).map(|s| (field, s))),
                _ => None,
            };
            field.map(|(field, s)| (ScanTarget::Drive { index, field }, s))
        }
        _ => None,
    };
    let (target, to_si) = resolved.ok_or_else(|| format!("{path:?} does not name a scannable numeric field"))?;
    Ok(ScanParameter {
        path: path.to_string(),
        target,
        to_si,
    })
}

fn quantity_name(r: &mut Reader<'_>) -> Result<Quantity, ScenarioError> {
    match r.string("quantity")?.unwrap_or("rabi") {
        "rabi" => Ok(Quantity::Rabi),
        "coupling" => Ok(Quantity::Coupling),
        "selectivity" => Ok(Quantity::Selectivity),
        other => Err(err(r.line_of("quantity"), &r.child("quantity"), format!("unknown quantity {other:?}"))),
    }
}

fn output(mut r: Reader<'_>, drives: &[Drive]) -> Result<OutputRequest, ScenarioError> {
    let kind = r.req_string("kind")?;
    let out = match kind {
        "rabi" => OutputRequest::Rabi,
        "coupling" => OutputRequest::Coupling,
        "selectivity" => OutputRequest::Selectivity,
        "scan" => {
            let line = r.line_of("parameter");
            let path = r.req_string("parameter")?;
            let parameter = parse_scan_path(path, drives).map_err(|m| err(line, &r.child("parameter"), m))?;
            let start = r.number("start")?.ok_or_else(|| r.missing("start"))?;
            let stop = r.number("stop")?.ok_or_else(|| r.missing("stop"))?;
            let steps = r.bounded::<usize>("steps", 1)?.ok_or_else(|| r.missing("steps"))?;
            let quantity = quantity_name(&mut r)?;
            OutputRequest::Scan {
                parameter,
                start,
                stop,
                steps,
                quantity,
            }
        }
        "vsh_grid" => {
            let rank = r.bounded::<u32>("rank", 1)?.ok_or_else(|| r.missing("rank"))?;
            let p_line = r.line_of("p");
            let p = r.req_integer("p")?;
            if p.unsigned_abs() > u64::from(rank) {
                return Err(err(p_line, &r.child("p"), format!("|p| must not exceed rank {rank}")));
            }
            let lambda_line = r.line_of("lambda");
            let kind = match r.integer("lambda")?.unwrap_or(1) {
                1 => VshType::PlusOne,
                0 => VshType::Zero,
                other => return Err(err(lambda_line, &r.child("lambda"), format!("lambda must be 0 or 1, got {other}"))),
            };
            let n_theta = r.bounded::<usize>("n_theta", 2)?.unwrap_or(19);
            let n_phi = r.bounded::<usize>("n_phi", 2)?.unwrap_or(36);
            OutputRequest::VshGrid {
                rank,
                p: p as i32,
                kind,
                n_theta,
                n_phi,
            }
        }
        "optimize" => {
            let objective = match r.string("objective")?.unwrap_or("max_coupling") {
                "max_coupling" => Objective::MaxCoupling,
                "zero_selectivity" => Objective::MaxCouplingZeroSelectivity,
                other => {
                    return Err(err(r.line_of("objective"), &r.child("objective"), format!("unknown objective {other:?}")))
                }
            };
            OutputRequest::Optimize { objective }
        }
        other => return Err(err(r.line_of("kind"), &r.child("kind"), format!("unknown output kind {other:?}"))),
    };
    r.finish()?;
    Ok(out)
}

/// Parse and validate a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let lines = Lines(text);
    let doc = DeTable::parse(text).map_err(|e| {
        let line = e.span().map_or(1, |s| lines.at(s.start));
        err(line, "", e.message().to_string())
    })?;
    let root = Item {
        line: 1,
        node: Node::Table(convert_table(doc.get_ref(), &lines, "")?),
    };
    let mut r = Reader::new("", &root)?;
    let transition = transition(r.table("transition")?.ok_or_else(|| r.missing("transition"))?)?;
    let drive_readers = r.tables("drive")?;
    if drive_readers.is_empty() {
        return Err(err(1, "drive", "at least one [[drive]] is required"));
    }
    let mut drives = Vec::with_capacity(drive_readers.len());
    for d in drive_readers {
        let (line, path) = (d.line, d.path.clone());
        let drive = drive(d)?;
        drive.validate(transition.omega).map_err(|m| err(line, &path, m))?;
        drives.push(drive);
    }
    let output_readers = r.tables("output")?;
    if output_readers.is_empty() {
        return Err(err(1, "output", "at least one [[output]] request is required"));
    }
    let mut outputs = Vec::with_capacity(output_readers.len());
    for o in output_readers {
        let (line, path) = (o.line, o.path.clone());
        let out = output(o, &drives)?;
        let scenario = Scenario {
            transition,
            drives: drives.clone(),
            outputs: Vec::new(),
        };
        check_scan_endpoints(&scenario, &out).map_err(|m| err(line, &path, m))?;
        outputs.push(out);
    }
    r.finish()?;
    Ok(Scenario {
        transition,
        drives,
        outputs,
    })
}

/// Every parameter in a scan range is checked through its endpoints, which
/// suffices because each scannable field has an interval as its valid set.
fn check_scan_endpoints(s: &Scenario, out: &OutputRequest) -> Result<(), String> {
    if let OutputRequest::Scan { parameter, start, stop, .. } = out {
        for v in [*start, *stop] {
            let point = s.with_parameter(parameter, v)?;
            for d in &point.drives {
                d.validate(point.transition.omega)?;
            }
            point.transition.validate().map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

impl Scenario {
    /// Copy with the scanned parameter set to `value` (in the path's unit).
    pub fn with_parameter(&self, parameter: &ScanParameter, value: f64) -> Result<Scenario, String> {
        let mut s = self.clone();
        let si = value * parameter.to_si;
        match parameter.target {
            ScanTarget::Transition(TransitionField::Omega) => s.transition.omega = si,
            ScanTarget::Transition(TransitionField::EinsteinA) => s.transition.einstein_a = si,
            ScanTarget::Drive { index, field } => {
                let d = s.drives.get_mut(index).ok_or_else(|| format!("no drive {index}"))?;
                match field {
                    DriveField::Theta => {
                        d.k_dir = SphDirection::new(si, d.k_dir.phi()).map_err(|e| e.to_string())?
                    }
                    DriveField::Phi => {
                        d.k_dir = SphDirection::new(d.k_dir.theta(), si).map_err(|e| e.to_string())?
                    }
                    DriveField::Amplitude => d.amplitude = si,
                    DriveField::Phase => d.phase = si,
                    DriveField::WaveplateAngle => match d.waveplate.as_mut() {
                        Some(p) => p.fast_axis_angle = si,
                        None => return Err(format!("drive {index} has no wave plate")),
                    },
                    DriveField::Waist | DriveField::OffsetX | DriveField::OffsetY => match &mut d.kind {
                        DriveKind::Beam { w0, offset, .. } => match field {
                            DriveField::Waist => *w0 = si,
                            DriveField::OffsetX => offset[0] = si,
                            _ => offset[1] = si,
                        },
                        DriveKind::PlaneWave => return Err(format!("drive {index} is not a beam")),
                    },
                }
            }
        }
        Ok(s)
    }
}
