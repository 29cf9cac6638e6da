//! Scenario files: a strict JSON envelope plus kind-specific parameters.
//!
//! ```json
//! { "name": "petal", "kind": "contour",
//!   "params": { "shape": { "type": "petal", "m": 3, "zeta": 1.0471975511965976 } },
//!   "tolerances": { "angle_drift": 0.01 } }
//! ```

use patchlab::angle_odes::MultiCornerState;
use patchlab::angular_profile::{FourierProfile, IntervalProfile, Piece};
use patchlab::contour_dynamics::Grading;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, TAU};
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    FieldProbe,
    AngleOde,
    #[serde(rename = "transport_1d")]
    Transport1d,
    #[serde(rename = "spiral_1d")]
    Spiral1d,
    Alexander,
    EffectiveOdd,
    EffectiveSingle,
    Contour,
    Oddodd,
}

impl Kind {
    pub const ALL: [Kind; 9] = [
        Kind::FieldProbe,
        Kind::AngleOde,
        Kind::Transport1d,
        Kind::Spiral1d,
        Kind::Alexander,
        Kind::EffectiveOdd,
        Kind::EffectiveSingle,
        Kind::Contour,
        Kind::Oddodd,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Kind::FieldProbe => "field_probe",
            Kind::AngleOde => "angle_ode",
            Kind::Transport1d => "transport_1d",
            Kind::Spiral1d => "spiral_1d",
            Kind::Alexander => "alexander",
            Kind::EffectiveOdd => "effective_odd",
            Kind::EffectiveSingle => "effective_single",
            Kind::Contour => "contour",
            Kind::Oddodd => "oddodd",
        }
    }

    pub fn summary(&self) -> &'static str {
        match self {
            Kind::FieldProbe => "velocity (and gradient) of a patch geometry at probe points",
            Kind::AngleOde => "multi-corner angle system under m-fold symmetry",
            Kind::Transport1d => "homogeneous transport of an angular profile",
            Kind::Spiral1d => "logarithmic-spiral transport of an angular profile",
            Kind::Alexander => "point masses on the circle under the spiral closure",
            Kind::EffectiveOdd => "odd-odd effective corner model",
            Kind::EffectiveSingle => "single-corner effective model",
            Kind::Contour => "contour dynamics of a patch with a corner",
            Kind::Oddodd => "odd-odd contour experiment with tracked diagonal particles",
        }
    }

    /// Default tolerances; scenario files may override these keys and no others.
    pub fn default_tolerances(&self) -> BTreeMap<String, f64> {
        let pairs: &[(&str, f64)] = match self {
            Kind::FieldProbe => &[("disc_closed_form", 1e-6), ("divergence", 1e-6)],
            Kind::AngleOde => &[("sum_zeta_drift", 1e-8)],
            Kind::Transport1d => &[("sup_norm_drift", 1e-6), ("integral_drift", 1e-6)],
            Kind::Spiral1d => &[("sup_norm_drift", 1e-12)],
            Kind::Alexander => &[("weight_drift", 1e-12)],
            Kind::EffectiveOdd => &[
                ("exp_fit_residual", 1e-2),
                ("loglog_slope", 0.1),
                ("tail_increment", 1e-6),
                ("slope_vs_j", 0.02),
            ],
            Kind::EffectiveSingle => &[("forms_agree", 1e-5), ("initial_slope", 1e-15)],
            Kind::Contour => &[("area_drift", 1e-6), ("angle_drift", 0.01), ("rotation_speed", 0.02)],
            Kind::Oddodd => &[("alpha_margin", 0.05), ("ratio_growth", 2.0)],
        };
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The file as written.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub kind: Kind,
    #[serde(default = "empty_object")]
    pub params: serde_json::Value,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub plot: bool,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

fn empty_object() -> serde_json::Value {
    serde_json::Value::Object(Default::default())
}

/// A validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub kind: Kind,
    pub params: Params,
    pub out: Option<PathBuf>,
    pub plot: bool,
    pub tolerances: BTreeMap<String, f64>,
}

impl Scenario {
    pub fn tol(&self, key: &str) -> f64 {
        self.tolerances[key]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigError {
    /// Dotted path to the offending key, empty when the whole file is at fault.
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { path: path.into(), message: message.into() }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": "config", "path": self.path, "message": self.message }).to_string()
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

// ---------------------------------------------------------------- parameters

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometrySpec {
    Disc {
        #[serde(default)]
        center: [f64; 2],
        #[serde(default = "one")]
        radius: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    SectorStack {
        pieces: Vec<[f64; 3]>,
        #[serde(default = "one_usize")]
        symmetry: usize,
        #[serde(default)]
        r0: f64,
        #[serde(default = "one")]
        r1: f64,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
        #[serde(default = "one")]
        amplitude: f64,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    /// Pieces `[start, end, value]` of one fundamental sector.
    Intervals {
        pieces: Vec<[f64; 3]>,
        #[serde(default = "one_usize")]
        symmetry: usize,
    },
    /// `a₀/2 + Σ aₖ cos kθ + bₖ sin kθ` with declared symmetry `m`.
    Fourier {
        a: Vec<f64>,
        b: Vec<f64>,
        #[serde(default = "one_usize")]
        m: usize,
    },
}

impl ProfileSpec {
    pub fn intervals(pieces: &[[f64; 3]], symmetry: usize) -> patchlab::Result<IntervalProfile> {
        IntervalProfile::new(pieces.iter().map(|p| Piece::new(p[0], p[1], p[2])).collect(), symmetry)
    }

    pub fn fourier(a: &[f64], b: &[f64]) -> std::result::Result<FourierProfile, String> {
        if a.is_empty() || a.len() != b.len() {
            return Err("a and b must be nonempty and of equal length".into());
        }
        Ok(FourierProfile { a: a.to_vec(), b: b.to_vec() })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldProbe {
    pub geometry: GeometrySpec,
    #[serde(default = "default_points")]
    pub points: Vec<[f64; 2]>,
    #[serde(default)]
    pub gradient: bool,
}

fn default_points() -> Vec<[f64; 2]> {
    vec![[0.5, 0.0]]
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum RhsSpec {
    #[default]
    Endpoint,
    ClosedForm,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleOde {
    pub m: usize,
    pub zeta: Vec<f64>,
    #[serde(default)]
    pub gamma: Vec<f64>,
    #[serde(default)]
    pub beta1: f64,
    #[serde(default = "dt_default")]
    pub dt: f64,
    #[serde(default = "one")]
    pub t_span: f64,
    #[serde(default)]
    pub rhs: RhsSpec,
    /// Closed-form constant; fitted on the initial state when absent.
    #[serde(default)]
    pub cm: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transport1d {
    pub profile: ProfileSpec,
    #[serde(default = "one")]
    pub t_span: f64,
    #[serde(default = "dt_default")]
    pub dt: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Spiral1d {
    pub profile: ProfileSpec,
    pub c: f64,
    #[serde(default = "one")]
    pub t_span: f64,
    #[serde(default = "dt_default")]
    pub dt: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Alexander {
    pub theta: Vec<f64>,
    pub weights: Vec<f64>,
    pub c: f64,
    #[serde(default = "one")]
    pub t_span: f64,
    #[serde(default = "dt_default")]
    pub dt: f64,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Expanding,
    Contracting,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectiveOdd {
    #[serde(default = "quarter_pi")]
    pub a0: f64,
    pub direction: Direction,
    /// Defaults to 50 (expanding) or 2000 (contracting).
    #[serde(default)]
    pub t_span: Option<f64>,
    #[serde(default = "dt_default")]
    pub dtau: f64,
    /// Fit window; defaults to [5, 50] or [100, 1000].
    #[serde(default)]
    pub fit: Option<[f64; 2]>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectiveSingle {
    #[serde(default)]
    pub a0: f64,
    pub b0: f64,
    #[serde(default = "ten")]
    pub t_span: f64,
    #[serde(default = "fine_dt")]
    pub dtau: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeSpec {
    Petal {
        m: usize,
        zeta: f64,
        #[serde(default)]
        beta: f64,
        #[serde(default = "one")]
        r0: f64,
    },
    Sector {
        lo: f64,
        hi: f64,
        #[serde(default = "one")]
        r: f64,
        m: usize,
    },
    Disc {
        #[serde(default)]
        center: [f64; 2],
        #[serde(default = "one")]
        r: f64,
        #[serde(default = "disc_nodes")]
        n: usize,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Contour {
    pub shape: ShapeSpec,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default = "corner_grading")]
    pub grading: Grading,
    #[serde(default = "one")]
    pub t_span: f64,
    #[serde(default = "quarter")]
    pub every: f64,
    #[serde(default = "default_scales")]
    pub scales: Vec<f64>,
    #[serde(default = "contour_dt")]
    pub dt_max: f64,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeDirection {
    Forward,
    Backward,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Oddodd {
    pub direction: TimeDirection,
    #[serde(default = "default_tracked")]
    pub tracked: Vec<f64>,
    #[serde(default = "fifth")]
    pub t_span: f64,
    #[serde(default = "four")]
    pub samples: usize,
    #[serde(default = "half")]
    pub window: f64,
    #[serde(default = "oddodd_grading")]
    pub grading: Grading,
    #[serde(default = "contour_dt")]
    pub dt_max: f64,
}

fn one() -> f64 {
    1.0
}
fn one_usize() -> usize {
    1
}
fn ten() -> f64 {
    10.0
}
fn half() -> f64 {
    0.5
}
fn quarter() -> f64 {
    0.25
}
fn fifth() -> f64 {
    0.2
}
fn four() -> usize {
    4
}
fn quarter_pi() -> f64 {
    FRAC_PI_4
}
fn dt_default() -> f64 {
    0.01
}
fn fine_dt() -> f64 {
    0.001
}
fn contour_dt() -> f64 {
    0.02
}
fn disc_nodes() -> usize {
    256
}
fn default_scales() -> Vec<f64> {
    vec![1e-2, 1e-3]
}
fn default_tracked() -> Vec<f64> {
    vec![1e-2, 1e-3, 1e-4]
}
pub fn corner_grading() -> Grading {
    Grading { h0: 1e-4, ratio: 1.25, h_max: 0.05 }
}
pub fn oddodd_grading() -> Grading {
    Grading { h0: 1e-6, ratio: 1.25, h_max: 0.01 }
}

#[derive(Clone, Debug)]
pub enum Params {
    FieldProbe(FieldProbe),
    AngleOde(AngleOde),
    Transport1d(Transport1d),
    Spiral1d(Spiral1d),
    Alexander(Alexander),
    EffectiveOdd(EffectiveOdd),
    EffectiveSingle(EffectiveSingle),
    Contour(Contour),
    Oddodd(Oddodd),
}

// ---------------------------------------------------------------- parsing

fn typed<T: DeserializeOwned>(v: &serde_json::Value) -> Result<T, ConfigError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let p = e.path().to_string();
        let path = if p == "." { "params".to_string() } else { format!("params.{p}") };
        ConfigError::at(path, e.into_inner().to_string())
    })
}

fn positive(path: &str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::at(path, format!("must be positive and finite, got {v}")))
    }
}

fn finite(path: &str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::at(path, format!("must be finite, got {v}")))
    }
}

fn grading_ok(path: &str, g: &Grading) -> Result<(), ConfigError> {
    if g.h0 > 0.0 && g.h0 <= g.h_max && (1.0..=1.3).contains(&g.ratio) {
        Ok(())
    } else {
        Err(ConfigError::at(path, "grading needs 0 < h0 <= h_max and 1 <= ratio <= 1.3"))
    }
}

fn check_profile(path: &str, p: &ProfileSpec, need_m3: bool) -> Result<(), ConfigError> {
    match p {
        ProfileSpec::Intervals { pieces, symmetry } => {
            if need_m3 && *symmetry < 3 {
                return Err(ConfigError::at(format!("{path}.symmetry"), format!("transport needs m >= 3, got {symmetry}")));
            }
            ProfileSpec::intervals(pieces, *symmetry).map(|_| ()).map_err(|e| ConfigError::at(path, e.to_string()))
        }
        ProfileSpec::Fourier { a, b, m } => {
            if need_m3 && *m < 3 {
                return Err(ConfigError::at(format!("{path}.m"), format!("transport needs m >= 3, got {m}")));
            }
            let f = ProfileSpec::fourier(a, b).map_err(|e| ConfigError::at(path, e))?;
            if need_m3 && f.off_symmetry_max(*m) > 1e-12 {
                return Err(ConfigError::at(path, format!("coefficients are not {m}-fold symmetric")));
            }
            Ok(())
        }
    }
}

fn validate(kind: Kind, p: &Params) -> Result<(), ConfigError> {
    match p {
        Params::FieldProbe(f) => {
            if f.points.is_empty() {
                return Err(ConfigError::at("params.points", "need at least one probe point"));
            }
            match &f.geometry {
                GeometrySpec::Disc { radius, .. } => positive("params.geometry.radius", *radius),
                GeometrySpec::SectorStack { pieces, symmetry, r0, r1 } => {
                    if !(*r0 >= 0.0 && r1 > r0) {
                        return Err(ConfigError::at("params.geometry", "need 0 <= r0 < r1"));
                    }
                    ProfileSpec::intervals(pieces, *symmetry)
                        .map(|_| ())
                        .map_err(|e| ConfigError::at("params.geometry.pieces", e.to_string()))
                }
                GeometrySpec::Polygon { vertices, .. } => {
                    if vertices.len() < 3 {
                        Err(ConfigError::at("params.geometry.vertices", "need at least 3 vertices"))
                    } else {
                        Ok(())
                    }
                }
            }
        }
        Params::AngleOde(a) => {
            if a.m < 3 {
                return Err(ConfigError::at(
                    "params.m",
                    format!("angle dynamics require m-fold symmetry with m >= 3, got m = {}", a.m),
                ));
            }
            positive("params.dt", a.dt)?;
            finite("params.t_span", a.t_span)?;
            if let Some(cm) = a.cm {
                finite("params.cm", cm)?;
            }
            MultiCornerState::new(a.m, a.zeta.clone(), a.gamma.clone(), a.beta1)
                .map(|_| ())
                .map_err(|e| ConfigError::at("params", e.to_string()))
        }
        Params::Transport1d(t) => {
            positive("params.dt", t.dt)?;
            finite("params.t_span", t.t_span)?;
            check_profile("params.profile", &t.profile, true)
        }
        Params::Spiral1d(s) => {
            positive("params.c", s.c)?;
            positive("params.dt", s.dt)?;
            finite("params.t_span", s.t_span)?;
            check_profile("params.profile", &s.profile, false)
        }
        Params::Alexander(a) => {
            positive("params.c", a.c)?;
            positive("params.dt", a.dt)?;
            finite("params.t_span", a.t_span)?;
            patchlab::homogeneous_transport::AlexanderState::new(a.theta.clone(), a.weights.clone(), a.c)
                .map(|_| ())
                .map_err(|e| ConfigError::at("params", e.to_string()))
        }
        Params::EffectiveOdd(o) => {
            if !(o.a0 > 0.0 && o.a0 < std::f64::consts::FRAC_PI_2) {
                return Err(ConfigError::at("params.a0", format!("A0 must lie in the open interval (0, π/2), got {}", o.a0)));
            }
            positive("params.dtau", o.dtau)?;
            if let Some(t) = o.t_span {
                positive("params.t_span", t)?;
            }
            if let Some([lo, hi]) = o.fit {
                if !(lo > 0.0 && hi > lo) {
                    return Err(ConfigError::at("params.fit", "need 0 < lo < hi"));
                }
            }
            Ok(())
        }
        Params::EffectiveSingle(s) => {
            if !(s.b0 > 0.0 && s.b0 < FRAC_PI_4) {
                return Err(ConfigError::at("params.b0", format!("B0 must lie in the open interval (0, π/4), got {}", s.b0)));
            }
            finite("params.a0", s.a0)?;
            positive("params.t_span", s.t_span)?;
            positive("params.dtau", s.dtau)
        }
        Params::Contour(c) => {
            grading_ok("params.grading", &c.grading)?;
            finite("params.t_span", c.t_span)?;
            positive("params.every", c.every)?;
            positive("params.dt_max", c.dt_max)?;
            for (i, s) in c.scales.iter().enumerate() {
                positive(&format!("params.scales[{i}]"), *s)?;
            }
            match c.shape {
                ShapeSpec::Petal { m, zeta, r0, .. } => {
                    if m < 1 {
                        return Err(ConfigError::at("params.shape.m", "m must be at least 1"));
                    }
                    positive("params.shape.r0", r0)?;
                    if !(zeta > 0.0 && (m < 2 || zeta < TAU / m as f64)) {
                        return Err(ConfigError::at("params.shape.zeta", format!("opening must lie in (0, 2π/m), got {zeta}")));
                    }
                    Ok(())
                }
                ShapeSpec::Sector { lo, hi, r, m } => {
                    positive("params.shape.r", r)?;
                    if m < 1 || !(hi > lo) || (m >= 2 && hi - lo >= TAU / m as f64) {
                        return Err(ConfigError::at("params.shape", "need lo < hi and hi - lo < 2π/m"));
                    }
                    Ok(())
                }
                ShapeSpec::Disc { r, n, .. } => {
                    positive("params.shape.r", r)?;
                    if n < 3 {
                        return Err(ConfigError::at("params.shape.n", "need at least 3 nodes"));
                    }
                    Ok(())
                }
            }
        }
        Params::Oddodd(o) => {
            grading_ok("params.grading", &o.grading)?;
            positive("params.t_span", o.t_span)?;
            positive("params.window", o.window)?;
            positive("params.dt_max", o.dt_max)?;
            if o.samples == 0 {
                return Err(ConfigError::at("params.samples", "need at least one sample"));
            }
            for (i, x) in o.tracked.iter().enumerate() {
                if !(*x > 0.0 && *x < 0.5) {
                    return Err(ConfigError::at(format!("params.tracked[{i}]"), "tracked points must lie in (0, 1/2)"));
                }
            }
            Ok(())
        }
    }
    .map_err(|e| {
        if e.path.is_empty() {
            ConfigError::at(kind.name(), e.message)
        } else {
            e
        }
    })
}

impl ScenarioFile {
    pub fn validate(self) -> Result<Scenario, ConfigError> {
        if self.name.trim().is_empty() {
            return Err(ConfigError::at("name", "must not be empty"));
        }
        if self.name.contains(['/', '\\']) {
            return Err(ConfigError::at("name", "must not contain path separators"));
        }
        let v = &self.params;
        let params = match self.kind {
            Kind::FieldProbe => Params::FieldProbe(typed(v)?),
            Kind::AngleOde => Params::AngleOde(typed(v)?),
            Kind::Transport1d => Params::Transport1d(typed(v)?),
            Kind::Spiral1d => Params::Spiral1d(typed(v)?),
            Kind::Alexander => Params::Alexander(typed(v)?),
            Kind::EffectiveOdd => Params::EffectiveOdd(typed(v)?),
            Kind::EffectiveSingle => Params::EffectiveSingle(typed(v)?),
            Kind::Contour => Params::Contour(typed(v)?),
            Kind::Oddodd => Params::Oddodd(typed(v)?),
        };
        validate(self.kind, &params)?;
        let mut tolerances = self.kind.default_tolerances();
        for (k, v) in self.tolerances {
            if !tolerances.contains_key(&k) {
                let known: Vec<&str> = tolerances.keys().map(|s| s.as_str()).collect();
                return Err(ConfigError::at(format!("tolerances.{k}"), format!("unknown tolerance; known: {}", known.join(", "))));
            }
            positive(&format!("tolerances.{k}"), v)?;
            tolerances.insert(k, v);
        }
        Ok(Scenario { name: self.name, kind: self.kind, params, out: self.out, plot: self.plot, tolerances })
    }
}

pub fn parse_str(text: &str) -> Result<Scenario, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let p = e.path().to_string();
        ConfigError::at(if p == "." { String::new() } else { p }, e.into_inner().to_string())
    })?;
    file.validate()
}

pub fn parse_scenario(path: &Path) -> Result<Scenario, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::at("", format!("cannot read {}: {e}", path.display())))?;
    parse_str(&text)
}
