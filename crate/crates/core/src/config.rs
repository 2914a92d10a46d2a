//! Run configuration: a TOML document, validated into a [`Scheme`] and
//! [`RunOptions`].
//!
//! ```toml
//! mode = "wedge-small"
//! seed = 0
//!
//! [gas]
//! gamma = 1.4
//!
//! [mesh]
//! l = 0.015625
//! cells = 128
//! strips = 400
//!
//! [initial.far_field]
//! mach = 2.0
//!
//! [wall]
//! kind = "bump"
//! start = 0.1
//! length = 0.4
//! height = 0.0008
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{GlimmError, Result};
use crate::riemann::{critical_deflection, solve_lateral, WallSide};
use crate::run::RunOptions;
use crate::sampler::SamplerKind;
use crate::scheme::{Domain, InitialProfile, Layer, Scheme};
use crate::thermo::{acoustic_speed, GasConstants, GasState, ReactionRate};
use crate::waves::Strengths;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Cauchy,
    WedgeSmall,
    WedgeStrong,
    RiemannProbe,
    ReactProbe,
    Survey,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub gas: GasConstants,
    #[serde(default)]
    pub reaction: ReactionRate,
    pub mesh: Option<MeshConfig>,
    #[serde(default)]
    pub sampler: SamplerConfig,
    pub initial: Option<InitialConfig>,
    pub wall: Option<WallConfig>,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub output: OutputConfig,
    pub probe: Option<ProbeConfig>,
    pub react_probe: Option<ReactProbeConfig>,
    pub survey: Option<SurveyConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    /// Half cell width.
    pub l: f64,
    pub cells: usize,
    pub strips: usize,
    /// Step in `x`; derived from `cfl` when absent.
    pub h: Option<f64>,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    /// Lower end of a Cauchy window; centered on the data when absent.
    pub y_min: Option<f64>,
}

fn default_cfl() -> f64 {
    0.5
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerConfig {
    #[serde(default)]
    pub kind: SamplerKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    pub mach: f64,
    #[serde(default)]
    pub angle_deg: f64,
    #[serde(default = "one")]
    pub p: f64,
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default)]
    pub z: f64,
}

fn one() -> f64 {
    1.0
}

fn default_rho() -> f64 {
    1.4
}

impl StateConfig {
    pub fn state(&self, gas: &GasConstants) -> GasState {
        GasState::from_mach(
            self.mach,
            self.angle_deg.to_radians(),
            self.p,
            self.rho,
            self.z,
            gas,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerConfig {
    pub at: f64,
    #[serde(default)]
    pub width: f64,
    #[serde(default = "one_usize")]
    pub count: usize,
    pub strengths: Strengths,
}

fn one_usize() -> usize {
    1
}

/// State taken above `at`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub at: f64,
    pub state: GasState,
}

/// Data below the first step is `far_field`. Steps come from at most one
/// of `layers` (wave strengths), `table` (explicit states) or `file` (CSV
/// with header `at,u,v,p,rho,z`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub far_field: StateConfig,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub layers: Vec<LayerConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<TableEntry>,
    pub file: Option<std::path::PathBuf>,
}

#[derive(Deserialize)]
struct FileRow {
    at: f64,
    u: f64,
    v: f64,
    p: f64,
    rho: f64,
    z: f64,
}

impl InitialConfig {
    fn file_entries(&self) -> Result<Vec<TableEntry>> {
        let Some(path) = &self.file else {
            return Ok(Vec::new());
        };
        let err = |e: &dyn std::fmt::Display| {
            GlimmError::config("initial.file", format!("{}: {e}", path.display()))
        };
        let mut rd = csv::Reader::from_path(path).map_err(|e| err(&e))?;
        rd.deserialize::<FileRow>()
            .map(|r| {
                let r = r.map_err(|e| err(&e))?;
                Ok(TableEntry {
                    at: r.at,
                    state: GasState {
                        u: r.u,
                        v: r.v,
                        p: r.p,
                        rho: r.rho,
                        z: r.z,
                    },
                })
            })
            .collect()
    }

    /// Resolves the configured data.
    pub fn profile(&self, gas: &GasConstants) -> Result<InitialProfile> {
        let far = self.far_field.state(gas);
        let mut entries = self.table.clone();
        entries.extend(self.file_entries()?);
        if entries.is_empty() {
            let layers: Vec<Layer> = self
                .layers
                .iter()
                .map(|l| Layer {
                    at: l.at,
                    width: l.width,
                    count: l.count,
                    strengths: l.strengths,
                })
                .collect();
            return InitialProfile::from_layers(far, &layers, gas)
                .map_err(|e| GlimmError::config("initial.layers", e.to_string()));
        }
        entries.sort_by(|a, b| a.at.total_cmp(&b.at));
        for (i, e) in entries.iter().enumerate() {
            let path = format!("initial.table[{i}]");
            e.state
                .validate()
                .map_err(|x| GlimmError::config(&path, x.to_string()))?;
            e.state
                .validate_supersonic(gas)
                .map_err(|x| GlimmError::config(&path, x.to_string()))?;
        }
        Ok(InitialProfile {
            far_field: far,
            steps: entries.into_iter().map(|e| (e.at, e.state)).collect(),
        })
    }
}

/// Wall `y = g(x)` with `g(0) = 0`; angles in degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WallConfig {
    Straight {
        #[serde(default)]
        angle_deg: f64,
    },
    /// Raised cosine of the given height on `[start, start + length]`.
    Bump {
        start: f64,
        length: f64,
        height: f64,
        #[serde(default)]
        angle_deg: f64,
    },
    /// Straight at `angle_deg`, turning by `turn_deg` at `x = at`.
    Ramp {
        at: f64,
        turn_deg: f64,
        #[serde(default)]
        angle_deg: f64,
    },
    /// Vertices `[x, y]` starting at the origin; the last segment extends.
    Polyline { points: Vec<[f64; 2]> },
}

impl WallConfig {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            WallConfig::Straight { angle_deg } => x * angle_deg.to_radians().tan(),
            WallConfig::Bump {
                start,
                length,
                height,
                angle_deg,
            } => {
                let t = (x - start) / length;
                let b = if (0.0..=1.0).contains(&t) {
                    0.5 * height * (1.0 - (2.0 * std::f64::consts::PI * t).cos())
                } else {
                    0.0
                };
                x * angle_deg.to_radians().tan() + b
            }
            WallConfig::Ramp {
                at,
                turn_deg,
                angle_deg,
            } => {
                let a = angle_deg.to_radians().tan();
                if x <= *at {
                    a * x
                } else {
                    a * at + (angle_deg + turn_deg).to_radians().tan() * (x - at)
                }
            }
            WallConfig::Polyline { points } => {
                let i = points
                    .partition_point(|p| p[0] <= x)
                    .clamp(1, points.len() - 1);
                let (a, b) = (points[i - 1], points[i]);
                a[1] + (b[1] - a[1]) * (x - a[0]) / (b[0] - a[0])
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |k: &str, m: &str| Err(GlimmError::config(format!("wall.{k}"), m));
        match self {
            WallConfig::Straight { angle_deg } if angle_deg.abs() >= 45.0 => {
                bad("angle_deg", "must be below 45 degrees in magnitude")
            }
            WallConfig::Bump { length, .. } if !(*length > 0.0) => {
                bad("length", "must be positive")
            }
            WallConfig::Bump { start, .. } if !(*start >= 0.0) => {
                bad("start", "must be nonnegative")
            }
            WallConfig::Ramp { at, .. } if !(*at >= 0.0) => bad("at", "must be nonnegative"),
            WallConfig::Polyline { points } => {
                if points.len() < 2 {
                    return bad("points", "needs at least two vertices");
                }
                if points[0] != [0.0, 0.0] {
                    return bad("points", "must start at [0, 0]");
                }
                if points.windows(2).any(|w| !(w[1][0] > w[0][0])) {
                    return bad("points", "x must increase strictly");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    #[serde(default = "one")]
    pub m_weight: f64,
    pub k0: Option<f64>,
    pub k_star: Option<f64>,
    #[serde(default = "one")]
    pub c_star: f64,
    #[serde(default)]
    pub entropy: bool,
    #[serde(default = "yes")]
    pub diamonds: bool,
    #[serde(default = "yes")]
    pub check_window: bool,
}

fn yes() -> bool {
    true
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        DiagnosticsConfig {
            m_weight: 1.0,
            k0: None,
            k_star: None,
            c_star: 1.0,
            entropy: false,
            diamonds: true,
            check_window: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Write every n-th strip and the last to the field table; 0 writes none.
    #[serde(default = "ten")]
    pub field_stride: usize,
}

fn ten() -> usize {
    10
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { field_stride: 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeKind {
    Interior,
    Lateral,
    Strong,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    pub kind: ProbeKind,
    pub below: GasState,
    pub above: Option<GasState>,
    #[serde(default)]
    pub wall_angle_deg: f64,
    pub side: Option<WallSide>,
    pub slope_guess: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReactProbeConfig {
    pub state: GasState,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurveyConfig {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_deflection")]
    pub deflection_deg: f64,
}

fn default_samples() -> usize {
    10_000
}

fn default_radius() -> f64 {
    0.05
}

fn default_deflection() -> f64 {
    10.0
}

impl Default for SurveyConfig {
    fn default() -> Self {
        SurveyConfig {
            samples: default_samples(),
            radius: default_radius(),
            deflection_deg: default_deflection(),
        }
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let de = toml::Deserializer::new(text);
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let msg = inner.message().trim().to_string();
        GlimmError::config(if path == "." { "config".into() } else { path }, msg)
    })?;
    cfg.validate()?;
    Ok(cfg)
}

fn positive(path: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(GlimmError::config(path, "must be positive"))
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gas.gamma > 1.0) {
            return Err(GlimmError::config("gas.gamma", "gamma must exceed 1"));
        }
        positive("gas.r_gas", self.gas.r_gas)?;
        if !(self.gas.q_heat >= 0.0) {
            return Err(GlimmError::config("gas.q_heat", "must be nonnegative"));
        }
        self.reaction.validate().map_err(|k| {
            GlimmError::config(format!("reaction.{k}"), "must be finite and nonnegative")
        })?;
        match self.mode {
            Mode::Cauchy | Mode::WedgeSmall | Mode::WedgeStrong => {
                let mesh = self
                    .mesh
                    .as_ref()
                    .ok_or_else(|| GlimmError::config("mesh", "required for this mode"))?;
                positive("mesh.l", mesh.l)?;
                if mesh.cells < 3 {
                    return Err(GlimmError::config("mesh.cells", "must be at least 3"));
                }
                if let Some(h) = mesh.h {
                    positive("mesh.h", h)?;
                }
                if !(mesh.cfl > 0.0 && mesh.cfl < 1.0) {
                    return Err(GlimmError::config("mesh.cfl", "must lie in (0, 1)"));
                }
                let init = self
                    .initial
                    .as_ref()
                    .ok_or_else(|| GlimmError::config("initial", "required for this mode"))?;
                self.validate_state("initial.far_field", &init.far_field)?;
                let sources = [
                    !init.layers.is_empty(),
                    !init.table.is_empty(),
                    init.file.is_some(),
                ];
                if sources.iter().filter(|b| **b).count() > 1 {
                    return Err(GlimmError::config(
                        "initial",
                        "give at most one of layers, table and file",
                    ));
                }
                for (i, l) in init.layers.iter().enumerate() {
                    if !(l.width >= 0.0)
                        || l.count == 0
                        || l.strengths.iter().any(|s| !s.is_finite())
                    {
                        return Err(GlimmError::config(
                            format!("initial.layers[{i}]"),
                            "needs width >= 0, count >= 1 and finite strengths",
                        ));
                    }
                }
                if self.mode == Mode::Cauchy {
                    if self.wall.is_some() {
                        return Err(GlimmError::config("wall", "not used by cauchy runs"));
                    }
                } else {
                    let wall = self
                        .wall
                        .as_ref()
                        .ok_or_else(|| GlimmError::config("wall", "required for wedge runs"))?;
                    wall.validate()?;
                }
            }
            Mode::RiemannProbe => {
                let p = self
                    .probe
                    .as_ref()
                    .ok_or_else(|| GlimmError::config("probe", "required for riemann-probe"))?;
                if p.kind != ProbeKind::Lateral && p.above.is_none() {
                    return Err(GlimmError::config(
                        "probe.above",
                        "required for this probe kind",
                    ));
                }
            }
            Mode::ReactProbe => {
                let p = self
                    .react_probe
                    .as_ref()
                    .ok_or_else(|| GlimmError::config("react_probe", "required for react-probe"))?;
                if !(p.tau >= 0.0) {
                    return Err(GlimmError::config("react_probe.tau", "must be nonnegative"));
                }
            }
            Mode::Survey => {
                let init = self.initial.as_ref().ok_or_else(|| {
                    GlimmError::config(
                        "initial",
                        "survey needs initial.far_field as its base state",
                    )
                })?;
                self.validate_state("initial.far_field", &init.far_field)?;
                if let Some(s) = &self.survey {
                    positive("survey.radius", s.radius)?;
                }
            }
        }
        if let Some(k) = self.diagnostics.k0 {
            positive("diagnostics.k0", k)?;
        }
        if let Some(k) = self.diagnostics.k_star {
            positive("diagnostics.k_star", k)?;
        }
        positive("diagnostics.m_weight", self.diagnostics.m_weight)?;
        Ok(())
    }

    fn validate_state(&self, path: &str, s: &StateConfig) -> Result<()> {
        if !(s.mach > 1.0) {
            return Err(GlimmError::config(format!("{path}.mach"), "must exceed 1"));
        }
        positive(&format!("{path}.p"), s.p)?;
        positive(&format!("{path}.rho"), s.rho)?;
        if !(0.0..=1.0).contains(&s.z) {
            return Err(GlimmError::config(
                format!("{path}.z"),
                "must lie in [0, 1]",
            ));
        }
        if s.angle_deg.abs() >= 45.0 {
            return Err(GlimmError::config(
                format!("{path}.angle_deg"),
                "must be below 45 degrees in magnitude",
            ));
        }
        let st = s.state(&self.gas);
        if st.u <= crate::thermo::sonic_speed(&st, &self.gas) {
            return Err(GlimmError::config(path, "flow is not supersonic in x"));
        }
        Ok(())
    }

    /// Builds the scheme, filling `mesh.h` and `mesh.y_min` in `self` when
    /// they were derived.
    pub fn build(&mut self) -> Result<(Scheme, RunOptions)> {
        let gas = self.gas;
        let mesh = self
            .mesh
            .clone()
            .ok_or_else(|| GlimmError::config("mesh", "required for this mode"))?;
        let init = self
            .initial
            .clone()
            .ok_or_else(|| GlimmError::config("initial", "required for this mode"))?;
        let far = init.far_field.state(&gas);
        let initial = init.profile(&gas)?;
        let (l, n) = (mesh.l, mesh.cells);

        // Speeds of the data, and of the vertex state for wedges.
        let mut states: Vec<GasState> = initial.all_states().copied().collect();
        let mut slope_bound = 0.0f64;
        let wall = self.wall.clone();
        if let Some(w) = &wall {
            let a0 = (w.eval(1e-9) - w.eval(0.0)) / 1e-9;
            let turn = far.flow_angle() - a0.atan();
            if self.mode == Mode::WedgeStrong {
                if !(turn > 0.0) {
                    return Err(GlimmError::config(
                        "wall",
                        "wedge-strong needs the wall to turn into the flow at the vertex",
                    ));
                }
                let crit = critical_deflection(&far, &gas);
                if turn >= crit {
                    return Err(GlimmError::config(
                        "wall",
                        format!(
                            "vertex deflection {:.4} rad exceeds the detachment angle {crit:.4}",
                            turn
                        ),
                    ));
                }
            }
            if let Ok(f) = solve_lateral(&far, a0.atan(), WallSide::Above, &gas) {
                states.push(*f.above());
            }
        }
        let lam = states
            .iter()
            .map(|s| {
                acoustic_speed(1, s, &gas)
                    .abs()
                    .max(acoustic_speed(5, s, &gas).abs())
            })
            .fold(0.0, f64::max);
        let h = match mesh.h {
            Some(h) => h,
            None => {
                // A first estimate of the wall slope bound fixes h; the bound
                // is then measured on the sampled wall.
                let probe = 1e-3;
                if let Some(w) = &wall {
                    let xs = 4.0 * mesh.strips as f64 * l;
                    let steps = 4096;
                    for i in 0..steps {
                        let x = xs * i as f64 / steps as f64;
                        slope_bound =
                            slope_bound.max(((w.eval(x + probe) - w.eval(x)) / probe).abs());
                    }
                }
                mesh.cfl * l / (2.0 * lam + slope_bound)
            }
        };
        let domain = match self.mode {
            Mode::Cauchy => {
                let y_min = mesh.y_min.unwrap_or_else(|| {
                    let (a, b) = initial.support().unwrap_or((0.0, 0.0));
                    0.5 * (a + b) - l * n as f64
                });
                if let Some(m) = self.mesh.as_mut() {
                    m.y_min = Some(y_min);
                }
                Domain::Cauchy { y_min }
            }
            Mode::WedgeSmall | Mode::WedgeStrong => {
                let w = wall.as_ref().expect("validated");
                let pts: Vec<f64> = (0..mesh.strips + 2).map(|k| w.eval(k as f64 * h)).collect();
                Domain::Wedge {
                    wall: pts,
                    inflow_angle: far.flow_angle(),
                    strong: self.mode == Mode::WedgeStrong,
                }
            }
            _ => return Err(GlimmError::config("mode", "not a run mode")),
        };
        let wall_slope = match &domain {
            Domain::Wedge { wall, .. } => wall
                .windows(2)
                .map(|p| ((p[1] - p[0]) / h).abs())
                .fold(0.0, f64::max),
            Domain::Cauchy { .. } => 0.0,
        };
        if let Some(m) = self.mesh.as_mut() {
            m.h = Some(h);
        }
        let scheme = Scheme {
            gas,
            rate: self.reaction,
            h,
            l,
            cells: n,
            domain,
            initial,
            wall_slope,
            check_window: self.diagnostics.check_window,
        };
        let d = &self.diagnostics;
        let opts = RunOptions {
            strips: mesh.strips,
            sampler: self.sampler.kind,
            seed: self.seed,
            m_weight: d.m_weight,
            k0: d.k0,
            k_star: d.k_star,
            c_star: d.c_star,
            entropy: d.entropy,
            diamonds: d.diamonds,
            field_stride: self.output.field_stride,
        };
        Ok((scheme, opts))
    }

    /// TOML text of the configuration with every default written out.
    pub fn echo(&self) -> String {
        toml::to_string_pretty(self).expect("configuration serializes")
    }
}
