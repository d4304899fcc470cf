//! Scenario files.
//!
//! A scenario is a TOML document. Angles are in degrees in the file and in
//! radians everywhere else.
//!
//! ```toml
//! name = "demo"
//! dt = 0.05
//! steps = 200
//! mode = "ptz"             # or "fixed"
//!
//! [omega]
//! vertices = [[-4, -4], [4, -4], [4, 4], [-4, 4]]
//!
//! [limits]                 # defaults for every agent
//! z_min = 0.3
//! z_max = 3.8
//! delta_min = 15
//! delta_max = 35
//! h_max = 50
//! r = 0.05
//!
//! [[agents]]
//! q = [0.5, -1.0]
//! z = 1.5
//! theta = 30
//! h = 10
//! delta = 20
//! ```
//!
//! Optional keys: `polygonization`, `boundary_samples`, `eps_f`, `seed`,
//! `snapshots` (steps with partition dumps), `auto_dt`, `[density]`
//! (`kind = "uniform"` with `value`, or `kind = "grid"` with a `file` relative
//! to the scenario), `[gains]`, and `[random_agents]` with a `count` of
//! agents to place from `seed`. Any `[[agents]]` entry may override the
//! `[limits]` keys.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::control::{wrap_angle, Gains, DEFAULT_BOUNDARY_SAMPLES};
use crate::error::{Error, Result};
use crate::geom2d::{ConvexPolygon, DensityField, GridDensity, Location, Point, Shape, DEFAULT_POLYGON_VERTICES};
use crate::partition::DEFAULT_EPS_F;
use crate::sensing::{AgentLimits, AgentState, Footprint};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Pan, tilt and zoom all actuated.
    #[default]
    Ptz,
    /// Downward-facing cameras at minimum zoom; only `q` and `z` move.
    Fixed,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Ptz => "ptz",
            Mode::Fixed => "fixed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Agent {
    pub initial: AgentState,
    pub limits: AgentLimits,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    pub omega: ConvexPolygon,
    pub density: DensityField,
    pub agents: Vec<Agent>,
    pub gains: Gains,
    pub dt: f64,
    pub steps: usize,
    pub polygonization: usize,
    pub boundary_samples: usize,
    pub eps_f: f64,
    pub mode: Mode,
    pub seed: u64,
    /// Steps whose partition is written out.
    pub snapshots: Vec<usize>,
    /// Halve `dt` within a step until `H` does not decrease.
    pub auto_dt: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: Option<String>,
    omega: RawPolygon,
    #[serde(default)]
    density: RawDensity,
    #[serde(default)]
    gains: Gains,
    dt: f64,
    steps: usize,
    polygonization: Option<usize>,
    boundary_samples: Option<usize>,
    eps_f: Option<f64>,
    #[serde(default)]
    mode: Mode,
    #[serde(default)]
    seed: u64,
    snapshots: Option<Vec<usize>>,
    #[serde(default)]
    auto_dt: bool,
    limits: Option<RawLimits>,
    #[serde(default)]
    agents: Vec<RawAgent>,
    random_agents: Option<RawRandom>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPolygon {
    vertices: Vec<[f64; 2]>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawDensity {
    #[default]
    #[serde(skip)]
    Default,
    Uniform {
        value: f64,
    },
    Grid {
        file: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLimits {
    z_min: Option<f64>,
    z_max: Option<f64>,
    delta_min: Option<f64>,
    delta_max: Option<f64>,
    h_max: Option<f64>,
    r: Option<f64>,
}

impl RawLimits {
    fn or(self, d: RawLimits) -> RawLimits {
        RawLimits {
            z_min: self.z_min.or(d.z_min),
            z_max: self.z_max.or(d.z_max),
            delta_min: self.delta_min.or(d.delta_min),
            delta_max: self.delta_max.or(d.delta_max),
            h_max: self.h_max.or(d.h_max),
            r: self.r.or(d.r),
        }
    }

    fn build(&self, at: &str) -> Result<(AgentLimits, f64)> {
        let need = |v: Option<f64>, key: &str| v.ok_or_else(|| Error::config(format!("{at}.{key}"), "missing"));
        let z_min = need(self.z_min, "z_min")?;
        let z_max = need(self.z_max, "z_max")?;
        let delta_min = need(self.delta_min, "delta_min")?.to_radians();
        let delta_max = need(self.delta_max, "delta_max")?.to_radians();
        let r = self.r.unwrap_or(0.0);
        let lims = match self.h_max {
            Some(h) => AgentLimits::with_h_max(z_min, z_max, delta_min, delta_max, h.to_radians()),
            None => AgentLimits::new(z_min, z_max, delta_min, delta_max),
        }
        .map_err(|e| Error::config(at, e.to_string()))?;
        lims.validate_uncertainty(r)
            .map_err(|e| Error::config(format!("{at}.r"), e.to_string()))?;
        Ok((lims, r))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAgent {
    q: [f64; 2],
    z: f64,
    #[serde(default)]
    theta: f64,
    #[serde(default)]
    h: f64,
    delta: Option<f64>,
    z_min: Option<f64>,
    z_max: Option<f64>,
    delta_min: Option<f64>,
    delta_max: Option<f64>,
    h_max: Option<f64>,
    r: Option<f64>,
}

impl RawAgent {
    fn limits(&self) -> RawLimits {
        RawLimits {
            z_min: self.z_min,
            z_max: self.z_max,
            delta_min: self.delta_min,
            delta_max: self.delta_max,
            h_max: self.h_max,
            r: self.r,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRandom {
    count: usize,
}

impl Scenario {
    /// Reads and validates a scenario file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
        Self::parse(&text, base, stem).map_err(|e| match e {
            Error::Parse { path: p, message } if p.as_os_str() == stem => Error::Parse {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })
    }

    /// Parses scenario text. Relative density files resolve against `base`.
    pub fn parse(text: &str, base: &Path, default_name: &str) -> Result<Self> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| Error::Parse {
            path: PathBuf::from(default_name),
            message: e.to_string(),
        })?;
        let omega = ConvexPolygon::new(raw.omega.vertices.iter().copied().map(Point::from).collect())
            .map_err(|e| Error::config("omega.vertices", e.to_string()))?;
        let density = match raw.density {
            RawDensity::Default => DensityField::default(),
            RawDensity::Uniform { value } => DensityField::uniform(value),
            RawDensity::Grid { file } => DensityField::Grid(GridDensity::load(&base.join(file))?),
        };
        density.validate()?;

        let defaults = raw.limits.unwrap_or_default();
        let mut agents = Vec::new();
        for (k, a) in raw.agents.iter().enumerate() {
            let at = format!("agents[{k}]");
            let (limits, r) = a.limits().or(defaults).build(&at)?;
            let initial = AgentState {
                q: Point::from(a.q),
                z: a.z,
                theta: wrap_angle(a.theta.to_radians()),
                h: a.h.to_radians(),
                delta: a.delta.map_or(limits.delta_min, f64::to_radians),
                r,
            };
            agents.push(Agent { initial, limits });
        }
        if let Some(random) = raw.random_agents {
            let (limits, r) = defaults.build("limits")?;
            agents.extend(random_agents(&omega, &limits, r, random.count, raw.seed));
        }

        let s = Scenario {
            name: raw.name.unwrap_or_else(|| default_name.to_string()),
            omega,
            density,
            agents,
            gains: raw.gains,
            dt: raw.dt,
            steps: raw.steps,
            polygonization: raw.polygonization.unwrap_or(DEFAULT_POLYGON_VERTICES),
            boundary_samples: raw.boundary_samples.unwrap_or(DEFAULT_BOUNDARY_SAMPLES),
            eps_f: raw.eps_f.unwrap_or(DEFAULT_EPS_F),
            mode: raw.mode,
            seed: raw.seed,
            snapshots: raw.snapshots.unwrap_or_else(|| vec![0, raw.steps]),
            auto_dt: raw.auto_dt,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::config("dt", format!("must be positive, got {}", self.dt)));
        }
        if self.polygonization < 4 {
            return Err(Error::config("polygonization", "need at least 4 vertices"));
        }
        if self.boundary_samples < 64 {
            return Err(Error::config("boundary_samples", "need at least 64"));
        }
        if !(self.eps_f.is_finite() && self.eps_f >= 0.0) {
            return Err(Error::config("eps_f", "must be finite and non-negative"));
        }
        self.gains.validate()?;
        if self.agents.is_empty() {
            return Err(Error::config("agents", "scenario has no agents"));
        }
        for (k, a) in self.agents.iter().enumerate() {
            let at = format!("agents[{k}]");
            a.limits.validate().map_err(|e| Error::config(&at, e.to_string()))?;
            a.limits
                .validate_uncertainty(a.initial.r)
                .map_err(|e| Error::config(format!("{at}.r"), e.to_string()))?;
            if !a.limits.admits(&a.initial, 1e-12) {
                return Err(Error::config(&at, format!("initial state {:?} outside its limits", a.initial)));
            }
            if self.omega.locate(a.initial.q, 1e-12) == Location::Outside {
                return Err(Error::config(format!("{at}.q"), "position outside omega"));
            }
            let fp = Footprint::new(&a.initial).map_err(|e| Error::config(&at, e.to_string()))?;
            if self.omega.locate(fp.center, 1e-12) == Location::Outside {
                return Err(Error::config(&at, "footprint centre outside omega"));
            }
        }
        Ok(())
    }

    pub fn initial_states(&self) -> Vec<AgentState> {
        self.agents.iter().map(|a| a.initial).collect()
    }

    pub fn limits(&self) -> Vec<AgentLimits> {
        self.agents.iter().map(|a| a.limits).collect()
    }
}

/// Random initial states: `q` uniform in `Ω`, pan uniform, `z` and `δ`
/// uniform in their ranges, tilt within half its range, resampled until the
/// footprint centre lies in `Ω`.
pub fn random_agents(omega: &ConvexPolygon, limits: &AgentLimits, r: f64, count: usize, seed: u64) -> Vec<Agent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bb = omega.bbox();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let q = Point::new(rng.random_range(bb.min.x..bb.max.x), rng.random_range(bb.min.y..bb.max.y));
        if omega.locate(q, 0.0) == Location::Outside {
            continue;
        }
        let s = AgentState {
            q,
            z: rng.random_range(limits.z_min..=limits.z_max),
            theta: rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
            h: rng.random_range(-0.5 * limits.h_max..=0.5 * limits.h_max),
            delta: rng.random_range(limits.delta_min..=limits.delta_max),
            r,
        };
        let Ok(fp) = Footprint::new(&s) else { continue };
        if omega.locate(fp.center, 0.0) != Location::Outside {
            out.push(Agent {
                initial: s,
                limits: *limits,
            });
        }
    }
    out
}
