//! Run configuration: a flat TOML file of dotted keys, overridable through
//! `DELTAPLANE_*` environment variables.

use deltaplane_core::bs_solver::{CrossingOptions, GridSpec, RadiusSpec};
use deltaplane_core::profiles::{DeformationProfile, ProfileKind};
use deltaplane_core::quadrature::NODE_CAP;
use serde::{Deserialize, Serialize};

use crate::error::{config, Result};
use crate::report::Format;

pub const ENV_PREFIX: &str = "DELTAPLANE_";

/// Every accepted key, in canonical order.
pub const KEYS: &[&str] = &[
    "alpha",
    "beta",
    "profile.kind",
    "profile.height",
    "profile.radius",
    "grid.n",
    "grid.radius",
    "grid.auto_radius",
    "grid.panel_order",
    "crossing.samples",
    "crossing.kappa_rtol",
    "crossing.resolution_floor",
    "converge.beta",
    "converge.n",
    "output.path",
    "output.format",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub alpha: f64,
    pub beta: Vec<f64>,
    pub profile: ProfileConfig,
    pub grid: GridConfig,
    pub crossing: CrossingConfig,
    pub converge: ConvergeConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: vec![1.0, 0.8, 0.6],
            profile: ProfileConfig::default(),
            grid: GridConfig::default(),
            crossing: CrossingConfig::default(),
            converge: ConvergeConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProfileConfig {
    pub kind: ProfileKind,
    pub height: f64,
    pub radius: f64,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self {
            kind: ProfileKind::Bump,
            height: 1.0,
            radius: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub n: usize,
    /// Fixed truncation radius; automatic when absent.
    pub radius: Option<f64>,
    pub auto_radius: Option<bool>,
    pub panel_order: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n: 48,
            radius: None,
            auto_radius: None,
            panel_order: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CrossingConfig {
    pub samples: usize,
    pub kappa_rtol: f64,
    /// Zero disables the refusal.
    pub resolution_floor: f64,
}

impl Default for CrossingConfig {
    fn default() -> Self {
        Self {
            samples: 20,
            kappa_rtol: 1e-8,
            resolution_floor: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergeConfig {
    pub beta: f64,
    pub n: Vec<usize>,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        Self {
            beta: 1.0,
            n: vec![16, 24, 32, 48],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub path: Option<String>,
    pub format: Format,
}

/// Parses and validates a config, without environment overrides.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with_env(text, std::iter::empty::<(String, String)>())
}

/// Parses a config and applies `DELTAPLANE_*` overrides from `env`. The
/// variable for key `grid.auto_radius` is `DELTAPLANE_GRID_AUTO_RADIUS`;
/// values are TOML literals, falling back to a bare string.
pub fn parse_config_with_env<I, K, V>(text: &str, env: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = (K, V)>,
    K: AsRef<str>,
    V: AsRef<str>,
{
    let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| config(e.to_string()))?;
    let mut overrides: Vec<(String, String)> = env
        .into_iter()
        .filter_map(|(k, v)| {
            let k = k.as_ref();
            k.strip_prefix(ENV_PREFIX)
                .map(|rest| (rest.to_string(), v.as_ref().to_string()))
        })
        .collect();
    overrides.sort();
    for (var, raw) in overrides {
        let key = KEYS
            .iter()
            .find(|k| k.replace('.', "_").eq_ignore_ascii_case(&var))
            .ok_or_else(|| config(format!("unknown environment override {ENV_PREFIX}{var}")))?;
        insert_dotted(&mut table, key, parse_literal(&raw));
    }
    let cfg: RunConfig = table.try_into().map_err(|e: toml::de::Error| config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

fn parse_literal(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

fn insert_dotted(table: &mut toml::Table, key: &str, value: toml::Value) {
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().expect("non-empty key");
    let mut t = table;
    for p in parts {
        let entry = t
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        if !entry.is_table() {
            *entry = toml::Value::Table(toml::Table::new());
        }
        t = entry.as_table_mut().expect("table");
    }
    t.insert(last.to_string(), value);
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(config("alpha must be > 0"));
        }
        if self.beta.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
            return Err(config("beta values must be >= 0"));
        }
        if !self.profile.height.is_finite() {
            return Err(config("profile.height must be finite"));
        }
        if !(self.profile.radius.is_finite() && self.profile.radius > 0.0) {
            return Err(config("profile.radius must be > 0"));
        }
        let g = &self.grid;
        if g.n < 2 || g.n * g.n > NODE_CAP {
            return Err(config(format!("grid.n must lie in [2, {}]", (NODE_CAP as f64).sqrt() as usize)));
        }
        if g.panel_order == 0 || g.n % g.panel_order != 0 {
            return Err(config("grid.n must be a multiple of grid.panel_order"));
        }
        match (g.radius, g.auto_radius) {
            (Some(r), _) if !(r.is_finite() && r > 0.0) => return Err(config("grid.radius must be > 0")),
            (Some(_), Some(true)) => {
                return Err(config("grid.radius and grid.auto_radius = true are exclusive"))
            }
            (None, Some(false)) => return Err(config("grid.auto_radius = false needs grid.radius")),
            _ => {}
        }
        if self.crossing.samples < 2 {
            return Err(config("crossing.samples must be >= 2"));
        }
        if !(self.crossing.kappa_rtol.is_finite() && self.crossing.kappa_rtol > 0.0) {
            return Err(config("crossing.kappa_rtol must be > 0"));
        }
        if !(self.crossing.resolution_floor.is_finite() && self.crossing.resolution_floor >= 0.0) {
            return Err(config("crossing.resolution_floor must be >= 0"));
        }
        if !(self.converge.beta.is_finite() && self.converge.beta >= 0.0) {
            return Err(config("converge.beta must be >= 0"));
        }
        if let Some(n) = self
            .converge
            .n
            .iter()
            .find(|&&n| n < 2 || n * n > NODE_CAP || n % g.panel_order != 0)
        {
            return Err(config(format!("converge.n entry {n} is not a valid grid size")));
        }
        Ok(())
    }

    pub fn profile(&self) -> Result<DeformationProfile> {
        Ok(DeformationProfile::new(
            self.profile.kind,
            self.profile.height,
            self.profile.radius,
        )?)
    }

    pub fn grid_spec(&self) -> GridSpec {
        self.grid_spec_with_n(self.grid.n)
    }

    pub fn grid_spec_with_n(&self, n: usize) -> GridSpec {
        GridSpec {
            n,
            radius: self.grid.radius.map_or(RadiusSpec::Auto, RadiusSpec::Fixed),
            panel_order: self.grid.panel_order,
        }
    }

    pub fn crossing_options(&self) -> CrossingOptions {
        let floor = self.crossing.resolution_floor;
        CrossingOptions {
            samples: self.crossing.samples,
            kappa_rtol: self.crossing.kappa_rtol,
            resolution_floor: (floor > 0.0).then_some(floor),
            delta_pred: None,
        }
    }

    /// Flat `key = value` rendering that parses back to `self`.
    pub fn to_config_string(&self) -> String {
        let f = |x: f64| format!("{x:?}");
        let s = |x: &str| toml::Value::String(x.to_string()).to_string();
        let floats = |v: &[f64]| v.iter().map(|x| f(*x)).collect::<Vec<_>>().join(", ");
        let ints = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let kind = match self.profile.kind {
            ProfileKind::Bump => "bump",
            ProfileKind::Zero => "zero",
        };
        let mut lines = vec![
            format!("alpha = {}", f(self.alpha)),
            format!("beta = [{}]", floats(&self.beta)),
            format!("profile.kind = {}", s(kind)),
            format!("profile.height = {}", f(self.profile.height)),
            format!("profile.radius = {}", f(self.profile.radius)),
            format!("grid.n = {}", self.grid.n),
        ];
        if let Some(r) = self.grid.radius {
            lines.push(format!("grid.radius = {}", f(r)));
        }
        if let Some(a) = self.grid.auto_radius {
            lines.push(format!("grid.auto_radius = {a}"));
        }
        lines.extend([
            format!("grid.panel_order = {}", self.grid.panel_order),
            format!("crossing.samples = {}", self.crossing.samples),
            format!("crossing.kappa_rtol = {}", f(self.crossing.kappa_rtol)),
            format!("crossing.resolution_floor = {}", f(self.crossing.resolution_floor)),
            format!("converge.beta = {}", f(self.converge.beta)),
            format!("converge.n = [{}]", ints(&self.converge.n)),
        ]);
        if let Some(p) = &self.output.path {
            lines.push(format!("output.path = {}", s(p)));
        }
        lines.push(format!("output.format = {}", s(self.output.format.as_str())));
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}
