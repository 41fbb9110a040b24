//! Analysis configuration (TOML).

use std::path::PathBuf;

use alphastab::arnold::DomainSpec;
use alphastab::modal::{logspace, FilterOptions};
use alphastab::Descriptor;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

fn bad<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Analysis {
    Rayleigh,
    Fjortoft,
    ModalScan,
    Arnold1,
    Arnold2,
    LinearEvolve,
    TorusEvolve,
    Invariants,
}

impl Analysis {
    pub fn name(self) -> &'static str {
        match self {
            Self::Rayleigh => "rayleigh",
            Self::Fjortoft => "fjortoft",
            Self::ModalScan => "modal-scan",
            Self::Arnold1 => "arnold1",
            Self::Arnold2 => "arnold2",
            Self::LinearEvolve => "linear-evolve",
            Self::TorusEvolve => "torus-evolve",
            Self::Invariants => "invariants",
        }
    }

    /// Analyses that reduce to classical Euler results at `alpha = 0`.
    fn allows_zero_alpha(self) -> bool {
        matches!(self, Self::Rayleigh | Self::Fjortoft | Self::ModalScan | Self::Arnold1 | Self::Arnold2)
    }

    fn needs_shear(self) -> bool {
        matches!(self, Self::Rayleigh | Self::Fjortoft | Self::ModalScan | Self::LinearEvolve)
    }

    fn needs_torus(self) -> bool {
        matches!(self, Self::TorusEvolve | Self::Invariants)
    }
}

/// Where the samples of a channel profile come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Closed form, e.g. `{ polynomial = [0.0, 1.0] }`.
    Descriptor(Descriptor),
    /// `y,value` CSV sampled on Chebyshev extrema or uniform nodes; relative
    /// paths are taken from the config file's directory.
    Tabulated(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProfileConfig {
    /// Filtered velocity `V` on `interval`.
    FromV {
        interval: [f64; 2],
        #[serde(flatten)]
        source: Source,
    },
    /// Unfiltered velocity `U` on `interval`.
    FromU {
        interval: [f64; 2],
        #[serde(flatten)]
        source: Source,
    },
    /// Doubly periodic state with stream function `phi(y)`.
    TorusPhi { periods: [f64; 2], descriptor: Descriptor },
    /// The closed-form regularized steady state on a channel of width pi.
    Regularization { interval: [f64; 2] },
}

impl ProfileConfig {
    pub fn is_torus(&self) -> bool {
        matches!(self, Self::TorusPhi { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    One(f64),
    Many(Vec<f64>),
}

impl AlphaSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Self::One(a) => vec![*a],
            Self::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KGrid {
    List(Vec<f64>),
    Log { min: f64, max: f64, count: usize },
}

impl KGrid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Self::List(v) => v.clone(),
            Self::Log { min, max, count } => logspace(*min, *max, *count),
        }
    }
}

/// Overrides of the library defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub tol_growth: Option<f64>,
    pub max_residual: Option<f64>,
    pub max_drift: Option<f64>,
    pub speed_factor: Option<f64>,
}

impl Tolerances {
    pub fn filter_options(&self) -> FilterOptions {
        let d = FilterOptions::default();
        FilterOptions {
            tol_growth: self.tol_growth.unwrap_or(d.tol_growth),
            max_residual: self.max_residual.unwrap_or(d.max_residual),
            max_drift: self.max_drift.unwrap_or(d.max_drift),
            speed_factor: self.speed_factor.unwrap_or(d.speed_factor),
            ..d
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Numerics {
    /// Nodes of the channel profile grid.
    pub n_profile: usize,
    /// Nodes of the modal collocation grid.
    pub n_modal: usize,
    pub k_grid: KGrid,
    /// Torus resolution per direction.
    pub n_evolve: usize,
    /// Channel nodes of the linear stepper.
    pub n_linear: usize,
    /// Wavenumber of the linear run; defaults to the fastest-growing scanned
    /// `k`, or `1`.
    pub k_linear: Option<f64>,
    /// Fixed time step; by default the steppers pick one from their CFL limit.
    pub dt: Option<f64>,
    pub horizon: f64,
    pub epsilon: f64,
    pub tolerances: Tolerances,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            n_profile: 129,
            n_modal: 128,
            k_grid: KGrid::Log { min: 0.1, max: 5.0, count: 20 },
            n_evolve: 64,
            n_linear: 96,
            k_linear: None,
            dt: None,
            horizon: 10.0,
            epsilon: 0.01,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { directory: PathBuf::from("out"), formats: vec![Format::Csv, Format::Json] }
    }
}

impl OutputConfig {
    pub fn csv(&self) -> bool {
        self.formats.contains(&Format::Csv)
    }

    pub fn json(&self) -> bool {
        self.formats.contains(&Format::Json)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub profile: ProfileConfig,
    pub alpha: AlphaSpec,
    pub analyses: Vec<Analysis>,
    /// Domain for the second theorem; derived from the profile when absent.
    #[serde(default)]
    pub domain: Option<DomainSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub output: OutputConfig,
}

fn positive(name: &str, x: f64) -> Result<(), ConfigError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        bad(format!("{name} must be positive and finite, got {x}"))
    }
}

fn interval(iv: &[f64; 2]) -> Result<(), ConfigError> {
    if iv[0].is_finite() && iv[1].is_finite() && iv[0] < iv[1] {
        Ok(())
    } else {
        bad(format!("interval [{}, {}] must be finite and increasing", iv[0], iv[1]))
    }
}

impl AnalysisConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Requested analyses in dependency order, without repeats.
    pub fn ordered_analyses(&self) -> Vec<Analysis> {
        let mut a = self.analyses.clone();
        a.sort();
        a.dedup();
        a
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.analyses.is_empty() {
            return bad("at least one analysis is required");
        }
        let alphas = self.alpha.values();
        if alphas.is_empty() {
            return bad("alpha list is empty");
        }
        for &a in &alphas {
            if !(a >= 0.0) || !a.is_finite() {
                return bad(format!("alpha must be non-negative and finite, got {a}"));
            }
            if a == 0.0 {
                if let Some(x) = self.analyses.iter().find(|x| !x.allows_zero_alpha()) {
                    return bad(format!("alpha = 0 is only allowed for the regression analyses, not {}", x.name()));
                }
            }
        }
        match &self.profile {
            ProfileConfig::FromV { interval: iv, .. } | ProfileConfig::FromU { interval: iv, .. } => interval(iv)?,
            ProfileConfig::Regularization { interval: iv } => interval(iv)?,
            ProfileConfig::TorusPhi { periods, .. } => {
                positive("periods[0]", periods[0])?;
                positive("periods[1]", periods[1])?;
            }
        }
        let torus = self.profile.is_torus();
        for &x in &self.analyses {
            if torus && x.needs_shear() {
                return bad(format!("{} needs a channel profile", x.name()));
            }
            if !torus && x.needs_torus() {
                return bad(format!("{} needs a torus profile", x.name()));
            }
        }
        if let Some(d) = &self.domain {
            d.validate().map_err(|e| ConfigError(e.to_string()))?;
            if torus != matches!(d, DomainSpec::Torus { .. }) {
                return bad("domain kind does not match the profile");
            }
        }
        let n = &self.numerics;
        for (name, v, min) in [("n_profile", n.n_profile, 8), ("n_modal", n.n_modal, 32), ("n_evolve", n.n_evolve, 8), ("n_linear", n.n_linear, 32)] {
            if v < min {
                return bad(format!("{name} must be at least {min}, got {v}"));
            }
        }
        let ks = n.k_grid.values();
        if ks.is_empty() || ks.iter().any(|&k| !(k > 0.0) || !k.is_finite()) || ks.windows(2).any(|w| w[0] > w[1]) {
            return bad("k_grid must be non-empty, positive and sorted");
        }
        if let Some(k) = n.k_linear {
            positive("k_linear", k)?;
        }
        if let Some(dt) = n.dt {
            positive("dt", dt)?;
        }
        positive("horizon", n.horizon)?;
        if !(n.epsilon >= 0.0) || !n.epsilon.is_finite() {
            return bad(format!("epsilon must be non-negative, got {}", n.epsilon));
        }
        let t = &n.tolerances;
        for (name, v) in [("tol_growth", t.tol_growth), ("max_residual", t.max_residual), ("max_drift", t.max_drift), ("speed_factor", t.speed_factor)] {
            if let Some(v) = v {
                positive(name, v)?;
            }
        }
        if self.output.formats.is_empty() {
            return bad("output.formats is empty");
        }
        Ok(())
    }
}
