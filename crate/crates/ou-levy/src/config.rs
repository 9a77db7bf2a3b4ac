//! Experiment configuration: a TOML file with `[model]`, `[levy]`,
//! `[grid]`, `[run]` and `[output]` tables.
//!
//! Sequences are either arrays or expressions in `n` (1-based), e.g.
//! `a = "n^2"` or `q = [1.0, 0.25]`. Loading resolves every default, so
//! serializing a loaded config and loading it again is the identity.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ou_levy_core::cameron_martin::ExampleId;
use ou_levy_core::girsanov::Functional;
use ou_levy_core::levy::{JumpLaw, LevyConfig};
use ou_levy_core::{Direction, Generator, Sequence, SpectralModel};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    #[serde(default)]
    pub levy: LevySection,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub run: RunConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    /// Number of modes. Optional when every sequence is an array.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    pub a: Sequence,
    pub a_tilde: Sequence,
    pub q: Sequence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum JumpLawConfig {
    DiagonalGaussian { sigma: Sequence },
    DeterministicProfile { xi: Sequence },
    StudentT { nu: f64 },
    PointMass { v: Sequence },
}

impl JumpLawConfig {
    pub fn resolve(&self, dim: usize) -> JumpLaw {
        match self {
            JumpLawConfig::DiagonalGaussian { sigma } => JumpLaw::DiagonalGaussian {
                sigma: sigma.materialize(dim),
            },
            JumpLawConfig::DeterministicProfile { xi } => JumpLaw::DeterministicProfile {
                xi: xi.materialize(dim),
            },
            JumpLawConfig::StudentT { nu } => JumpLaw::StudentT { nu: *nu },
            JumpLawConfig::PointMass { v } => JumpLaw::PointMass {
                v: v.materialize(dim),
            },
        }
    }

    fn explicit_lens(&self) -> Vec<(&'static str, usize)> {
        let mut out = Vec::new();
        match self {
            JumpLawConfig::DiagonalGaussian { sigma: s }
            | JumpLawConfig::DeterministicProfile { xi: s }
            | JumpLawConfig::PointMass { v: s } => {
                if let Some(len) = s.explicit_len() {
                    out.push(("levy.jump_law", len));
                }
            }
            JumpLawConfig::StudentT { .. } => {}
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevySection {
    /// Drift `b`; absent means zero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift: Option<Sequence>,
    #[serde(default)]
    pub gaussian: bool,
    #[serde(default)]
    pub rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jump_law: Option<JumpLawConfig>,
}

impl Default for LevySection {
    fn default() -> Self {
        Self {
            drift: None,
            gaussian: false,
            rate: 0.0,
            jump_law: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "defaults::horizon")]
    pub horizon: f64,
    #[serde(default = "defaults::base_steps")]
    pub base_steps: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            horizon: defaults::horizon(),
            base_steps: defaults::base_steps(),
        }
    }
}

/// Log-spaced sampling of the sector `|arg λ| ≤ θ` for the resolvent sup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolventGridConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    pub rays: usize,
}

impl Default for ResolventGridConfig {
    fn default() -> Self {
        Self {
            r_min: 1e-3,
            r_max: 1e3,
            points: 61,
            rays: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionalChoice {
    Coordinate,
    SquaredNorm,
    Both,
}

impl FunctionalChoice {
    pub fn functionals(self) -> Vec<Functional> {
        match self {
            FunctionalChoice::Coordinate => vec![Functional::Coordinate],
            FunctionalChoice::SquaredNorm => vec![Functional::SquaredNorm],
            FunctionalChoice::Both => vec![Functional::Coordinate, Functional::SquaredNorm],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "defaults::replicas")]
    pub replicas: u64,
    #[serde(default = "defaults::beta")]
    pub beta: f64,
    #[serde(default = "defaults::theta")]
    pub theta: f64,
    #[serde(default)]
    pub resolvent: ResolventGridConfig,
    #[serde(default = "defaults::smoothing_points")]
    pub smoothing_points: usize,
    /// Jump threshold for rigidity; absent means `1e-8 · max path norm`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default = "defaults::functional")]
    pub functional: FunctionalChoice,
    #[serde(default = "defaults::direction")]
    pub direction: Direction,
    /// Generator simulated by `simulate`.
    #[serde(default = "defaults::generator")]
    pub generator: Generator,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example: Option<ExampleId>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            master_seed: 0,
            replicas: defaults::replicas(),
            beta: defaults::beta(),
            theta: defaults::theta(),
            resolvent: ResolventGridConfig::default(),
            smoothing_points: defaults::smoothing_points(),
            epsilon: None,
            functional: defaults::functional(),
            direction: defaults::direction(),
            generator: defaults::generator(),
            example: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected json or csv)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "defaults::directory")]
    pub directory: PathBuf,
    #[serde(default = "defaults::formats")]
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: defaults::directory(),
            formats: defaults::formats(),
        }
    }
}

impl OutputConfig {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

mod defaults {
    use super::*;

    pub fn horizon() -> f64 {
        1.0
    }
    pub fn base_steps() -> usize {
        256
    }
    pub fn replicas() -> u64 {
        1000
    }
    pub fn beta() -> f64 {
        0.25
    }
    pub fn theta() -> f64 {
        1.0
    }
    pub fn smoothing_points() -> usize {
        1000
    }
    pub fn functional() -> FunctionalChoice {
        FunctionalChoice::Both
    }
    pub fn direction() -> Direction {
        Direction::AToATilde
    }
    pub fn generator() -> Generator {
        Generator::A
    }
    pub fn directory() -> PathBuf {
        PathBuf::from("out")
    }
    pub fn formats() -> Vec<Format> {
        vec![Format::Json]
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub replicas: Option<u64>,
    pub formats: Option<Vec<Format>>,
}

impl ExperimentConfig {
    /// Parses TOML, or the `config` field of a previously emitted JSON
    /// report, and resolves it.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let is_json = path.extension().is_some_and(|e| e == "json");
        let parsed = if is_json {
            Self::from_report_json(&text)
        } else {
            Self::from_toml(&text)
        };
        parsed.map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let raw: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        raw.resolved()
    }

    pub fn from_report_json(text: &str) -> Result<Self, CliError> {
        #[derive(Deserialize)]
        struct Embedded {
            config: ExperimentConfig,
        }
        let e: Embedded = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("report config: {e}")))?;
        e.config.resolved()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }

    pub fn apply(mut self, o: &Overrides) -> Result<Self, CliError> {
        if let Some(d) = &o.out {
            self.output.directory = d.clone();
        }
        if let Some(s) = o.seed {
            self.run.master_seed = s;
        }
        if let Some(r) = o.replicas {
            self.run.replicas = r;
        }
        if let Some(f) = &o.formats {
            self.output.formats = f.clone();
        }
        self.resolved()
    }

    /// Fills `n_max`, normalizes the format list and validates every field
    /// that can be checked without running anything.
    pub fn resolved(mut self) -> Result<Self, CliError> {
        let mut lens: Vec<(&str, usize)> = Vec::new();
        for (name, s) in [
            ("model.a", &self.model.a),
            ("model.a_tilde", &self.model.a_tilde),
            ("model.q", &self.model.q),
        ] {
            if let Some(len) = s.explicit_len() {
                lens.push((name, len));
            }
        }
        if let Some(d) = &self.levy.drift {
            if let Some(len) = d.explicit_len() {
                lens.push(("levy.drift", len));
            }
        }
        if let Some(law) = &self.levy.jump_law {
            lens.extend(law.explicit_lens());
        }
        let dim = match (self.model.n_max, lens.first()) {
            (Some(n), _) => n,
            (None, Some((_, len))) => *len,
            (None, None) => {
                return Err(CliError::Config(
                    "model.n_max: required when every sequence is symbolic".into(),
                ))
            }
        };
        if dim == 0 {
            return Err(CliError::Config("model.n_max: must be at least 1".into()));
        }
        if let Some((name, len)) = lens.iter().find(|(_, len)| *len != dim) {
            return Err(CliError::Config(format!(
                "{name}: {len} entries, but the model has {dim} modes"
            )));
        }
        self.model.n_max = Some(dim);
        self.output.formats.sort();
        self.output.formats.dedup();
        if self.output.formats.is_empty() {
            return Err(CliError::Config(
                "output.formats: at least one format is required".into(),
            ));
        }
        let g = &self.grid;
        if !(g.horizon > 0.0 && g.horizon.is_finite()) {
            return Err(CliError::Config(
                "grid.horizon: must be positive and finite".into(),
            ));
        }
        if g.base_steps == 0 {
            return Err(CliError::Config(
                "grid.base_steps: must be at least 1".into(),
            ));
        }
        let r = &self.run;
        if !(r.beta > 0.0 && r.beta < 1.0) {
            return Err(CliError::Config("run.beta: must lie in (0, 1)".into()));
        }
        if !(r.theta > 0.0 && r.theta < std::f64::consts::FRAC_PI_2) {
            return Err(CliError::Config("run.theta: must lie in (0, pi/2)".into()));
        }
        if r.smoothing_points == 0 {
            return Err(CliError::Config(
                "run.smoothing_points: must be at least 1".into(),
            ));
        }
        if let Some(e) = r.epsilon {
            if !(e > 0.0) {
                return Err(CliError::Config("run.epsilon: must be positive".into()));
            }
        }
        if self.levy.rate > 0.0 && self.levy.jump_law.is_none() {
            return Err(CliError::Config(
                "levy.jump_law: required when levy.rate > 0".into(),
            ));
        }
        self.model()?;
        self.levy()?;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.model.n_max.expect("resolved config")
    }

    pub fn model(&self) -> Result<SpectralModel, CliError> {
        let m = &self.model;
        SpectralModel::from_sequences(self.dim(), m.a.clone(), m.a_tilde.clone(), m.q.clone())
            .map_err(|e| CliError::Config(format!("model: {e}")))
    }

    pub fn levy(&self) -> Result<LevyConfig, CliError> {
        let dim = self.dim();
        let l = &self.levy;
        let cfg = LevyConfig {
            drift: l
                .drift
                .as_ref()
                .map_or_else(|| vec![0.0; dim], |d| d.materialize(dim)),
            gaussian: l.gaussian,
            rate: l.rate,
            jump_law: l.jump_law.as_ref().map_or_else(
                || JumpLaw::PointMass { v: vec![0.0; dim] },
                |j| j.resolve(dim),
            ),
        };
        cfg.validate(dim)
            .map_err(|e| CliError::Config(format!("levy: {e}")))?;
        Ok(cfg)
    }

    /// The configuration that `reproduce` embeds for a built-in example.
    pub fn for_example(id: ExampleId) -> Self {
        let (model, xi) = ou_levy_core::cameron_martin::example_model(id);
        let (a, a_tilde, q) = model.sequences();
        let jump_law = match id {
            ExampleId::NovikovFails => JumpLawConfig::StudentT {
                nu: ou_levy_core::cameron_martin::EXAMPLE_STUDENT_NU,
            },
            _ => JumpLawConfig::DeterministicProfile { xi },
        };
        ExperimentConfig {
            model: ModelConfig {
                n_max: Some(model.dim()),
                a: a.clone(),
                a_tilde: a_tilde.clone(),
                q: q.clone(),
            },
            levy: LevySection {
                drift: None,
                gaussian: false,
                rate: 1.0,
                jump_law: Some(jump_law),
            },
            grid: GridConfig {
                horizon: ou_levy_core::cameron_martin::EXAMPLE_HORIZON,
                ..GridConfig::default()
            },
            run: RunConfig {
                example: Some(id),
                ..RunConfig::default()
            },
            output: OutputConfig::default(),
        }
    }
}
