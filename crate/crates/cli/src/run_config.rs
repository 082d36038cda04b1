//! Run configuration: a JSON file merged with command-line overrides.

use std::path::{Path, PathBuf};

use dirichlet_core::atlas::AtlasOptions;
use dirichlet_core::config::{TargetConfig, TargetKind};
use dirichlet_core::geometry::Rect;
use dirichlet_core::lifting::LiftOptions;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub corrector: f64,
    pub zero: f64,
    pub branch: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { corrector: 1e-9, zero: 1e-10, branch: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Palette {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
}

impl Default for Palette {
    fn default() -> Self {
        Self { a: "#d62728".into(), b: "#1f77b4".into(), c: "#2ca02c".into(), d: "#ff7f0e".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FigureOptions {
    pub colors: Palette,
    pub stroke_width: f64,
    /// Keep every n-th curve sample in figures and their CSV data.
    pub sample_decimation: usize,
    /// Use every n-th zero as a seed for the curve families of plots.
    pub seed_decimation: usize,
    /// Size in pixels of the longer side of the plotted window.
    pub size: f64,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self { colors: Palette::default(), stroke_width: 1.2, sample_decimation: 1, seed_decimation: 1, size: 720.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl Default for Window {
    fn default() -> Self {
        Self { sigma_min: -10.0, sigma_max: 12.0, t_min: 0.0, t_max: 60.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub target: TargetConfig,
    pub window: Window,
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
    pub figure: FigureOptions,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            target: TargetConfig::of_kind(TargetKind::Zeta),
            window: Window::default(),
            tolerances: Tolerances::default(),
            out: None,
            figure: FigureOptions::default(),
        }
    }
}

/// Command-line values that override the configuration file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub target: Option<TargetKind>,
    pub window: Option<Window>,
    pub out: Option<PathBuf>,
    pub seed_decimation: Option<usize>,
}

/// Line of the first occurrence of `"key"` in `text`, for messages.
fn line_of(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

fn invalid_at(text: Option<&str>, key: &str, msg: String) -> CliError {
    match text.and_then(|t| line_of(t, key)) {
        Some(line) => CliError::Validation(format!("line {line}: {msg}")),
        None => CliError::Validation(msg),
    }
}

pub fn parse_window(text: &str) -> Result<Window, CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Validation(format!("--window '{text}': {e}")))?;
    match parts[..] {
        [sigma_min, sigma_max, t_min, t_max] => Ok(Window { sigma_min, sigma_max, t_min, t_max }),
        _ => Err(CliError::Validation(format!("--window '{text}': expected sigma_min,sigma_max,t_min,t_max"))),
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let (mut cfg, text) = match path {
            Some(p) => {
                let text =
                    std::fs::read_to_string(p).map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?;
                let cfg: RunConfig =
                    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?;
                (cfg, Some(text))
            }
            None => (RunConfig::default(), None),
        };
        if let Some(kind) = overrides.target {
            cfg.target = TargetConfig::of_kind(kind);
        }
        if let Some(w) = overrides.window {
            cfg.window = w;
        }
        if let Some(out) = &overrides.out {
            cfg.out = Some(out.clone());
        }
        if let Some(n) = overrides.seed_decimation {
            cfg.figure.seed_decimation = n;
        }
        cfg.validate(text.as_deref())?;
        Ok(cfg)
    }

    fn validate(&self, text: Option<&str>) -> Result<(), CliError> {
        self.rect().map_err(|_| invalid_at(text, "window", format!("empty or non-finite window {:?}", self.window)))?;
        for (key, v) in [
            ("corrector", self.tolerances.corrector),
            ("zero", self.tolerances.zero),
            ("branch", self.tolerances.branch),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid_at(text, key, format!("tolerance {key} must be positive, got {v}")));
            }
        }
        if self.figure.sample_decimation == 0 {
            return Err(invalid_at(text, "sample_decimation", "sample_decimation must be at least 1".into()));
        }
        if self.figure.seed_decimation == 0 {
            return Err(invalid_at(text, "seed_decimation", "seed decimation must be at least 1".into()));
        }
        if !(self.figure.stroke_width > 0.0 && self.figure.size >= 100.0) {
            return Err(invalid_at(text, "figure", "stroke_width must be positive and size at least 100".into()));
        }
        Ok(())
    }

    pub fn rect(&self) -> Result<Rect, CliError> {
        let w = self.window;
        Rect::new(w.sigma_min, w.sigma_max, w.t_min, w.t_max)
            .map_err(|_| CliError::Validation(format!("empty or non-finite window {w:?}")))
    }

    pub fn lift_options(&self) -> LiftOptions {
        LiftOptions {
            corrector_tol: self.tolerances.corrector,
            branch_threshold: self.tolerances.branch,
            ..LiftOptions::default()
        }
    }

    pub fn atlas_options(&self) -> AtlasOptions {
        AtlasOptions { lift: self.lift_options(), zero_tol: self.tolerances.zero, ..AtlasOptions::default() }
    }
}
