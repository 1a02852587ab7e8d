//! JSON run configurations.

use std::fs::File;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use pulsebeam_core::channel::{Channel, ChannelDescription};
use pulsebeam_core::geometry::{GeometryConfig, DEFAULT_NEAR_CIRCLE_REL};
use pulsebeam_core::quadrature::QuadConfig;
use pulsebeam_core::signals::{DrivingSignal, SampledSignal};
use pulsebeam_core::spacetime::{ConeVector, FourVector};

use crate::error::CliError;
use crate::grid::{GridSpec, DEFAULT_MAX_POINTS};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Option<Scenario>,
    pub signal: Option<SignalSpec>,
    #[serde(default)]
    pub grid: GridSpec,
    pub pattern: Option<PatternSpec>,
    pub gain: Option<GainSpec>,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Directory that relative paths inside the config resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
pub enum Scenario {
    /// Single extent `[y1, y2, y3, s]`.
    Extent([f64; 4]),
    Channel(ChannelDescription),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "lowercase")]
pub enum SignalSpec {
    Delta {
        #[serde(default)]
        order: u32,
    },
    Gaussian {
        center: f64,
        width: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// Two-column `time,value` CSV.
    Sampled { path: PathBuf },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternSpec {
    pub r: f64,
    #[serde(default = "default_pattern_count")]
    pub theta_count: usize,
}

fn default_pattern_count() -> usize {
    181
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GainSpec {
    #[serde(default = "default_gain_count")]
    pub theta_count: usize,
}

impl Default for GainSpec {
    fn default() -> Self {
        Self { theta_count: default_gain_count() }
    }
}

fn default_gain_count() -> usize {
    721
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_near_circle")]
    pub near_circle: f64,
    #[serde(default = "default_rel_tol")]
    pub quad_rel_tol: f64,
    #[serde(default = "default_max_points")]
    pub max_points: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { near_circle: default_near_circle(), quad_rel_tol: default_rel_tol(), max_points: default_max_points() }
    }
}

fn default_near_circle() -> f64 {
    DEFAULT_NEAR_CIRCLE_REL
}

fn default_rel_tol() -> f64 {
    QuadConfig::STANDARD.rel_tol
}

fn default_max_points() -> u64 {
    DEFAULT_MAX_POINTS
}

impl RunConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, CliError> {
        let mut cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.tolerances.validate()?;
        if cfg.threads == Some(0) {
            return Err(CliError::Validation("config: threads must be >= 1".into()));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base)
    }

    /// Output path from the config, resolved against the config directory.
    pub fn output_path(&self) -> Option<PathBuf> {
        self.output.as_ref().map(|p| self.base_dir.join(p))
    }

    pub fn extent(&self) -> Result<ConeVector, CliError> {
        match &self.scenario {
            Some(Scenario::Extent(v)) => Ok(ConeVector::new(FourVector::from_array(*v))?),
            Some(Scenario::Channel(_)) => Err(CliError::Validation("scenario: expected an extent, found a channel".into())),
            None => Err(CliError::Validation("scenario: missing extent".into())),
        }
    }

    pub fn channel(&self) -> Result<Channel, CliError> {
        match &self.scenario {
            Some(Scenario::Channel(d)) => Ok(d.to_channel()?),
            Some(Scenario::Extent(_)) => Err(CliError::Validation("scenario: expected a channel, found an extent".into())),
            None => Err(CliError::Validation("scenario: missing channel".into())),
        }
    }

    /// The configured driving signal; defaults to `δ(t)`.
    pub fn signal(&self) -> Result<DrivingSignal, CliError> {
        match &self.signal {
            None => Ok(DrivingSignal::delta(0)),
            Some(SignalSpec::Delta { order }) => Ok(DrivingSignal::delta(*order)),
            Some(SignalSpec::Gaussian { center, width, amplitude }) => {
                Ok(DrivingSignal::gaussian(*center, *width, *amplitude)?)
            }
            Some(SignalSpec::Sampled { path }) => {
                let full = self.base_dir.join(path);
                let file = File::open(&full).map_err(|e| CliError::Io(format!("{}: {e}", full.display())))?;
                Ok(DrivingSignal::Sampled(SampledSignal::from_csv_reader(file)?))
            }
        }
    }

    pub fn geometry(&self) -> GeometryConfig {
        GeometryConfig { near_circle_rel: self.tolerances.near_circle }
    }

    pub fn quadrature(&self) -> QuadConfig {
        QuadConfig { rel_tol: self.tolerances.quad_rel_tol, ..QuadConfig::STANDARD }
    }
}

impl Tolerances {
    fn validate(&self) -> Result<(), CliError> {
        if !(self.near_circle >= 0.0 && self.near_circle.is_finite()) {
            return Err(CliError::Validation("tolerances.near_circle must be finite and >= 0".into()));
        }
        if !(self.quad_rel_tol > 0.0 && self.quad_rel_tol < 1.0) {
            return Err(CliError::Validation("tolerances.quad_rel_tol must lie in (0, 1)".into()));
        }
        if self.max_points == 0 {
            return Err(CliError::Validation("tolerances.max_points must be >= 1".into()));
        }
        Ok(())
    }
}
