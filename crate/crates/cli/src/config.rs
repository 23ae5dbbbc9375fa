use std::path::Path;

use fooctts_core::audio::F0Config;
use fooctts_core::corpus::EmotionThresholds;
use fooctts_core::{AlignConfig, SplitSpec, VadConfig, VowelizerConfig, CANONICAL_SAMPLE_RATE};
use fooctts_serve::ServeConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Tag};

/// One JSON file configures every stage. Missing keys take defaults;
/// unknown keys are an error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Rate of every clip the pipeline writes.
    pub sample_rate: u32,
    pub vad: VadConfig,
    pub align: AlignConfig,
    pub vowelizer: VowelizerConfig,
    pub f0: F0Config,
    pub emotion: EmotionThresholds,
    pub split: SplitSpec,
    pub serve: ServeConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            sample_rate: CANONICAL_SAMPLE_RATE,
            vad: VadConfig::default(),
            align: AlignConfig::default(),
            vowelizer: VowelizerConfig::default(),
            f0: F0Config::default(),
            emotion: EmotionThresholds::default(),
            split: SplitSpec::default(),
            serve: ServeConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let cfg: Self = match path {
            None => Self::default(),
            Some(p) => {
                let text = std::fs::read_to_string(p).input_err(format!("config {}", p.display()))?;
                serde_json::from_str(&text).input_err(format!("config {}", p.display()))?
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let invalid = |m: String| CliError::Input(format!("invalid config: {m}"));
        if self.sample_rate == 0 {
            return Err(invalid("sample_rate must be > 0".into()));
        }
        self.vad.validate().map_err(invalid)?;
        if self.align.window == 0 {
            return Err(invalid("align.window must be >= 1".into()));
        }
        if self.align.min_score.is_some_and(|s| s.is_nan()) {
            return Err(invalid("align.min_score must be a number".into()));
        }
        self.vowelizer.validate().map_err(invalid)?;
        let t = &self.emotion;
        if !(t.excited_hz > 0.0 && t.excited_hz < t.very_excited_hz) {
            return Err(invalid("emotion thresholds need 0 < excited_hz < very_excited_hz".into()));
        }
        self.serve.validate().map_err(|e| invalid(e.to_string()))?;
        Ok(())
    }
}
