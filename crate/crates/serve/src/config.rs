use std::net::SocketAddr;
use std::path::PathBuf;

use fooctts_core::{EmotionLabel, VowelizerConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid gateway config: {0}")]
    Invalid(String),
    #[error("crowd noise file {path}: {source}")]
    Noise {
        path: PathBuf,
        #[source]
        source: fooctts_core::AudioError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    #[default]
    Stub,
    Remote,
}

impl BackendKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Stub => "stub",
            Self::Remote => "remote",
        }
    }
}

impl std::str::FromStr for BackendKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "stub" => Ok(Self::Stub),
            "remote" => Ok(Self::Remote),
            other => Err(format!("unknown backend {other:?} (expected stub or remote)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmotionF0 {
    pub neutral: f64,
    pub excited: f64,
    pub very_excited: f64,
}

impl Default for EmotionF0 {
    fn default() -> Self {
        Self {
            neutral: 120.0,
            excited: 180.0,
            very_excited: 240.0,
        }
    }
}

impl EmotionF0 {
    /// Requests without an emotion use the neutral pitch.
    pub fn for_emotion(&self, emotion: Option<EmotionLabel>) -> f64 {
        match emotion.unwrap_or(EmotionLabel::Neutral) {
            EmotionLabel::Neutral => self.neutral,
            EmotionLabel::Excited => self.excited,
            EmotionLabel::VeryExcited => self.very_excited,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StubConfig {
    pub base_f0_hz: EmotionF0,
    pub char_duration_ms: f64,
    pub fade_ms: f64,
    pub amplitude: f64,
}

impl Default for StubConfig {
    fn default() -> Self {
        Self {
            base_f0_hz: EmotionF0::default(),
            char_duration_ms: 90.0,
            fade_ms: 10.0,
            amplitude: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RemoteConfig {
    /// Receives `POST {"text", "emotion"}` and answers with WAV bytes.
    pub endpoint: Option<String>,
    pub timeout_ms: u64,
}

impl Default for RemoteConfig {
    fn default() -> Self {
        Self {
            endpoint: None,
            timeout_ms: 30_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BackendConfig {
    pub kind: BackendKind,
    pub stub: StubConfig,
    pub remote: RemoteConfig,
}

impl Default for BackendConfig {
    fn default() -> Self {
        Self {
            kind: BackendKind::Stub,
            stub: StubConfig::default(),
            remote: RemoteConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    /// Set to false for backends whose audio already carries crowd noise.
    pub enabled: bool,
    /// Crowd recording to loop under the speech. Without one, a seeded
    /// synthetic murmur is used.
    pub path: Option<PathBuf>,
    pub default_snr_db: f64,
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            path: None,
            default_snr_db: 15.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServeConfig {
    pub host: String,
    pub port: u16,
    pub backend: BackendConfig,
    pub noise: NoiseConfig,
    pub vowelizer: VowelizerConfig,
    pub max_text_chars: usize,
    /// Directory holding the web client's `index.html`. A built-in page is
    /// served when unset.
    pub webui_dir: Option<PathBuf>,
}

impl Default for ServeConfig {
    fn default() -> Self {
        Self {
            host: "127.0.0.1".into(),
            port: 8080,
            backend: BackendConfig::default(),
            noise: NoiseConfig::default(),
            vowelizer: VowelizerConfig::default(),
            max_text_chars: 2000,
            webui_dir: None,
        }
    }
}

impl ServeConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        let stub = &self.backend.stub;
        if !(stub.char_duration_ms > 0.0 && stub.char_duration_ms.is_finite()) {
            return bad("backend.stub.char_duration_ms must be > 0");
        }
        if !(stub.fade_ms >= 0.0 && stub.fade_ms * 2.0 <= stub.char_duration_ms) {
            return bad("backend.stub.fade_ms must be in [0, char_duration_ms / 2]");
        }
        if !(stub.amplitude > 0.0 && stub.amplitude <= 1.0) {
            return bad("backend.stub.amplitude must be in (0, 1]");
        }
        let f0 = &stub.base_f0_hz;
        if [f0.neutral, f0.excited, f0.very_excited].iter().any(|f| !(*f > 0.0 && f.is_finite())) {
            return bad("backend.stub.base_f0_hz values must be > 0");
        }
        if self.backend.remote.timeout_ms == 0 {
            return bad("backend.remote.timeout_ms must be > 0");
        }
        if self.backend.kind == BackendKind::Remote && self.backend.remote.endpoint.is_none() {
            return bad("backend.remote.endpoint is required when backend.kind is remote");
        }
        if self.noise.default_snr_db.is_nan() {
            return bad("noise.default_snr_db must be a number");
        }
        if self.max_text_chars == 0 {
            return bad("max_text_chars must be > 0");
        }
        self.vowelizer.validate().map_err(ConfigError::Invalid)?;
        Ok(())
    }

    pub fn addr(&self) -> Result<SocketAddr, ConfigError> {
        format!("{}:{}", self.host, self.port)
            .parse()
            .map_err(|e| ConfigError::Invalid(format!("host/port: {e}")))
    }

    /// Copy safe to show over HTTP: credentials and query strings are
    /// stripped from URLs.
    pub fn redacted(&self) -> Self {
        let mut out = self.clone();
        out.vowelizer.endpoint = redact_url(&out.vowelizer.endpoint);
        out.backend.remote.endpoint = out.backend.remote.endpoint.as_deref().map(redact_url);
        out
    }
}

fn redact_url(raw: &str) -> String {
    match url::Url::parse(raw) {
        Ok(mut u) => {
            if !u.username().is_empty() || u.password().is_some() {
                let _ = u.set_username("redacted");
                let _ = u.set_password(None);
            }
            if u.query().is_some() {
                u.set_query(Some("redacted"));
            }
            u.to_string()
        }
        Err(_) => "<unparseable>".into(),
    }
}
