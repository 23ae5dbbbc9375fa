use std::num::NonZeroUsize;
use std::sync::{Arc, Condvar, Mutex};
use std::time::Duration;

use lru::LruCache;
use serde::{Deserialize, Serialize};

use super::strip_diacritics;
use crate::transport::{HttpTransport, TransportError, UreqTransport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VowelizerMode {
    #[default]
    Remote,
    OfflinePassthrough,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VowelizerConfig {
    pub endpoint: String,
    pub timeout_ms: u64,
    /// LRU entries; 0 disables caching.
    pub cache_capacity: usize,
    pub mode: VowelizerMode,
    pub max_in_flight: usize,
}

impl Default for VowelizerConfig {
    fn default() -> Self {
        Self {
            endpoint: "http://127.0.0.1:8090/vowelize".into(),
            timeout_ms: 5000,
            cache_capacity: 10_000,
            mode: VowelizerMode::Remote,
            max_in_flight: 4,
        }
    }
}

impl VowelizerConfig {
    pub fn offline() -> Self {
        Self {
            mode: VowelizerMode::OfflinePassthrough,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.timeout_ms == 0 {
            return Err("vowelizer timeout_ms must be > 0".into());
        }
        if self.max_in_flight == 0 {
            return Err("vowelizer max_in_flight must be > 0".into());
        }
        if self.mode == VowelizerMode::Remote && self.endpoint.trim().is_empty() {
            return Err("vowelizer endpoint is required in remote mode".into());
        }
        Ok(())
    }
}

/// Every variant carries the input so callers can fall back to it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VowelizerError {
    #[error("vowelizer timed out")]
    Timeout { text: String },
    #[error("vowelizer answered HTTP {status}")]
    Http { status: u16, text: String },
    #[error("vowelizer unreachable: {reason}")]
    Unreachable { reason: String, text: String },
    /// The service changed base characters, not just diacritics.
    #[error("vowelizer output does not match its input once diacritics are removed")]
    Mismatch { text: String, output: String },
}

impl VowelizerError {
    pub fn original_text(&self) -> &str {
        match self {
            Self::Timeout { text } | Self::Http { text, .. } | Self::Unreachable { text, .. } | Self::Mismatch { text, .. } => text,
        }
    }

    /// Short machine-readable tag, e.g. for response metadata.
    pub fn kind(&self) -> String {
        match self {
            Self::Timeout { .. } => "timeout".into(),
            Self::Http { status, .. } => format!("http_{status}"),
            Self::Unreachable { .. } => "unreachable".into(),
            Self::Mismatch { .. } => "mismatch".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VowelizedSource {
    Remote,
    Cache,
    Passthrough,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vowelized {
    pub text: String,
    pub source: VowelizedSource,
}

/// Counting semaphore bounding concurrent requests to the service.
struct Permits {
    free: Mutex<usize>,
    released: Condvar,
}

struct Permit<'a>(&'a Permits);

impl Permits {
    fn new(n: usize) -> Self {
        Self {
            free: Mutex::new(n),
            released: Condvar::new(),
        }
    }

    fn acquire(&self) -> Permit<'_> {
        let mut free = self.free.lock().unwrap();
        while *free == 0 {
            free = self.released.wait(free).unwrap();
        }
        *free -= 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().unwrap() += 1;
        self.0.released.notify_one();
    }
}

/// Client for the diacritization service.
///
/// Wire contract: `POST <endpoint>` with a UTF-8 `text/plain` body; a 200
/// answer's body is the diacritized text, anything else is an error. Results
/// are cached by exact input. Safe to share across threads.
pub struct Vowelizer {
    cfg: VowelizerConfig,
    transport: Arc<dyn HttpTransport>,
    cache: Option<Mutex<LruCache<String, String>>>,
    permits: Permits,
}

impl std::fmt::Debug for Vowelizer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Vowelizer").field("cfg", &self.cfg).finish_non_exhaustive()
    }
}

impl Vowelizer {
    pub fn new(cfg: VowelizerConfig) -> Self {
        Self::with_transport(cfg, Arc::new(UreqTransport::default()))
    }

    pub fn with_transport(cfg: VowelizerConfig, transport: Arc<dyn HttpTransport>) -> Self {
        let cache = NonZeroUsize::new(cfg.cache_capacity).map(|n| Mutex::new(LruCache::new(n)));
        let permits = Permits::new(cfg.max_in_flight.max(1));
        Self {
            cfg,
            transport,
            cache,
            permits,
        }
    }

    pub fn config(&self) -> &VowelizerConfig {
        &self.cfg
    }

    pub fn vowelize(&self, text: &str) -> Result<Vowelized, VowelizerError> {
        if self.cfg.mode == VowelizerMode::OfflinePassthrough || text.is_empty() {
            return Ok(Vowelized {
                text: text.to_string(),
                source: VowelizedSource::Passthrough,
            });
        }
        if let Some(hit) = self.cache.as_ref().and_then(|c| c.lock().unwrap().get(text).cloned()) {
            return Ok(Vowelized {
                text: hit,
                source: VowelizedSource::Cache,
            });
        }

        let reply = {
            let _permit = self.permits.acquire();
            self.transport.post(
                &self.cfg.endpoint,
                "text/plain; charset=utf-8",
                text.as_bytes(),
                Duration::from_millis(self.cfg.timeout_ms),
            )
        };
        let reply = reply.map_err(|e| match e {
            TransportError::Timeout => VowelizerError::Timeout { text: text.to_string() },
            TransportError::Failed(reason) => VowelizerError::Unreachable {
                reason,
                text: text.to_string(),
            },
        })?;
        if reply.status != 200 {
            return Err(VowelizerError::Http {
                status: reply.status,
                text: text.to_string(),
            });
        }
        let output = String::from_utf8(reply.body).map_err(|_| VowelizerError::Mismatch {
            text: text.to_string(),
            output: String::new(),
        })?;
        if strip_diacritics(&output) != strip_diacritics(text) {
            return Err(VowelizerError::Mismatch {
                text: text.to_string(),
                output,
            });
        }
        if let Some(cache) = &self.cache {
            cache.lock().unwrap().put(text.to_string(), output.clone());
        }
        Ok(Vowelized {
            text: output,
            source: VowelizedSource::Remote,
        })
    }

    /// Vowelizes, falling back to the input on any service failure.
    pub fn vowelize_or_passthrough(&self, text: &str) -> (String, Option<VowelizerError>) {
        match self.vowelize(text) {
            Ok(v) => (v.text, None),
            Err(e) => {
                tracing::warn!(error = %e, "vowelizer failed, passing text through");
                (e.original_text().to_string(), Some(e))
            }
        }
    }
}
