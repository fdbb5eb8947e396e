//! Single-request HTTP access.
//!
//! A [`Fetcher`] performs exactly one GET and never follows redirects;
//! redirect handling lives in [`follow_redirects`] so every hop is recorded.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::uri::CanonicalUri;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FetchError {
    #[error("network failure fetching {uri}: {reason}")]
    Network { uri: String, reason: String },
    #[error("offline mode: no fixture for {uri}")]
    Offline { uri: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HttpResponse {
    pub status: u16,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
    #[serde(default)]
    pub body: String,
}

impl HttpResponse {
    pub fn ok(body: impl Into<String>) -> Self {
        HttpResponse {
            status: 200,
            location: None,
            body: body.into(),
        }
    }

    pub fn status(status: u16, body: impl Into<String>) -> Self {
        HttpResponse {
            status,
            location: None,
            body: body.into(),
        }
    }

    pub fn redirect(status: u16, location: impl Into<String>) -> Self {
        HttpResponse {
            status,
            location: Some(location.into()),
            body: String::new(),
        }
    }

    pub fn is_redirect(&self) -> bool {
        (300..400).contains(&self.status) && self.location.is_some()
    }
}

pub trait Fetcher: Send + Sync {
    fn fetch(&self, uri: &CanonicalUri) -> Result<HttpResponse, FetchError>;
}

impl<F: Fetcher + ?Sized> Fetcher for &F {
    fn fetch(&self, uri: &CanonicalUri) -> Result<HttpResponse, FetchError> {
        (**self).fetch(uri)
    }
}

impl<F: Fetcher + ?Sized> Fetcher for Arc<F> {
    fn fetch(&self, uri: &CanonicalUri) -> Result<HttpResponse, FetchError> {
        (**self).fetch(uri)
    }
}

/// Result of chasing redirects from a starting URI.
#[derive(Debug, Clone)]
pub struct Followed {
    pub final_uri: CanonicalUri,
    /// Every redirect hop that was followed, as `(uri, status)`.
    pub chain: Vec<(CanonicalUri, u16)>,
    pub response: HttpResponse,
    /// Set when another redirect arrived after `max_redirects` hops.
    pub exceeded: bool,
}

pub fn follow_redirects(
    fetcher: &dyn Fetcher,
    start: &CanonicalUri,
    max_redirects: usize,
) -> Result<Followed, FetchError> {
    let mut current = start.clone();
    let mut chain = Vec::new();
    loop {
        let response = fetcher.fetch(&current)?;
        if !response.is_redirect() {
            return Ok(Followed {
                final_uri: current,
                chain,
                response,
                exceeded: false,
            });
        }
        if chain.len() >= max_redirects {
            return Ok(Followed {
                final_uri: current,
                chain,
                response,
                exceeded: true,
            });
        }
        let location = response.location.as_deref().unwrap_or_default();
        let next = current.join(location).map_err(|e| FetchError::Network {
            uri: current.to_string(),
            reason: format!("bad redirect target: {e}"),
        })?;
        chain.push((current, response.status));
        current = next;
    }
}

/// Canned responses keyed by canonical URI, with optional prefix fallbacks
/// for URIs that have no exact entry (the longest matching prefix wins).
/// Anything else fails with [`FetchError::Offline`].
#[derive(Debug, Default, Clone)]
pub struct FixtureFetcher {
    pages: HashMap<CanonicalUri, HttpResponse>,
    prefixes: Vec<(String, HttpResponse)>,
}

#[derive(Debug, Deserialize)]
struct PageRecord {
    #[serde(default)]
    url: Option<String>,
    #[serde(default)]
    prefix: Option<String>,
    #[serde(default = "default_status")]
    status: u16,
    #[serde(default)]
    location: Option<String>,
    #[serde(default)]
    body: Option<String>,
    #[serde(default)]
    body_file: Option<PathBuf>,
}

fn default_status() -> u16 {
    200
}

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("cannot read fixture {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    Record {
        path: PathBuf,
        line: usize,
        reason: String,
    },
}

impl FixtureFetcher {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, uri: CanonicalUri, response: HttpResponse) -> &mut Self {
        self.pages.insert(uri, response);
        self
    }

    pub fn with(mut self, uri: &str, response: HttpResponse) -> Self {
        let uri = CanonicalUri::parse(uri).expect("fixture URI must be valid");
        self.pages.insert(uri, response);
        self
    }

    /// Answer every URI starting with `prefix` that has no exact entry.
    pub fn with_prefix(mut self, prefix: &str, response: HttpResponse) -> Self {
        self.add_prefix(prefix.to_string(), response);
        self
    }

    fn add_prefix(&mut self, prefix: String, response: HttpResponse) {
        self.prefixes.retain(|(p, _)| *p != prefix);
        self.prefixes.push((prefix, response));
        self.prefixes.sort_by(|(a, _), (b, _)| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    }

    pub fn len(&self) -> usize {
        self.pages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pages.is_empty()
    }

    /// Load a JSON-lines page set: one `{url | prefix, status?, location?,
    /// body? | body_file?}` object per line. `body_file` is relative to the
    /// fixture file.
    pub fn from_jsonl(path: &Path) -> Result<Self, FixtureError> {
        let text = fs::read_to_string(path).map_err(|source| FixtureError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let mut fetcher = FixtureFetcher::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let record_err = |reason: String| FixtureError::Record {
                path: path.to_path_buf(),
                line: idx + 1,
                reason,
            };
            let record: PageRecord =
                serde_json::from_str(line).map_err(|e| record_err(e.to_string()))?;
            let body = match (record.body, record.body_file) {
                (Some(body), _) => body,
                (None, Some(file)) => {
                    let full = base.join(&file);
                    fs::read_to_string(&full).map_err(|source| FixtureError::Io {
                        path: full,
                        source,
                    })?
                }
                (None, None) => String::new(),
            };
            let response = HttpResponse {
                status: record.status,
                location: record.location,
                body,
            };
            match (record.url, record.prefix) {
                (Some(url), None) => {
                    let uri = CanonicalUri::parse(&url).map_err(|e| record_err(e.to_string()))?;
                    fetcher.pages.insert(uri, response);
                }
                (None, Some(prefix)) => fetcher.add_prefix(prefix, response),
                _ => return Err(record_err("need exactly one of url or prefix".to_string())),
            }
        }
        Ok(fetcher)
    }
}

impl Fetcher for FixtureFetcher {
    fn fetch(&self, uri: &CanonicalUri) -> Result<HttpResponse, FetchError> {
        if let Some(page) = self.pages.get(uri) {
            return Ok(page.clone());
        }
        self.prefixes
            .iter()
            .find(|(p, _)| uri.as_str().starts_with(p.as_str()))
            .map(|(_, r)| r.clone())
            .ok_or_else(|| FetchError::Offline {
                uri: uri.to_string(),
            })
    }
}

/// Serializes requests per host and spaces them by a fixed delay.
pub struct PoliteFetcher<F> {
    inner: F,
    delay: Duration,
    hosts: Mutex<HashMap<String, Arc<Mutex<Option<Instant>>>>>,
}

impl<F: Fetcher> PoliteFetcher<F> {
    pub fn new(inner: F, delay: Duration) -> Self {
        PoliteFetcher {
            inner,
            delay,
            hosts: Mutex::new(HashMap::new()),
        }
    }

    fn slot(&self, host: String) -> Arc<Mutex<Option<Instant>>> {
        let mut hosts = self.hosts.lock().unwrap_or_else(|e| e.into_inner());
        hosts.entry(host).or_default().clone()
    }
}

impl<F: Fetcher> Fetcher for PoliteFetcher<F> {
    fn fetch(&self, uri: &CanonicalUri) -> Result<HttpResponse, FetchError> {
        let slot = self.slot(uri.authority());
        let mut last = slot.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(prev) = *last {
            let ready = prev + self.delay;
            let now = Instant::now();
            if ready > now {
                thread::sleep(ready - now);
            }
        }
        let result = self.inner.fetch(uri);
        *last = Some(Instant::now());
        result
    }
}

#[cfg(feature = "http")]
pub use http::HttpFetcher;

#[cfg(feature = "http")]
mod http {
    use std::time::Duration;

    use super::{FetchError, Fetcher, HttpResponse};
    use crate::uri::CanonicalUri;

    const BODY_LIMIT: u64 = 8 * 1024 * 1024;

    /// Blocking HTTP client with redirects disabled.
    pub struct HttpFetcher {
        agent: ureq::Agent,
    }

    impl HttpFetcher {
        pub fn new(timeout: Duration, user_agent: &str) -> Self {
            let config = ureq::Agent::config_builder()
                .timeout_global(Some(timeout))
                .max_redirects(0)
                .http_status_as_error(false)
                .user_agent(user_agent)
                .build();
            HttpFetcher {
                agent: config.into(),
            }
        }
    }

    impl Fetcher for HttpFetcher {
        fn fetch(&self, uri: &CanonicalUri) -> Result<HttpResponse, FetchError> {
            let network = |e: ureq::Error| FetchError::Network {
                uri: uri.to_string(),
                reason: e.to_string(),
            };
            let mut response = self.agent.get(uri.as_str()).call().map_err(network)?;
            let status = response.status().as_u16();
            let location = response
                .headers()
                .get("location")
                .and_then(|v| v.to_str().ok())
                .map(str::to_string);
            let bytes = response
                .body_mut()
                .with_config()
                .limit(BODY_LIMIT)
                .read_to_vec()
                .map_err(network)?;
            Ok(HttpResponse {
                status,
                location,
                body: String::from_utf8_lossy(&bytes).into_owned(),
            })
        }
    }
}
