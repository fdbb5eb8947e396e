use std::sync::Mutex;

use relink_core::fetch::{FetchError, Fetcher, FixtureFetcher, HttpResponse};
use relink_core::uri::CanonicalUri;

use crate::config::Config;
use crate::error::{CliError, CliResult};

/// Fixture pages first, then the live web unless offline. Offline misses
/// are recorded so the command can fail once its work returns.
pub struct AppFetcher {
    fixture: Option<FixtureFetcher>,
    live: Option<Box<dyn Fetcher>>,
    refused: Mutex<Vec<String>>,
}

impl AppFetcher {
    pub fn from_config(config: &Config, offline: bool) -> CliResult<AppFetcher> {
        let fixture = match &config.pages_fixture {
            Some(path) => Some(
                FixtureFetcher::from_jsonl(path).map_err(|e| CliError::Config(e.to_string()))?,
            ),
            None => None,
        };
        let live = if offline { None } else { live_fetcher(config) };
        Ok(AppFetcher {
            fixture,
            live,
            refused: Mutex::new(Vec::new()),
        })
    }

    /// Error out if any fetch was refused in offline mode.
    pub fn ensure_offline_clean(&self) -> CliResult<()> {
        let refused = self.refused.lock().unwrap_or_else(|e| e.into_inner());
        match refused.first() {
            Some(uri) => Err(CliError::Offline(uri.clone())),
            None => Ok(()),
        }
    }
}

#[cfg(feature = "http")]
fn live_fetcher(config: &Config) -> Option<Box<dyn Fetcher>> {
    use relink_core::fetch::{HttpFetcher, PoliteFetcher};
    let http = HttpFetcher::new(config.policy.timeout, &config.user_agent);
    Some(Box::new(PoliteFetcher::new(http, config.policy.per_host_delay)))
}

#[cfg(not(feature = "http"))]
fn live_fetcher(_config: &Config) -> Option<Box<dyn Fetcher>> {
    None
}

impl Fetcher for AppFetcher {
    fn fetch(&self, uri: &CanonicalUri) -> Result<HttpResponse, FetchError> {
        if let Some(fixture) = &self.fixture {
            if let Ok(page) = fixture.fetch(uri) {
                return Ok(page);
            }
        }
        match &self.live {
            Some(live) => live.fetch(uri),
            None => {
                self.refused
                    .lock()
                    .unwrap_or_else(|e| e.into_inner())
                    .push(uri.to_string());
                Err(FetchError::Offline {
                    uri: uri.to_string(),
                })
            }
        }
    }
}
