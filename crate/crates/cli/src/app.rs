use std::io::Write;
use std::sync::Arc;

use chrono::{DateTime, Utc};
use relink_core::clock::{Clock, FixedClock, SystemClock};
use relink_core::replace::{FixtureSearchProvider, Pipeline};
use relink_core::social::FixtureSocialProvider;
use relink_core::uri::{canonicalize, CanonicalUri};
use serde::Serialize;

use crate::cache::Cache;
use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::fetcher::AppFetcher;
use crate::Format;

/// Everything a command needs: resolved config, clock and flags.
pub struct App {
    pub config: Config,
    pub offline: bool,
    clock: Box<dyn Clock>,
    seed: Option<u64>,
    format: Option<Format>,
}

pub struct Providers {
    pub social: FixtureSocialProvider,
    pub search: FixtureSearchProvider,
}

impl App {
    pub fn new(config: Config, offline: bool, fixed: Option<DateTime<Utc>>, format: Option<Format>) -> App {
        let (clock, seed): (Box<dyn Clock>, _) = match fixed {
            Some(t) => (Box::new(FixedClock(t)), Some(t.timestamp() as u64)),
            None => (Box::new(SystemClock), None),
        };
        App {
            config,
            offline,
            clock,
            seed,
            format,
        }
    }

    pub fn clock(&self) -> &dyn Clock {
        self.clock.as_ref()
    }

    /// Seed for randomized steps when the clock is fixed.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn cache(&self) -> CliResult<Cache> {
        Cache::open(&self.config.cache_dir)
    }

    pub fn fetcher(&self) -> CliResult<Arc<AppFetcher>> {
        AppFetcher::from_config(&self.config, self.offline).map(Arc::new)
    }

    /// Fixture-backed providers. Short links in posts are expanded through
    /// `fetcher` when a post does not carry its resolved form.
    pub fn providers(&self, fetcher: &Arc<AppFetcher>) -> CliResult<Providers> {
        let social = self.config.social_fixture.as_ref().ok_or_else(|| {
            CliError::Provider("no social provider configured (set social_fixture)".into())
        })?;
        let search = self.config.search_fixture.as_ref().ok_or_else(|| {
            CliError::Provider("no search provider configured (set search_fixture)".into())
        })?;
        for path in [social, search] {
            if !path.is_file() {
                return Err(CliError::Provider(format!("{} is not readable", path.display())));
            }
        }
        let resolver: Arc<dyn relink_core::fetch::Fetcher> = fetcher.clone();
        Ok(Providers {
            social: FixtureSocialProvider::new(social)
                .with_resolver(resolver, self.config.policy.max_redirects),
            search: FixtureSearchProvider::new(search),
        })
    }

    pub fn pipeline<'a>(&'a self, providers: &'a Providers, fetcher: &'a AppFetcher) -> Pipeline<'a> {
        Pipeline {
            social: &providers.social,
            search: &providers.search,
            fetcher,
            stopwords: &self.config.stopwords,
            clock: self.clock(),
            config: self.config.recommend,
        }
    }
}

pub fn parse_uri(raw: &str) -> CliResult<CanonicalUri> {
    canonicalize(raw).map_err(|e| CliError::Input(format!("{raw:?}: {e}")))
}

pub fn write_json<T: Serialize + ?Sized>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Input(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

/// Serialize `value` as a JSON object with `schema_version` added.
pub fn versioned<T: Serialize>(value: &T) -> serde_json::Value {
    let mut v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
    if let serde_json::Value::Object(map) = &mut v {
        map.insert(
            "schema_version".into(),
            relink_core::SCHEMA_VERSION.into(),
        );
    }
    v
}
