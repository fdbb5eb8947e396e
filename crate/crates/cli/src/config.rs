use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use relink_core::eval::{SimField, DEFAULT_THRESHOLD, MIN_POSTS};
use relink_core::probe::ProbePolicy;
use relink_core::replace::{FetchOptions, QueryForm, RecommendConfig};
use relink_core::social::DEFAULT_CORPUS_LIMIT;
use relink_core::textpipe::{ExtractorKind, StopwordList};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// Looked up in the working directory when `--config` is not given.
pub const DEFAULT_CONFIG_FILE: &str = "relink.toml";

/// The flat key-value file as written. Relative paths are resolved against
/// the directory holding the file.
#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawConfig {
    cache_dir: PathBuf,
    timemap_endpoint: String,
    user_agent: String,
    stopwords: Option<PathBuf>,
    social_fixture: Option<PathBuf>,
    search_fixture: Option<PathBuf>,
    pages_fixture: Option<PathBuf>,
    threshold: f64,
    eval_field: String,
    min_posts: usize,
    corpus_limit: usize,
    extractor: String,
    query_form: String,
    timeout_secs: f64,
    max_redirects: usize,
    repeat_count: usize,
    repeat_spacing_secs: f64,
    per_host_delay_ms: u64,
    soft404_threshold: f64,
    check_soft404: bool,
    max_in_flight: usize,
}

impl Default for RawConfig {
    fn default() -> Self {
        let policy = ProbePolicy::default();
        RawConfig {
            cache_dir: PathBuf::from(".relink-cache"),
            timemap_endpoint: "http://timetravel.mementoweb.org".to_string(),
            user_agent: concat!("relink/", env!("CARGO_PKG_VERSION")).to_string(),
            stopwords: None,
            social_fixture: None,
            search_fixture: None,
            pages_fixture: None,
            threshold: DEFAULT_THRESHOLD,
            eval_field: "best_sim_union".to_string(),
            min_posts: MIN_POSTS,
            corpus_limit: DEFAULT_CORPUS_LIMIT,
            extractor: "density".to_string(),
            query_form: "stemmed".to_string(),
            timeout_secs: policy.timeout.as_secs_f64(),
            max_redirects: policy.max_redirects,
            repeat_count: policy.repeat_count,
            repeat_spacing_secs: policy.repeat_spacing.as_secs_f64(),
            per_host_delay_ms: policy.per_host_delay.as_millis() as u64,
            soft404_threshold: policy.soft404_threshold,
            check_soft404: policy.check_soft404,
            max_in_flight: policy.max_in_flight,
        }
    }
}

#[derive(Debug)]
pub struct Config {
    pub cache_dir: PathBuf,
    pub timemap_endpoint: String,
    pub user_agent: String,
    pub stopwords: StopwordList,
    pub social_fixture: Option<PathBuf>,
    pub search_fixture: Option<PathBuf>,
    pub pages_fixture: Option<PathBuf>,
    pub threshold: f64,
    pub eval_field: SimField,
    pub min_posts: usize,
    pub policy: ProbePolicy,
    pub recommend: RecommendConfig,
}

impl Config {
    /// Read `path`, or `relink.toml` in the working directory if present,
    /// or fall back to defaults.
    pub fn load(path: Option<&Path>) -> CliResult<Config> {
        let (raw, base) = match path {
            Some(p) => (read_raw(p)?, parent_dir(p)),
            None => {
                let default = Path::new(DEFAULT_CONFIG_FILE);
                if default.is_file() {
                    (read_raw(default)?, PathBuf::from("."))
                } else {
                    (RawConfig::default(), PathBuf::from("."))
                }
            }
        };
        Config::resolve(raw, &base)
    }

    fn resolve(raw: RawConfig, base: &Path) -> CliResult<Config> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if !(raw.threshold > 0.0 && raw.threshold <= 1.0) {
            return bad(format!("threshold must be in (0, 1], got {}", raw.threshold));
        }
        if raw.corpus_limit == 0 {
            return bad("corpus_limit must be at least 1".to_string());
        }
        if !(raw.timeout_secs.is_finite() && raw.timeout_secs > 0.0) {
            return bad("timeout_secs must be positive".to_string());
        }
        if !(raw.repeat_spacing_secs.is_finite() && raw.repeat_spacing_secs >= 0.0) {
            return bad("repeat_spacing_secs must be non-negative".to_string());
        }
        let Some(eval_field) = SimField::parse(&raw.eval_field) else {
            return bad(format!("unknown eval_field {:?}", raw.eval_field));
        };
        let Some(extractor) = ExtractorKind::parse(&raw.extractor) else {
            return bad(format!("unknown extractor {:?}", raw.extractor));
        };
        let Some(query_form) = QueryForm::parse(&raw.query_form) else {
            return bad(format!("unknown query_form {:?}", raw.query_form));
        };

        let policy = ProbePolicy {
            timeout: Duration::from_secs_f64(raw.timeout_secs),
            max_redirects: raw.max_redirects,
            repeat_count: raw.repeat_count,
            repeat_spacing: Duration::from_secs_f64(raw.repeat_spacing_secs),
            per_host_delay: Duration::from_millis(raw.per_host_delay_ms),
            soft404_threshold: raw.soft404_threshold,
            check_soft404: raw.check_soft404,
            max_in_flight: raw.max_in_flight,
        };
        policy
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;

        let join = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };
        let stopwords = match raw.stopwords.map(join) {
            Some(path) => StopwordList::from_file(&path)
                .map_err(|e| CliError::Config(format!("stopwords: {e}")))?,
            None => StopwordList::english(),
        };
        let pages_fixture = raw.pages_fixture.map(join);
        if let Some(p) = &pages_fixture {
            if !p.is_file() {
                return bad(format!("pages_fixture {} does not exist", p.display()));
            }
        }

        Ok(Config {
            cache_dir: join(raw.cache_dir),
            timemap_endpoint: raw.timemap_endpoint,
            user_agent: raw.user_agent,
            stopwords,
            social_fixture: raw.social_fixture.map(join),
            search_fixture: raw.search_fixture.map(join),
            pages_fixture,
            threshold: raw.threshold,
            eval_field,
            min_posts: raw.min_posts,
            recommend: RecommendConfig {
                corpus_limit: raw.corpus_limit,
                query_form,
                fetch: FetchOptions {
                    extractor,
                    max_redirects: policy.max_redirects,
                    max_in_flight: policy.max_in_flight,
                },
            },
            policy,
        })
    }

    pub fn set_limit(&mut self, limit: usize) -> CliResult<()> {
        if limit == 0 {
            return Err(CliError::Config("--limit must be at least 1".to_string()));
        }
        self.recommend.corpus_limit = limit;
        Ok(())
    }

    pub fn set_threshold(&mut self, threshold: f64) -> CliResult<()> {
        if !(threshold > 0.0 && threshold <= 1.0) {
            return Err(CliError::Config(format!(
                "--threshold must be in (0, 1], got {threshold}"
            )));
        }
        self.threshold = threshold;
        Ok(())
    }
}

fn read_raw(path: &Path) -> CliResult<RawConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn parent_dir(path: &Path) -> PathBuf {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> CliResult<Config> {
        Config::resolve(toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?, Path::new("/base"))
    }

    #[test]
    fn defaults_and_relative_paths() {
        let c = parse("social_fixture = \"posts.jsonl\"\nthreshold = 0.5\n").unwrap();
        assert_eq!(c.social_fixture, Some(PathBuf::from("/base/posts.jsonl")));
        assert_eq!(c.cache_dir, PathBuf::from("/base/.relink-cache"));
        assert_eq!(c.threshold, 0.5);
        assert_eq!(c.policy, ProbePolicy::default());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(parse("threshold = 0.0").is_err());
        assert!(parse("threshold = 1.5").is_err());
        assert!(parse("repeat_count = 2").is_err());
        assert!(parse("extractor = \"magic\"").is_err());
        assert!(parse("no_such_key = 1").is_err());
        assert!(parse("stopwords = \"missing.txt\"").is_err());
        assert!(parse("pages_fixture = \"missing.jsonl\"").is_err());
    }
}
