use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::{DateTime, Utc};
use serde::Deserialize;

use super::{extract_hashtags, extract_mentions, SocialError, SocialPost};
use crate::fetch::{follow_redirects, Fetcher};
use crate::uri::CanonicalUri;

/// A source of posts that share a given URI.
pub trait SocialProvider: Send + Sync {
    /// Posts whose links resolve to `target`, at most `limit` of them.
    fn posts_mentioning(
        &self,
        target: &CanonicalUri,
        limit: usize,
    ) -> Result<Vec<SocialPost>, SocialError>;

    /// Whether the provider vouches for association even when a post's
    /// resolved links do not include the target.
    fn attests_association(&self) -> bool {
        false
    }
}

#[derive(Debug, Deserialize)]
struct PostRecord {
    id: String,
    author: String,
    text: String,
    created_at: DateTime<Utc>,
    #[serde(default)]
    urls: Vec<LinkRecord>,
    #[serde(default)]
    post_uri: Option<String>,
}

#[derive(Debug, Deserialize)]
struct LinkRecord {
    short: String,
    #[serde(default)]
    resolved: Option<String>,
}

/// Posts read from a JSON-lines file, one
/// `{id, author, text, created_at, urls: [{short, resolved?}]}` per line.
///
/// Links without `resolved` are expanded through the resolver when one is
/// set, and taken as-is otherwise. The file is read on every query, so a
/// missing file reports the provider as unavailable.
pub struct FixtureSocialProvider {
    path: PathBuf,
    resolver: Option<Arc<dyn Fetcher>>,
    max_redirects: usize,
}

impl FixtureSocialProvider {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        FixtureSocialProvider {
            path: path.into(),
            resolver: None,
            max_redirects: 10,
        }
    }

    pub fn with_resolver(mut self, resolver: Arc<dyn Fetcher>, max_redirects: usize) -> Self {
        self.resolver = Some(resolver);
        self.max_redirects = max_redirects;
        self
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Every post in the file, links resolved.
    pub fn load_all(&self) -> Result<Vec<SocialPost>, SocialError> {
        let unavailable = |reason: String| {
            SocialError::ProviderUnavailable(format!("{}: {reason}", self.path.display()))
        };
        let text = fs::read_to_string(&self.path).map_err(|e| unavailable(e.to_string()))?;
        let mut posts = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let record: PostRecord = serde_json::from_str(line)
                .map_err(|e| unavailable(format!("line {}: {e}", idx + 1)))?;
            posts.push(self.to_post(record).map_err(|e| unavailable(format!("line {}: {e}", idx + 1)))?);
        }
        Ok(posts)
    }

    fn resolve(&self, short: &CanonicalUri) -> CanonicalUri {
        match &self.resolver {
            Some(fetcher) => match follow_redirects(fetcher.as_ref(), short, self.max_redirects) {
                Ok(followed) => followed.final_uri,
                Err(err) => {
                    log::warn!("could not resolve {short}: {err}");
                    short.clone()
                }
            },
            None => short.clone(),
        }
    }

    fn to_post(&self, record: PostRecord) -> Result<SocialPost, String> {
        let mut embedded_uris = Vec::with_capacity(record.urls.len());
        let mut shared_links = Vec::with_capacity(record.urls.len());
        for link in record.urls {
            let resolved = match link.resolved {
                Some(r) => CanonicalUri::parse(&r).map_err(|e| e.to_string())?,
                None => {
                    let short = CanonicalUri::parse(&link.short).map_err(|e| e.to_string())?;
                    self.resolve(&short)
                }
            };
            embedded_uris.push(resolved);
            shared_links.push(link.short);
        }
        let post_uri = record
            .post_uri
            .map(|u| CanonicalUri::parse(&u))
            .transpose()
            .map_err(|e| e.to_string())?;
        Ok(SocialPost {
            hashtags: extract_hashtags(&record.text),
            mentions: extract_mentions(&record.text),
            post_id: record.id,
            author: record.author,
            text: record.text,
            created_at: record.created_at,
            embedded_uris,
            shared_links,
            post_uri,
        })
    }
}

impl SocialProvider for FixtureSocialProvider {
    fn posts_mentioning(
        &self,
        target: &CanonicalUri,
        _limit: usize,
    ) -> Result<Vec<SocialPost>, SocialError> {
        Ok(self
            .load_all()?
            .into_iter()
            .filter(|p| p.embedded_uris.contains(target))
            .collect())
    }
}
