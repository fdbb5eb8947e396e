//! The social link neighborhood of a shared URI: posts that link to it, their
//! cleaned text, and the aggregate context summary.

mod clean;
mod phrase;
mod provider;
mod summary;

pub use clean::{clean_post_text, extract_hashtags, extract_mentions};
pub use phrase::longest_common_phrase;
pub use provider::{FixtureSocialProvider, SocialProvider};
pub use summary::{summarize_context, ContextSummary};

use std::collections::HashMap;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::uri::CanonicalUri;

/// Posts retrieved per target, newest first.
pub const DEFAULT_CORPUS_LIMIT: usize = 500;

#[derive(Debug, Error)]
pub enum SocialError {
    #[error("social provider unavailable: {0}")]
    ProviderUnavailable(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SocialPost {
    pub post_id: String,
    pub author: String,
    pub text: String,
    pub created_at: DateTime<Utc>,
    /// Resolved targets of every link in the post.
    pub embedded_uris: Vec<CanonicalUri>,
    /// Links exactly as shared, usually short forms.
    pub shared_links: Vec<String>,
    pub hashtags: Vec<String>,
    pub mentions: Vec<String>,
    pub post_uri: Option<CanonicalUri>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SocialCorpus {
    pub target: CanonicalUri,
    pub posts: Vec<SocialPost>,
}

impl SocialCorpus {
    pub fn len(&self) -> usize {
        self.posts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.posts.is_empty()
    }
}

/// Cleaned post texts, one phrase per post, empties dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetDocument {
    pub target: Option<CanonicalUri>,
    pub phrases: Vec<String>,
}

impl TweetDocument {
    pub fn from_phrases<S: Into<String>>(phrases: impl IntoIterator<Item = S>) -> Self {
        TweetDocument {
            target: None,
            phrases: phrases
                .into_iter()
                .map(Into::into)
                .filter(|p: &String| !p.is_empty())
                .collect(),
        }
    }

    /// All phrases joined by single spaces.
    pub fn text(&self) -> String {
        self.phrases.join(" ")
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }
}

/// Up to `limit` newest posts linking to `target`.
pub fn fetch_corpus(
    provider: &dyn SocialProvider,
    target: &CanonicalUri,
    limit: usize,
) -> Result<SocialCorpus, SocialError> {
    let mut posts: Vec<SocialPost> = provider
        .posts_mentioning(target, limit)?
        .into_iter()
        .filter(|p| provider.attests_association() || p.embedded_uris.contains(target))
        .collect();
    posts.sort_by(|a, b| {
        b.created_at
            .cmp(&a.created_at)
            .then_with(|| a.post_id.cmp(&b.post_id))
    });
    posts.truncate(limit);
    Ok(SocialCorpus {
        target: target.clone(),
        posts,
    })
}

pub fn build_tweet_document(corpus: &SocialCorpus) -> TweetDocument {
    TweetDocument {
        target: Some(corpus.target.clone()),
        phrases: corpus
            .posts
            .iter()
            .map(|p| clean_post_text(&p.text))
            .filter(|p| !p.is_empty())
            .collect(),
    }
}

/// Other resolved links shared alongside the target, most frequent first
/// (counted once per post), ties in lexicographic order.
pub fn extract_cooccurring(corpus: &SocialCorpus, target: &CanonicalUri) -> Vec<CanonicalUri> {
    ranked_by_count(
        corpus.posts.iter().map(|p| {
            let mut uris: Vec<&CanonicalUri> =
                p.embedded_uris.iter().filter(|u| *u != target).collect();
            uris.sort();
            uris.dedup();
            uris
        }),
    )
    .into_iter()
    .map(|(uri, _)| uri.clone())
    .collect()
}

/// Count items (each group contributes its items once) and order by count
/// descending, then by the item itself.
pub(crate) fn ranked_by_count<T, G>(groups: impl IntoIterator<Item = G>) -> Vec<(T, usize)>
where
    T: Ord + Clone + std::hash::Hash,
    G: IntoIterator<Item = T>,
{
    let mut counts: HashMap<T, usize> = HashMap::new();
    for group in groups {
        for item in group {
            *counts.entry(item).or_insert(0) += 1;
        }
    }
    let mut ranked: Vec<(T, usize)> = counts.into_iter().collect();
    ranked.sort_by(|(a, ca), (b, cb)| cb.cmp(ca).then_with(|| a.cmp(b)));
    ranked
}
