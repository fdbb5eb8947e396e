//! Replacement candidates for a missing page, found through the posts that
//! shared it.

mod search;
mod signature;

pub use search::{search_candidates, FixtureSearchProvider, SearchProvider, SearchResult, SEARCH_LIMIT};
pub use signature::{build_signature, signature_query, QueryForm, TweetSignature, SIGNATURE_LEN};

use std::cmp::Ordering;
use std::collections::HashSet;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clock::Clock;
use crate::fetch::{follow_redirects, Fetcher};
use crate::pool::parallel_map;
use crate::social::{
    build_tweet_document, extract_cooccurring, fetch_corpus, summarize_context, ContextSummary,
    SocialError, SocialProvider, TweetDocument, DEFAULT_CORPUS_LIMIT,
};
use crate::textpipe::{cosine, term_vector, ExtractorKind, StopwordList, TermVector};
use crate::uri::CanonicalUri;
use crate::SCHEMA_VERSION;

#[derive(Debug, Error)]
pub enum ReplaceError {
    #[error("search provider unavailable: {0}")]
    ProviderUnavailable(String),
    #[error(transparent)]
    Social(#[from] SocialError),
    #[error("signature is empty, nothing to search for")]
    EmptySignature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Search,
    Cooccurring,
}

/// Search results and co-occurring links for one target.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub search_results: Vec<SearchResult>,
    pub cooccurring: Vec<CanonicalUri>,
}

impl CandidateSet {
    /// Caps search results at [`SEARCH_LIMIT`] and drops repeats within
    /// each list.
    pub fn new(search_results: Vec<SearchResult>, cooccurring: Vec<CanonicalUri>) -> Self {
        let mut seen = HashSet::new();
        CandidateSet {
            search_results: search::dedup_results(search_results),
            cooccurring: cooccurring.into_iter().filter(|u| seen.insert(u.clone())).collect(),
        }
    }

    /// Union of both lists; a URI in both counts as a search result.
    pub fn entries(&self) -> Vec<(CanonicalUri, Origin)> {
        let mut seen = HashSet::new();
        self.search_results
            .iter()
            .map(|r| (r.uri.clone(), Origin::Search))
            .chain(self.cooccurring.iter().map(|u| (u.clone(), Origin::Cooccurring)))
            .filter(|(u, _)| seen.insert(u.clone()))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.search_results.is_empty() && self.cooccurring.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedCandidate {
    pub uri: CanonicalUri,
    pub similarity: f64,
    pub origin: Origin,
    pub extracted_text_len: usize,
}

/// A candidate that could not be scored, with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DroppedCandidate {
    pub uri: CanonicalUri,
    pub origin: Origin,
    pub reason: String,
}

/// A fetched candidate's main text as a term vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FetchedCandidate {
    pub uri: CanonicalUri,
    pub origin: Origin,
    pub vector: TermVector,
    pub text_len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FetchOptions {
    pub extractor: ExtractorKind,
    pub max_redirects: usize,
    pub max_in_flight: usize,
}

impl Default for FetchOptions {
    fn default() -> Self {
        FetchOptions {
            extractor: ExtractorKind::Density,
            max_redirects: 10,
            max_in_flight: 8,
        }
    }
}

/// Fetch a page and return its main text, or why that failed.
pub fn fetch_main_text(
    fetcher: &dyn Fetcher,
    uri: &CanonicalUri,
    opts: &FetchOptions,
) -> Result<String, String> {
    let followed = follow_redirects(fetcher, uri, opts.max_redirects).map_err(|e| e.to_string())?;
    if followed.exceeded {
        return Err(format!("more than {} redirects", opts.max_redirects));
    }
    if followed.response.status != 200 {
        return Err(format!("status {}", followed.response.status));
    }
    Ok(opts.extractor.build().extract(&followed.response.body))
}

/// Fetch every candidate concurrently and vectorize its main text.
/// Unreachable pages and pages without content terms are dropped.
pub fn fetch_candidates(
    cands: &CandidateSet,
    fetcher: &dyn Fetcher,
    stopwords: &StopwordList,
    opts: &FetchOptions,
) -> (Vec<FetchedCandidate>, Vec<DroppedCandidate>) {
    let entries = cands.entries();
    let outcomes = parallel_map(&entries, opts.max_in_flight, |(uri, origin)| {
        let text = fetch_main_text(fetcher, uri, opts)?;
        let vector = term_vector(&text, stopwords);
        if vector.is_empty() {
            return Err("no content terms in extracted text".to_string());
        }
        Ok(FetchedCandidate {
            uri: uri.clone(),
            origin: *origin,
            vector,
            text_len: text.chars().count(),
        })
    });
    let mut fetched = Vec::new();
    let mut dropped = Vec::new();
    for ((uri, origin), outcome) in entries.into_iter().zip(outcomes) {
        match outcome {
            Ok(c) => fetched.push(c),
            Err(reason) => {
                log::info!("dropping candidate {uri}: {reason}");
                dropped.push(DroppedCandidate { uri, origin, reason });
            }
        }
    }
    (fetched, dropped)
}

/// Order by similarity descending, then search before co-occurring, then URI.
pub fn candidate_order(a: &RankedCandidate, b: &RankedCandidate) -> Ordering {
    b.similarity
        .total_cmp(&a.similarity)
        .then_with(|| a.origin.cmp(&b.origin))
        .then_with(|| a.uri.cmp(&b.uri))
}

/// Score fetched candidates against a reference vector and sort them.
pub fn rank_fetched(reference: &TermVector, fetched: &[FetchedCandidate]) -> Vec<RankedCandidate> {
    let mut ranked: Vec<RankedCandidate> = fetched
        .iter()
        .map(|c| RankedCandidate {
            uri: c.uri.clone(),
            similarity: cosine(reference, &c.vector),
            origin: c.origin,
            extracted_text_len: c.text_len,
        })
        .collect();
    ranked.sort_by(candidate_order);
    ranked
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Ranking {
    pub ranked: Vec<RankedCandidate>,
    pub dropped: Vec<DroppedCandidate>,
}

/// Fetch, extract and score every candidate against the Tweet Document.
pub fn rank_candidates(
    doc: &TweetDocument,
    cands: &CandidateSet,
    fetcher: &dyn Fetcher,
    stopwords: &StopwordList,
    opts: &FetchOptions,
) -> Ranking {
    let reference = term_vector(&doc.text(), stopwords);
    let (fetched, dropped) = fetch_candidates(cands, fetcher, stopwords, opts);
    Ranking {
        ranked: rank_fetched(&reference, &fetched),
        dropped,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecommendConfig {
    pub corpus_limit: usize,
    pub query_form: QueryForm,
    pub fetch: FetchOptions,
}

impl Default for RecommendConfig {
    fn default() -> Self {
        RecommendConfig {
            corpus_limit: DEFAULT_CORPUS_LIMIT,
            query_form: QueryForm::Stemmed,
            fetch: FetchOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplacementReport {
    pub schema_version: u32,
    pub generated_at: DateTime<Utc>,
    pub target: CanonicalUri,
    pub context: ContextSummary,
    pub signature: TweetSignature,
    pub query: String,
    pub candidates: CandidateSet,
    pub ranked: Vec<RankedCandidate>,
    pub dropped: Vec<DroppedCandidate>,
    pub best: Option<RankedCandidate>,
}

/// Everything the replacement pipeline talks to.
pub struct Pipeline<'a> {
    pub social: &'a dyn SocialProvider,
    pub search: &'a dyn SearchProvider,
    pub fetcher: &'a dyn Fetcher,
    pub stopwords: &'a StopwordList,
    pub clock: &'a dyn Clock,
    pub config: RecommendConfig,
}

/// Intermediate products of the pipeline, before ranking.
#[derive(Debug, Clone)]
pub struct Gathered {
    pub context: ContextSummary,
    pub doc: TweetDocument,
    pub signature: TweetSignature,
    pub query: String,
    pub candidates: CandidateSet,
    pub corpus_len: usize,
}

impl Pipeline<'_> {
    /// Corpus, context, signature and candidates for `target`.
    pub fn gather(&self, target: &CanonicalUri) -> Result<Gathered, ReplaceError> {
        let corpus = fetch_corpus(self.social, target, self.config.corpus_limit)?;
        let context = summarize_context(&corpus);
        let doc = build_tweet_document(&corpus);
        let signature = build_signature(&doc, self.stopwords);
        let (query, candidates) = if signature.is_empty() {
            (String::new(), CandidateSet::default())
        } else {
            let query = signature_query(&signature, &doc, self.stopwords, self.config.query_form);
            let results = search::search_query(self.search, &query)?;
            let cooccurring = extract_cooccurring(&corpus, target);
            (query, CandidateSet::new(results, cooccurring))
        };
        Ok(Gathered {
            context,
            doc,
            signature,
            query,
            candidates,
            corpus_len: corpus.len(),
        })
    }

    pub fn recommend(&self, target: &CanonicalUri) -> Result<ReplacementReport, ReplaceError> {
        let g = self.gather(target)?;
        let ranking = rank_candidates(
            &g.doc,
            &g.candidates,
            self.fetcher,
            self.stopwords,
            &self.config.fetch,
        );
        Ok(ReplacementReport {
            schema_version: SCHEMA_VERSION,
            generated_at: self.clock.now(),
            target: target.clone(),
            context: g.context,
            signature: g.signature,
            query: g.query,
            candidates: g.candidates,
            best: ranking.ranked.first().cloned(),
            ranked: ranking.ranked,
            dropped: ranking.dropped,
        })
    }
}
