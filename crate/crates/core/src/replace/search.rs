use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{ReplaceError, TweetSignature};
use crate::uri::CanonicalUri;

/// Results kept per query.
pub const SEARCH_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub uri: CanonicalUri,
    #[serde(default)]
    pub snippet: String,
}

/// A web search engine: query string in, ranked results out.
pub trait SearchProvider: Send + Sync {
    fn search(&self, query: &str, limit: usize) -> Result<Vec<SearchResult>, ReplaceError>;
}

/// Canned results from a JSON object mapping exact query strings to
/// `[{uri, snippet}]` lists. Unknown queries return no results. The file is
/// read on every query.
pub struct FixtureSearchProvider {
    path: PathBuf,
}

impl FixtureSearchProvider {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        FixtureSearchProvider { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

impl SearchProvider for FixtureSearchProvider {
    fn search(&self, query: &str, limit: usize) -> Result<Vec<SearchResult>, ReplaceError> {
        let unavailable =
            |reason: String| ReplaceError::ProviderUnavailable(format!("{}: {reason}", self.path.display()));
        let text = fs::read_to_string(&self.path).map_err(|e| unavailable(e.to_string()))?;
        let mut table: BTreeMap<String, Vec<SearchResult>> =
            serde_json::from_str(&text).map_err(|e| unavailable(e.to_string()))?;
        let mut results = table.remove(query).unwrap_or_default();
        results.truncate(limit);
        Ok(results)
    }
}

/// Run the signature as a query. At most [`SEARCH_LIMIT`] results, provider
/// order kept, repeats of a canonical URI dropped.
pub fn search_candidates(
    provider: &dyn SearchProvider,
    signature: &TweetSignature,
) -> Result<Vec<SearchResult>, ReplaceError> {
    if signature.is_empty() {
        return Err(ReplaceError::EmptySignature);
    }
    search_query(provider, &signature.query())
}

pub(crate) fn search_query(
    provider: &dyn SearchProvider,
    query: &str,
) -> Result<Vec<SearchResult>, ReplaceError> {
    let results = provider.search(query, SEARCH_LIMIT)?;
    Ok(dedup_results(results))
}

pub(crate) fn dedup_results(results: Vec<SearchResult>) -> Vec<SearchResult> {
    let mut seen = HashSet::new();
    results
        .into_iter()
        .filter(|r| seen.insert(r.uri.clone()))
        .take(SEARCH_LIMIT)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(terms: &[&str]) -> TweetSignature {
        TweetSignature {
            terms: terms.iter().map(|t| t.to_string()).collect(),
            frequencies: vec![1; terms.len()],
        }
    }

    #[test]
    fn fixture_lookup() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("search.json");
        let many: Vec<String> = (0..12)
            .map(|i| format!(r#"{{"uri":"http://r{i}.test/","snippet":"s{i}"}}"#))
            .collect();
        fs::write(
            &path,
            format!(
                r#"{{"egypt lost": [{}], "cairo": [{{"uri":"http://a.test/"}},{{"uri":"http://a.test/#x"}},{{"uri":"http://b.test/"}}]}}"#,
                many.join(",")
            ),
        )
        .unwrap();
        let provider = FixtureSearchProvider::new(&path);

        let results = search_candidates(&provider, &sig(&["egypt", "lost"])).unwrap();
        assert_eq!(results.len(), 10);
        assert_eq!(results[0].uri.as_str(), "http://r0.test/");
        assert_eq!(results[9].snippet, "s9");

        let deduped = search_candidates(&provider, &sig(&["cairo"])).unwrap();
        assert_eq!(deduped.len(), 2);

        assert!(search_candidates(&provider, &sig(&["unknown"])).unwrap().is_empty());
        assert!(matches!(
            search_candidates(&provider, &sig(&[])),
            Err(ReplaceError::EmptySignature)
        ));
    }

    #[test]
    fn missing_file() {
        let provider = FixtureSearchProvider::new("/nonexistent/search.json");
        assert!(matches!(
            provider.search("x", 10),
            Err(ReplaceError::ProviderUnavailable(_))
        ));
    }
}
