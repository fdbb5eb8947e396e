use std::io::Write;

use relink_core::social::{fetch_corpus, summarize_context, SocialCorpus};
use relink_core::uri::CanonicalUri;

use crate::app::{parse_uri, versioned, write_json, App};
use crate::cache::Kind;
use crate::error::{CliError, CliResult};
use crate::Format;

/// Gather the posts about `raw` and keep a copy in the cache.
pub(crate) fn corpus(app: &App, raw: &str) -> CliResult<(CanonicalUri, SocialCorpus)> {
    let target = parse_uri(raw)?;
    let cache = app.cache()?;
    let fetcher = app.fetcher()?;
    let providers = app.providers(&fetcher)?;
    let corpus = fetch_corpus(&providers.social, &target, app.config.recommend.corpus_limit)
        .map_err(|e| CliError::Provider(e.to_string()))?;
    fetcher.ensure_offline_clean()?;
    cache.write_json(Kind::Corpora, &target, &corpus.posts)?;
    Ok((target, corpus))
}

pub fn run(app: &App, raw: &str, out: &mut dyn Write) -> CliResult<()> {
    let (_, corpus) = corpus(app, raw)?;
    let summary = versioned(&summarize_context(&corpus));
    match app.format(Format::Json) {
        Format::Json => write_json(out, &summary),
        Format::Text | Format::Csv => {
            let serde_json::Value::Object(map) = summary else {
                unreachable!("a summary serializes to an object");
            };
            for (key, value) in map {
                let shown = match value {
                    serde_json::Value::String(s) => s,
                    serde_json::Value::Array(items) => items
                        .iter()
                        .map(|v| v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string()))
                        .collect::<Vec<_>>()
                        .join(", "),
                    other => other.to_string(),
                };
                writeln!(out, "{key}: {shown}")?;
            }
            Ok(())
        }
    }
}
