use std::fs;
use std::io::Write;
use std::path::Path;

use relink_core::replace::ReplacementReport;

use crate::app::{parse_uri, write_json, App};
use crate::cache::Kind;
use crate::error::{CliError, CliResult};
use crate::Format;

pub fn run(app: &App, raw: &str, dest: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    let target = parse_uri(raw)?;
    let cache = app.cache()?;
    let fetcher = app.fetcher()?;
    let providers = app.providers(&fetcher)?;
    let report = app
        .pipeline(&providers, &fetcher)
        .recommend(&target)
        .map_err(|e| CliError::Provider(e.to_string()))?;
    fetcher.ensure_offline_clean()?;

    let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Input(e.to_string()))? + "\n";
    fs::write(cache.path(Kind::Reports, &target, "json"), &json)
        .map_err(|e| CliError::Cache(e.to_string()))?;
    if let Some(dest) = dest {
        fs::write(dest, &json)?;
    }

    match app.format(Format::Json) {
        Format::Json => write_json(out, &report),
        Format::Text => write_text(out, &report),
        Format::Csv => {
            writeln!(out, "rank,uri,origin,similarity")?;
            for (i, c) in report.ranked.iter().enumerate() {
                writeln!(out, "{},{},{:?},{:.6}", i + 1, super::csv_field(c.uri.as_str()), c.origin, c.similarity)?;
            }
            Ok(())
        }
    }
}

fn write_text(out: &mut dyn Write, r: &ReplacementReport) -> CliResult<()> {
    writeln!(out, "target:     {}", r.target)?;
    writeln!(out, "posts:      {}", r.context.related_tweet_count)?;
    writeln!(out, "query:      {}", r.query)?;
    writeln!(
        out,
        "candidates: {} searched, {} co-occurring, {} dropped",
        r.candidates.search_results.len(),
        r.candidates.cooccurring.len(),
        r.dropped.len()
    )?;
    match &r.best {
        Some(best) => writeln!(out, "best:       {} (similarity {:.4})", best.uri, best.similarity)?,
        None => writeln!(out, "best:       none")?,
    }
    for (i, c) in r.ranked.iter().enumerate() {
        writeln!(out, "  {:>2}. {:.4}  {}", i + 1, c.similarity, c.uri)?;
    }
    Ok(())
}
