use std::io::Write;

use relink_core::archive::{is_archived, TimeMapSource};
use relink_core::probe::Prober;
use relink_core::status::{classify_status, LivenessVerdict};
use relink_core::uri::CanonicalUri;
use serde::Serialize;

use super::csv_field;
use crate::app::{parse_uri, App};
use crate::cache::Kind;
use crate::error::{CliError, CliResult};
use crate::Format;

#[derive(Debug, Serialize)]
struct Row {
    schema_version: u32,
    uri: CanonicalUri,
    liveness: LivenessVerdict,
    mementos: Option<usize>,
    /// Replicated, Vulnerable, Endangered, Unrecoverable or Uncertain.
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

pub fn run(app: &App, raw: &[String], out: &mut dyn Write) -> CliResult<()> {
    let uris = raw.iter().map(|r| parse_uri(r)).collect::<CliResult<Vec<_>>>()?;
    let cache = app.cache()?;
    let fetcher = app.fetcher()?;
    let mut prober = Prober::new(fetcher.as_ref(), app.config.policy.clone(), app.clock())
        .map_err(|e| CliError::Config(e.to_string()))?;
    if let Some(seed) = app.seed() {
        prober = prober.with_seed(seed);
    }
    let source = TimeMapSource::new(&app.config.timemap_endpoint);

    let checked = prober.check_many(&uris);
    let mut rows = Vec::with_capacity(uris.len());
    for (uri, (results, verdict)) in uris.iter().zip(&checked) {
        let (archived, mementos, note) = match source.fetch(fetcher.as_ref(), uri, app.clock()) {
            Ok(tm) => {
                cache.write_json(Kind::Timemaps, uri, &tm)?;
                (Some(is_archived(&tm)), Some(tm.memento_count()), None)
            }
            Err(e) => (None, None, Some(format!("timemap: {e}"))),
        };
        let status = match (verdict.is_live(), archived) {
            (Some(live), Some(archived)) => classify_status(live, archived).to_string(),
            _ => "Uncertain".to_string(),
        };
        let note = note.or_else(|| results.iter().rev().find_map(|r| r.note.clone()));
        cache.append_jsonl(Kind::Probes, uri, results)?;
        rows.push(Row {
            schema_version: relink_core::SCHEMA_VERSION,
            uri: uri.clone(),
            liveness: *verdict,
            mementos,
            status,
            note,
        });
    }
    fetcher.ensure_offline_clean()?;

    match app.format(Format::Text) {
        Format::Json => {
            for row in &rows {
                let line = serde_json::to_string(row).map_err(|e| CliError::Input(e.to_string()))?;
                writeln!(out, "{line}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "uri,liveness,mementos,status")?;
            for row in &rows {
                writeln!(
                    out,
                    "{},{},{},{}",
                    csv_field(row.uri.as_str()),
                    csv_field(&row.liveness.to_string()),
                    row.mementos.map(|n| n.to_string()).unwrap_or_default(),
                    row.status
                )?;
            }
        }
        Format::Text => {
            let width = rows.iter().map(|r| r.uri.as_str().len()).max().unwrap_or(3).max(3);
            writeln!(out, "{:<width$}  {:<30}  {:>8}  STATUS", "URI", "LIVENESS", "MEMENTOS")?;
            for row in &rows {
                let mementos = row.mementos.map(|n| n.to_string()).unwrap_or_else(|| "?".into());
                writeln!(
                    out,
                    "{:<width$}  {:<30}  {:>8}  {}",
                    row.uri.as_str(),
                    row.liveness.to_string(),
                    mementos,
                    row.status
                )?;
            }
        }
    }
    Ok(())
}
