use std::fs;
use std::io::Write;
use std::path::Path;

use chrono::{DateTime, Utc};
use relink_core::archive::{parse_timemap, serialize_timemap, timemap_delta, TimeMap, TimeMapDelta, TimeMapSource};
use relink_core::uri::CanonicalUri;
use serde::Serialize;

use crate::app::{parse_uri, write_json, App};
use crate::cache::Kind;
use crate::error::{CliError, CliResult};
use crate::Format;

#[derive(Debug, Serialize)]
struct TimeMapReport {
    schema_version: u32,
    original: CanonicalUri,
    retrieved_at: DateTime<Utc>,
    memento_count: usize,
    first: Option<DateTime<Utc>>,
    last: Option<DateTime<Utc>>,
    archives: Vec<String>,
    previous_retrieved_at: Option<DateTime<Utc>>,
    delta: Option<TimeMapDelta>,
}

pub fn run(app: &App, raw: &str, from: Option<&Path>, raw_out: bool, out: &mut dyn Write) -> CliResult<()> {
    let target = parse_uri(raw)?;
    let cache = app.cache()?;
    let current = match from {
        Some(path) => {
            let body = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            parse_timemap(&body, &target, app.clock().now())
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
        }
        None => {
            let fetcher = app.fetcher()?;
            let fetched = TimeMapSource::new(&app.config.timemap_endpoint).fetch(fetcher.as_ref(), &target, app.clock());
            fetcher.ensure_offline_clean()?;
            fetched.map_err(|e| CliError::Provider(e.to_string()))?
        }
    };
    let previous: Option<TimeMap> = cache.read_json(Kind::Timemaps, &target);
    let delta = previous
        .as_ref()
        .map(|p| timemap_delta(p, &current))
        .transpose()
        .map_err(|e| CliError::Cache(e.to_string()))?;
    cache.write_json(Kind::Timemaps, &target, &current)?;

    if raw_out {
        write!(out, "{}", serialize_timemap(&current))?;
        return Ok(());
    }
    let mut archives: Vec<String> = current.mementos.iter().map(|m| m.archive_host.clone()).collect();
    archives.sort();
    archives.dedup();
    let report = TimeMapReport {
        schema_version: relink_core::SCHEMA_VERSION,
        original: target,
        retrieved_at: current.retrieved_at,
        memento_count: current.memento_count(),
        first: current.mementos.first().map(|m| m.datetime),
        last: current.mementos.last().map(|m| m.datetime),
        archives,
        previous_retrieved_at: previous.map(|p| p.retrieved_at),
        delta,
    };
    match app.format(Format::Text) {
        Format::Json => write_json(out, &report),
        Format::Csv => {
            writeln!(out, "original,memento_count,previous_count,delta")?;
            let (prev, kind) = match &report.delta {
                Some(d) => (d.old_count.to_string(), format!("{:?}", d.kind)),
                None => (String::new(), String::new()),
            };
            writeln!(out, "{},{},{prev},{kind}", super::csv_field(report.original.as_str()), report.memento_count)?;
            Ok(())
        }
        Format::Text => {
            writeln!(out, "{}: {} mementos", report.original, report.memento_count)?;
            if let (Some(first), Some(last)) = (report.first, report.last) {
                writeln!(out, "  span: {} .. {}", first.to_rfc3339(), last.to_rfc3339())?;
                writeln!(out, "  archives: {}", report.archives.join(", "))?;
            }
            match &report.delta {
                Some(d) => writeln!(out, "  since last run: {} -> {} ({:?})", d.old_count, d.new_count, d.kind)?,
                None => writeln!(out, "  no previous snapshot in cache")?,
            }
            Ok(())
        }
    }
}
