//! Memento TimeMaps in `application/link-format`.

use std::collections::HashMap;
use std::fmt::Write as _;

use chrono::{DateTime, NaiveDateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clock::Clock;
use crate::fetch::{follow_redirects, FetchError, Fetcher};
use crate::uri::CanonicalUri;

const RFC1123: &str = "%a, %d %b %Y %H:%M:%S GMT";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArchiveError {
    #[error("line {line}: {reason}")]
    ParseError { line: usize, reason: String },
    #[error("timemaps describe different originals: {old} vs {new}")]
    MismatchedOriginal { old: String, new: String },
    #[error("bad timemap endpoint: {0}")]
    Endpoint(String),
    #[error(transparent)]
    Fetch(#[from] FetchError),
    #[error("aggregator answered {status} for {uri}")]
    Aggregator { uri: String, status: u16 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Memento {
    pub memento_uri: CanonicalUri,
    pub datetime: DateTime<Utc>,
    pub archive_host: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeMap {
    pub original: CanonicalUri,
    /// Ascending by datetime, unique by memento URI.
    pub mementos: Vec<Memento>,
    pub retrieved_at: DateTime<Utc>,
    /// Memento entries skipped for a missing or non-RFC 1123 datetime.
    #[serde(default)]
    pub warnings: usize,
}

impl TimeMap {
    pub fn memento_count(&self) -> usize {
        self.mementos.len()
    }
}

pub fn parse_http_date(s: &str) -> Option<DateTime<Utc>> {
    NaiveDateTime::parse_from_str(s.trim(), RFC1123)
        .ok()
        .map(|naive| naive.and_utc())
}

pub fn format_http_date(dt: &DateTime<Utc>) -> String {
    dt.format(RFC1123).to_string()
}

#[derive(Debug)]
struct LinkValue {
    target: String,
    params: Vec<(String, String)>,
    line: usize,
}

impl LinkValue {
    fn param(&self, name: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }

    fn rels(&self) -> impl Iterator<Item = &str> {
        self.param("rel").unwrap_or_default().split_whitespace()
    }
}

/// Split a link-format document into link-values.
fn parse_links(body: &str) -> Result<Vec<LinkValue>, ArchiveError> {
    let chars: Vec<char> = body.chars().collect();
    let mut i = 0;
    let mut line = 1;
    let mut links = Vec::new();

    let skip_ws = |i: &mut usize, line: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            if chars[*i] == '\n' {
                *line += 1;
            }
            *i += 1;
        }
    };
    let err = |line: usize, reason: &str| ArchiveError::ParseError {
        line,
        reason: reason.to_string(),
    };

    loop {
        skip_ws(&mut i, &mut line);
        if i >= chars.len() {
            break;
        }
        let start_line = line;
        if chars[i] != '<' {
            return Err(err(line, "expected '<' to open a link-value"));
        }
        i += 1;
        let target_start = i;
        while i < chars.len() && chars[i] != '>' {
            if chars[i] == '\n' {
                return Err(err(line, "unterminated URI reference"));
            }
            i += 1;
        }
        if i >= chars.len() {
            return Err(err(line, "unterminated URI reference"));
        }
        let target: String = chars[target_start..i].iter().collect();
        i += 1;

        let mut params = Vec::new();
        loop {
            skip_ws(&mut i, &mut line);
            if i >= chars.len() {
                break;
            }
            match chars[i] {
                ',' => {
                    i += 1;
                    break;
                }
                ';' => {
                    i += 1;
                    skip_ws(&mut i, &mut line);
                    let name_start = i;
                    while i < chars.len()
                        && !matches!(chars[i], '=' | ';' | ',')
                        && !chars[i].is_whitespace()
                    {
                        i += 1;
                    }
                    let name: String = chars[name_start..i].iter().collect::<String>().to_ascii_lowercase();
                    if name.is_empty() {
                        return Err(err(line, "empty parameter name"));
                    }
                    skip_ws(&mut i, &mut line);
                    let value = if i < chars.len() && chars[i] == '=' {
                        i += 1;
                        skip_ws(&mut i, &mut line);
                        if i < chars.len() && chars[i] == '"' {
                            i += 1;
                            let v_start = i;
                            while i < chars.len() && chars[i] != '"' {
                                if chars[i] == '\n' {
                                    line += 1;
                                }
                                i += 1;
                            }
                            if i >= chars.len() {
                                return Err(err(line, "unterminated quoted string"));
                            }
                            let v: String = chars[v_start..i].iter().collect();
                            i += 1;
                            v
                        } else {
                            let v_start = i;
                            while i < chars.len()
                                && !matches!(chars[i], ';' | ',')
                                && !chars[i].is_whitespace()
                            {
                                i += 1;
                            }
                            chars[v_start..i].iter().collect()
                        }
                    } else {
                        String::new()
                    };
                    params.push((name, value));
                }
                _ => return Err(err(line, "expected ';' or ',' after link-value")),
            }
        }
        links.push(LinkValue {
            target,
            params,
            line: start_line,
        });
    }
    Ok(links)
}

/// Parse a link-format TimeMap. Links whose `rel` contains `memento` become
/// mementos; `original`, `timemap`, `timegate` and `self` links are ignored.
pub fn parse_timemap(
    body: &str,
    original: &CanonicalUri,
    retrieved_at: DateTime<Utc>,
) -> Result<TimeMap, ArchiveError> {
    let mut by_uri: HashMap<CanonicalUri, Memento> = HashMap::new();
    let mut warnings = 0;
    for link in parse_links(body)? {
        if !link.rels().any(|r| r.eq_ignore_ascii_case("memento")) {
            continue;
        }
        let memento_uri =
            CanonicalUri::parse(&link.target).map_err(|e| ArchiveError::ParseError {
                line: link.line,
                reason: e.to_string(),
            })?;
        let Some(datetime) = link.param("datetime").and_then(parse_http_date) else {
            warnings += 1;
            continue;
        };
        let archive_host = memento_uri.host().to_string();
        let memento = Memento {
            memento_uri: memento_uri.clone(),
            datetime,
            archive_host,
        };
        by_uri
            .entry(memento_uri)
            .and_modify(|existing| {
                if memento.datetime < existing.datetime {
                    *existing = memento.clone();
                }
            })
            .or_insert(memento);
    }
    let mut mementos: Vec<Memento> = by_uri.into_values().collect();
    mementos.sort_by(|a, b| {
        a.datetime
            .cmp(&b.datetime)
            .then_with(|| a.memento_uri.cmp(&b.memento_uri))
    });
    Ok(TimeMap {
        original: original.clone(),
        mementos,
        retrieved_at,
        warnings,
    })
}

/// Render as link-format with `first`/`last` rel markers.
pub fn serialize_timemap(tm: &TimeMap) -> String {
    let mut out = String::new();
    let _ = write!(out, "<{}>; rel=\"original\"", tm.original);
    let last = tm.mementos.len().saturating_sub(1);
    for (i, m) in tm.mementos.iter().enumerate() {
        let rel = match (i == 0, i == last) {
            (true, true) => "first last memento",
            (true, false) => "first memento",
            (false, true) => "last memento",
            (false, false) => "memento",
        };
        let _ = write!(
            out,
            ",\n<{}>; rel=\"{}\"; datetime=\"{}\"",
            m.memento_uri,
            rel,
            format_http_date(&m.datetime)
        );
    }
    out.push('\n');
    out
}

pub fn is_archived(tm: &TimeMap) -> bool {
    tm.memento_count() >= 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaKind {
    Grew,
    Stable,
    Shrank,
    OneToZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeMapDelta {
    pub old_count: usize,
    pub new_count: usize,
    pub kind: DeltaKind,
}

impl TimeMapDelta {
    pub fn from_counts(old_count: usize, new_count: usize) -> Self {
        let kind = match (old_count, new_count) {
            (1, 0) => DeltaKind::OneToZero,
            (o, n) if n < o => DeltaKind::Shrank,
            (o, n) if n == o => DeltaKind::Stable,
            _ => DeltaKind::Grew,
        };
        TimeMapDelta {
            old_count,
            new_count,
            kind,
        }
    }
}

pub fn timemap_delta(old: &TimeMap, new: &TimeMap) -> Result<TimeMapDelta, ArchiveError> {
    if old.original != new.original {
        return Err(ArchiveError::MismatchedOriginal {
            old: old.original.to_string(),
            new: new.original.to_string(),
        });
    }
    Ok(TimeMapDelta::from_counts(
        old.memento_count(),
        new.memento_count(),
    ))
}

/// Percentage of deltas of the given kind, 0–100.
pub fn kind_percentage(deltas: &[TimeMapDelta], kind: DeltaKind) -> Option<f64> {
    if deltas.is_empty() {
        return None;
    }
    let hits = deltas.iter().filter(|d| d.kind == kind).count();
    Some(100.0 * hits as f64 / deltas.len() as f64)
}

/// Aggregator endpoint, expanded as `{endpoint}/timemap/link/{uri}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeMapSource {
    endpoint: String,
}

impl TimeMapSource {
    pub fn new(endpoint: impl Into<String>) -> Self {
        TimeMapSource {
            endpoint: endpoint.into().trim_end_matches('/').to_string(),
        }
    }

    pub fn timemap_uri(&self, original: &CanonicalUri) -> Result<CanonicalUri, ArchiveError> {
        let raw = format!("{}/timemap/link/{}", self.endpoint, original);
        CanonicalUri::parse(&raw).map_err(|e| ArchiveError::Endpoint(e.to_string()))
    }

    /// Fetch and parse. A 404 from the aggregator means no mementos.
    pub fn fetch(
        &self,
        fetcher: &dyn Fetcher,
        original: &CanonicalUri,
        clock: &dyn Clock,
    ) -> Result<TimeMap, ArchiveError> {
        let uri = self.timemap_uri(original)?;
        let followed = follow_redirects(fetcher, &uri, 5)?;
        let retrieved_at = clock.now();
        match followed.response.status {
            200 => parse_timemap(&followed.response.body, original, retrieved_at),
            404 => Ok(TimeMap {
                original: original.clone(),
                mementos: Vec::new(),
                retrieved_at,
                warnings: 0,
            }),
            status => Err(ArchiveError::Aggregator {
                uri: uri.to_string(),
                status,
            }),
        }
    }
}
