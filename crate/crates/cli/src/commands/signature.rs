use std::io::Write;

use relink_core::replace::{build_signature, signature_query};
use relink_core::social::build_tweet_document;
use relink_core::uri::CanonicalUri;
use serde::Serialize;

use super::mine::corpus;
use crate::app::{write_json, App};
use crate::error::CliResult;
use crate::Format;

#[derive(Debug, Serialize)]
struct Term {
    term: String,
    frequency: usize,
}

#[derive(Debug, Serialize)]
struct SignatureOutput {
    schema_version: u32,
    target: CanonicalUri,
    posts: usize,
    terms: Vec<Term>,
    query: String,
}

pub fn run(app: &App, raw: &str, out: &mut dyn Write) -> CliResult<()> {
    let (target, corpus) = corpus(app, raw)?;
    let doc = build_tweet_document(&corpus);
    let stopwords = &app.config.stopwords;
    let sig = build_signature(&doc, stopwords);
    let query = if sig.is_empty() {
        String::new()
    } else {
        signature_query(&sig, &doc, stopwords, app.config.recommend.query_form)
    };
    let terms: Vec<Term> = sig
        .terms
        .iter()
        .zip(&sig.frequencies)
        .map(|(t, &f)| Term {
            term: t.clone(),
            frequency: f as usize,
        })
        .collect();
    match app.format(Format::Text) {
        Format::Json => write_json(
            out,
            &SignatureOutput {
                schema_version: relink_core::SCHEMA_VERSION,
                target,
                posts: corpus.len(),
                terms,
                query,
            },
        ),
        Format::Csv => {
            writeln!(out, "term,frequency")?;
            for t in &terms {
                writeln!(out, "{},{}", t.term, t.frequency)?;
            }
            Ok(())
        }
        Format::Text => {
            for t in &terms {
                writeln!(out, "{:<16} {}", t.term, t.frequency)?;
            }
            writeln!(out, "query: {query}")?;
            Ok(())
        }
    }
}
