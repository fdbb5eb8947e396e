use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::social::TweetDocument;
use crate::textpipe::{stem, term_vector, tokenize, StopwordList};

/// Terms kept in a signature.
pub const SIGNATURE_LEN: usize = 5;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetSignature {
    pub terms: Vec<String>,
    pub frequencies: Vec<u32>,
}

impl TweetSignature {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Terms joined by single spaces, in signature order.
    pub fn query(&self) -> String {
        self.terms.join(" ")
    }
}

/// Which form of the signature terms goes into the search query.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryForm {
    /// The stems themselves.
    #[default]
    Stemmed,
    /// For each stem, its most frequent surface word in the document.
    Surface,
}

impl QueryForm {
    pub fn parse(key: &str) -> Option<Self> {
        match key {
            "stemmed" => Some(QueryForm::Stemmed),
            "surface" => Some(QueryForm::Surface),
            _ => None,
        }
    }
}

/// Top five terms of the document by count, ties broken lexicographically.
pub fn build_signature(doc: &TweetDocument, stopwords: &StopwordList) -> TweetSignature {
    let vector = term_vector(&doc.text(), stopwords);
    let mut counted: Vec<(&str, u32)> = vector.iter().collect();
    counted.sort_by(|(ta, ca), (tb, cb)| cb.cmp(ca).then_with(|| ta.cmp(tb)));
    counted.truncate(SIGNATURE_LEN);
    TweetSignature {
        terms: counted.iter().map(|(t, _)| t.to_string()).collect(),
        frequencies: counted.iter().map(|(_, c)| *c).collect(),
    }
}

/// Build the query string for `signature` in the requested form.
pub fn signature_query(
    signature: &TweetSignature,
    doc: &TweetDocument,
    stopwords: &StopwordList,
    form: QueryForm,
) -> String {
    match form {
        QueryForm::Stemmed => signature.query(),
        QueryForm::Surface => {
            let mut surfaces: HashMap<String, BTreeMap<String, u32>> = HashMap::new();
            for token in tokenize(&doc.text()) {
                if stopwords.contains(&token) {
                    continue;
                }
                *surfaces
                    .entry(stem(&token))
                    .or_default()
                    .entry(token)
                    .or_insert(0) += 1;
            }
            signature
                .terms
                .iter()
                .map(|term| {
                    surfaces
                        .get(term)
                        .and_then(|forms| {
                            // Most frequent form, smallest word on ties.
                            forms
                                .iter()
                                .max_by(|(wa, ca), (wb, cb)| ca.cmp(cb).then_with(|| wb.cmp(wa)))
                                .map(|(w, _)| w.clone())
                        })
                        .unwrap_or_else(|| term.clone())
                })
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
}
