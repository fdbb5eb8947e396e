use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{stem, tokenize, StopwordList};

/// Term-frequency vector keyed by stemmed term. Counts are always positive.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TermVector(BTreeMap<String, u32>);

impl TermVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: impl Into<String>, count: u32) {
        let term = term.into();
        if count == 0 || term.is_empty() {
            return;
        }
        *self.0.entry(term).or_insert(0) += count;
    }

    pub fn get(&self, term: &str) -> u32 {
        self.0.get(term).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.values().map(|&c| u64::from(c)).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn norm(&self) -> f64 {
        self.0
            .values()
            .map(|&c| f64::from(c) * f64::from(c))
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, factor: u32) -> TermVector {
        let mut out = TermVector::new();
        for (term, count) in self.iter() {
            out.add(term, count * factor);
        }
        out
    }
}

impl<S: Into<String>> FromIterator<(S, u32)> for TermVector {
    fn from_iter<I: IntoIterator<Item = (S, u32)>>(iter: I) -> Self {
        let mut v = TermVector::new();
        for (term, count) in iter {
            v.add(term, count);
        }
        v
    }
}

/// tokenize, drop stopwords, stem, count. A stem that collides with a
/// stopword (`ins` stems to `in`) is dropped as well.
pub fn term_vector(text: &str, stopwords: &StopwordList) -> TermVector {
    let mut v = TermVector::new();
    for token in tokenize(text) {
        if stopwords.contains(&token) {
            continue;
        }
        let stemmed = stem(&token);
        if stemmed.is_empty() || stopwords.contains(&stemmed) {
            continue;
        }
        v.add(stemmed, 1);
    }
    v
}

pub fn cosine(a: &TermVector, b: &TermVector) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let dot: f64 = small
        .iter()
        .map(|(term, count)| f64::from(count) * f64::from(large.get(term)))
        .sum();
    (dot / (a.norm() * b.norm())).clamp(0.0, 1.0)
}

/// Real-valued term weights, produced by [`IdfTable::weigh`].
pub type WeightedVector = BTreeMap<String, f64>;

pub fn cosine_weighted(a: &WeightedVector, b: &WeightedVector) -> f64 {
    let norm = |v: &WeightedVector| v.values().map(|w| w * w).sum::<f64>().sqrt();
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let dot: f64 = a
        .iter()
        .filter_map(|(term, wa)| b.get(term).map(|wb| wa * wb))
        .sum();
    (dot / (na * nb)).clamp(0.0, 1.0)
}

/// Smoothed inverse document frequencies over a fixed document set.
#[derive(Debug, Clone, Default)]
pub struct IdfTable {
    docs: usize,
    df: BTreeMap<String, usize>,
}

impl IdfTable {
    pub fn from_documents<'a>(docs: impl IntoIterator<Item = &'a TermVector>) -> Self {
        let mut table = IdfTable::default();
        for doc in docs {
            table.docs += 1;
            for term in doc.terms() {
                *table.df.entry(term.to_string()).or_insert(0) += 1;
            }
        }
        table
    }

    pub fn idf(&self, term: &str) -> f64 {
        let df = self.df.get(term).copied().unwrap_or(0) as f64;
        ((1.0 + self.docs as f64) / (1.0 + df)).ln() + 1.0
    }

    pub fn weigh(&self, v: &TermVector) -> WeightedVector {
        v.iter()
            .map(|(term, count)| (term.to_string(), f64::from(count) * self.idf(term)))
            .collect()
    }
}
