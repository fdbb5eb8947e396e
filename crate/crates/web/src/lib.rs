//! WebAssembly front end for the demo page in `www/`.
//!
//! The plain functions carry the logic and are tested natively; the
//! `js_*` exports wrap them for the browser.

use std::collections::BTreeMap;

use relink_core::decay::{predict, DecayModel, ModelLabel};
use relink_core::replace::build_signature;
use relink_core::social::{clean_post_text, TweetDocument};
use relink_core::textpipe::{cosine, extract_main_text, term_vector, StopwordList};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Most points a curve request may ask for.
pub const MAX_CURVE_POINTS: usize = 5_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelInfo {
    pub label: &'static str,
    pub description: &'static str,
    pub slope: f64,
    pub intercept: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignatureView {
    pub terms: Vec<String>,
    pub frequencies: Vec<u32>,
    pub query: String,
    pub phrases: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityView {
    pub similarity: f64,
    /// Stems present in both texts with their counts (posts, page).
    pub shared: BTreeMap<String, (u32, u32)>,
    pub page_terms: usize,
}

fn model(label: &str) -> Result<DecayModel, String> {
    let label: ModelLabel = label.parse().map_err(|e| format!("{e}"))?;
    DecayModel::built_in(label).ok_or_else(|| format!("{label} has no built-in coefficients"))
}

pub fn models() -> Vec<ModelInfo> {
    ModelLabel::BUILT_IN
        .into_iter()
        .filter_map(|l| DecayModel::built_in(l).map(|m| (l, m)))
        .map(|(l, m)| ModelInfo {
            label: l.name(),
            description: l.description(),
            slope: m.slope,
            intercept: m.intercept,
        })
        .collect()
}

pub fn predict_percentage(label: &str, age_days: f64) -> Result<f64, String> {
    predict(&model(label)?, age_days).map_err(|e| e.to_string())
}

/// Predictions at ages `0, step, 2*step, ...` up to `max_age` inclusive.
pub fn decay_curve(label: &str, max_age: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(step > 0.0 && max_age >= 0.0 && max_age.is_finite()) {
        return Err(format!("bad range: max_age {max_age}, step {step}"));
    }
    let points = (max_age / step).floor() as usize + 1;
    if points > MAX_CURVE_POINTS {
        return Err(format!("{points} points requested, limit is {MAX_CURVE_POINTS}"));
    }
    let m = model(label)?;
    (0..points)
        .map(|i| predict(&m, i as f64 * step).map_err(|e| e.to_string()))
        .collect()
}

/// One post per non-blank line.
fn document(posts: &str) -> TweetDocument {
    TweetDocument::from_phrases(posts.lines().map(clean_post_text))
}

pub fn signature(posts: &str) -> SignatureView {
    let doc = document(posts);
    let sig = build_signature(&doc, &StopwordList::english());
    SignatureView {
        query: sig.query(),
        terms: sig.terms,
        frequencies: sig.frequencies,
        phrases: doc.phrases.len(),
    }
}

/// Cosine between the posts and the main text of a candidate page (HTML or plain text).
pub fn similarity(posts: &str, page: &str) -> SimilarityView {
    let stopwords = StopwordList::english();
    let reference = term_vector(&document(posts).text(), &stopwords);
    let candidate = term_vector(&extract_main_text(page), &stopwords);
    let shared = reference
        .iter()
        .filter(|(t, _)| candidate.get(t) > 0)
        .map(|(t, c)| (t.to_string(), (c, candidate.get(t))))
        .collect();
    SimilarityView {
        similarity: cosine(&reference, &candidate),
        shared,
        page_terms: candidate.len(),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("view types serialize")
}

#[wasm_bindgen(js_name = models)]
pub fn js_models() -> String {
    to_json(&models())
}

#[wasm_bindgen(js_name = predict)]
pub fn js_predict(label: &str, age_days: f64) -> Result<f64, JsError> {
    predict_percentage(label, age_days).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = decayCurve)]
pub fn js_decay_curve(label: &str, max_age: f64, step: f64) -> Result<Vec<f64>, JsError> {
    decay_curve(label, max_age, step).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = signature)]
pub fn js_signature(posts: &str) -> String {
    to_json(&signature(posts))
}

#[wasm_bindgen(js_name = similarity)]
pub fn js_similarity(posts: &str, page: &str) -> String {
    to_json(&similarity(posts, page))
}
