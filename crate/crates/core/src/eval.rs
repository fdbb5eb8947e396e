//! Pretend-missing evaluation: treat live pages as lost, run the replacement
//! pipeline, and measure how close the candidates come to the real page.

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::replace::{
    fetch_candidates, fetch_main_text, rank_fetched, CandidateSet, Origin, Pipeline,
};
use crate::textpipe::{cosine, term_vector};
use crate::uri::CanonicalUri;
use crate::SCHEMA_VERSION;

/// Targets with fewer posts than this are skipped.
pub const MIN_POSTS: usize = 30;
pub const DEFAULT_THRESHOLD: f64 = 0.70;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no values to evaluate")]
    EmptyInput,
    #[error("dataset line {line}: {reason}")]
    Dataset { line: usize, reason: String },
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub target: CanonicalUri,
    pub corpus_size: usize,
    pub sim_tweetdoc: f64,
    pub sim_first_search: f64,
    pub best_sim_search: f64,
    pub best_sim_cooccurring: f64,
    pub best_sim_union: f64,
    pub rank_of_target_in_search: Option<usize>,
}

/// Which similarity column a metric reads.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimField {
    #[serde(rename = "sim_tweetdoc")]
    TweetDoc,
    #[serde(rename = "sim_first_search")]
    FirstSearch,
    #[serde(rename = "best_sim_search")]
    BestSearch,
    #[serde(rename = "best_sim_cooccurring")]
    BestCooccurring,
    #[default]
    #[serde(rename = "best_sim_union")]
    BestUnion,
}

impl SimField {
    pub const ALL: [SimField; 5] = [
        SimField::TweetDoc,
        SimField::FirstSearch,
        SimField::BestSearch,
        SimField::BestCooccurring,
        SimField::BestUnion,
    ];

    pub fn parse(key: &str) -> Option<Self> {
        Some(match key {
            "sim_tweetdoc" | "tweet_doc" => SimField::TweetDoc,
            "sim_first_search" | "first_search" => SimField::FirstSearch,
            "best_sim_search" | "best_search" => SimField::BestSearch,
            "best_sim_cooccurring" | "best_cooccurring" => SimField::BestCooccurring,
            "best_sim_union" | "best_union" => SimField::BestUnion,
            _ => return None,
        })
    }

    /// Column name in the records CSV.
    pub fn name(self) -> &'static str {
        match self {
            SimField::TweetDoc => "sim_tweetdoc",
            SimField::FirstSearch => "sim_first_search",
            SimField::BestSearch => "best_sim_search",
            SimField::BestCooccurring => "best_sim_cooccurring",
            SimField::BestUnion => "best_sim_union",
        }
    }

    pub fn get(self, r: &EvaluationRecord) -> f64 {
        match self {
            SimField::TweetDoc => r.sim_tweetdoc,
            SimField::FirstSearch => r.sim_first_search,
            SimField::BestSearch => r.best_sim_search,
            SimField::BestCooccurring => r.best_sim_cooccurring,
            SimField::BestUnion => r.best_sim_union,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SkipReason {
    TooFewPosts { posts: usize },
    TargetUnreachable { reason: String },
    Provider { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    pub target: CanonicalUri,
    pub reason: SkipReason,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRun {
    pub records: Vec<EvaluationRecord>,
    pub skipped: Vec<Skipped>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfPoint {
    pub similarity: f64,
    pub cum_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationSummary {
    pub schema_version: u32,
    pub n: usize,
    pub skipped: usize,
    pub skipped_below_min_posts: usize,
    pub threshold: f64,
    pub field: SimField,
    pub fraction_at_threshold: f64,
    pub mrr: f64,
    pub similarity_cdf: Vec<CdfPoint>,
}

/// Mean of `1/rank`, with absent ranks contributing zero.
pub fn mrr(ranks: &[Option<usize>]) -> Result<f64, EvalError> {
    if ranks.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let total: f64 = ranks
        .iter()
        .map(|r| match r {
            Some(k) if *k >= 1 => 1.0 / *k as f64,
            _ => 0.0,
        })
        .sum();
    Ok(total / ranks.len() as f64)
}

/// Fraction of records whose `field` is at least `threshold`.
pub fn fraction_at_threshold(
    records: &[EvaluationRecord],
    threshold: f64,
    field: SimField,
) -> Result<f64, EvalError> {
    if records.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let hits = records.iter().filter(|r| field.get(r) >= threshold).count();
    Ok(hits as f64 / records.len() as f64)
}

/// Sorted similarities paired with the cumulative fraction of records.
pub fn emit_cdf(records: &[EvaluationRecord], field: SimField) -> Result<Vec<CdfPoint>, EvalError> {
    if records.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let mut sims: Vec<f64> = records.iter().map(|r| field.get(r)).collect();
    sims.sort_by(f64::total_cmp);
    let n = sims.len() as f64;
    Ok(sims
        .into_iter()
        .enumerate()
        .map(|(i, similarity)| CdfPoint {
            similarity,
            cum_fraction: (i + 1) as f64 / n,
        })
        .collect())
}

pub fn summarize(run: &EvaluationRun, threshold: f64, field: SimField) -> EvaluationSummary {
    let records = &run.records;
    let ranks: Vec<Option<usize>> = records.iter().map(|r| r.rank_of_target_in_search).collect();
    EvaluationSummary {
        schema_version: SCHEMA_VERSION,
        n: records.len(),
        skipped: run.skipped.len(),
        skipped_below_min_posts: run
            .skipped
            .iter()
            .filter(|s| matches!(s.reason, SkipReason::TooFewPosts { .. }))
            .count(),
        threshold,
        field,
        fraction_at_threshold: fraction_at_threshold(records, threshold, field).unwrap_or(0.0),
        mrr: mrr(&ranks).unwrap_or(0.0),
        similarity_cdf: emit_cdf(records, field).unwrap_or_default(),
    }
}

/// Evaluate each dataset URI in turn. Failures become skips.
pub fn run_evaluation(
    dataset: &[CanonicalUri],
    pipeline: &Pipeline<'_>,
    min_posts: usize,
) -> EvaluationRun {
    let mut run = EvaluationRun::default();
    for target in dataset {
        match evaluate_one(target, pipeline, min_posts) {
            Ok(record) => run.records.push(record),
            Err(reason) => {
                log::info!("skipping {target}: {reason:?}");
                run.skipped.push(Skipped {
                    target: target.clone(),
                    reason,
                });
            }
        }
    }
    run
}

fn evaluate_one(
    target: &CanonicalUri,
    pipeline: &Pipeline<'_>,
    min_posts: usize,
) -> Result<EvaluationRecord, SkipReason> {
    let gathered = pipeline.gather(target).map_err(|e| SkipReason::Provider {
        reason: e.to_string(),
    })?;
    if gathered.corpus_len < min_posts {
        return Err(SkipReason::TooFewPosts {
            posts: gathered.corpus_len,
        });
    }
    let opts = &pipeline.config.fetch;
    let text = fetch_main_text(pipeline.fetcher, target, opts)
        .map_err(|reason| SkipReason::TargetUnreachable { reason })?;
    let original = term_vector(&text, pipeline.stopwords);
    let doc_vector = term_vector(&gathered.doc.text(), pipeline.stopwords);

    let cands = &gathered.candidates;
    let rank_of_target_in_search = cands
        .search_results
        .iter()
        .position(|r| &r.uri == target)
        .map(|i| i + 1);

    // The page itself is not a replacement for itself.
    let others = CandidateSet::new(
        cands
            .search_results
            .iter()
            .filter(|r| &r.uri != target)
            .cloned()
            .collect(),
        cands.cooccurring.iter().filter(|u| *u != target).cloned().collect(),
    );
    let (fetched, _) = fetch_candidates(&others, pipeline.fetcher, pipeline.stopwords, opts);
    let ranked = rank_fetched(&original, &fetched);

    let sim_of = |uri: &CanonicalUri| {
        ranked
            .iter()
            .find(|c| &c.uri == uri)
            .map(|c| c.similarity)
    };
    let sim_first_search = others
        .search_results
        .iter()
        .find_map(|r| sim_of(&r.uri))
        .unwrap_or(0.0);
    let best_sim_search = ranked
        .iter()
        .filter(|c| c.origin == Origin::Search)
        .map(|c| c.similarity)
        .fold(0.0, f64::max);
    let best_sim_cooccurring = others
        .cooccurring
        .iter()
        .filter_map(sim_of)
        .fold(0.0, f64::max);

    Ok(EvaluationRecord {
        target: target.clone(),
        corpus_size: gathered.corpus_len,
        sim_tweetdoc: cosine(&original, &doc_vector),
        sim_first_search,
        best_sim_search,
        best_sim_cooccurring,
        best_sim_union: best_sim_search.max(best_sim_cooccurring),
        rank_of_target_in_search,
    })
}

/// One URI per line; blank lines and `#` comments ignored.
pub fn read_dataset(text: &str) -> Result<Vec<CanonicalUri>, EvalError> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(line, l)| {
            CanonicalUri::parse(l).map_err(|e| EvalError::Dataset {
                line,
                reason: e.to_string(),
            })
        })
        .collect()
}

pub fn write_records_csv<W: Write>(out: W, records: &[EvaluationRecord]) -> Result<(), EvalError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "target",
        "corpus_size",
        "sim_tweetdoc",
        "sim_first_search",
        "best_sim_search",
        "best_sim_cooccurring",
        "best_sim_union",
        "rank_of_target_in_search",
    ])?;
    for r in records {
        w.write_record([
            r.target.to_string(),
            r.corpus_size.to_string(),
            format!("{:.6}", r.sim_tweetdoc),
            format!("{:.6}", r.sim_first_search),
            format!("{:.6}", r.best_sim_search),
            format!("{:.6}", r.best_sim_cooccurring),
            format!("{:.6}", r.best_sim_union),
            r.rank_of_target_in_search
                .map(|k| k.to_string())
                .unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_cdf_csv<W: Write>(out: W, cdf: &[CdfPoint]) -> Result<(), EvalError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["similarity", "cum_fraction"])?;
    for p in cdf {
        w.write_record([format!("{:.6}", p.similarity), format!("{:.6}", p.cum_fraction)])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
