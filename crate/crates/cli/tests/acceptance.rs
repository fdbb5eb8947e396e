//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines show up in plain `cargo test` output.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use chrono::{TimeZone, Utc};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use relink_core::archive::{parse_timemap, serialize_timemap, timemap_delta, DeltaKind};
use relink_core::clock::FixedClock;
use relink_core::decay::{aggregate_events, fit, mean_abs_error, predict, DecayModel, ModelLabel, ObservationSet};
use relink_core::eval::{fraction_at_threshold, mrr, run_evaluation, summarize, EvaluationRecord, SimField};
use relink_core::fetch::{FixtureFetcher, HttpFetcher, HttpResponse};
use relink_core::probe::{stable_verdict, ProbePolicy, Prober};
use relink_core::replace::{
    build_signature, rank_candidates, CandidateSet, FetchOptions, Pipeline, RecommendConfig, ReplaceError,
    SearchProvider, SearchResult,
};
use relink_core::social::{
    build_tweet_document, fetch_corpus, longest_common_phrase, summarize_context, FixtureSocialProvider,
    SocialCorpus, TweetDocument,
};
use relink_core::status::LivenessVerdict;
use relink_core::textpipe::{cosine, stem, term_vector, StopwordList, TermVector};
use relink_core::uri::CanonicalUri;

use common::server::FixtureServer;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn uri(s: &str) -> CanonicalUri {
    CanonicalUri::parse(s).unwrap()
}

fn repo(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

const E2E_TARGET: &str = "http://blog.example.org/2012/02/digital-content-lost.html";

// Dataset columns: MJ (2), Iran (2), H1N1 (2), Obama (2), Egypt, Syria.
const MISSING_MEASURED: [f64; 10] = [37.10, 37.50, 28.17, 30.56, 26.29, 31.62, 32.47, 24.64, 7.55, 12.68];
const MISSING_PREDICTED: [f64; 10] = [31.72, 31.42, 31.96, 30.98, 30.16, 29.68, 29.60, 28.36, 19.80, 11.54];
const ARCHIVED_MEASURED: [f64; 10] = [48.61, 40.32, 60.80, 55.04, 47.97, 52.14, 48.38, 40.58, 23.73, 0.56];
const ARCHIVED_PREDICTED: [f64; 10] = [61.78, 61.18, 62.26, 60.30, 58.66, 57.70, 57.54, 55.06, 37.94, 21.42];

fn c1_prediction_errors() -> Outcome {
    let missing = mean_abs_error(&MISSING_MEASURED, &MISSING_PREDICTED).map_err(|e| e.to_string())?;
    let archived = mean_abs_error(&ARCHIVED_MEASURED, &ARCHIVED_PREDICTED).map_err(|e| e.to_string())?;
    ensure(close(missing, 4.15, 0.005), || format!("missing error {missing}"))?;
    ensure(close(archived, 11.57, 0.005), || format!("archived error {archived}"))?;
    Ok(format!("missing {missing:.4}, archived {archived:.4}"))
}

fn c2_event_aggregation() -> Outcome {
    let events = ["MJ", "Iran", "Obama", "H1N1", "Egypt", "Syria"];
    let rows: [(&str, [f64; 6], f64); 4] = [
        ("reappearing", [11.29, 11.48, 6.63, 3.68, 4.21, 1.97], 6.54),
        ("archive-disappearing", [9.98, 11.17, 15.65, 5.46, 2.81, 2.25], 7.89),
        ("one-to-zero", [2.72, 2.89, 4.24, 1.96, 0.23, 0.28], 2.05),
        ("posts-missing", [14.43, 14.59, 10.03, 7.38, 15.08, 0.53], 10.34),
    ];
    let mut got = Vec::new();
    for (name, values, want) in rows {
        let per_event: Vec<(&str, f64)> = events.iter().copied().zip(values).collect();
        let avg = aggregate_events(&per_event).map_err(|e| e.to_string())?;
        ensure(close(avg, want, 0.005), || format!("{name}: {avg} vs {want}"))?;
        got.push(format!("{avg:.3}"));
    }
    Ok(got.join(", "))
}

fn c3_model_constants() -> Outcome {
    let want = [4.20, 6.74, -1.42, -2.22, 0.88];
    for (label, w) in ModelLabel::BUILT_IN.into_iter().zip(want) {
        let model = DecayModel::built_in(label).ok_or("missing built-in")?;
        let at0 = predict(&model, 0.0).map_err(|e| e.to_string())?;
        ensure(at0 == w, || format!("{label} at 0 = {at0}, want {w}"))?;
    }
    let year = predict(&DecayModel::CONTENT_LOST, 365.0).map_err(|e| e.to_string())?;
    ensure(format!("{year:.2}") == "11.50", || format!("content-lost at 365 = {year}"))?;
    Ok(format!("intercepts exact, content-lost at 365 days = {year:.2}"))
}

fn c4_age_consistency() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ages = Vec::new();
    for (pm, pa) in MISSING_PREDICTED.iter().zip(ARCHIVED_PREDICTED) {
        let from_missing = DecayModel::CONTENT_LOST.age_for(*pm);
        let from_archived = DecayModel::CONTENT_ARCHIVED.age_for(pa);
        worst = worst.max((from_missing - from_archived).abs());
        ages.push(from_missing);
    }
    ensure(worst <= 1.0, || format!("ages disagree by {worst} days"))?;
    ensure(close(ages[0], 1376.0, 1e-6), || format!("MJ age {}", ages[0]))?;
    Ok(format!("max disagreement {worst:.2e} days, MJ age {:.0}", ages[0]))
}

fn c5_regression() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..200 {
        let slope = rng.random_range(-0.5..0.5);
        let intercept = rng.random_range(-20.0..20.0);
        let n = rng.random_range(2..30);
        let points: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let age = f64::from(i) * rng.random_range(1.0..60.0);
                (age, slope * age + intercept)
            })
            .collect();
        let m = fit(&ObservationSet::new("synthetic", &points)).map_err(|e| e.to_string())?;
        ensure(close(m.slope, slope, 1e-9) && close(m.intercept, intercept, 1e-9), || {
            format!("fit ({}, {}) vs ({slope}, {intercept})", m.slope, m.intercept)
        })?;
    }
    // Sxy = 11.5 and Sxx = 5 around the means (1.5, 4.25).
    let m = fit(&ObservationSet::new("hand", &[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0), (3.0, 8.0)]))
        .map_err(|e| e.to_string())?;
    ensure(close(m.slope, 2.3, 1e-12) && close(m.intercept, 0.8, 1e-12), || {
        format!("4-point fit ({}, {})", m.slope, m.intercept)
    })?;
    Ok("200 synthetic lines recovered to 1e-9; 4-point fit = (2.3, 0.8)".into())
}

fn c6_text_pipeline() -> Outcome {
    let words: Vec<&str> = include_str!("../../core/tests/data/porter_voc.txt").lines().collect();
    let reference: Vec<&str> = include_str!("../../core/tests/data/porter_output.txt").lines().collect();
    ensure(words.len() == reference.len(), || "vocabulary files differ in length".into())?;
    let agree = words.iter().zip(&reference).filter(|(w, r)| stem(w) == **r).count();
    let agreement = agree as f64 / words.len() as f64;
    ensure(agreement >= 0.999, || format!("porter agreement {agreement}"))?;

    let stopwords = StopwordList::english();
    let stop: Vec<&str> = stopwords.iter().collect();
    let filler = ["Revolution", "archives", "lost", "CAIRO", "spring's", "tweets", "re-appearing", "x", "naïve"];
    let punct = [" ", " ", " ", ", ", ". ", "! ", " -- ", "\n", "'", "\""];
    let mut rng = StdRng::seed_from_u64(6);
    for _ in 0..10_000 {
        let mut text = String::new();
        for _ in 0..rng.random_range(0..25) {
            let word: String = match rng.random_range(0..4) {
                0 => filler[rng.random_range(0..filler.len())].to_string(),
                1 => (0..rng.random_range(1..9)).map(|_| rng.random_range(b'a'..=b'z') as char).collect(),
                _ => {
                    let w = stop[rng.random_range(0..stop.len())];
                    if rng.random_bool(0.3) { w.to_uppercase() } else { w.to_string() }
                }
            };
            text.push_str(&word);
            text.push_str(punct[rng.random_range(0..punct.len())]);
        }
        let v = term_vector(&text, &stopwords);
        let leaked = v.terms().find(|t| stopwords.contains(t)).map(str::to_string);
        if let Some(t) = leaked {
            return Err(format!("stopword {t:?} survived in {text:?}"));
        }
    }

    let vocab = ["egypt", "cairo", "revolut", "archiv", "lost", "spring", "tahrir", "protest", "web", "blog"];
    let random_vector = |rng: &mut StdRng| -> TermVector {
        let mut v = Vec::new();
        for t in vocab {
            if rng.random_bool(0.5) {
                v.push((t, rng.random_range(1..20)));
            }
        }
        v.into_iter().collect()
    };
    for _ in 0..10_000 {
        let a = random_vector(&mut rng);
        let b = random_vector(&mut rng);
        let k = rng.random_range(1..50);
        let ab = cosine(&a, &b);
        ensure((0.0..=1.0).contains(&ab), || format!("cosine out of bounds: {ab}"))?;
        ensure(close(ab, cosine(&b, &a), 1e-12), || "cosine not symmetric".into())?;
        ensure(close(ab, cosine(&a.scaled(k), &b), 1e-12), || "cosine not scale invariant".into())?;
        if !a.is_empty() {
            ensure(close(cosine(&a, &a), 1.0, 1e-12), || "self cosine != 1".into())?;
        }
    }
    Ok(format!(
        "porter {:.3}% of {}; 10,000 stopword-free vectors; 10,000 cosine pairs",
        agreement * 100.0,
        words.len()
    ))
}

fn e2e_corpus() -> SocialCorpus {
    let social = FixtureSocialProvider::new(repo("fixtures/e2e/posts.jsonl"));
    fetch_corpus(&social, &uri(E2E_TARGET), 500).unwrap()
}

fn c7_signature() -> Outcome {
    let stopwords = StopwordList::english();
    let corpus = e2e_corpus();
    let expected = build_signature(&build_tweet_document(&corpus), &stopwords);
    ensure(!expected.is_empty() && expected.len() <= 5, || format!("signature {expected:?}"))?;
    let mut rng = StdRng::seed_from_u64(7);
    let mut posts = corpus.posts.clone();
    for _ in 0..1_000 {
        posts.shuffle(&mut rng);
        let shuffled = SocialCorpus {
            target: corpus.target.clone(),
            posts: posts.clone(),
        };
        let sig = build_signature(&build_tweet_document(&shuffled), &stopwords);
        ensure(sig == expected, || format!("shuffle changed signature to {sig:?}"))?;
    }
    // lost and revolut tie at 7; archiv and spring are below and above digit.
    let tie = TweetDocument::from_phrases([
        "egypt egypt egypt egypt egypt egypt egypt egypt egypt",
        "revolution revolution revolution revolution revolutions revolutions revolutions",
        "lost lost lost lost lost lost lost",
        "archive archives archived spring spring digital",
    ]);
    let sig = build_signature(&tie, &stopwords);
    ensure(sig.terms == ["egypt", "lost", "revolut", "archiv", "spring"], || format!("{:?}", sig.terms))?;
    ensure(sig.frequencies == [9, 7, 7, 3, 2], || format!("{:?}", sig.frequencies))?;
    let flat = TweetDocument::from_phrases(["foxtrot echo delta", "charlie bravo alpha"]);
    let sig = build_signature(&flat, &stopwords);
    ensure(sig.terms == ["alpha", "bravo", "charli", "delta", "echo"], || format!("{:?}", sig.terms))?;
    Ok(format!("signature [{}] stable over 1,000 shuffles; tie-break verified", expected.query()))
}

/// Every n-gram of every phrase, counted by containment.
fn brute_force_lcp(doc: &TweetDocument) -> (String, usize) {
    let phrases: Vec<Vec<&str>> = doc.phrases.iter().map(|p| p.split_whitespace().collect()).collect();
    let mut grams: BTreeSet<Vec<&str>> = BTreeSet::new();
    for p in &phrases {
        for i in 0..p.len() {
            for j in i + 1..=p.len() {
                grams.insert(p[i..j].to_vec());
            }
        }
    }
    let mut best: Option<(usize, usize, String)> = None;
    for g in grams {
        let count = phrases.iter().filter(|p| p.windows(g.len()).any(|w| w == g.as_slice())).count();
        if count < 2 {
            continue;
        }
        let text = g.join(" ");
        let better = match &best {
            None => true,
            Some((n, c, t)) => g.len() > *n || (g.len() == *n && (count > *c || (count == *c && text < *t))),
        };
        if better {
            best = Some((g.len(), count, text));
        }
    }
    best.map(|(_, c, t)| (t, c)).unwrap_or_default()
}

fn c8_social_extraction() -> Outcome {
    let social = FixtureSocialProvider::new(repo("crates/core/tests/fixtures/social/context_290.jsonl"));
    let corpus = fetch_corpus(&social, &uri(E2E_TARGET), 500).map_err(|e| e.to_string())?;
    let s = summarize_context(&corpus);
    let counts = (
        s.related_tweet_count,
        s.most_frequent_link_count,
        s.most_frequent_tweet_count,
        s.longest_common_phrase_count,
    );
    ensure(counts == (290, 19, 23, 28), || format!("counts {counts:?}"))?;

    let mut rng = StdRng::seed_from_u64(8);
    let tokens = ["a", "b", "c", "d", "e"];
    for _ in 0..100 {
        let phrases: Vec<String> = (0..rng.random_range(2..10))
            .map(|_| {
                (0..rng.random_range(1..9))
                    .map(|_| tokens[rng.random_range(0..tokens.len())])
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        let doc = TweetDocument::from_phrases(phrases);
        let (fast, slow) = (longest_common_phrase(&doc), brute_force_lcp(&doc));
        ensure(fast == slow, || format!("{:?}: {fast:?} vs {slow:?}", doc.phrases))?;
    }
    Ok("counts (290, 19, 23, 28); 100 random documents match the brute-force oracle".into())
}

fn c9_soft404() -> Outcome {
    const ERROR_PAGE: &str = "<html><body><h1>Oops</h1><p>The page you are looking for \
        cannot be found on this server. Please check the address or use the search box.</p></body></html>";
    const ARTICLE: &str = "<html><body><p>Protesters returned to Tahrir Square on Friday, a year \
        after the uprising, to mark the anniversary and press their demands.</p></body></html>";
    let soft = FixtureServer::start(|_| (200, ERROR_PAGE.to_string()));
    let honest = FixtureServer::start(|path| match path {
        "/news/2012/anniversary.html" => (200, ARTICLE.to_string()),
        _ => (404, ERROR_PAGE.to_string()),
    });
    let policy = ProbePolicy {
        repeat_spacing: Duration::ZERO,
        per_host_delay: Duration::ZERO,
        timeout: Duration::from_secs(5),
        ..ProbePolicy::default()
    };
    let http = HttpFetcher::new(policy.timeout, "relink-acceptance");
    let clock = FixedClock(Utc.with_ymd_and_hms(2013, 3, 1, 0, 0, 0).unwrap());
    let prober = Prober::new(&http, policy, &clock).map_err(|e| e.to_string())?.with_seed(9);

    let (results, _) = prober.check(&uri(&soft.url("/news/2012/anniversary.html")));
    let verdict = stable_verdict(&results).map_err(|e| e.to_string())?;
    ensure(verdict == LivenessVerdict::soft404(), || format!("soft server gave {verdict}"))?;
    let (results, _) = prober.check(&uri(&honest.url("/news/2012/anniversary.html")));
    let verdict_live = stable_verdict(&results).map_err(|e| e.to_string())?;
    ensure(verdict_live == LivenessVerdict::Live, || format!("404ing server gave {verdict_live}"))?;
    Ok(format!("identical-200 server: {verdict}; 404ing server: {verdict_live}"))
}

fn c10_timemaps() -> Outcome {
    let at = Utc.with_ymd_and_hms(2013, 3, 1, 0, 0, 0).unwrap();
    let dir = repo("fixtures/timemaps");
    let mut names = Vec::new();
    for entry in std::fs::read_dir(&dir).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let body = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let original = body
            .split(['<', '>'])
            .nth(1)
            .ok_or_else(|| format!("{}: no original link", path.display()))?;
        let tm = parse_timemap(&body, &uri(original), at).map_err(|e| e.to_string())?;
        let again = parse_timemap(&serialize_timemap(&tm), &uri(original), at).map_err(|e| e.to_string())?;
        ensure(tm == again, || format!("{} does not round-trip", path.display()))?;
        names.push(path.file_name().unwrap().to_string_lossy().into_owned());
    }
    ensure(names.len() >= 3, || format!("only {} fixtures", names.len()))?;
    let original = uri("http://blog.example.org/2011/02/tahrir-live.html");
    let read = |name: &str| std::fs::read_to_string(dir.join(name)).unwrap();
    let old = parse_timemap(&read("story_2012.link"), &original, at).map_err(|e| e.to_string())?;
    let new = parse_timemap(&read("story_2013.link"), &original, at).map_err(|e| e.to_string())?;
    let delta = timemap_delta(&old, &new).map_err(|e| e.to_string())?;
    ensure(delta.kind == DeltaKind::OneToZero, || format!("{delta:?}"))?;
    names.sort();
    Ok(format!("{} round-trip; 1 -> 0 pair is {:?}", names.join(", "), delta.kind))
}

/// Cosine over hand-listed stem counts.
fn hand_cosine(a: &[(&str, u32)], b: &[(&str, u32)]) -> f64 {
    let a: BTreeMap<&str, f64> = a.iter().map(|&(t, c)| (t, f64::from(c))).collect();
    let b: BTreeMap<&str, f64> = b.iter().map(|&(t, c)| (t, f64::from(c))).collect();
    let dot: f64 = a.iter().map(|(t, x)| x * b.get(t).unwrap_or(&0.0)).sum();
    let norm = |m: &BTreeMap<&str, f64>| m.values().map(|x| x * x).sum::<f64>().sqrt();
    dot / (norm(&a) * norm(&b))
}

fn c11_offline_recommend() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = common::config(dir.path(), "e2e", "");
    let start = Instant::now();
    let run = common::relink(&cfg, &["--offline", "--fixed-clock", common::FIXED_CLOCK, "recommend", E2E_TARGET]);
    let elapsed = start.elapsed();
    ensure(run.code == 0, || format!("exit {}: {}", run.code, run.stderr))?;
    let report: serde_json::Value = serde_json::from_str(&run.stdout).map_err(|e| e.to_string())?;
    let posts = report["context"]["Related Tweet Count"].as_u64();
    let searched = report["candidates"]["search_results"].as_array().map(Vec::len);
    let cooccurring = report["candidates"]["cooccurring"].as_array().map(Vec::len);
    ensure((posts, searched, cooccurring) == (Some(37), Some(10), Some(2)), || {
        format!("fixture shape {posts:?}/{searched:?}/{cooccurring:?}")
    })?;
    let best = &report["best"];
    ensure(best["uri"] == "http://www.example.net/arab-spring-archive", || format!("best {best}"))?;
    let doc = [("egypt", 9), ("lost", 7), ("revolut", 7), ("archiv", 3), ("spring", 2), ("digit", 1)];
    let page = [("archiv", 1), ("cairo", 2), ("egypt", 3), ("lost", 2), ("revolut", 2)];
    let expected = hand_cosine(&doc, &page);
    let got = best["similarity"].as_f64().unwrap_or(f64::NAN);
    ensure(close(got, expected, 1e-6), || format!("similarity {got} vs hand {expected}"))?;
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("best arab-spring-archive at {got:.9} (hand {expected:.9}) in {elapsed:.2?}"))
}

/// Canned search results with the target spliced in at a chosen position.
struct InjectedSearch {
    results: Vec<SearchResult>,
}

impl SearchProvider for InjectedSearch {
    fn search(&self, _query: &str, limit: usize) -> Result<Vec<SearchResult>, ReplaceError> {
        Ok(self.results.iter().take(limit).cloned().collect())
    }
}

fn c12_self_recovery() -> Outcome {
    let corpus = e2e_corpus();
    let doc = build_tweet_document(&corpus);
    let own = "Egypt revolution lost. Egypt revolution lost. Egypt revolution lost. \
               Egypt revolution lost. Egypt revolution lost. Egypt revolution lost. \
               Egypt revolution lost. The archives of the spring in Egypt, the archives \
               of the spring in Egypt. The digital archive.";
    let mut fetcher = FixtureFetcher::from_jsonl(&repo("fixtures/e2e/pages.jsonl")).map_err(|e| e.to_string())?;
    fetcher.insert(uri(E2E_TARGET), HttpResponse::ok(format!("<p>{own}</p>")));
    let canned: BTreeMap<String, Vec<SearchResult>> =
        serde_json::from_str(&std::fs::read_to_string(repo("fixtures/e2e/search.json")).unwrap())
            .map_err(|e| e.to_string())?;
    let canned = canned.into_values().next().ok_or("empty search fixture")?;
    let stopwords = StopwordList::english();

    let mut top = f64::NAN;
    for position in 0..canned.len() {
        let mut results = canned.clone();
        results[position] = SearchResult {
            uri: uri(E2E_TARGET),
            snippet: String::new(),
        };
        let set = CandidateSet::new(results, corpus_cooccurring(&corpus));
        let ranking = rank_candidates(&doc, &set, &fetcher, &stopwords, &FetchOptions::default());
        let first = &ranking.ranked[0];
        ensure(first.uri.as_str() == E2E_TARGET, || format!("position {position}: {} ranked first", first.uri))?;
        ensure(ranking.ranked.iter().all(|c| c.similarity <= first.similarity), || "not dominant".into())?;
        top = first.similarity;
    }

    let social = FixtureSocialProvider::new(repo("fixtures/e2e/posts.jsonl"));
    let clock = FixedClock(Utc.with_ymd_and_hms(2013, 3, 1, 0, 0, 0).unwrap());
    for k in 1..=canned.len() {
        let mut results = canned.clone();
        results.insert(
            k - 1,
            SearchResult {
                uri: uri(E2E_TARGET),
                snippet: String::new(),
            },
        );
        let search = InjectedSearch { results };
        let pipeline = Pipeline {
            social: &social,
            search: &search,
            fetcher: &fetcher,
            stopwords: &stopwords,
            clock: &clock,
            config: RecommendConfig::default(),
        };
        let run = run_evaluation(&[uri(E2E_TARGET)], &pipeline, 30);
        ensure(run.records.len() == 1, || format!("skipped: {:?}", run.skipped))?;
        let rank = run.records[0].rank_of_target_in_search;
        ensure(rank == Some(k), || format!("injected at {k}, measured {rank:?}"))?;
        let summary = summarize(&run, 0.7, SimField::BestUnion);
        ensure(close(summary.mrr, 1.0 / k as f64, 1e-15), || format!("k={k}: mrr {}", summary.mrr))?;
    }
    Ok(format!("own page first at every position (similarity {top:.4}); injected rank k gives 1/k for k = 1..=10"))
}

fn corpus_cooccurring(corpus: &SocialCorpus) -> Vec<CanonicalUri> {
    relink_core::social::extract_cooccurring(corpus, &corpus.target)
}

fn c13_metric_oracles() -> Outcome {
    let m = mrr(&[Some(1), Some(2), Some(4)]).map_err(|e| e.to_string())?;
    ensure(close(m, 0.58333, 1e-5), || format!("mrr {m}"))?;
    let records: Vec<EvaluationRecord> =
        serde_json::from_str(&std::fs::read_to_string(repo("fixtures/eval/records_10.json")).unwrap())
            .map_err(|e| e.to_string())?;
    let f = fraction_at_threshold(&records, 0.70, SimField::BestUnion).map_err(|e| e.to_string())?;
    ensure(f == 0.40, || format!("fraction {f}"))?;
    Ok(format!("mrr([1,2,4]) = {m:.5}; fraction at 0.70 over {} records = {f:.2}", records.len()))
}

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Option<Duration>,
    check: fn() -> Outcome,
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: 1, name: "prediction error reproduction", limit: secs(1), check: c1_prediction_errors },
        Criterion { id: 2, name: "per-event aggregation", limit: secs(1), check: c2_event_aggregation },
        Criterion { id: 3, name: "model constants", limit: None, check: c3_model_constants },
        Criterion { id: 4, name: "cross-model age consistency", limit: None, check: c4_age_consistency },
        Criterion { id: 5, name: "regression oracle", limit: None, check: c5_regression },
        Criterion { id: 6, name: "text pipeline properties", limit: secs(30), check: c6_text_pipeline },
        Criterion { id: 7, name: "signature properties", limit: None, check: c7_signature },
        Criterion { id: 8, name: "social extraction", limit: None, check: c8_social_extraction },
        Criterion { id: 9, name: "soft-404 detection", limit: None, check: c9_soft404 },
        Criterion { id: 10, name: "timemap round trip and delta", limit: None, check: c10_timemaps },
        Criterion { id: 11, name: "offline end-to-end recommend", limit: secs(10), check: c11_offline_recommend },
        Criterion { id: 12, name: "self-recovery and rank injection", limit: None, check: c12_self_recovery },
        Criterion { id: 13, name: "metric oracles", limit: None, check: c13_metric_oracles },
    ];

    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(format!("panic: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(detail), Some(limit)) if elapsed > limit => {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}"))
            }
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {}: {detail} [{elapsed:.2?}]", c.id, c.name),
            Err(reason) => {
                failed += 1;
                println!("FAIL {:>2} {}: {reason} [{elapsed:.2?}]", c.id, c.name);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
