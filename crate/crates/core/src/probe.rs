//! Live-web existence checks.
//!
//! Only a post-redirect 200 that is not a soft 404 counts as live. 429 is
//! treated as a transient failure. Every other terminal status, including
//! a redirect chain longer than the policy allows, is a hard miss.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use chrono::{DateTime, Utc};
use rand::distr::Alphanumeric;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clock::Clock;
use crate::fetch::{follow_redirects, FetchError, Fetcher};
use crate::pool::parallel_map;
use crate::status::{Liveness, LivenessVerdict, MissingReason, StatusClass};
use crate::textpipe::{strip_markup, tokenize};
use crate::uri::CanonicalUri;

pub const SHINGLE_WORDS: usize = 4;
pub const SIBLING_PATH_LEN: usize = 24;

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error("invalid probe policy: {0}")]
    PolicyViolation(String),
    #[error("no probe results to vote on")]
    EmptyInput,
    #[error("probe log: {0}")]
    Log(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbePolicy {
    pub timeout: Duration,
    pub max_redirects: usize,
    pub repeat_count: usize,
    pub repeat_spacing: Duration,
    pub per_host_delay: Duration,
    pub soft404_threshold: f64,
    pub check_soft404: bool,
    pub max_in_flight: usize,
}

impl Default for ProbePolicy {
    fn default() -> Self {
        ProbePolicy {
            timeout: Duration::from_secs(15),
            max_redirects: 10,
            repeat_count: 3,
            repeat_spacing: Duration::from_secs(60),
            per_host_delay: Duration::from_secs(1),
            soft404_threshold: 0.9,
            check_soft404: true,
            max_in_flight: 8,
        }
    }
}

impl ProbePolicy {
    pub fn validate(&self) -> Result<(), ProbeError> {
        let bad = |msg: &str| Err(ProbeError::PolicyViolation(msg.to_string()));
        if self.timeout.is_zero() {
            return bad("timeout must be positive");
        }
        if self.max_redirects > 30 {
            return bad("max_redirects must be at most 30");
        }
        if self.repeat_count == 0 || self.repeat_count.is_multiple_of(2) {
            return bad("repeat_count must be odd");
        }
        if !(0.0..=1.0).contains(&self.soft404_threshold) {
            return bad("soft404_threshold must be in [0, 1]");
        }
        if self.max_in_flight == 0 {
            return bad("max_in_flight must be at least 1");
        }
        Ok(())
    }
}

/// Sorted, deduplicated 64-bit hashes of the body's 4-word shingles.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BodyFingerprint(Vec<u64>);

impl BodyFingerprint {
    pub fn of_html(body: &str) -> Self {
        let words = tokenize(&strip_markup(body));
        let mut set = BTreeSet::new();
        if words.is_empty() {
        } else if words.len() < SHINGLE_WORDS {
            set.insert(fnv1a(&words.join(" ")));
        } else {
            for window in words.windows(SHINGLE_WORDS) {
                set.insert(fnv1a(&window.join(" ")));
            }
        }
        BodyFingerprint(set.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Jaccard overlap. Two empty bodies are identical.
    pub fn jaccard(&self, other: &Self) -> f64 {
        if self.0.is_empty() && other.0.is_empty() {
            return 1.0;
        }
        let (mut i, mut j, mut inter) = (0, 0, 0usize);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    inter += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        let union = self.0.len() + other.0.len() - inter;
        inter as f64 / union as f64
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RedirectHop {
    pub uri: CanonicalUri,
    pub status: u16,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub uri: CanonicalUri,
    pub final_uri: CanonicalUri,
    pub status_code: Option<u16>,
    pub redirect_chain: Vec<RedirectHop>,
    pub body_fingerprint: BodyFingerprint,
    pub fetched_at: DateTime<Utc>,
    pub verdict: LivenessVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Soft-404 check outcome. `uncertain` marks a sibling fetch that failed, in
/// which case the target is not condemned.
#[derive(Debug, Clone, PartialEq)]
pub struct Soft404Check {
    pub is_soft404: bool,
    pub uncertain: bool,
    pub similarity: Option<f64>,
    pub sibling: CanonicalUri,
}

#[cfg(feature = "os-rng")]
fn entropy_rng(_clock: &dyn Clock) -> rand::rngs::StdRng {
    rand::rngs::StdRng::from_os_rng()
}

/// Without OS entropy the clock is the only varying input available.
#[cfg(not(feature = "os-rng"))]
fn entropy_rng(clock: &dyn Clock) -> rand::rngs::StdRng {
    let now = clock.now();
    let nanos = now.timestamp_nanos_opt().unwrap_or_else(|| now.timestamp());
    rand::rngs::StdRng::seed_from_u64(nanos as u64)
}

pub struct Prober<'a> {
    fetcher: &'a dyn Fetcher,
    policy: ProbePolicy,
    clock: &'a dyn Clock,
    rng: Mutex<Box<dyn rand::RngCore + Send + 'a>>,
}

impl<'a> Prober<'a> {
    pub fn new(
        fetcher: &'a dyn Fetcher,
        policy: ProbePolicy,
        clock: &'a dyn Clock,
    ) -> Result<Self, ProbeError> {
        policy.validate()?;
        Ok(Prober {
            fetcher,
            policy,
            clock,
            rng: Mutex::new(Box::new(entropy_rng(clock))),
        })
    }

    /// Use a seeded generator for sibling paths.
    pub fn with_rng(mut self, rng: impl rand::RngCore + Send + 'a) -> Self {
        self.rng = Mutex::new(Box::new(rng));
        self
    }

    /// Deterministic sibling paths from a fixed seed.
    pub fn with_seed(self, seed: u64) -> Self {
        self.with_rng(rand::rngs::StdRng::seed_from_u64(seed))
    }

    pub fn policy(&self) -> &ProbePolicy {
        &self.policy
    }

    /// Follow redirects, map the terminal status, and run the soft-404 check
    /// on a 200 when the policy asks for it.
    pub fn probe(&self, uri: &CanonicalUri) -> ProbeResult {
        let mut result = self.probe_raw(uri);
        if result.verdict == LivenessVerdict::Live && self.policy.check_soft404 {
            let check = self.detect_soft404(&result);
            if check.is_soft404 {
                result.verdict = LivenessVerdict::soft404();
            }
            if check.uncertain {
                result.note = Some(format!("soft-404 check inconclusive: {} unreachable", check.sibling));
            }
        }
        result
    }

    /// Like [`Prober::probe`] without the soft-404 check: a 200 is reported
    /// as Live.
    pub fn probe_raw(&self, uri: &CanonicalUri) -> ProbeResult {
        let fetched_at = self.clock.now();
        match follow_redirects(self.fetcher, uri, self.policy.max_redirects) {
            Err(e) => ProbeResult {
                uri: uri.clone(),
                final_uri: uri.clone(),
                status_code: None,
                redirect_chain: Vec::new(),
                body_fingerprint: BodyFingerprint::default(),
                fetched_at,
                verdict: LivenessVerdict::network_failure(),
                note: Some(describe(&e)),
            },
            Ok(followed) => {
                let status = followed.response.status;
                let (verdict, note) = if followed.exceeded {
                    (
                        LivenessVerdict::Missing {
                            why: MissingReason::HardError(StatusClass::Redirection),
                        },
                        Some(format!(
                            "redirect limit of {} exceeded",
                            self.policy.max_redirects
                        )),
                    )
                } else {
                    (status_verdict(status), None)
                };
                ProbeResult {
                    uri: uri.clone(),
                    final_uri: followed.final_uri,
                    status_code: Some(status),
                    redirect_chain: followed
                        .chain
                        .into_iter()
                        .map(|(uri, status)| RedirectHop { uri, status })
                        .collect(),
                    body_fingerprint: BodyFingerprint::of_html(&followed.response.body),
                    fetched_at,
                    verdict,
                    note,
                }
            }
        }
    }

    fn sibling_of(&self, uri: &CanonicalUri) -> CanonicalUri {
        let mut rng = self.rng.lock().unwrap_or_else(|e| e.into_inner());
        let segment: String = (&mut *rng)
            .sample_iter(Alphanumeric)
            .take(SIBLING_PATH_LEN)
            .map(char::from)
            .collect();
        uri.sibling(&segment)
    }

    /// Compare the target with a random sibling path on the same host.
    pub fn detect_soft404(&self, target: &ProbeResult) -> Soft404Check {
        let sibling_uri = self.sibling_of(&target.uri);
        let sibling = self.probe_raw(&sibling_uri);
        soft404_verdict(target, &sibling, self.policy.soft404_threshold)
    }

    /// `repeat_count` probes spaced by `repeat_spacing`, reduced by majority.
    pub fn check(&self, uri: &CanonicalUri) -> (Vec<ProbeResult>, LivenessVerdict) {
        let mut results = Vec::with_capacity(self.policy.repeat_count);
        for i in 0..self.policy.repeat_count {
            if i > 0 && !self.policy.repeat_spacing.is_zero() {
                thread::sleep(self.policy.repeat_spacing);
            }
            results.push(self.probe(uri));
        }
        let verdict = stable_verdict(&results).unwrap_or_else(|_| LivenessVerdict::mixed());
        (results, verdict)
    }

    /// Probe many URIs, at most `max_in_flight` at once. Combine with a
    /// politeness-wrapped fetcher to serialize requests per host.
    pub fn check_many(&self, uris: &[CanonicalUri]) -> Vec<(Vec<ProbeResult>, LivenessVerdict)> {
        let rounds = self.policy.repeat_count;
        let mut per_uri: Vec<Vec<ProbeResult>> = vec![Vec::with_capacity(rounds); uris.len()];
        for round in 0..rounds {
            if round > 0 && !self.policy.repeat_spacing.is_zero() {
                thread::sleep(self.policy.repeat_spacing);
            }
            for (slot, result) in per_uri.iter_mut().zip(self.probe_all(uris)) {
                slot.push(result);
            }
        }
        per_uri
            .into_iter()
            .map(|results| {
                let verdict =
                    stable_verdict(&results).unwrap_or_else(|_| LivenessVerdict::mixed());
                (results, verdict)
            })
            .collect()
    }

    fn probe_all(&self, uris: &[CanonicalUri]) -> Vec<ProbeResult> {
        parallel_map(uris, self.policy.max_in_flight, |uri| self.probe(uri))
    }
}

fn describe(e: &FetchError) -> String {
    e.to_string()
}

/// Terminal status to verdict, before any soft-404 check.
pub fn status_verdict(status: u16) -> LivenessVerdict {
    match status {
        200 => LivenessVerdict::Live,
        429 => LivenessVerdict::network_failure(),
        other => LivenessVerdict::hard_error(other),
    }
}

/// Decide soft-404 from a target and the probe of its random sibling.
pub fn soft404_verdict(target: &ProbeResult, sibling: &ProbeResult, threshold: f64) -> Soft404Check {
    let sibling_uri = sibling.uri.clone();
    if sibling.status_code.is_none() {
        return Soft404Check {
            is_soft404: false,
            uncertain: true,
            similarity: None,
            sibling: sibling_uri,
        };
    }
    let same_redirect_target = !target.redirect_chain.is_empty()
        && !sibling.redirect_chain.is_empty()
        && target.final_uri == sibling.final_uri;
    let similarity = (sibling.status_code == Some(200))
        .then(|| target.body_fingerprint.jaccard(&sibling.body_fingerprint));
    let similar = similarity.is_some_and(|s| s >= threshold);
    Soft404Check {
        is_soft404: similar || same_redirect_target,
        uncertain: false,
        similarity,
        sibling: sibling_uri,
    }
}

/// Majority vote over Live/Missing, ignoring Uncertain results. A tie or an
/// all-Uncertain list is `Uncertain(Mixed)`.
pub fn stable_verdict(results: &[ProbeResult]) -> Result<LivenessVerdict, ProbeError> {
    let verdicts: Vec<LivenessVerdict> = results.iter().map(|r| r.verdict).collect();
    vote(&verdicts)
}

pub fn vote(verdicts: &[LivenessVerdict]) -> Result<LivenessVerdict, ProbeError> {
    if verdicts.is_empty() {
        return Err(ProbeError::EmptyInput);
    }
    let live = verdicts.iter().filter(|v| v.value() == Liveness::Live).count();
    let missing: Vec<MissingReason> = verdicts
        .iter()
        .filter_map(|v| match v {
            LivenessVerdict::Missing { why } => Some(*why),
            _ => None,
        })
        .collect();
    if live > missing.len() {
        return Ok(LivenessVerdict::Live);
    }
    if missing.len() > live {
        // Most common reason; ties go to the smallest reason so the result
        // does not depend on input order.
        let mut counts: Vec<(MissingReason, usize)> = Vec::new();
        for why in missing {
            match counts.iter_mut().find(|(r, _)| *r == why) {
                Some((_, n)) => *n += 1,
                None => counts.push((why, 1)),
            }
        }
        counts.sort_by(|(ra, na), (rb, nb)| nb.cmp(na).then(ra.cmp(rb)));
        return Ok(LivenessVerdict::Missing { why: counts[0].0 });
    }
    Ok(LivenessVerdict::mixed())
}

/// Append results as JSON lines.
pub fn write_jsonl<W: Write>(mut out: W, results: &[ProbeResult]) -> Result<(), ProbeError> {
    for r in results {
        let line = serde_json::to_string(r).map_err(|e| ProbeError::Log(e.to_string()))?;
        writeln!(out, "{line}").map_err(|e| ProbeError::Log(e.to_string()))?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<ProbeResult>, ProbeError> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line.map_err(|e| ProbeError::Log(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| ProbeError::Log(e.to_string()))?);
    }
    Ok(out)
}
