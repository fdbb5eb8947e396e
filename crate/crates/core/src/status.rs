//! Resource status taxonomy and liveness verdicts.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Where a resource stands with respect to the live web and public archives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ResourceStatus {
    /// Live and archived.
    Replicated,
    /// Live, no archived copy.
    Vulnerable,
    /// Gone from the live web, an archived copy remains.
    Endangered,
    /// Gone and never archived.
    Unrecoverable,
}

impl ResourceStatus {
    pub const ALL: [ResourceStatus; 4] = [
        ResourceStatus::Replicated,
        ResourceStatus::Vulnerable,
        ResourceStatus::Endangered,
        ResourceStatus::Unrecoverable,
    ];
}

impl fmt::Display for ResourceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ResourceStatus::Replicated => "Replicated",
            ResourceStatus::Vulnerable => "Vulnerable",
            ResourceStatus::Endangered => "Endangered",
            ResourceStatus::Unrecoverable => "Unrecoverable",
        };
        f.write_str(s)
    }
}

pub fn classify_status(live: bool, archived: bool) -> ResourceStatus {
    match (live, archived) {
        (true, true) => ResourceStatus::Replicated,
        (true, false) => ResourceStatus::Vulnerable,
        (false, true) => ResourceStatus::Endangered,
        (false, false) => ResourceStatus::Unrecoverable,
    }
}

/// HTTP status class of a non-200 terminal response.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatusClass {
    Informational,
    Success,
    Redirection,
    ClientError,
    ServerError,
    Other,
}

impl StatusClass {
    pub fn of(code: u16) -> Self {
        match code {
            100..=199 => StatusClass::Informational,
            200..=299 => StatusClass::Success,
            300..=399 => StatusClass::Redirection,
            400..=499 => StatusClass::ClientError,
            500..=599 => StatusClass::ServerError,
            _ => StatusClass::Other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "reason", content = "class")]
pub enum MissingReason {
    HardError(StatusClass),
    Soft404,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UncertainReason {
    NetworkFailure,
    Mixed,
}

/// Outcome of checking a resource on the live web. The variant payloads make
/// the reason/value pairing unrepresentable when inconsistent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum LivenessVerdict {
    Live,
    Missing { why: MissingReason },
    Uncertain { why: UncertainReason },
}

/// Flattened reason, independent of the verdict value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictReason {
    Ok,
    HardError(StatusClass),
    Soft404,
    NetworkFailure,
    Mixed,
}

/// The three verdict values without their reasons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Liveness {
    Live,
    Missing,
    Uncertain,
}

impl LivenessVerdict {
    pub fn hard_error(code: u16) -> Self {
        LivenessVerdict::Missing {
            why: MissingReason::HardError(StatusClass::of(code)),
        }
    }

    pub fn soft404() -> Self {
        LivenessVerdict::Missing {
            why: MissingReason::Soft404,
        }
    }

    pub fn network_failure() -> Self {
        LivenessVerdict::Uncertain {
            why: UncertainReason::NetworkFailure,
        }
    }

    pub fn mixed() -> Self {
        LivenessVerdict::Uncertain {
            why: UncertainReason::Mixed,
        }
    }

    pub fn value(&self) -> Liveness {
        match self {
            LivenessVerdict::Live => Liveness::Live,
            LivenessVerdict::Missing { .. } => Liveness::Missing,
            LivenessVerdict::Uncertain { .. } => Liveness::Uncertain,
        }
    }

    pub fn reason(&self) -> VerdictReason {
        match self {
            LivenessVerdict::Live => VerdictReason::Ok,
            LivenessVerdict::Missing {
                why: MissingReason::HardError(class),
            } => VerdictReason::HardError(*class),
            LivenessVerdict::Missing {
                why: MissingReason::Soft404,
            } => VerdictReason::Soft404,
            LivenessVerdict::Uncertain {
                why: UncertainReason::NetworkFailure,
            } => VerdictReason::NetworkFailure,
            LivenessVerdict::Uncertain {
                why: UncertainReason::Mixed,
            } => VerdictReason::Mixed,
        }
    }

    /// `Some(true)` for Live, `Some(false)` for Missing, `None` when unresolved.
    pub fn is_live(&self) -> Option<bool> {
        match self.value() {
            Liveness::Live => Some(true),
            Liveness::Missing => Some(false),
            Liveness::Uncertain => None,
        }
    }
}

impl fmt::Display for LivenessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LivenessVerdict::Live => f.write_str("Live"),
            LivenessVerdict::Missing {
                why: MissingReason::HardError(class),
            } => write!(f, "Missing(HardError {class:?})"),
            LivenessVerdict::Missing {
                why: MissingReason::Soft404,
            } => f.write_str("Missing(Soft404)"),
            LivenessVerdict::Uncertain {
                why: UncertainReason::NetworkFailure,
            } => f.write_str("Uncertain(NetworkFailure)"),
            LivenessVerdict::Uncertain {
                why: UncertainReason::Mixed,
            } => f.write_str("Uncertain(Mixed)"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn table_cells() {
        assert_eq!(classify_status(true, true), ResourceStatus::Replicated);
        assert_eq!(classify_status(true, false), ResourceStatus::Vulnerable);
        assert_eq!(classify_status(false, false), ResourceStatus::Unrecoverable);
        assert_eq!(classify_status(false, true), ResourceStatus::Endangered);
    }

    #[test]
    fn classification_is_a_bijection() {
        let image: HashSet<_> = [(true, true), (true, false), (false, true), (false, false)]
            .into_iter()
            .map(|(l, a)| classify_status(l, a))
            .collect();
        assert_eq!(image.len(), 4);
        for status in ResourceStatus::ALL {
            assert!(image.contains(&status));
        }
    }

    #[test]
    fn reasons_match_values() {
        assert_eq!(LivenessVerdict::Live.reason(), VerdictReason::Ok);
        assert_eq!(
            LivenessVerdict::hard_error(404).reason(),
            VerdictReason::HardError(StatusClass::ClientError)
        );
        assert_eq!(LivenessVerdict::soft404().value(), Liveness::Missing);
        assert_eq!(LivenessVerdict::network_failure().value(), Liveness::Uncertain);
        assert_eq!(LivenessVerdict::mixed().is_live(), None);
    }

    #[test]
    fn verdict_json_shape() {
        let json = serde_json::to_string(&LivenessVerdict::hard_error(503)).unwrap();
        assert_eq!(
            json,
            r#"{"verdict":"missing","why":{"reason":"hard_error","class":"server_error"}}"#
        );
        let back: LivenessVerdict = serde_json::from_str(&json).unwrap();
        assert_eq!(back, LivenessVerdict::hard_error(503));
    }
}
