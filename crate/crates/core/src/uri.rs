//! Canonical URI handling.
//!
//! Every URI that crosses a module boundary is a [`CanonicalUri`]: scheme and
//! host lowercased, default port elided, dot-segments resolved and the
//! fragment dropped. Query strings are kept as given, with no parameter
//! sorting.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;
use url::Url;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UriError {
    #[error("malformed URI {raw:?}: {reason}")]
    MalformedUri { raw: String, reason: String },
    #[error("unsupported scheme {scheme:?} in {raw:?} (only http and https)")]
    UnsupportedScheme { raw: String, scheme: String },
}

/// An absolute http(s) URI in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalUri(Url);

impl CanonicalUri {
    pub fn parse(raw: &str) -> Result<Self, UriError> {
        canonicalize(raw)
    }

    pub fn as_str(&self) -> &str {
        self.0.as_str()
    }

    pub fn scheme(&self) -> &str {
        self.0.scheme()
    }

    pub fn host(&self) -> &str {
        self.0.host_str().unwrap_or_default()
    }

    /// Explicit port, `None` when it is the scheme default.
    pub fn port(&self) -> Option<u16> {
        self.0.port()
    }

    pub fn path(&self) -> &str {
        self.0.path()
    }

    pub fn query(&self) -> Option<&str> {
        self.0.query()
    }

    /// `host[:port]`, the key used for per-host politeness.
    pub fn authority(&self) -> String {
        match self.port() {
            Some(port) => format!("{}:{}", self.host(), port),
            None => self.host().to_string(),
        }
    }

    /// Resolve a (possibly relative) reference such as a `Location` header.
    pub fn join(&self, reference: &str) -> Result<Self, UriError> {
        let joined = self.0.join(reference).map_err(|e| UriError::MalformedUri {
            raw: reference.to_string(),
            reason: e.to_string(),
        })?;
        canonicalize(joined.as_str())
    }

    /// Same scheme and authority, with the last path segment replaced.
    pub fn sibling(&self, segment: &str) -> Self {
        let mut url = self.0.clone();
        let dir = match self.path().rfind('/') {
            Some(idx) => &self.path()[..=idx],
            None => "/",
        };
        url.set_path(&format!("{dir}{segment}"));
        url.set_query(None);
        CanonicalUri(url)
    }
}

impl fmt::Display for CanonicalUri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for CanonicalUri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalUri({})", self.as_str())
    }
}

impl FromStr for CanonicalUri {
    type Err = UriError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        canonicalize(s)
    }
}

impl AsRef<str> for CanonicalUri {
    fn as_ref(&self) -> &str {
        self.as_str()
    }
}

impl Serialize for CanonicalUri {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for CanonicalUri {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        canonicalize(&raw).map_err(serde::de::Error::custom)
    }
}

pub fn canonicalize(raw: &str) -> Result<CanonicalUri, UriError> {
    let trimmed = raw.trim();
    let mut url = Url::parse(trimmed).map_err(|e| UriError::MalformedUri {
        raw: raw.to_string(),
        reason: e.to_string(),
    })?;
    match url.scheme() {
        "http" | "https" => {}
        other => {
            return Err(UriError::UnsupportedScheme {
                raw: raw.to_string(),
                scheme: other.to_string(),
            })
        }
    }
    match url.host_str() {
        Some(h) if !h.is_empty() => {}
        _ => {
            return Err(UriError::MalformedUri {
                raw: raw.to_string(),
                reason: "missing host".into(),
            })
        }
    }
    url.set_fragment(None);
    // Credentials never identify a resource.
    let _ = url.set_username("");
    let _ = url.set_password(None);
    Ok(CanonicalUri(url))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalizes_case_port_dots_and_fragment() {
        let uri = canonicalize("HTTP://Example.COM:80/a/../b#frag").unwrap();
        assert_eq!(uri.as_str(), "http://example.com/b");
        assert_eq!(uri.scheme(), "http");
        assert_eq!(uri.host(), "example.com");
        assert_eq!(uri.port(), None);
        assert_eq!(uri.path(), "/b");
    }

    #[test]
    fn canonical_input_is_unchanged() {
        let uri = canonicalize("https://example.com/p?q=1").unwrap();
        assert_eq!(uri.as_str(), "https://example.com/p?q=1");
        assert_eq!(uri.query(), Some("q=1"));
    }

    #[test]
    fn query_order_preserved() {
        let uri = canonicalize("http://example.com/s?b=2&a=1").unwrap();
        assert_eq!(uri.query(), Some("b=2&a=1"));
    }

    #[test]
    fn non_default_port_kept() {
        let uri = canonicalize("https://example.com:8443/x").unwrap();
        assert_eq!(uri.port(), Some(8443));
        assert_eq!(uri.authority(), "example.com:8443");
    }

    #[test]
    fn rejects_garbage_and_other_schemes() {
        assert!(matches!(
            canonicalize("notauri"),
            Err(UriError::MalformedUri { .. })
        ));
        assert!(matches!(
            canonicalize("ftp://example.com/file"),
            Err(UriError::UnsupportedScheme { .. })
        ));
        assert!(matches!(
            canonicalize("mailto:someone@example.com"),
            Err(UriError::UnsupportedScheme { .. })
        ));
    }

    #[test]
    fn sibling_replaces_last_segment() {
        let uri = canonicalize("http://example.com/a/b/page.html?x=1").unwrap();
        assert_eq!(uri.sibling("zzz").as_str(), "http://example.com/a/b/zzz");
        let root = canonicalize("http://example.com").unwrap();
        assert_eq!(root.sibling("zzz").as_str(), "http://example.com/zzz");
    }

    #[test]
    fn join_resolves_relative_location() {
        let uri = canonicalize("http://example.com/a/b").unwrap();
        assert_eq!(
            uri.join("../c#x").unwrap().as_str(),
            "http://example.com/c"
        );
        assert_eq!(
            uri.join("https://other.org/").unwrap().as_str(),
            "https://other.org/"
        );
    }

    #[test]
    fn serde_goes_through_canonicalize() {
        let uri: CanonicalUri = serde_json::from_str("\"HTTP://A.com/x#y\"").unwrap();
        assert_eq!(serde_json::to_string(&uri).unwrap(), "\"http://a.com/x\"");
    }

    fn raw_uri() -> impl Strategy<Value = String> {
        (
            prop_oneof![Just("http"), Just("https"), Just("HTTP"), Just("HtTpS")],
            "[a-zA-Z][a-zA-Z0-9-]{0,10}(\\.[a-zA-Z]{2,5}){1,2}",
            prop::option::of(prop_oneof![Just(80u16), Just(443u16), 1u16..65535]),
            prop::collection::vec(
                prop_oneof![
                    "[a-zA-Z0-9_~-]{1,8}".prop_map(|s| s),
                    Just(".".to_string()),
                    Just("..".to_string()),
                    "%[0-9A-F]{2}".prop_map(|s| s),
                ],
                0..5,
            ),
            prop::option::of("[a-z0-9=&]{0,12}"),
            prop::option::of("[a-z0-9]{0,6}"),
        )
            .prop_map(|(scheme, host, port, segments, query, frag)| {
                let mut s = format!("{scheme}://{host}");
                if let Some(p) = port {
                    s.push_str(&format!(":{p}"));
                }
                for seg in segments {
                    s.push('/');
                    s.push_str(&seg);
                }
                if let Some(q) = query {
                    s.push('?');
                    s.push_str(&q);
                }
                if let Some(f) = frag {
                    s.push('#');
                    s.push_str(&f);
                }
                s
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn canonicalize_is_idempotent(raw in raw_uri()) {
            let once = canonicalize(&raw).unwrap();
            let twice = canonicalize(once.as_str()).unwrap();
            prop_assert_eq!(&once, &twice);
            prop_assert!(!once.as_str().contains('#'));
            prop_assert!(once.scheme() == "http" || once.scheme() == "https");
        }
    }
}
