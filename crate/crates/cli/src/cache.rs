use std::fs::{self, File, OpenOptions, TryLockError};
use std::io::Write;
use std::path::{Path, PathBuf};

use relink_core::uri::CanonicalUri;
use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Probes,
    Timemaps,
    Corpora,
    Reports,
}

impl Kind {
    const ALL: [Kind; 4] = [Kind::Probes, Kind::Timemaps, Kind::Corpora, Kind::Reports];

    fn dir(self) -> &'static str {
        match self {
            Kind::Probes => "probes",
            Kind::Timemaps => "timemaps",
            Kind::Corpora => "corpora",
            Kind::Reports => "reports",
        }
    }
}

/// On-disk records keyed by the SHA-256 of the canonical URI. One process
/// at a time: opening takes an exclusive lock on `.lock`.
pub struct Cache {
    root: PathBuf,
    _lock: File,
}

pub fn key(uri: &CanonicalUri) -> String {
    hex::encode(Sha256::digest(uri.as_str().as_bytes()))
}

impl Cache {
    pub fn open(root: &Path) -> CliResult<Cache> {
        let fail = |what: &str, e: std::io::Error| {
            CliError::Cache(format!("{what} {}: {e}", root.display()))
        };
        for kind in Kind::ALL {
            fs::create_dir_all(root.join(kind.dir())).map_err(|e| fail("cannot create", e))?;
        }
        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(root.join(".lock"))
            .map_err(|e| fail("cannot open lock in", e))?;
        match lock.try_lock() {
            Ok(()) => {}
            Err(TryLockError::WouldBlock) => {
                return Err(CliError::Cache(format!(
                    "{} is in use by another relink process",
                    root.display()
                )))
            }
            Err(TryLockError::Error(e)) => return Err(fail("cannot lock", e)),
        }
        Ok(Cache {
            root: root.to_path_buf(),
            _lock: lock,
        })
    }

    pub fn path(&self, kind: Kind, uri: &CanonicalUri, ext: &str) -> PathBuf {
        self.root.join(kind.dir()).join(format!("{}.{ext}", key(uri)))
    }

    pub fn dir(&self, kind: Kind) -> PathBuf {
        self.root.join(kind.dir())
    }

    pub fn write_json<T: Serialize>(&self, kind: Kind, uri: &CanonicalUri, value: &T) -> CliResult<PathBuf> {
        let path = self.path(kind, uri, "json");
        let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Cache(e.to_string()))?;
        fs::write(&path, text + "\n")
            .map_err(|e| CliError::Cache(format!("{}: {e}", path.display())))?;
        Ok(path)
    }

    pub fn read_json<T: DeserializeOwned>(&self, kind: Kind, uri: &CanonicalUri) -> Option<T> {
        let path = self.path(kind, uri, "json");
        let text = fs::read_to_string(&path).ok()?;
        match serde_json::from_str(&text) {
            Ok(v) => Some(v),
            Err(e) => {
                log::warn!("ignoring unreadable cache entry {}: {e}", path.display());
                None
            }
        }
    }

    pub fn append_jsonl<T: Serialize>(&self, kind: Kind, uri: &CanonicalUri, values: &[T]) -> CliResult<()> {
        let path = self.path(kind, uri, "jsonl");
        let fail = |e: String| CliError::Cache(format!("{}: {e}", path.display()));
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| fail(e.to_string()))?;
        for v in values {
            let line = serde_json::to_string(v).map_err(|e| fail(e.to_string()))?;
            writeln!(file, "{line}").map_err(|e| fail(e.to_string()))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_open_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let first = Cache::open(dir.path()).unwrap();
        assert!(matches!(Cache::open(dir.path()), Err(CliError::Cache(_))));
        drop(first);
        Cache::open(dir.path()).unwrap();
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let uri = CanonicalUri::parse("http://a.test/x").unwrap();
        assert_eq!(cache.read_json::<Vec<u32>>(Kind::Corpora, &uri), None);
        cache.write_json(Kind::Corpora, &uri, &vec![1, 2]).unwrap();
        assert_eq!(cache.read_json::<Vec<u32>>(Kind::Corpora, &uri), Some(vec![1, 2]));
        cache.append_jsonl(Kind::Probes, &uri, &[1, 2]).unwrap();
        cache.append_jsonl(Kind::Probes, &uri, &[3]).unwrap();
        let text = fs::read_to_string(cache.path(Kind::Probes, &uri, "jsonl")).unwrap();
        assert_eq!(text, "1\n2\n3\n");
        assert_eq!(key(&uri).len(), 64);
    }
}
