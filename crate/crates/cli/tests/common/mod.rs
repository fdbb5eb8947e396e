#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const FIXED_CLOCK: &str = "2013-03-01T00:00:00Z";

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").canonicalize().unwrap()
}

/// Write a config into `dir` pointing at a fixture set, with its own cache.
pub fn config(dir: &Path, set: &str, extra: &str) -> PathBuf {
    let base = fixtures().join(set);
    let mut text = format!(
        "cache_dir = {:?}\ntimemap_endpoint = \"http://timetravel.example.org\"\nrepeat_spacing_secs = 0\nper_host_delay_ms = 0\ntimeout_secs = 2\n",
        dir.join("cache")
    );
    for (key, file) in [
        ("social_fixture", "posts.jsonl"),
        ("search_fixture", "search.json"),
        ("pages_fixture", "pages.jsonl"),
    ] {
        if base.join(file).is_file() {
            text.push_str(&format!("{key} = {:?}\n", base.join(file)));
        }
    }
    text.push_str(extra);
    let path = dir.join("relink.toml");
    fs::write(&path, text).unwrap();
    path
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn relink(config: &Path, args: &[&str]) -> Run {
    let out: Output = Command::new(env!("CARGO_BIN_EXE_relink"))
        .arg("--config")
        .arg(config)
        .args(args)
        .output()
        .expect("relink binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn json(run: &Run) -> serde_json::Value {
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    serde_json::from_str(&run.stdout).unwrap_or_else(|e| panic!("{e}: {}", run.stdout))
}
pub mod server;
