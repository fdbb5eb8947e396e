use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use thiserror::Error;

use super::tokenize;

const BUNDLED: &str = include_str!("../stopwords_en.txt");
const BUNDLED_ID: &str = "english-174-v1";
const REQUIRED: [&str; 7] = ["the", "and", "of", "to", "a", "in", "is"];

#[derive(Debug, Error)]
pub enum StopwordError {
    #[error("cannot read stopword file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("stopword list {source_id} is missing required word {word:?}")]
    MissingRequired { source_id: String, word: String },
}

/// A fixed stopword set.
///
/// Entries are stored as written and also as the tokenizer would split them,
/// so `don't` contributes `don't` and `don`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopwordList {
    words: BTreeSet<String>,
    source_id: String,
}

impl StopwordList {
    /// The bundled 174-word English list.
    pub fn english() -> Self {
        Self::from_lines(BUNDLED, BUNDLED_ID).expect("bundled list is valid")
    }

    pub fn from_lines(text: &str, source_id: &str) -> Result<Self, StopwordError> {
        let mut words = BTreeSet::new();
        for line in text.lines() {
            let word = line.trim().to_lowercase();
            if word.is_empty() || word.starts_with('#') {
                continue;
            }
            words.extend(tokenize(&word));
            words.insert(word);
        }
        for required in REQUIRED {
            if !words.contains(required) {
                return Err(StopwordError::MissingRequired {
                    source_id: source_id.to_string(),
                    word: required.to_string(),
                });
            }
        }
        Ok(StopwordList {
            words,
            source_id: source_id.to_string(),
        })
    }

    /// Plain-text file, one word per line. The file name becomes the source id.
    pub fn from_file(path: &Path) -> Result<Self, StopwordError> {
        let text = fs::read_to_string(path).map_err(|source| StopwordError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let id = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        Self::from_lines(&text, &id)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

impl Default for StopwordList {
    fn default() -> Self {
        Self::english()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_list_has_core_words() {
        let list = StopwordList::english();
        for w in REQUIRED {
            assert!(list.contains(w), "{w}");
        }
        assert!(list.contains("don"));
        assert!(list.contains("don't"));
        assert!(!list.contains("revolution"));
        assert_eq!(list.source_id(), BUNDLED_ID);
    }

    #[test]
    fn list_without_required_words_is_rejected() {
        let err = StopwordList::from_lines("foo\nbar\n", "tiny").unwrap_err();
        assert!(matches!(err, StopwordError::MissingRequired { .. }));
    }
}
