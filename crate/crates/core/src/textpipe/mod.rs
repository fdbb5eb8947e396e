//! Deterministic text processing shared by signature building and ranking.

mod extract;
mod porter;
mod stopwords;
mod vector;

pub use extract::{
    extract_main_text, strip_markup, ContentExtractor, DensityExtractor, ExtractorKind,
    PlainTextExtractor,
};
pub use porter::stem;
pub use stopwords::{StopwordError, StopwordList};
pub use vector::{cosine, cosine_weighted, term_vector, IdfTable, TermVector, WeightedVector};

use unicode_normalization::UnicodeNormalization;

/// NFC-normalize and lowercase `text`, then split on every run of
/// non-alphanumeric characters. Tokens shorter than two characters are
/// dropped.
pub fn tokenize(text: &str) -> Vec<String> {
    let folded: String = text.nfc().collect::<String>().to_lowercase();
    folded
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= 2)
        .map(str::to_string)
        .collect()
}
