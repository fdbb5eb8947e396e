use unicode_normalization::UnicodeNormalization;

fn is_uri_token(token: &str) -> bool {
    let lower = token.to_lowercase();
    let lower = lower.trim_start_matches(|c: char| !c.is_alphanumeric());
    if lower.contains("://") || lower.starts_with("www.") {
        return true;
    }
    // Scheme-less short links such as t.co/abc or bit.ly/xyz.
    match lower.split_once('/') {
        Some((host, _)) => {
            host.contains('.')
                && host
                    .rsplit('.')
                    .next()
                    .is_some_and(|tld| tld.len() >= 2 && tld.chars().all(|c| c.is_ascii_alphabetic()))
                && host.chars().all(|c| c.is_alphanumeric() || c == '.' || c == '-')
        }
        None => false,
    }
}

fn trim_punct<'a>(s: &'a str, keep: &[char]) -> &'a str {
    s.trim_matches(|c: char| !c.is_alphanumeric() && !keep.contains(&c))
}

/// Strip mentions, URIs and retweet markers from a post, keep hashtag words
/// without the `#`, trim punctuation around each word, lowercase, and
/// collapse whitespace.
pub fn clean_post_text(text: &str) -> String {
    let normalized: String = text.nfc().collect();
    let mut words = Vec::new();
    for token in normalized.split_whitespace() {
        if is_uri_token(token) {
            continue;
        }
        let trimmed = trim_punct(token, &['#', '@']);
        if trimmed.starts_with('@') {
            continue;
        }
        let word = trim_punct(trimmed.trim_start_matches('#'), &[]);
        if word.is_empty() || word.eq_ignore_ascii_case("rt") || word.eq_ignore_ascii_case("mt") {
            continue;
        }
        words.push(word.to_lowercase());
    }
    words.join(" ")
}

/// Lowercased hashtags without the `#`, in order of appearance.
pub fn extract_hashtags(text: &str) -> Vec<String> {
    prefixed_tokens(text, '#')
}

/// Lowercased handles without the `@`, in order of appearance.
pub fn extract_mentions(text: &str) -> Vec<String> {
    prefixed_tokens(text, '@')
}

fn prefixed_tokens(text: &str, prefix: char) -> Vec<String> {
    text.split_whitespace()
        .filter(|t| !is_uri_token(t))
        .filter_map(|t| {
            let t = trim_punct(t, &[prefix]);
            let rest = t.strip_prefix(prefix)?;
            let rest = rest.trim_start_matches(prefix);
            let end = rest
                .find(|c: char| !(c.is_alphanumeric() || c == '_'))
                .unwrap_or(rest.len());
            let word = &rest[..end];
            (!word.is_empty()).then(|| word.to_lowercase())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cleaning_examples() {
        assert_eq!(
            clean_post_text("RT @newsdesk: Arab Spring content http://t.co/0A1q2fzz is lost"),
            "arab spring content is lost"
        );
        assert_eq!(clean_post_text(""), "");
        assert_eq!(clean_post_text("#jan25 revolution"), "jan25 revolution");
    }

    #[test]
    fn cleaning_details() {
        assert_eq!(
            clean_post_text("@newsdesk You may have seen this already. Arab Spring digital content is apparently being lost."),
            "you may have seen this already arab spring digital content is apparently being lost"
        );
        assert_eq!(clean_post_text("MT: (via @ndiipp) see www.loc.gov and t.co/xyz!"), "via see and");
        assert_eq!(clean_post_text("RT RT @a @b http://x.y/z"), "");
        assert_eq!(clean_post_text("don't  stop   «believing»"), "don't stop believing");
        assert_eq!(clean_post_text("and/or 3.5 stars"), "and/or 3.5 stars");
    }

    #[test]
    fn tags_and_mentions() {
        let text = "RT @NewsDesk: #Jan25 #egypt, lost (@ndiipp) http://t.co/#frag";
        assert_eq!(extract_hashtags(text), vec!["jan25", "egypt"]);
        assert_eq!(extract_mentions(text), vec!["newsdesk", "ndiipp"]);
    }
}
