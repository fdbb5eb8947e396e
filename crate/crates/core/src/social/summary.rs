use serde::{Deserialize, Serialize};

use super::{
    build_tweet_document, clean_post_text, extract_cooccurring, longest_common_phrase,
    ranked_by_count, SocialCorpus,
};
use crate::uri::CanonicalUri;

/// Aggregate context of a corpus, serialized with human-readable keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextSummary {
    #[serde(rename = "URI")]
    pub uri: CanonicalUri,
    #[serde(rename = "Related Tweet Count")]
    pub related_tweet_count: usize,
    /// `#tag`, most frequent first.
    #[serde(rename = "Related Hashtags")]
    pub related_hashtags: Vec<String>,
    /// `@author`, most active first.
    #[serde(rename = "Users who talked about this")]
    pub users: Vec<String>,
    /// Every link as shared, most frequent first.
    #[serde(rename = "All associated unique links")]
    pub unique_links: Vec<String>,
    #[serde(rename = "All other links associated")]
    pub cooccurring_links: Vec<CanonicalUri>,
    #[serde(rename = "Most frequent link appearing")]
    pub most_frequent_link: String,
    #[serde(rename = "Number of times the Most frequent link appearing")]
    pub most_frequent_link_count: usize,
    #[serde(rename = "Most frequent tweet posted and reposted")]
    pub most_frequent_tweet: String,
    #[serde(rename = "Number of times the Most frequent tweet appearing")]
    pub most_frequent_tweet_count: usize,
    #[serde(rename = "The longest common phrase appearing")]
    pub longest_common_phrase: String,
    #[serde(rename = "Number of times the Most common phrase appearing")]
    pub longest_common_phrase_count: usize,
    /// The shortest post containing the longest common phrase.
    #[serde(rename = "Best replacement tweet")]
    pub best_tweet: String,
}

pub fn summarize_context(corpus: &SocialCorpus) -> ContextSummary {
    let posts = &corpus.posts;

    let per_post = |f: &dyn Fn(&super::SocialPost) -> Vec<String>| {
        ranked_by_count(posts.iter().map(|p| {
            let mut items = f(p);
            items.sort();
            items.dedup();
            items
        }))
    };

    let hashtags = per_post(&|p| p.hashtags.clone());
    let users = per_post(&|p| vec![p.author.clone()]);
    let links = per_post(&|p| p.shared_links.clone());
    let (most_frequent_link, most_frequent_link_count) = links.first().cloned().unwrap_or_default();

    // Reposts compare by cleaned text; the shown text is the smallest raw
    // variant so the result does not depend on input order.
    let cleaned: Vec<(String, &str)> = posts
        .iter()
        .map(|p| (clean_post_text(&p.text), p.text.as_str()))
        .filter(|(c, _)| !c.is_empty())
        .collect();
    let tweets = ranked_by_count(cleaned.iter().map(|(c, _)| [c.clone()]));
    let (most_frequent_tweet, most_frequent_tweet_count) = match tweets.first() {
        Some((text, count)) => {
            let raw = cleaned
                .iter()
                .filter(|(c, _)| c == text)
                .map(|(_, raw)| *raw)
                .min()
                .unwrap_or_default();
            (raw.to_string(), *count)
        }
        None => (String::new(), 0),
    };

    let doc = build_tweet_document(corpus);
    let (phrase, phrase_count) = longest_common_phrase(&doc);
    let best_tweet = if phrase.is_empty() {
        String::new()
    } else {
        let padded = format!(" {phrase} ");
        cleaned
            .iter()
            .filter(|(c, _)| format!(" {c} ").contains(&padded))
            .map(|(_, raw)| *raw)
            .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
            .unwrap_or_default()
            .to_string()
    };

    ContextSummary {
        uri: corpus.target.clone(),
        related_tweet_count: posts.len(),
        related_hashtags: hashtags.into_iter().map(|(t, _)| format!("#{t}")).collect(),
        users: users.into_iter().map(|(u, _)| format!("@{u}")).collect(),
        unique_links: links.into_iter().map(|(l, _)| l).collect(),
        cooccurring_links: extract_cooccurring(corpus, &corpus.target),
        most_frequent_link,
        most_frequent_link_count,
        most_frequent_tweet,
        most_frequent_tweet_count,
        longest_common_phrase: phrase,
        longest_common_phrase_count: phrase_count,
        best_tweet,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::social::tests::post;

    #[test]
    fn empty_corpus() {
        let corpus = SocialCorpus {
            target: CanonicalUri::parse("http://t.test/").unwrap(),
            posts: vec![],
        };
        let s = summarize_context(&corpus);
        assert_eq!(s.related_tweet_count, 0);
        assert_eq!(s.most_frequent_link_count, 0);
        assert_eq!(s.longest_common_phrase, "");
        assert!(s.cooccurring_links.is_empty());
    }

    #[test]
    fn small_corpus() {
        let t = "http://t.test/";
        let corpus = SocialCorpus {
            target: CanonicalUri::parse(t).unwrap(),
            posts: vec![
                post("1", "RT @a: Egypt revolution lost #jan25", &[t]),
                post("2", "Egypt revolution lost #Jan25 #egypt", &[t, "http://o.test/"]),
                post("3", "so Egypt revolution lost", &[t]),
            ],
        };
        let s = summarize_context(&corpus);
        assert_eq!(s.related_tweet_count, 3);
        assert_eq!(s.related_hashtags, vec!["#jan25", "#egypt"]);
        assert_eq!(s.most_frequent_tweet_count, 1);
        assert_eq!(s.longest_common_phrase, "egypt revolution lost jan25");
        assert_eq!(s.longest_common_phrase_count, 2);
        assert_eq!(s.best_tweet, "Egypt revolution lost #Jan25 #egypt");
        assert_eq!(s.most_frequent_link, t);
        assert_eq!(s.most_frequent_link_count, 3);
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(json["Related Tweet Count"], 3);
        assert_eq!(json["All other links associated"][0], "http://o.test/");
    }
}
