use std::collections::HashMap;

use super::TweetDocument;

/// Longest token n-gram shared by at least two phrases.
///
/// Ties on length go to the n-gram found in more phrases, then to the
/// lexicographically smallest. The count is the number of phrases containing
/// it. Returns `("", 0)` when no two phrases share a token.
pub fn longest_common_phrase(doc: &TweetDocument) -> (String, usize) {
    let phrases: Vec<Vec<&str>> = doc
        .phrases
        .iter()
        .map(|p| p.split_whitespace().collect())
        .collect();
    if phrases.len() < 2 {
        return (String::new(), 0);
    }

    // A shared n-gram implies its (n-1)-gram prefix is shared, so the
    // predicate "some n-gram is shared" is monotone in n.
    let mut lengths: Vec<usize> = phrases.iter().map(Vec::len).collect();
    lengths.sort_unstable_by(|a, b| b.cmp(a));
    let (mut lo, mut hi) = (0usize, lengths[1]);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if best_shared(&phrases, mid).is_some() {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    if lo == 0 {
        return (String::new(), 0);
    }
    best_shared(&phrases, lo).expect("length verified by search")
}

fn best_shared(phrases: &[Vec<&str>], n: usize) -> Option<(String, usize)> {
    let mut seen: HashMap<&[&str], (usize, usize)> = HashMap::new();
    for (idx, tokens) in phrases.iter().enumerate() {
        if tokens.len() < n {
            continue;
        }
        for window in tokens.windows(n) {
            let entry = seen.entry(window).or_insert((0, usize::MAX));
            if entry.1 != idx {
                entry.0 += 1;
                entry.1 = idx;
            }
        }
    }
    seen.into_iter()
        .filter(|(_, (count, _))| *count >= 2)
        .map(|(gram, (count, _))| (gram.join(" "), count))
        .min_by(|(ga, ca), (gb, cb)| cb.cmp(ca).then_with(|| ga.cmp(gb)))
}
