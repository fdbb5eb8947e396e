//! The stemmer against Martin Porter's published test vocabulary
//! (23,531 words with reference stems).

use relink_core::textpipe::stem;

const VOCABULARY: &str = include_str!("data/porter_voc.txt");
const REFERENCE: &str = include_str!("data/porter_output.txt");

/// Words where the reference output comes from the later `bli -> ble` and
/// `logi -> log` step-2 rules instead of the original `abli -> able`.
const EXPECTED_DIFFERENCES: &[(&str, &str, &str)] = &[
    ("apology", "apolog", "apologi"),
    ("assemblies", "assembl", "assembli"),
    ("assembly", "assembl", "assembli"),
    ("corruptibly", "corrupt", "corruptibli"),
    ("dissembly", "dissembl", "dissembli"),
    ("dumbly", "dumbl", "dumbli"),
    ("forcibly", "forcibl", "forcibli"),
    ("horribly", "horribl", "horribli"),
    ("humbly", "humbl", "humbli"),
    ("ignobly", "ignobl", "ignobli"),
    ("infallibly", "infal", "infallibli"),
    ("nimbly", "nimbl", "nimbli"),
    ("possibly", "possibl", "possibli"),
    ("sensibly", "sensibl", "sensibli"),
    ("terribly", "terribl", "terribli"),
    ("visibly", "visibl", "visibli"),
];

#[test]
fn agrees_with_published_vocabulary() {
    let words: Vec<&str> = VOCABULARY.lines().collect();
    let reference: Vec<&str> = REFERENCE.lines().collect();
    assert_eq!(words.len(), 23_531);
    assert_eq!(words.len(), reference.len());

    let mismatches: Vec<(&str, &str, String)> = words
        .iter()
        .zip(&reference)
        .filter_map(|(&w, &r)| {
            let got = stem(w);
            (got != r).then_some((w, r, got))
        })
        .collect();

    let agreement = 1.0 - mismatches.len() as f64 / words.len() as f64;
    println!(
        "porter agreement: {:.4}% ({} of {} differ)",
        agreement * 100.0,
        mismatches.len(),
        words.len()
    );
    assert!(agreement >= 0.999, "agreement {agreement}");

    let listed: Vec<(&str, &str, String)> = EXPECTED_DIFFERENCES
        .iter()
        .map(|&(w, r, g)| (w, r, g.to_string()))
        .collect();
    assert_eq!(mismatches, listed);
}
