pub mod check;
pub mod evaluate;
pub mod fit;
pub mod mine;
pub mod predict;
pub mod recommend;
pub mod signature;
pub mod timemap;

/// Quote a CSV field when it needs it.
pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
