//! Main-content extraction from HTML.
//!
//! A forgiving scanner splits the page into blocks at block-level tags and
//! keeps the blocks that look like prose: at least [`MIN_BLOCK_WORDS`] words
//! and a link-word share under [`MAX_LINK_DENSITY`]. The longest block is
//! always kept.

use serde::{Deserialize, Serialize};

pub const MIN_BLOCK_WORDS: usize = 10;
pub const MAX_LINK_DENSITY: f64 = 0.33;

pub trait ContentExtractor: Send + Sync {
    fn extract(&self, html: &str) -> String;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DensityExtractor;

impl ContentExtractor for DensityExtractor {
    fn extract(&self, html: &str) -> String {
        extract_main_text(html)
    }
}

/// Keeps all visible text.
#[derive(Debug, Clone, Copy, Default)]
pub struct PlainTextExtractor;

impl ContentExtractor for PlainTextExtractor {
    fn extract(&self, html: &str) -> String {
        strip_markup(html)
    }
}

/// Extractor selection by configuration key.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractorKind {
    #[default]
    Density,
    Plain,
}

impl ExtractorKind {
    pub fn parse(key: &str) -> Option<Self> {
        match key {
            "density" => Some(ExtractorKind::Density),
            "plain" => Some(ExtractorKind::Plain),
            _ => None,
        }
    }

    pub fn build(self) -> Box<dyn ContentExtractor> {
        match self {
            ExtractorKind::Density => Box::new(DensityExtractor),
            ExtractorKind::Plain => Box::new(PlainTextExtractor),
        }
    }
}

#[derive(Debug, Default)]
struct Block {
    text: String,
    link_text: String,
}

impl Block {
    fn words(&self) -> usize {
        self.text.split_whitespace().count()
    }

    fn link_words(&self) -> usize {
        self.link_text.split_whitespace().count()
    }

    fn normalized(&self) -> String {
        self.text.split_whitespace().collect::<Vec<_>>().join(" ")
    }
}

pub fn extract_main_text(html: &str) -> String {
    let blocks: Vec<Block> = scan(html)
        .into_iter()
        .filter(|b| b.words() > 0)
        .collect();
    let longest = blocks
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| a.words().cmp(&b.words()).then(ib.cmp(ia)))
        .map(|(i, _)| i);
    blocks
        .iter()
        .enumerate()
        .filter(|(i, b)| {
            let words = b.words();
            let density = b.link_words() as f64 / words as f64;
            Some(*i) == longest || (words >= MIN_BLOCK_WORDS && density < MAX_LINK_DENSITY)
        })
        .map(|(_, b)| b.normalized())
        .collect::<Vec<_>>()
        .join("\n")
}

/// All visible text, one line per block.
pub fn strip_markup(html: &str) -> String {
    scan(html)
        .iter()
        .map(Block::normalized)
        .filter(|t| !t.is_empty())
        .collect::<Vec<_>>()
        .join("\n")
}

const SKIPPED: &[&str] = &["script", "style", "noscript", "template", "svg", "iframe"];

const BLOCK_TAGS: &[&str] = &[
    "address", "article", "aside", "blockquote", "body", "caption", "dd", "details", "dialog",
    "div", "dl", "dt", "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3",
    "h4", "h5", "h6", "head", "header", "hr", "html", "li", "main", "menu", "nav", "ol", "p",
    "pre", "section", "summary", "table", "tbody", "td", "tfoot", "th", "thead", "title", "tr",
    "ul",
];

fn scan(html: &str) -> Vec<Block> {
    let mut blocks = Vec::new();
    let mut current = Block::default();
    let mut link_depth = 0usize;
    let mut rest = html;

    while !rest.is_empty() {
        let Some(lt) = rest.find('<') else {
            push_text(&mut current, rest, link_depth > 0);
            break;
        };
        push_text(&mut current, &rest[..lt], link_depth > 0);
        rest = &rest[lt..];

        if rest.starts_with("<!--") {
            rest = match rest[4..].find("-->") {
                Some(end) => &rest[4 + end + 3..],
                None => "",
            };
            continue;
        }
        if rest.starts_with("<!") || rest.starts_with("<?") {
            rest = match rest.find('>') {
                Some(end) => &rest[end + 1..],
                None => "",
            };
            continue;
        }

        let Some(tag) = parse_tag(rest) else {
            // A bare '<' in text.
            push_text(&mut current, "<", link_depth > 0);
            rest = &rest[1..];
            continue;
        };
        rest = &rest[tag.len..];

        if !tag.closing && SKIPPED.contains(&tag.name.as_str()) {
            rest = skip_element(rest, &tag.name);
            continue;
        }
        if tag.name == "a" {
            if tag.closing {
                link_depth = link_depth.saturating_sub(1);
            } else if !tag.self_closing {
                link_depth += 1;
            }
        } else if tag.name == "br" {
            current.text.push(' ');
        } else if BLOCK_TAGS.contains(&tag.name.as_str()) {
            blocks.push(std::mem::take(&mut current));
        }
    }
    blocks.push(current);
    blocks
}

fn push_text(block: &mut Block, raw: &str, in_link: bool) {
    if raw.is_empty() {
        return;
    }
    let text = decode_entities(raw);
    block.text.push_str(&text);
    if in_link {
        block.link_text.push(' ');
        block.link_text.push_str(&text);
    }
}

struct Tag {
    name: String,
    closing: bool,
    self_closing: bool,
    len: usize,
}

fn parse_tag(s: &str) -> Option<Tag> {
    let bytes = s.as_bytes();
    let mut i = 1;
    let closing = bytes.get(i) == Some(&b'/');
    if closing {
        i += 1;
    }
    if !bytes.get(i).is_some_and(u8::is_ascii_alphabetic) {
        return None;
    }
    let start = i;
    while bytes.get(i).is_some_and(|b| b.is_ascii_alphanumeric()) {
        i += 1;
    }
    let name = s[start..i].to_ascii_lowercase();
    let mut quote: Option<u8> = None;
    while i < bytes.len() {
        let b = bytes[i];
        match quote {
            Some(q) if b == q => quote = None,
            Some(_) => {}
            None if b == b'"' || b == b'\'' => quote = Some(b),
            None if b == b'>' => {
                let self_closing = i > 0 && bytes[i - 1] == b'/';
                return Some(Tag {
                    name,
                    closing,
                    self_closing,
                    len: i + 1,
                });
            }
            None => {}
        }
        i += 1;
    }
    // Unterminated tag swallows the rest of the input.
    Some(Tag {
        name,
        closing,
        self_closing: false,
        len: s.len(),
    })
}

fn skip_element<'a>(rest: &'a str, name: &str) -> &'a str {
    let lower = rest.to_ascii_lowercase();
    let close = format!("</{name}");
    match lower.find(&close) {
        Some(pos) => match rest[pos..].find('>') {
            Some(end) => &rest[pos + end + 1..],
            None => "",
        },
        None => "",
    }
}

fn decode_entities(raw: &str) -> String {
    if !raw.contains('&') {
        return raw.to_string();
    }
    let mut out = String::with_capacity(raw.len());
    let mut rest = raw;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        rest = &rest[amp..];
        let decoded = rest[1..].find(';').filter(|&semi| semi <= 10).and_then(|semi| {
            let entity = &rest[1..1 + semi];
            decode_entity(entity).map(|c| (c, semi + 2))
        });
        match decoded {
            Some((c, consumed)) => {
                out.push(c);
                rest = &rest[consumed..];
            }
            None => {
                out.push('&');
                rest = &rest[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

fn decode_entity(entity: &str) -> Option<char> {
    if let Some(num) = entity.strip_prefix('#') {
        let code = match num.strip_prefix(['x', 'X']) {
            Some(hex) => u32::from_str_radix(hex, 16).ok()?,
            None => num.parse().ok()?,
        };
        return char::from_u32(code);
    }
    Some(match entity {
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        "nbsp" => ' ',
        "mdash" => '\u{2014}',
        "ndash" => '\u{2013}',
        "hellip" => '\u{2026}',
        "rsquo" => '\u{2019}',
        "lsquo" => '\u{2018}',
        "rdquo" => '\u{201d}',
        "ldquo" => '\u{201c}',
        _ => return None,
    })
}
