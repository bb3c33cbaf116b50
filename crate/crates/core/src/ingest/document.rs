//! Raw document parsing: SGML-lite tagged newswire files in two dialects.
//!
//! The WSJ-style dialect uses `<HL>`, `<DD>`, `<SO>` and `<DATELINE>`;
//! the NYT/APW-style dialect uses `<HEADLINE>` and `<DATE_TIME>`. The body
//! sits between `<TEXT>` tags; several fallback rules recover documents
//! where the tagging is inconsistent or absent.

use super::overrides::DocOverrides;
use super::{IngestError, Resolution, SourceDocument};

/// Tag dialect of a raw file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dialect {
    /// `<HL>` / `<DD>` / `<SO>` / `<DATELINE>`
    Wsj,
    /// `<HEADLINE>` / `<DATE_TIME>`
    Newswire,
}

/// Byte encoding the raw file was decoded from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Encoding {
    Utf8,
    Latin1,
}

/// Knobs for [`parse_document`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions<'a> {
    pub dialect_hint: Option<Dialect>,
    /// Document identifier to use when the file carries no `<DOCNO>`.
    pub fallback_doc_id: Option<&'a str>,
    /// Manual corrections, consulted before heuristics.
    pub overrides: Option<&'a DocOverrides>,
}

/// Parses a raw tagged document into a [`SourceDocument`] (sentence index
/// not yet populated — see [`super::build_sentence_index`]).
pub fn parse_document(
    raw: &[u8],
    options: &ParseOptions<'_>,
) -> Result<SourceDocument, IngestError> {
    let (content, encoding) = decode(raw);

    let doc_id = tag_inner(&content, "DOCNO")
        .map(|s| s.trim().to_owned())
        .or_else(|| options.fallback_doc_id.map(str::to_owned))
        .ok_or_else(|| IngestError::UnrecoverableStructure {
            doc_id: "<unknown>".into(),
            reason: "no <DOCNO> tag and no fallback identifier".into(),
        })?;

    let mut doc = SourceDocument {
        doc_id,
        title: None,
        dateline: None,
        created: None,
        source_name: None,
        text: String::new(),
        sentences: Vec::new(),
        headline_span: None,
        diagnostics: Vec::new(),
        encoding,
    };

    // Headline tag depends on the dialect; without a hint, try both.
    let headline = match options.dialect_hint {
        Some(Dialect::Wsj) => tag_inner(&content, "HL"),
        Some(Dialect::Newswire) => tag_inner(&content, "HEADLINE"),
        None => tag_inner(&content, "HL").or_else(|| tag_inner(&content, "HEADLINE")),
    };
    match headline {
        Some(inner) => doc.title = Some(normalize_inline(inner)),
        None => {
            if let Some(title) = options.overrides.and_then(|o| o.title.clone()) {
                doc.title = Some(title);
                doc.record(4, Resolution::ManualInputRequired);
            } else {
                doc.record(4, Resolution::AutoFixed);
            }
        }
    }

    let date_time = match options.dialect_hint {
        Some(Dialect::Wsj) => None,
        _ => tag_inner(&content, "DATE_TIME"),
    };
    doc.dateline = tag_inner(&content, "DATELINE")
        .or(date_time)
        .map(normalize_inline);

    doc.created = tag_inner(&content, "DD")
        .and_then(|s| parse_wsj_date(s.trim()))
        .or_else(|| date_time.and_then(|s| parse_date_time(s.trim())));
    if let Some(created) = options.overrides.and_then(|o| o.created.clone()) {
        doc.created = Some(created);
    }

    resolve_source(&mut doc, &content, options);

    extract_text(&mut doc, &content)?;

    if doc.text.trim().is_empty() {
        return Err(IngestError::UnrecoverableStructure {
            doc_id: doc.doc_id,
            reason: "no text body could be isolated".into(),
        });
    }

    if let Some(title) = &doc.title {
        doc.headline_span = Some((0, title.chars().count()));
    }
    Ok(doc)
}

fn decode(raw: &[u8]) -> (String, Encoding) {
    match std::str::from_utf8(raw) {
        Ok(s) => (s.to_owned(), Encoding::Utf8),
        // Latin-1: every byte maps to the code point of the same value.
        Err(_) => (raw.iter().map(|&b| b as char).collect(), Encoding::Latin1),
    }
}

fn resolve_source(doc: &mut SourceDocument, content: &str, options: &ParseOptions<'_>) {
    if let Some(so) = tag_inner(content, "SO") {
        let name = normalize_inline(so);
        let name = name.trim_start_matches('@').trim().to_owned();
        if !name.is_empty() {
            doc.source_name = Some(name);
            return;
        }
    }
    if let Some(name) = source_from_doc_id(&doc.doc_id) {
        doc.source_name = Some(name.to_owned());
        return;
    }
    if let Some(source) = options.overrides.and_then(|o| o.source.clone()) {
        doc.source_name = Some(source);
        doc.record(7, Resolution::ManualInputRequired);
        return;
    }
    doc.record(7, Resolution::AutoFixed);
}

/// Known journal/wire prefixes of document identifiers.
fn source_from_doc_id(doc_id: &str) -> Option<&'static str> {
    let lower = doc_id.to_ascii_lowercase();
    if lower.starts_with("wsj") {
        Some("The Wall Street Journal")
    } else if lower.starts_with("nyt") {
        Some("The New York Times")
    } else if lower.starts_with("apw") || lower.starts_with("ap") {
        Some("Associated Press")
    } else {
        None
    }
}

fn extract_text(doc: &mut SourceDocument, content: &str) -> Result<(), IngestError> {
    let blocks = tag_blocks(content, "TEXT");
    match blocks.len() {
        1 => {
            let block = &blocks[0];
            if block.closed {
                doc.text = strip_one_leading_newline(&content[block.inner_start..block.inner_end])
                    .to_owned();
            } else {
                // opening tag without a closing one: take everything up to
                // </DOC> or end of file
                let end = content[block.inner_start..]
                    .find("</DOC>")
                    .map(|i| block.inner_start + i)
                    .unwrap_or(content.len());
                doc.text =
                    strip_one_leading_newline(&content[block.inner_start..end]).to_owned();
                doc.record(5, Resolution::AutoFixed);
            }
        }
        n if n > 1 => {
            let mut text = String::new();
            for (i, block) in blocks.iter().enumerate() {
                let end = if block.closed {
                    block.inner_end
                } else {
                    content[block.inner_start..]
                        .find("</DOC>")
                        .map(|i| block.inner_start + i)
                        .unwrap_or(content.len())
                };
                let inner = &content[block.inner_start..end];
                text.push_str(if i == 0 {
                    strip_one_leading_newline(inner)
                } else {
                    inner
                });
            }
            doc.text = text;
            doc.record(5, Resolution::AutoFixed);
        }
        _ => {
            // no text tags at all: the body is whatever follows the metadata
            let metadata_end = ["DOCNO", "HL", "HEADLINE", "DD", "SO", "DATELINE", "DATE_TIME"]
                .iter()
                .filter_map(|tag| tag_blocks(content, tag).last().map(|b| b.after_close))
                .max()
                .unwrap_or(0);
            let metadata_end = metadata_end.max(
                content
                    .find("<DOC>")
                    .map(|i| i + "<DOC>".len())
                    .unwrap_or(0),
            );
            let end = content[metadata_end..]
                .find("</DOC>")
                .map(|i| metadata_end + i)
                .unwrap_or(content.len());
            doc.text = strip_one_leading_newline(&content[metadata_end..end]).to_owned();
            doc.record(6, Resolution::AutoFixed);
        }
    }
    Ok(())
}

/// Collapses whitespace runs that contain a newline into a single space and
/// trims the ends; spacing within a line is preserved.
fn normalize_inline(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut pending_ws: Vec<char> = Vec::new();
    for c in s.chars() {
        if c.is_whitespace() {
            pending_ws.push(c);
        } else {
            if !pending_ws.is_empty() && !out.is_empty() {
                if pending_ws.iter().any(|&w| w == '\n' || w == '\r') {
                    out.push(' ');
                } else {
                    out.extend(pending_ws.iter());
                }
            }
            pending_ws.clear();
            out.push(c);
        }
    }
    out
}

fn strip_one_leading_newline(s: &str) -> &str {
    s.strip_prefix("\r\n")
        .or_else(|| s.strip_prefix('\n'))
        .unwrap_or(s)
}

/// `MM/DD/YY` → `YYYY-MM-DDT00:00:00` (two-digit years below 30 are 20xx).
fn parse_wsj_date(s: &str) -> Option<String> {
    let parts: Vec<&str> = s.split('/').collect();
    if parts.len() != 3 {
        return None;
    }
    let month: u32 = parts[0].parse().ok()?;
    let day: u32 = parts[1].parse().ok()?;
    let year_raw: i32 = parts[2].parse().ok()?;
    let year = match parts[2].len() {
        2 if year_raw < 30 => 2000 + year_raw,
        2 => 1900 + year_raw,
        _ => year_raw,
    };
    let date = chrono::NaiveDate::from_ymd_opt(year, month, day)?;
    Some(format!("{}T00:00:00", date.format("%Y-%m-%d")))
}

/// `YYYY-MM-DD[ hh:mm[:ss]]` → `xsd:dateTime` lexical form.
fn parse_date_time(s: &str) -> Option<String> {
    for format in ["%Y-%m-%d %H:%M:%S", "%Y-%m-%d %H:%M"] {
        if let Ok(dt) = chrono::NaiveDateTime::parse_from_str(s, format) {
            return Some(dt.format("%Y-%m-%dT%H:%M:%S").to_string());
        }
    }
    if let Ok(d) = chrono::NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        return Some(format!("{}T00:00:00", d.format("%Y-%m-%d")));
    }
    None
}

struct TagBlock {
    inner_start: usize,
    inner_end: usize,
    after_close: usize,
    closed: bool,
}

fn tag_blocks(content: &str, tag: &str) -> Vec<TagBlock> {
    let open = format!("<{tag}>");
    let close = format!("</{tag}>");
    let mut blocks = Vec::new();
    let mut cursor = 0;
    while let Some(rel) = content[cursor..].find(&open) {
        let inner_start = cursor + rel + open.len();
        match content[inner_start..].find(&close) {
            Some(rel_close) => {
                let inner_end = inner_start + rel_close;
                blocks.push(TagBlock {
                    inner_start,
                    inner_end,
                    after_close: inner_end + close.len(),
                    closed: true,
                });
                cursor = inner_end + close.len();
            }
            None => {
                blocks.push(TagBlock {
                    inner_start,
                    inner_end: content.len(),
                    after_close: content.len(),
                    closed: false,
                });
                break;
            }
        }
    }
    blocks
}

fn tag_inner<'a>(content: &'a str, tag: &str) -> Option<&'a str> {
    tag_blocks(content, tag)
        .first()
        .filter(|b| b.closed)
        .map(|b| &content[b.inner_start..b.inner_end])
}
