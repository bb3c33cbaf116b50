//! Per-document manual-override sidecars (`<doc-id>.fix`).
//!
//! A sidecar is a plain-text key/value file consulted before heuristics:
//!
//! ```text
//! # corrected metadata
//! title: Recovered Headline
//! source: The Wall Street Journal
//! created: 1989-11-02
//! dateline: TORONTO
//! # corrected sentence boundaries, character offsets into the text body
//! sentence: 4 51
//! sentence: 55 99
//! ```

use super::IngestError;

/// Manual corrections for one document.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DocOverrides {
    pub title: Option<String>,
    pub source: Option<String>,
    /// `xsd:dateTime` lexical form (a bare date gets `T00:00:00`).
    pub created: Option<String>,
    pub dateline: Option<String>,
    pub sentences: Vec<(usize, usize)>,
}

impl DocOverrides {
    pub fn parse(text: &str) -> Result<DocOverrides, IngestError> {
        let mut overrides = DocOverrides::default();
        for (line_no, raw_line) in text.lines().enumerate() {
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once(':') else {
                return Err(IngestError::MalformedAnnotation(format!(
                    "override line {}: expected `key: value`, got {:?}",
                    line_no + 1,
                    raw_line
                )));
            };
            let value = value.trim();
            match key.trim() {
                "title" => overrides.title = Some(value.to_owned()),
                "source" => overrides.source = Some(value.to_owned()),
                "dateline" => overrides.dateline = Some(value.to_owned()),
                "created" => {
                    let lexical = if value.len() == 10 {
                        format!("{value}T00:00:00")
                    } else {
                        value.to_owned()
                    };
                    overrides.created = Some(lexical);
                }
                "sentence" => {
                    let mut parts = value.split_whitespace();
                    let begin = parts.next().and_then(|p| p.parse().ok());
                    let end = parts.next().and_then(|p| p.parse().ok());
                    match (begin, end) {
                        (Some(b), Some(e)) if b < e => overrides.sentences.push((b, e)),
                        _ => {
                            return Err(IngestError::MalformedAnnotation(format!(
                                "override line {}: expected `sentence: <begin> <end>`",
                                line_no + 1
                            )))
                        }
                    }
                }
                other => {
                    return Err(IngestError::MalformedAnnotation(format!(
                        "override line {}: unknown key {other:?}",
                        line_no + 1
                    )))
                }
            }
        }
        Ok(overrides)
    }
}
