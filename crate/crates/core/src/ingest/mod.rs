//! Parsers for the three source formats — raw tagged newswire documents,
//! attribution-relation XML, and event/factuality tables — plus the
//! normalization that rebases every annotation onto character offsets over
//! one canonical text per document.
//!
//! All spans handed out by this module count Unicode scalar values, not
//! bytes; the byte-oriented quirks of the inputs are resolved here and do
//! not leak further.

mod document;
mod factbank;
mod overrides;
mod parc;
mod sentence;

pub use document::{parse_document, Dialect, Encoding, ParseOptions};
pub use factbank::parse_factbank_tables;
pub use overrides::DocOverrides;
pub use parc::{parse_parc_annotations, ParcAnnotations, ParcToken};
pub use sentence::{build_sentence_index, tokenize_span, SentenceOptions, Token};

/// Errors raised while ingesting source material.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IngestError {
    #[error("document {doc_id}: unrecoverable structure: {reason}")]
    UnrecoverableStructure { doc_id: String, reason: String },
    #[error("relation {relation_id}: rebased span out of text bounds")]
    OffsetOutOfBounds { relation_id: String },
    #[error("malformed annotation: {0}")]
    MalformedAnnotation(String),
    #[error("event {event_id}: token not resolvable in its sentence")]
    TokenResolutionFailure { event_id: String },
    #[error("event {event_id}: sentence {sentence} not in index; {detail}")]
    UnknownSentence {
        event_id: String,
        sentence: u32,
        detail: String,
    },
    #[error("factuality row references unknown event {0}")]
    UnknownEvent(String),
    #[error("event {event_id}: factuality value {value:?} not in the accepted vocabulary")]
    InvalidFactValue { event_id: String, value: String },
}

/// The interoperability challenges the converter recognizes and records.
pub const CHALLENGES: [(u8, &str); 10] = [
    (1, "incompatible text offsets"),
    (2, "metadata included in sentence number count"),
    (3, "insufficient sentence splitting information"),
    (4, "missing headline"),
    (5, "inconsistent use of text tags"),
    (6, "absence of text tags to structure the document"),
    (7, "unknown journal / source"),
    (8, "no attribution relations for the document"),
    (9, "incompatible sentence splitting at semicolons"),
    (10, "annotations on the headline"),
];

/// How a recorded challenge was handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Resolution {
    AutoFixed,
    ManualInputRequired,
    Excluded,
}

/// One recorded deviation from the clean ingestion path.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ChallengeDiagnostic {
    pub challenge_id: u8,
    pub description: String,
    pub resolution: Resolution,
}

impl ChallengeDiagnostic {
    pub fn new(challenge_id: u8, resolution: Resolution) -> ChallengeDiagnostic {
        let description = CHALLENGES
            .iter()
            .find(|(id, _)| *id == challenge_id)
            .map(|(_, d)| (*d).to_owned())
            .unwrap_or_default();
        ChallengeDiagnostic {
            challenge_id,
            description,
            resolution,
        }
    }
}

/// A body sentence: its number in the document-wide numbering and its
/// character span over [`SourceDocument::text`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Sentence {
    pub number: u32,
    pub begin: usize,
    pub end: usize,
}

/// A parsed raw document with its canonical text and sentence index.
///
/// The headline is a second addressable channel: it is not part of `text`,
/// and annotations may target it separately. When a headline exists it
/// occupies sentence number 0 and body sentences start at 1; otherwise body
/// sentences start at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceDocument {
    pub doc_id: String,
    pub title: Option<String>,
    pub dateline: Option<String>,
    /// Creation timestamp as an `xsd:dateTime` lexical form.
    pub created: Option<String>,
    pub source_name: Option<String>,
    /// Canonical content between the text tags, whitespace preserved.
    pub text: String,
    pub sentences: Vec<Sentence>,
    /// Extent of the headline channel, when a headline exists.
    pub headline_span: Option<(usize, usize)>,
    pub diagnostics: Vec<ChallengeDiagnostic>,
    /// Original byte encoding of the raw file; offset rebasing needs it.
    pub encoding: Encoding,
}

impl SourceDocument {
    pub fn record(&mut self, challenge_id: u8, resolution: Resolution) {
        self.diagnostics
            .push(ChallengeDiagnostic::new(challenge_id, resolution));
        self.diagnostics.sort_by_key(|d| d.challenge_id);
    }

    pub fn sentence_by_number(&self, number: u32) -> Option<&Sentence> {
        self.sentences.iter().find(|s| s.number == number)
    }

    /// Character count of the canonical text.
    pub fn text_char_len(&self) -> usize {
        self.text.chars().count()
    }
}

/// Which channel a resolved span addresses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Channel {
    #[default]
    Body,
    Headline,
}

/// An attribution relation with its role spans rebased to character offsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributionRelation {
    pub relation_id: String,
    pub source_spans: Vec<(usize, usize)>,
    pub cue_spans: Vec<(usize, usize)>,
    pub content_spans: Vec<(usize, usize)>,
}

impl AttributionRelation {
    pub fn is_empty(&self) -> bool {
        self.source_spans.is_empty() && self.cue_spans.is_empty() && self.content_spans.is_empty()
    }
}

/// An event with its token resolved to a character span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventRecord {
    pub event_id: String,
    pub sentence_number: u32,
    pub token_index: usize,
    pub token_string: String,
    pub resolved_span: (usize, usize),
    pub channel: Channel,
}

/// A factuality assignment: how certain an event is according to a source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactualityRecord {
    pub event_id: String,
    pub relative_source: String,
    pub factuality_value: String,
}

/// The accepted factuality vocabulary.
pub const FACTUALITY_VALUES: [&str; 9] =
    ["CT+", "CT-", "CTu", "PR+", "PR-", "PS+", "PS-", "Uu", "other"];

/// Slices `text` by character offsets. Returns `None` when the span is
/// out of bounds or inverted.
pub fn char_slice(text: &str, begin: usize, end: usize) -> Option<&str> {
    if begin >= end {
        return None;
    }
    let mut start_byte = None;
    let mut end_byte = None;
    for (count, (byte_idx, _)) in text.char_indices().enumerate() {
        if count == begin {
            start_byte = Some(byte_idx);
        }
        if count == end {
            end_byte = Some(byte_idx);
            break;
        }
    }
    if end_byte.is_none() && text.chars().count() == end {
        end_byte = Some(text.len());
    }
    Some(&text[start_byte?..end_byte?])
}
