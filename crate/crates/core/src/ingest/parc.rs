//! Attribution-annotation XML parsing and offset rebasing.
//!
//! The annotation files are token-level XML, one per document:
//!
//! ```xml
//! <document id="wsj_0026">
//!   <word ByteCount="10,13" lemma="the" pos="DT" text="The">
//!     <attribution id="wsj_0026_set_1" role="source"/>
//!   </word>
//! </document>
//! ```
//!
//! `ByteCount` counts bytes from the start of a file whose first six
//! characters are the `<TEXT>` tag, so a span rebases to the canonical text
//! by subtracting 6 — byte-exact for single-byte encodings, via a byte→char
//! map when the source was UTF-8.

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::{
    char_slice, AttributionRelation, Encoding, IngestError, Resolution, SourceDocument,
};

/// Length of the `<TEXT>` tag included in annotation byte counts.
const TEXT_TAG_LEN: usize = 6;

/// One annotated token: rebased character span plus word-level attributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParcToken {
    pub begin: usize,
    pub end: usize,
    pub text: String,
    pub lemma: Option<String>,
    pub pos: Option<String>,
}

/// Everything extracted from one annotation file.
#[derive(Debug, Clone, Default)]
pub struct ParcAnnotations {
    pub relations: Vec<AttributionRelation>,
    pub tokens: Vec<ParcToken>,
}

struct RawWord {
    byte_begin: usize,
    byte_end: usize,
    text: String,
    lemma: Option<String>,
    pos: Option<String>,
    resolved: Option<ParcToken>,
}

enum ResolveError {
    OutOfBounds(String),
    Mismatch(String),
}

/// Parses an annotation XML file against an already-parsed document,
/// rebasing all byte offsets to character offsets over `doc.text`.
/// A file with zero relations yields an empty list and records challenge 8.
pub fn parse_parc_annotations(
    xml: &[u8],
    doc: &mut SourceDocument,
) -> Result<ParcAnnotations, IngestError> {
    let mut reader = Reader::from_reader(xml);
    reader.trim_text(true);

    let byte_to_char = build_byte_to_char_map(doc);

    let mut annotations = ParcAnnotations::default();
    let mut relation_order: Vec<String> = Vec::new();
    let mut relations: std::collections::HashMap<String, AttributionRelation> =
        std::collections::HashMap::new();

    let mut current_word: Option<RawWord> = None;
    let mut buf = Vec::new();
    loop {
        let event = reader
            .read_event_into(&mut buf)
            .map_err(|e| IngestError::MalformedAnnotation(format!("XML error: {e}")))?;
        match event {
            Event::Start(ref start) | Event::Empty(ref start) => {
                let name = start.local_name();
                let empty = matches!(event, Event::Empty(_));
                match name.as_ref() {
                    b"document" => {}
                    b"word" => {
                        let mut word = read_word(start)?;
                        if empty {
                            finish_word(&mut word, doc, &byte_to_char, &mut annotations)?;
                        } else {
                            current_word = Some(word);
                        }
                    }
                    b"attribution" => {
                        let word = current_word.as_mut().ok_or_else(|| {
                            IngestError::MalformedAnnotation(
                                "<attribution> outside a <word>".into(),
                            )
                        })?;
                        let (id, role) = read_attribution(start)?;
                        let token = resolve_word(word, doc, &byte_to_char).map_err(|e| match e {
                            ResolveError::OutOfBounds(_) => IngestError::OffsetOutOfBounds {
                                relation_id: id.clone(),
                            },
                            ResolveError::Mismatch(detail) => {
                                IngestError::MalformedAnnotation(detail)
                            }
                        })?;
                        if !relations.contains_key(&id) {
                            relation_order.push(id.clone());
                            relations.insert(
                                id.clone(),
                                AttributionRelation {
                                    relation_id: id.clone(),
                                    source_spans: Vec::new(),
                                    cue_spans: Vec::new(),
                                    content_spans: Vec::new(),
                                },
                            );
                        }
                        let relation = relations.get_mut(&id).unwrap();
                        let span = (token.begin, token.end);
                        match role.as_str() {
                            "source" => relation.source_spans.push(span),
                            "cue" => relation.cue_spans.push(span),
                            "content" => relation.content_spans.push(span),
                            // other roles (e.g. supplements) are not modeled
                            _ => {}
                        }
                    }
                    other => {
                        return Err(IngestError::MalformedAnnotation(format!(
                            "unexpected element <{}>",
                            String::from_utf8_lossy(other)
                        )))
                    }
                }
            }
            Event::End(ref end) => {
                if end.local_name().as_ref() == b"word" {
                    if let Some(mut word) = current_word.take() {
                        finish_word(&mut word, doc, &byte_to_char, &mut annotations)?;
                    }
                }
            }
            Event::Eof => break,
            _ => {}
        }
        buf.clear();
    }

    annotations.relations = relation_order
        .into_iter()
        .map(|id| relations.remove(&id).unwrap())
        .collect();
    if annotations.relations.is_empty() {
        doc.record(8, Resolution::AutoFixed);
    }
    Ok(annotations)
}

fn finish_word(
    word: &mut RawWord,
    doc: &SourceDocument,
    byte_to_char: &Option<Vec<usize>>,
    annotations: &mut ParcAnnotations,
) -> Result<(), IngestError> {
    let token = resolve_word(word, doc, byte_to_char).map_err(|e| match e {
        ResolveError::OutOfBounds(detail) | ResolveError::Mismatch(detail) => {
            IngestError::MalformedAnnotation(detail)
        }
    })?;
    annotations.tokens.push(token);
    Ok(())
}

fn resolve_word(
    word: &mut RawWord,
    doc: &SourceDocument,
    byte_to_char: &Option<Vec<usize>>,
) -> Result<ParcToken, ResolveError> {
    if let Some(token) = &word.resolved {
        return Ok(token.clone());
    }
    if word.byte_begin < TEXT_TAG_LEN || word.byte_end <= word.byte_begin {
        return Err(ResolveError::OutOfBounds(format!(
            "byte span {},{} precedes the text body",
            word.byte_begin, word.byte_end
        )));
    }
    let rb = word.byte_begin - TEXT_TAG_LEN;
    let re = word.byte_end - TEXT_TAG_LEN;
    let (begin, end) = match byte_to_char {
        Some(map) => {
            if re >= map.len() {
                return Err(ResolveError::OutOfBounds(format!(
                    "byte span {},{} beyond the text body",
                    word.byte_begin, word.byte_end
                )));
            }
            (map[rb], map[re])
        }
        None => (rb, re),
    };
    let Some(slice) = char_slice(&doc.text, begin, end) else {
        return Err(ResolveError::OutOfBounds(format!(
            "rebased span {begin}..{end} out of bounds for {}",
            doc.doc_id
        )));
    };
    if slice != word.text {
        return Err(ResolveError::Mismatch(format!(
            "token text mismatch at {begin}..{end}: annotation says {:?}, text has {slice:?}",
            word.text
        )));
    }
    let token = ParcToken {
        begin,
        end,
        text: word.text.clone(),
        lemma: word.lemma.clone(),
        pos: word.pos.clone(),
    };
    word.resolved = Some(token.clone());
    Ok(token)
}

fn read_word(start: &BytesStart<'_>) -> Result<RawWord, IngestError> {
    let mut bytes: Option<(usize, usize)> = None;
    let mut text: Option<String> = None;
    let mut lemma = None;
    let mut pos = None;
    for attr in start.attributes() {
        let attr =
            attr.map_err(|e| IngestError::MalformedAnnotation(format!("bad attribute: {e}")))?;
        let value = attr
            .unescape_value()
            .map_err(|e| IngestError::MalformedAnnotation(format!("bad attribute value: {e}")))?
            .into_owned();
        match attr.key.local_name().as_ref() {
            b"ByteCount" => {
                let Some((b, e)) = value.split_once(',') else {
                    return Err(IngestError::MalformedAnnotation(format!(
                        "ByteCount must be `begin,end`, got {value:?}"
                    )));
                };
                let begin = b.trim().parse::<usize>().map_err(|_| {
                    IngestError::MalformedAnnotation(format!("bad ByteCount begin: {b:?}"))
                })?;
                let end = e.trim().parse::<usize>().map_err(|_| {
                    IngestError::MalformedAnnotation(format!("bad ByteCount end: {e:?}"))
                })?;
                bytes = Some((begin, end));
            }
            b"text" => text = Some(value),
            b"lemma" => lemma = Some(value),
            b"pos" => pos = Some(value),
            _ => {}
        }
    }
    let (byte_begin, byte_end) = bytes.ok_or_else(|| {
        IngestError::MalformedAnnotation("<word> without ByteCount attribute".into())
    })?;
    let text = text.ok_or_else(|| {
        IngestError::MalformedAnnotation("<word> without text attribute".into())
    })?;
    Ok(RawWord {
        byte_begin,
        byte_end,
        text,
        lemma,
        pos,
        resolved: None,
    })
}

fn read_attribution(start: &BytesStart<'_>) -> Result<(String, String), IngestError> {
    let mut id = None;
    let mut role = None;
    for attr in start.attributes() {
        let attr =
            attr.map_err(|e| IngestError::MalformedAnnotation(format!("bad attribute: {e}")))?;
        let value = attr
            .unescape_value()
            .map_err(|e| IngestError::MalformedAnnotation(format!("bad attribute value: {e}")))?
            .into_owned();
        match attr.key.local_name().as_ref() {
            b"id" => id = Some(value),
            b"role" => role = Some(value),
            _ => {}
        }
    }
    match (id, role) {
        (Some(id), Some(role)) => Ok((id, role)),
        _ => Err(IngestError::MalformedAnnotation(
            "<attribution> needs id and role attributes".into(),
        )),
    }
}

/// For UTF-8 sources, maps byte offsets of the encoded text to char offsets.
/// Single-byte sources and pure-ASCII text need no map.
fn build_byte_to_char_map(doc: &SourceDocument) -> Option<Vec<usize>> {
    if doc.encoding == Encoding::Latin1 || doc.text.is_ascii() {
        return None;
    }
    let mut map = vec![0usize; doc.text.len() + 1];
    for (char_idx, (byte_idx, c)) in doc.text.char_indices().enumerate() {
        map[byte_idx..byte_idx + c.len_utf8()].fill(char_idx);
    }
    map[doc.text.len()] = doc.text.chars().count();
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{build_sentence_index, parse_document, ParseOptions, SentenceOptions};

    /// `doc.text` = "ROGERS COMMUNICATIONS Inc. said it plans to raise funds.\n".
    /// Byte counts are char offsets + 6 (ASCII text).
    fn rogers_doc() -> SourceDocument {
        let raw = "<DOC>\n<DOCNO> wsj_0010 </DOCNO>\n<HL> Financing Business </HL>\n<TEXT>\nROGERS COMMUNICATIONS Inc. said it plans to raise funds.\n</TEXT>\n</DOC>\n";
        let mut doc = parse_document(raw.as_bytes(), &ParseOptions::default()).unwrap();
        build_sentence_index(
            &mut doc,
            &SentenceOptions {
                line_split_available: true,
                ..Default::default()
            },
        )
        .unwrap();
        doc
    }

    fn xml_for_rogers() -> String {
        // ROGERS 0..6, COMMUNICATIONS 7..21, Inc. 22..26, said 27..31,
        // it 32..34, plans 35..40 — plus 6 for the byte counts.
        r#"<document id="wsj_0010">
  <word ByteCount="6,12" lemma="rogers" pos="NNP" text="ROGERS">
    <attribution id="wsj_0010_set_1" role="source"/>
  </word>
  <word ByteCount="13,27" lemma="communications" pos="NNP" text="COMMUNICATIONS">
    <attribution id="wsj_0010_set_1" role="source"/>
  </word>
  <word ByteCount="28,32" lemma="inc." pos="NNP" text="Inc.">
    <attribution id="wsj_0010_set_1" role="source"/>
  </word>
  <word ByteCount="33,37" lemma="say" pos="VBD" text="said">
    <attribution id="wsj_0010_set_1" role="cue"/>
  </word>
  <word ByteCount="38,40" lemma="it" pos="PRP" text="it">
    <attribution id="wsj_0010_set_1" role="content"/>
  </word>
  <word ByteCount="41,46" lemma="plan" pos="VBZ" text="plans">
    <attribution id="wsj_0010_set_1" role="content"/>
  </word>
</document>
"#
        .to_owned()
    }

    #[test]
    fn rebase_by_header_length() {
        let mut doc = rogers_doc();
        let annotations = parse_parc_annotations(xml_for_rogers().as_bytes(), &mut doc).unwrap();
        assert_eq!(annotations.relations.len(), 1);
        let relation = &annotations.relations[0];
        assert_eq!(relation.cue_spans, vec![(27, 31)]);
        assert_eq!(char_slice(&doc.text, 27, 31), Some("said"));
        assert_eq!(relation.source_spans, vec![(0, 6), (7, 21), (22, 26)]);
        assert_eq!(relation.content_spans.len(), 2);
        assert!(doc.diagnostics.is_empty());
        assert_eq!(annotations.tokens.len(), 6);
        assert_eq!(annotations.tokens[0].lemma.as_deref(), Some("rogers"));
        assert_eq!(annotations.tokens[0].pos.as_deref(), Some("NNP"));
    }

    #[test]
    fn content_at_file_offset_six_is_char_zero() {
        let mut doc = rogers_doc();
        let xml = r#"<document id="wsj_0010"><word ByteCount="6,12" text="ROGERS"><attribution id="r" role="content"/></word></document>"#;
        let annotations = parse_parc_annotations(xml.as_bytes(), &mut doc).unwrap();
        assert_eq!(annotations.relations[0].content_spans, vec![(0, 6)]);
    }

    #[test]
    fn no_relations_records_challenge_8() {
        let mut doc = rogers_doc();
        let xml = r#"<document id="wsj_0010"><word ByteCount="6,12" text="ROGERS"/></document>"#;
        let annotations = parse_parc_annotations(xml.as_bytes(), &mut doc).unwrap();
        assert!(annotations.relations.is_empty());
        assert_eq!(doc.diagnostics.len(), 1);
        assert_eq!(doc.diagnostics[0].challenge_id, 8);
    }

    #[test]
    fn span_past_text_names_the_relation() {
        let mut doc = rogers_doc();
        let xml = r#"<document id="wsj_0010"><word ByteCount="900,910" text="x"><attribution id="rel_7" role="cue"/></word></document>"#;
        match parse_parc_annotations(xml.as_bytes(), &mut doc) {
            Err(IngestError::OffsetOutOfBounds { relation_id }) => {
                assert_eq!(relation_id, "rel_7")
            }
            other => panic!("expected OffsetOutOfBounds, got {other:?}"),
        }
    }

    #[test]
    fn token_text_mismatch_is_rejected() {
        let mut doc = rogers_doc();
        let xml = r#"<document id="wsj_0010"><word ByteCount="6,12" text="BOGUS!"><attribution id="r" role="cue"/></word></document>"#;
        match parse_parc_annotations(xml.as_bytes(), &mut doc) {
            Err(IngestError::MalformedAnnotation(msg)) => assert!(msg.contains("mismatch")),
            other => panic!("expected MalformedAnnotation, got {other:?}"),
        }
    }

    #[test]
    fn multibyte_utf8_bytes_map_to_chars() {
        let raw = "<DOC>\n<DOCNO> wsj_0011 </DOCNO>\n<HL> H </HL>\n<TEXT>\nThé café said so.\n</TEXT>\n</DOC>\n";
        let mut doc = parse_document(raw.as_bytes(), &ParseOptions::default()).unwrap();
        // "Thé café said so.\n": café at chars 4..8; in UTF-8 bytes (two
        // 2-byte é) the span is 5..10, plus the 6-byte header.
        let xml = r#"<document id="wsj_0011"><word ByteCount="11,16" text="café"><attribution id="r" role="source"/></word></document>"#;
        let annotations = parse_parc_annotations(xml.as_bytes(), &mut doc).unwrap();
        assert_eq!(annotations.relations[0].source_spans, vec![(4, 8)]);
        assert_eq!(char_slice(&doc.text, 4, 8), Some("café"));
    }
}
