//! Event and factuality table parsing with (sentence, token) resolution.
//!
//! Rows are `|||`-delimited, fields optionally single-quoted, one record per
//! line; a `doc-id` field may carry a `.tml` suffix. Of the table set only
//! two are consumed:
//!
//! * events: `doc-id|||sentence|||token-index|||event-id|||token-string`
//! * factuality: `doc-id|||event-id|||relative-source|||fact-value`
//!
//! Token coordinates resolve against the document's sentence index: index
//! lookup first, then a leftmost-unclaimed substring search within the
//! sentence. Sentence numbers are never realigned — a reference past the
//! index is an error, and the caller excludes the document.

use std::collections::HashMap;

use super::{
    char_slice, tokenize_span, Channel, EventRecord, FactualityRecord, IngestError, Resolution,
    SourceDocument, FACTUALITY_VALUES,
};

/// Parses both tables, keeping only rows for `doc.doc_id`, and resolves each
/// event to a character span. Factuality rows join to events by event id.
pub fn parse_factbank_tables(
    event_table: &str,
    factuality_table: &str,
    doc: &mut SourceDocument,
) -> Result<(Vec<EventRecord>, Vec<FactualityRecord>), IngestError> {
    let mut events = Vec::new();
    // spans already assigned per (channel, sentence), for the fallback search
    let mut claimed: HashMap<(Channel, u32), Vec<(usize, usize)>> = HashMap::new();
    let mut headline_hit = false;

    for (line_no, line) in event_table.lines().enumerate() {
        let fields = match split_row(line) {
            Some(f) => f,
            None => continue,
        };
        if fields.len() != 5 {
            return Err(IngestError::MalformedAnnotation(format!(
                "event row {}: expected 5 fields, got {}",
                line_no + 1,
                fields.len()
            )));
        }
        if !doc_matches(&fields[0], &doc.doc_id) {
            continue;
        }
        let sentence_number: u32 = fields[1].parse().map_err(|_| {
            IngestError::MalformedAnnotation(format!(
                "event row {}: bad sentence number {:?}",
                line_no + 1,
                fields[1]
            ))
        })?;
        let token_index: usize = fields[2].parse().map_err(|_| {
            IngestError::MalformedAnnotation(format!(
                "event row {}: bad token index {:?}",
                line_no + 1,
                fields[2]
            ))
        })?;
        let event_id = fields[3].clone();
        let token_string = fields[4].clone();

        let (channel, span) = resolve_event(
            doc,
            &event_id,
            sentence_number,
            token_index,
            &token_string,
            &mut claimed,
        )?;
        if channel == Channel::Headline && !headline_hit {
            headline_hit = true;
            doc.record(10, Resolution::AutoFixed);
        }
        events.push(EventRecord {
            event_id,
            sentence_number,
            token_index,
            token_string,
            resolved_span: span,
            channel,
        });
    }

    let mut factuality = Vec::new();
    for (line_no, line) in factuality_table.lines().enumerate() {
        let fields = match split_row(line) {
            Some(f) => f,
            None => continue,
        };
        if fields.len() != 4 {
            return Err(IngestError::MalformedAnnotation(format!(
                "factuality row {}: expected 4 fields, got {}",
                line_no + 1,
                fields.len()
            )));
        }
        if !doc_matches(&fields[0], &doc.doc_id) {
            continue;
        }
        let event_id = fields[1].clone();
        let relative_source = fields[2].clone();
        let value = fields[3].clone();
        if !events.iter().any(|e| e.event_id == event_id) {
            return Err(IngestError::UnknownEvent(event_id));
        }
        if !FACTUALITY_VALUES.contains(&value.as_str()) {
            return Err(IngestError::InvalidFactValue {
                event_id,
                value,
            });
        }
        factuality.push(FactualityRecord {
            event_id,
            relative_source,
            factuality_value: value,
        });
    }

    Ok((events, factuality))
}

fn resolve_event(
    doc: &SourceDocument,
    event_id: &str,
    sentence_number: u32,
    token_index: usize,
    token_string: &str,
    claimed: &mut HashMap<(Channel, u32), Vec<(usize, usize)>>,
) -> Result<(Channel, (usize, usize)), IngestError> {
    // Sentence 0 addresses the headline channel when a headline exists.
    let (channel, hay, hay_begin, hay_end) = if sentence_number == 0 && doc.title.is_some() {
        let title = doc.title.as_deref().unwrap();
        (Channel::Headline, title, 0usize, title.chars().count())
    } else {
        let sentence = doc.sentence_by_number(sentence_number).ok_or_else(|| {
            let max = doc.sentences.iter().map(|s| s.number).max();
            let dq = doc.sentences.iter().any(|s| {
                char_slice(&doc.text, s.begin, s.end)
                    .map(|t| t.trim_end().ends_with('"'))
                    .unwrap_or(false)
            });
            let mut detail = match max {
                Some(max) => format!("index covers sentences up to {max}"),
                None => "sentence index is empty".to_owned(),
            };
            if dq {
                detail.push_str(
                    "; a sentence ends with a double quote, so the source numbering may have skipped",
                );
            }
            IngestError::UnknownSentence {
                event_id: event_id.to_owned(),
                sentence: sentence_number,
                detail,
            }
        })?;
        (Channel::Body, doc.text.as_str(), sentence.begin, sentence.end)
    };

    let taken = claimed.entry((channel, sentence_number)).or_default();

    // 1. tokenizer index lookup
    let tokens = tokenize_span(hay, hay_begin, hay_end);
    if let Some(token) = tokens.get(token_index) {
        if token.text == token_string {
            taken.push((token.begin, token.end));
            return Ok((channel, (token.begin, token.end)));
        }
    }

    // 2. leftmost unclaimed exact substring match within the sentence
    let needle_len = token_string.chars().count();
    if needle_len > 0 {
        let window: Vec<char> = match char_slice(hay, hay_begin, hay_end) {
            Some(s) => s.chars().collect(),
            None => Vec::new(),
        };
        let needle: Vec<char> = token_string.chars().collect();
        if window.len() >= needle.len() {
            for start in 0..=(window.len() - needle.len()) {
                if window[start..start + needle.len()] == needle[..] {
                    let begin = hay_begin + start;
                    let end = begin + needle_len;
                    if !taken.iter().any(|&(b, e)| b < end && begin < e) {
                        taken.push((begin, end));
                        return Ok((channel, (begin, end)));
                    }
                }
            }
        }
    }

    Err(IngestError::TokenResolutionFailure {
        event_id: event_id.to_owned(),
    })
}

/// Splits a `|||` row into unquoted fields; `None` for blanks and comments.
fn split_row(line: &str) -> Option<Vec<String>> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return None;
    }
    Some(
        trimmed
            .split("|||")
            .map(|field| {
                let f = field.trim();
                let f = f
                    .strip_prefix('\'')
                    .and_then(|rest| rest.strip_suffix('\''))
                    .unwrap_or(f);
                f.to_owned()
            })
            .collect(),
    )
}

fn doc_matches(field: &str, doc_id: &str) -> bool {
    field == doc_id || field.strip_suffix(".tml") == Some(doc_id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{build_sentence_index, parse_document, ParseOptions, SentenceOptions};

    fn fixture_doc() -> SourceDocument {
        let raw = "<DOC>\n<DOCNO> wsj_0020 </DOCNO>\n<HL> Weekly Recap </HL>\n<TEXT>\n   Rogers said it plans a placement.\n   Analysts expect more sales.\n</TEXT>\n</DOC>\n";
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

    #[test]
    fn index_lookup_resolves_token() {
        let mut doc = fixture_doc();
        let events = "'wsj_0020.tml'|||1|||1|||'e1'|||'said'\n";
        let facts = "'wsj_0020.tml'|||'e1'|||'AUTHOR'|||'CT+'\n";
        let (events, facts) = parse_factbank_tables(events, facts, &mut doc).unwrap();
        assert_eq!(events.len(), 1);
        let span = events[0].resolved_span;
        assert_eq!(char_slice(&doc.text, span.0, span.1), Some("said"));
        assert_eq!(events[0].channel, Channel::Body);
        assert_eq!(facts.len(), 1);
        assert_eq!(facts[0].factuality_value, "CT+");
    }

    #[test]
    fn two_factuality_rows_for_one_event() {
        let mut doc = fixture_doc();
        let events = "wsj_0020|||2|||1|||e123|||expect\n";
        let facts = "wsj_0020|||e123|||officials_AUTHOR|||CT+\nwsj_0020|||e123|||AUTHOR|||Uu\n";
        let (_, facts) = parse_factbank_tables(events, facts, &mut doc).unwrap();
        assert_eq!(facts.len(), 2);
        assert_eq!(facts[0].relative_source, "officials_AUTHOR");
        assert_eq!(facts[1].factuality_value, "Uu");
    }

    #[test]
    fn sentence_past_index_is_unknown_sentence() {
        let mut doc = fixture_doc();
        let events = "wsj_0020|||7|||0|||e9|||said\n";
        match parse_factbank_tables(events, "", &mut doc) {
            Err(IngestError::UnknownSentence { event_id, sentence, .. }) => {
                assert_eq!(event_id, "e9");
                assert_eq!(sentence, 7);
            }
            other => panic!("expected UnknownSentence, got {other:?}"),
        }
    }

    #[test]
    fn double_quote_skip_is_flagged_in_detail() {
        let raw = "<DOC>\n<DOCNO> wsj_0021 </DOCNO>\n<HL> H </HL>\n<TEXT>\n   He called it \"a triumph.\"\n   Others disagreed strongly.\n</TEXT>\n</DOC>\n";
        let mut doc = parse_document(raw.as_bytes(), &ParseOptions::default()).unwrap();
        build_sentence_index(
            &mut doc,
            &SentenceOptions {
                line_split_available: true,
                ..Default::default()
            },
        )
        .unwrap();
        let events = "wsj_0021|||3|||0|||e1|||disagreed\n";
        match parse_factbank_tables(events, "", &mut doc) {
            Err(IngestError::UnknownSentence { detail, .. }) => {
                assert!(detail.contains("double quote"), "detail: {detail}");
            }
            other => panic!("expected UnknownSentence, got {other:?}"),
        }
    }

    #[test]
    fn fallback_substring_search_when_index_lies() {
        let mut doc = fixture_doc();
        // wrong token index, correct string: fallback finds it
        let events = "wsj_0020|||1|||4|||e2|||plans\n";
        let (events, _) = parse_factbank_tables(events, "", &mut doc).unwrap();
        let span = events[0].resolved_span;
        assert_eq!(char_slice(&doc.text, span.0, span.1), Some("plans"));
    }

    #[test]
    fn unresolvable_token_fails() {
        let mut doc = fixture_doc();
        let events = "wsj_0020|||1|||1|||e3|||zeppelin\n";
        match parse_factbank_tables(events, "", &mut doc) {
            Err(IngestError::TokenResolutionFailure { event_id }) => assert_eq!(event_id, "e3"),
            other => panic!("expected TokenResolutionFailure, got {other:?}"),
        }
    }

    #[test]
    fn headline_events_use_the_headline_channel() {
        let mut doc = fixture_doc();
        let events = "wsj_0020|||0|||1|||e4|||Recap\n";
        let (events, _) = parse_factbank_tables(events, "", &mut doc).unwrap();
        assert_eq!(events[0].channel, Channel::Headline);
        let (b, e) = events[0].resolved_span;
        assert_eq!(char_slice(doc.title.as_deref().unwrap(), b, e), Some("Recap"));
        assert!(doc.diagnostics.iter().any(|d| d.challenge_id == 10));
    }

    #[test]
    fn factuality_vocabulary_is_enforced() {
        let mut doc = fixture_doc();
        let events = "wsj_0020|||1|||1|||e1|||said\n";
        let facts = "wsj_0020|||e1|||AUTHOR|||MAYBE\n";
        match parse_factbank_tables(events, facts, &mut doc) {
            Err(IngestError::InvalidFactValue { value, .. }) => assert_eq!(value, "MAYBE"),
            other => panic!("expected InvalidFactValue, got {other:?}"),
        }
    }

    #[test]
    fn unknown_event_join_is_rejected() {
        let mut doc = fixture_doc();
        let facts = "wsj_0020|||e77|||AUTHOR|||CT+\n";
        match parse_factbank_tables("", facts, &mut doc) {
            Err(IngestError::UnknownEvent(id)) => assert_eq!(id, "e77"),
            other => panic!("expected UnknownEvent, got {other:?}"),
        }
    }
}
