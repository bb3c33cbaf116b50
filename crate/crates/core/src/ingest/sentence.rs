//! Sentence indexing and tokenization.
//!
//! Corpora that store one sentence per line carry their own splitting
//! information; for the rest a deterministic splitter runs and the fact is
//! recorded. Sentence numbers share one document-wide scheme: the headline
//! (when present) is field 0 and body sentences count on from 1.

use super::{char_slice, IngestError, Resolution, Sentence, SourceDocument};

/// Abbreviations that suppress a split after their trailing period.
const ABBREVIATIONS: [&str; 8] = ["Mr.", "Mrs.", "Dr.", "Inc.", "Corp.", "Co.", "U.S.", "vs."];

/// Closing quotes/brackets that may sit between the end punctuation and the
/// following whitespace.
const CLOSERS: [char; 6] = ['"', '\'', ')', ']', '\u{2019}', '\u{201d}'];

/// Knobs for [`build_sentence_index`].
#[derive(Debug, Clone, Default)]
pub struct SentenceOptions {
    /// The file stores one sentence per line.
    pub line_split_available: bool,
    /// Treat `;` as a sentence boundary when the splitter runs.
    pub split_on_semicolon: bool,
    /// Manually corrected boundaries (character spans), replacing heuristics.
    pub override_sentences: Option<Vec<(usize, usize)>>,
}

/// Populates `doc.sentences`. Numbers start at 1 when a headline occupies
/// field 0, at 0 otherwise.
pub fn build_sentence_index(
    doc: &mut SourceDocument,
    options: &SentenceOptions,
) -> Result<(), IngestError> {
    let base = if doc.title.is_some() { 1 } else { 0 };
    let spans: Vec<(usize, usize)> = if let Some(manual) = &options.override_sentences {
        let mut manual = manual.clone();
        manual.sort_unstable();
        let len = doc.text_char_len();
        for &(begin, end) in &manual {
            if begin >= end || end > len {
                return Err(IngestError::MalformedAnnotation(format!(
                    "override sentence span {begin}..{end} out of bounds for {}",
                    doc.doc_id
                )));
            }
        }
        doc.record(3, Resolution::ManualInputRequired);
        manual
    } else if options.line_split_available {
        line_spans(&doc.text)
    } else {
        let (spans, semicolon_fired) = split_sentences(&doc.text, options.split_on_semicolon);
        doc.record(3, Resolution::AutoFixed);
        if semicolon_fired {
            doc.record(9, Resolution::AutoFixed);
        }
        spans
    };

    doc.sentences = spans
        .into_iter()
        .enumerate()
        .map(|(i, (begin, end))| Sentence {
            number: base + i as u32,
            begin,
            end,
        })
        .collect();
    Ok(())
}

/// Trimmed character spans of non-empty lines.
fn line_spans(text: &str) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut line_start = 0usize; // char index
    let mut idx = 0usize;
    let chars: Vec<char> = text.chars().collect();
    while idx <= chars.len() {
        let at_end = idx == chars.len();
        if at_end || chars[idx] == '\n' {
            if let Some(span) = trim_span(&chars, line_start, idx) {
                spans.push(span);
            }
            line_start = idx + 1;
        }
        idx += 1;
    }
    spans
}

fn trim_span(chars: &[char], begin: usize, end: usize) -> Option<(usize, usize)> {
    let mut b = begin;
    let mut e = end;
    while b < e && chars[b].is_whitespace() {
        b += 1;
    }
    while e > b && chars[e - 1].is_whitespace() {
        e -= 1;
    }
    (b < e).then_some((b, e))
}

/// The built-in splitter: a boundary follows `.`, `!` or `?` (plus optional
/// closing quotes/brackets) when whitespace and an uppercase letter or digit
/// come next; a known abbreviation before the period suppresses it. With
/// `split_on_semicolon`, a `;` followed by whitespace also splits.
///
/// Returns the trimmed sentence spans and whether a semicolon split fired.
fn split_sentences(text: &str, split_on_semicolon: bool) -> (Vec<(usize, usize)>, bool) {
    let chars: Vec<char> = text.chars().collect();
    let mut boundaries: Vec<usize> = Vec::new(); // index one past the sentence end
    let mut semicolon_fired = false;
    let mut i = 0usize;
    while i < chars.len() {
        let c = chars[i];
        if c == '.' || c == '!' || c == '?' {
            if c == '.' && is_abbreviation(&chars, i) {
                i += 1;
                continue;
            }
            let mut j = i + 1;
            while j < chars.len() && CLOSERS.contains(&chars[j]) {
                j += 1;
            }
            let mut k = j;
            while k < chars.len() && chars[k].is_whitespace() {
                k += 1;
            }
            if k > j && k < chars.len() && (chars[k].is_uppercase() || chars[k].is_ascii_digit()) {
                boundaries.push(j);
                i = k;
                continue;
            }
        } else if split_on_semicolon && c == ';' && i + 1 < chars.len() && chars[i + 1].is_whitespace()
        {
            boundaries.push(i + 1);
            semicolon_fired = true;
        }
        i += 1;
    }

    let mut spans = Vec::new();
    let mut start = 0usize;
    for &b in &boundaries {
        if let Some(span) = trim_span(&chars, start, b) {
            spans.push(span);
        }
        start = b;
    }
    if let Some(span) = trim_span(&chars, start, chars.len()) {
        spans.push(span);
    }
    (spans, semicolon_fired)
}

fn is_abbreviation(chars: &[char], period: usize) -> bool {
    let mut start = period;
    while start > 0 && !chars[start - 1].is_whitespace() {
        start -= 1;
    }
    let word: String = chars[start..=period].iter().collect();
    ABBREVIATIONS.contains(&word.as_str())
}

/// A token with its absolute character span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub begin: usize,
    pub end: usize,
    pub text: String,
}

/// Whitespace-plus-punctuation tokenizer over a character span of `text`.
/// Leading and trailing ASCII punctuation split off as their own tokens;
/// interior punctuation (hyphens, abbreviation dots) stays attached.
pub fn tokenize_span(text: &str, begin: usize, end: usize) -> Vec<Token> {
    let Some(slice) = char_slice(text, begin, end) else {
        return Vec::new();
    };
    let mut tokens = Vec::new();
    let mut chunk_start = None;
    let mut flush = |start: usize, stop: usize, chars: &[char]| {
        if start >= stop {
            return;
        }
        let mut b = start;
        let mut e = stop;
        // leading punctuation
        while b < e && is_edge_punct(chars[b - begin]) {
            tokens.push(Token {
                begin: b,
                end: b + 1,
                text: chars[b - begin].to_string(),
            });
            b += 1;
        }
        // trailing punctuation (collected, then emitted in order)
        let mut trailing = Vec::new();
        while e > b && is_edge_punct(chars[e - 1 - begin]) {
            trailing.push(Token {
                begin: e - 1,
                end: e,
                text: chars[e - 1 - begin].to_string(),
            });
            e -= 1;
        }
        if b < e {
            tokens.push(Token {
                begin: b,
                end: e,
                text: chars[(b - begin)..(e - begin)].iter().collect(),
            });
        }
        tokens.extend(trailing.into_iter().rev());
    };
    let chars: Vec<char> = slice.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_whitespace() {
            if let Some(start) = chunk_start.take() {
                flush(start, begin + i, &chars);
            }
        } else if chunk_start.is_none() {
            chunk_start = Some(begin + i);
        }
    }
    if let Some(start) = chunk_start {
        flush(start, begin + chars.len(), &chars);
    }
    tokens
}

fn is_edge_punct(c: char) -> bool {
    matches!(
        c,
        '.' | ',' | ';' | ':' | '!' | '?' | '"' | '\'' | '(' | ')' | '[' | ']' | '{' | '}' | '`'
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{parse_document, ParseOptions};

    fn doc_with(text: &str, title: Option<&str>) -> SourceDocument {
        SourceDocument {
            doc_id: "test_0001".into(),
            title: title.map(str::to_owned),
            dateline: None,
            created: None,
            source_name: None,
            text: text.to_owned(),
            sentences: Vec::new(),
            headline_span: title.map(|t| (0, t.chars().count())),
            diagnostics: Vec::new(),
            encoding: super::super::Encoding::Utf8,
        }
    }

    #[test]
    fn line_split_numbers_start_after_headline() {
        let mut doc = doc_with("   First line here.\n   Second line there.\n", Some("Head"));
        build_sentence_index(
            &mut doc,
            &SentenceOptions {
                line_split_available: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(doc.sentences.len(), 2);
        assert_eq!(doc.sentences[0].number, 1);
        assert_eq!(doc.sentences[1].number, 2);
        assert_eq!(
            char_slice(&doc.text, doc.sentences[0].begin, doc.sentences[0].end),
            Some("First line here.")
        );
        assert!(doc.diagnostics.is_empty());
    }

    #[test]
    fn no_headline_numbers_from_zero() {
        let mut doc = doc_with("One.\nTwo.\n", None);
        build_sentence_index(
            &mut doc,
            &SentenceOptions {
                line_split_available: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(doc.sentences[0].number, 0);
    }

    #[test]
    fn empty_text_empty_index() {
        let mut doc = doc_with("", None);
        build_sentence_index(
            &mut doc,
            &SentenceOptions {
                line_split_available: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(doc.sentences.is_empty());
    }

    #[test]
    fn splitter_records_challenge_3() {
        let mut doc = doc_with("The vote passed. Council adjourned early.", None);
        build_sentence_index(&mut doc, &SentenceOptions::default()).unwrap();
        assert_eq!(doc.sentences.len(), 2);
        assert_eq!(doc.diagnostics.len(), 1);
        assert_eq!(doc.diagnostics[0].challenge_id, 3);
    }

    #[test]
    fn semicolon_policy_is_a_flag() {
        let text = "A; b.";
        let (with, fired) = split_sentences(text, true);
        assert_eq!(with.len(), 2);
        assert!(fired);
        let (without, fired) = split_sentences(text, false);
        assert_eq!(without.len(), 1);
        assert!(!fired);
    }

    #[test]
    fn abbreviations_suppress_splits() {
        let (spans, _) = split_sentences("Rogers Inc. said so. Mr. Lee agreed.", false);
        assert_eq!(spans.len(), 2);
    }

    #[test]
    fn closing_quote_before_boundary() {
        let (spans, _) = split_sentences("He said \"stop.\" Then he left.", false);
        assert_eq!(spans.len(), 2);
    }

    #[test]
    fn digits_start_sentences() {
        let (spans, _) = split_sentences("It ended. 5 days passed.", false);
        assert_eq!(spans.len(), 2);
    }

    #[test]
    fn tokenizer_splits_edge_punctuation() {
        let text = "Rogers said: \"fine.\"";
        let tokens = tokenize_span(text, 0, text.chars().count());
        let strings: Vec<&str> = tokens.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(strings, vec!["Rogers", "said", ":", "\"", "fine", ".", "\""]);
        for token in &tokens {
            assert_eq!(
                char_slice(text, token.begin, token.end).unwrap(),
                token.text
            );
        }
    }

    #[test]
    fn tokenizer_keeps_interior_punctuation() {
        let text = "duty-free U.S. watches";
        let tokens = tokenize_span(text, 0, text.chars().count());
        let strings: Vec<&str> = tokens.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(strings, vec!["duty-free", "U.S", ".", "watches"]);
    }

    #[test]
    fn override_spans_win_and_record_manual_input() {
        let mut doc = doc_with("Alpha beta. Gamma delta.", None);
        build_sentence_index(
            &mut doc,
            &SentenceOptions {
                override_sentences: Some(vec![(0, 11), (12, 24)]),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(doc.sentences.len(), 2);
        assert_eq!(doc.diagnostics[0].challenge_id, 3);
        assert_eq!(doc.diagnostics[0].resolution, Resolution::ManualInputRequired);
    }

    // parse_document + sentence index end to end over the two-line example
    #[test]
    fn wsj_file_to_sentence_index() {
        let raw = "<DOC>\n<DOCNO> wsj_0042 </DOCNO>\n<HL> Two Lines </HL>\n<TEXT>\n   Alpha beta gamma.\n   Delta epsilon.\n</TEXT>\n</DOC>\n";
        let mut doc = parse_document(raw.as_bytes(), &ParseOptions::default()).unwrap();
        build_sentence_index(
            &mut doc,
            &SentenceOptions {
                line_split_available: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(doc.sentences.len(), 2);
        assert_eq!(doc.sentences[0].number, 1);
    }
}
