//! On-demand word minting and cross-corpus deduplication.
//!
//! A word identifier is the text nanopub URI plus `#offset_<begin>-<end>`
//! (`#hl-offset_` for the headline channel), so every pass that annotates the
//! same span of the same text mints the same IRI.

use super::{CorpusManifest, ModelError};
use crate::ingest::{char_slice, Channel};
use crate::nanopub::{Nanopub, NanopubBuilder, PLACEHOLDER};
use crate::rdf::Term;
use crate::vocab;

/// Word-level extras carried into the assertion when present.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordExtras {
    pub lemma: Option<String>,
    pub pos: Option<String>,
    pub sentence_number: u32,
    pub channel: Channel,
}

/// A minted word, not yet turned into a nanopublication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordDraft {
    pub word_iri: String,
    pub text_np_uri: String,
    pub begin: usize,
    pub end: usize,
    pub anchor: String,
    pub lemma: Option<String>,
    pub pos: Option<String>,
    pub sentence_number: u32,
    pub channel: Channel,
    pub protected: bool,
}

/// Derives the word IRI for a span, without validation.
pub fn word_iri_for(text_np_uri: &str, channel: Channel, begin: usize, end: usize) -> String {
    match channel {
        Channel::Body => format!("{text_np_uri}#offset_{begin}-{end}"),
        Channel::Headline => format!("{text_np_uri}#hl-offset_{begin}-{end}"),
    }
}

/// Mints the word for a character span of `channel_text` (the body text or
/// the headline, matching `extras.channel`).
pub fn mint_word(
    text_np_uri: &str,
    begin: usize,
    end: usize,
    channel_text: &str,
    extras: &WordExtras,
    protected: bool,
) -> Result<WordDraft, ModelError> {
    let len = channel_text.chars().count();
    let anchor = char_slice(channel_text, begin, end)
        .ok_or(ModelError::SpanOutOfBounds { begin, end, len })?
        .to_owned();
    Ok(WordDraft {
        word_iri: word_iri_for(text_np_uri, extras.channel, begin, end),
        text_np_uri: text_np_uri.to_owned(),
        begin,
        end,
        anchor,
        lemma: extras.lemma.clone(),
        pos: extras.pos.clone(),
        sentence_number: extras.sentence_number,
        channel: extras.channel,
        protected,
    })
}

impl WordDraft {
    /// The entity inside the text nanopub this word is part of.
    pub fn text_entity_iri(&self) -> String {
        match self.channel {
            Channel::Body => format!("{}#text", self.text_np_uri),
            Channel::Headline => format!("{}#headline", self.text_np_uri),
        }
    }

    /// Builds and finalizes the word nanopublication.
    pub fn to_nanopub(&self, manifest: &CorpusManifest) -> Result<Nanopub, ModelError> {
        let mut builder = NanopubBuilder::new();
        let word = Term::iri(&self.word_iri);
        builder.bind_prefix("textnp", format!("{}#", self.text_np_uri));
        builder.bind_prefix("textoffset", format!("{}#offset_", self.text_np_uri));
        builder.assertion(
            word.clone(),
            Term::iri(vocab::rdf::TYPE),
            Term::iri(vocab::nif::OFFSET_BASED_STRING),
        );
        builder.assertion(
            word.clone(),
            Term::iri(vocab::rdf::TYPE),
            Term::iri(vocab::nif::WORD),
        );
        builder.assertion(
            word.clone(),
            Term::iri(vocab::nif::BEGIN_INDEX),
            Term::int(self.begin as i64),
        );
        builder.assertion(
            word.clone(),
            Term::iri(vocab::nif::END_INDEX),
            Term::int(self.end as i64),
        );
        builder.assertion(
            word.clone(),
            Term::iri(vocab::nif::ANCHOR_OF),
            Term::string(&self.anchor),
        );
        if let Some(lemma) = &self.lemma {
            builder.assertion(
                word.clone(),
                Term::iri(vocab::nif::LEMMA),
                Term::string(lemma),
            );
        }
        if let Some(pos) = &self.pos {
            builder.assertion(word.clone(), Term::iri(vocab::olia::POS), Term::string(pos));
        }
        builder.assertion(
            word.clone(),
            Term::iri(vocab::pvcp::HAS_SENTENCE_NUMBER),
            Term::int(self.sentence_number as i64),
        );
        builder.assertion(
            word,
            Term::iri(vocab::pvcp::IS_PART_OF_TEXT),
            Term::iri(self.text_entity_iri()),
        );
        builder.provenance(
            Term::iri(format!("{PLACEHOLDER}#assertion")),
            Term::iri(vocab::prov::WAS_DERIVED_FROM),
            Term::iri(&self.text_np_uri),
        );
        builder.pubinfo_defaults(
            &manifest.created,
            manifest.creator.as_deref(),
            Some(&manifest.license),
        );
        builder.protected(self.protected);
        Ok(builder.finalize(&manifest.base_namespace)?)
    }

    /// Whether two drafts for the same IRI can merge: extras may fill gaps
    /// but must not disagree.
    fn compatible(&self, other: &WordDraft) -> bool {
        fn agrees(a: &Option<String>, b: &Option<String>) -> bool {
            match (a, b) {
                (Some(x), Some(y)) => x == y,
                _ => true,
            }
        }
        self.word_iri == other.word_iri
            && self.anchor == other.anchor
            && self.sentence_number == other.sentence_number
            && self.protected == other.protected
            && agrees(&self.lemma, &other.lemma)
            && agrees(&self.pos, &other.pos)
    }

    fn absorb(&mut self, other: &WordDraft) {
        if self.lemma.is_none() {
            self.lemma = other.lemma.clone();
        }
        if self.pos.is_none() {
            self.pos = other.pos.clone();
        }
    }
}

/// One identifier that could not be merged to a single content.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct WordConflict {
    pub word_iri: String,
    pub detail: String,
}

/// Outcome of [`dedup_words`].
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MergeReport {
    /// Exact duplicates dropped.
    pub collapsed: usize,
    /// Identifiers whose variants were unioned into one draft.
    pub merged: usize,
    /// Identifiers left with multiple nanopubs due to contradictory extras.
    pub conflicts: Vec<WordConflict>,
}

/// Collapses drafts that mint the same identifier. Identical content
/// collapses to one draft; differing extras union when they do not
/// contradict; contradictions keep multiple drafts (same subject IRI,
/// different nanopub URIs) and are logged.
pub fn dedup_words(mut drafts: Vec<WordDraft>) -> (Vec<WordDraft>, MergeReport) {
    let mut report = MergeReport::default();
    drafts.sort_by(|a, b| a.word_iri.cmp(&b.word_iri));
    let mut out: Vec<WordDraft> = Vec::with_capacity(drafts.len());
    let mut group: Vec<WordDraft> = Vec::new();

    let flush = |group: &mut Vec<WordDraft>, report: &mut MergeReport| {
        if group.is_empty() {
            return Vec::new();
        }
        let mut variants: Vec<WordDraft> = Vec::new();
        let mut merged_any = false;
        for draft in group.drain(..) {
            if let Some(existing) = variants.iter_mut().find(|v| **v == draft) {
                let _ = existing;
                report.collapsed += 1;
                continue;
            }
            if let Some(existing) = variants.iter_mut().find(|v| v.compatible(&draft)) {
                existing.absorb(&draft);
                merged_any = true;
                continue;
            }
            variants.push(draft);
        }
        if variants.len() > 1 {
            report.conflicts.push(WordConflict {
                word_iri: variants[0].word_iri.clone(),
                detail: format!("{} contradictory variants kept", variants.len()),
            });
        } else if merged_any {
            report.merged += 1;
        }
        variants
    };

    for draft in drafts {
        if group.last().map(|g: &WordDraft| g.word_iri != draft.word_iri) == Some(true) {
            let variants = flush(&mut group, &mut report);
            out.extend(variants);
        }
        group.push(draft);
    }
    out.extend(flush(&mut group, &mut report));
    (out, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CorpusKind;

    fn manifest() -> CorpusManifest {
        CorpusManifest {
            kind: CorpusKind::TextCorpus,
            title: "WSJ text corpus".into(),
            corpus_iri: "https://w3id.org/provcorp/corpus/wsj-text".into(),
            base_namespace: "https://w3id.org/provcorp/np/".into(),
            see_also: None,
            creator: Some("https://orcid.org/0000-0001-2345-6789".into()),
            annotator: None,
            license: "https://example.org/licenses/restricted".into(),
            protected_default: true,
            created: "2020-05-01T00:00:00".into(),
        }
    }

    const TEXT_NP: &str = "https://w3id.org/provcorp/np/AAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAA";
    const ROGERS_TEXT: &str = "   ROGERS COMMUNICATIONS Inc. said it plans to raise funds.\n";

    #[test]
    fn rogers_word_assertion() {
        let extras = WordExtras {
            lemma: Some("rogers".into()),
            pos: Some("NNP".into()),
            sentence_number: 0,
            channel: Channel::Body,
        };
        let draft = mint_word(TEXT_NP, 3, 9, ROGERS_TEXT, &extras, true).unwrap();
        assert_eq!(draft.anchor, "ROGERS");
        assert_eq!(draft.word_iri, format!("{TEXT_NP}#offset_3-9"));
        let np = draft.to_nanopub(&manifest()).unwrap();
        assert!(np.verify().valid);
        assert!(np.is_protected());
        let trig = np.to_trig();
        assert!(trig.contains("nif:anchorOf \"ROGERS\""), "{trig}");
        assert!(trig.contains("nif:beginIndex \"3\"^^xsd:int"), "{trig}");
        assert!(trig.contains("pvcp:hasSentenceNumber \"0\"^^xsd:int"));
        assert!(trig.contains("nif:lemma \"rogers\""));
        assert!(trig.contains("olia:POS \"NNP\""));
    }

    #[test]
    fn same_span_same_iri_across_passes() {
        let first = mint_word(TEXT_NP, 3, 9, ROGERS_TEXT, &WordExtras::default(), false).unwrap();
        let second = mint_word(
            TEXT_NP,
            3,
            9,
            ROGERS_TEXT,
            &WordExtras {
                lemma: Some("rogers".into()),
                ..Default::default()
            },
            false,
        )
        .unwrap();
        assert_eq!(first.word_iri, second.word_iri);
    }

    #[test]
    fn zero_width_span_rejected() {
        match mint_word(TEXT_NP, 0, 0, ROGERS_TEXT, &WordExtras::default(), false) {
            Err(ModelError::SpanOutOfBounds { .. }) => {}
            other => panic!("expected SpanOutOfBounds, got {other:?}"),
        }
    }

    #[test]
    fn headline_channel_gets_its_own_fragment() {
        let extras = WordExtras {
            channel: Channel::Headline,
            ..Default::default()
        };
        let draft = mint_word(TEXT_NP, 0, 5, "Weekly Recap", &extras, false).unwrap();
        assert_eq!(draft.word_iri, format!("{TEXT_NP}#hl-offset_0-5"));
        assert_eq!(draft.text_entity_iri(), format!("{TEXT_NP}#headline"));
    }

    #[test]
    fn dedup_collapses_identical_duplicates() {
        let d = mint_word(TEXT_NP, 3, 9, ROGERS_TEXT, &WordExtras::default(), false).unwrap();
        let (out, report) = dedup_words(vec![d.clone(), d]);
        assert_eq!(out.len(), 1);
        assert_eq!(report.collapsed, 1);
        assert_eq!(report.merged, 0);
        assert!(report.conflicts.is_empty());
    }

    #[test]
    fn dedup_unions_non_conflicting_extras() {
        let plain = mint_word(TEXT_NP, 3, 9, ROGERS_TEXT, &WordExtras::default(), false).unwrap();
        let with_pos = mint_word(
            TEXT_NP,
            3,
            9,
            ROGERS_TEXT,
            &WordExtras {
                pos: Some("NNP".into()),
                ..Default::default()
            },
            false,
        )
        .unwrap();
        let (out, report) = dedup_words(vec![plain, with_pos]);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].pos.as_deref(), Some("NNP"));
        assert_eq!(report.merged, 1);
    }

    #[test]
    fn dedup_keeps_conflicting_variants() {
        let verb = mint_word(
            TEXT_NP,
            30,
            34,
            ROGERS_TEXT,
            &WordExtras {
                pos: Some("VBD".into()),
                ..Default::default()
            },
            false,
        )
        .unwrap();
        let noun = mint_word(
            TEXT_NP,
            30,
            34,
            ROGERS_TEXT,
            &WordExtras {
                pos: Some("NN".into()),
                ..Default::default()
            },
            false,
        )
        .unwrap();
        let (out, report) = dedup_words(vec![verb, noun]);
        assert_eq!(out.len(), 2);
        assert_eq!(report.conflicts.len(), 1);
        // both nanopubs share the subject IRI but differ in content
        let m = manifest();
        let np1 = out[0].to_nanopub(&m).unwrap();
        let np2 = out[1].to_nanopub(&m).unwrap();
        assert_ne!(np1.uri(), np2.uri());
    }
}
