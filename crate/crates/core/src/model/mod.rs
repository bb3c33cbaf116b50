//! Generation of the nanopublication network from parsed corpora: corpus,
//! index, document, text, word, and annotation nanopublications.
//!
//! Word identifiers are minted deterministically from the text
//! nanopublication URI and the character span, so the same word introduced
//! by different annotation corpora converges on the same IRI.

mod generate;
mod words;

pub use generate::{
    build_attribution_nanopub, build_event_nanopub, build_factuality_nanopub, generate_corpus,
    generate_text_layer, TextLayer,
};
pub use words::{
    dedup_words, mint_word, word_iri_for, MergeReport, WordConflict, WordDraft, WordExtras,
};

use crate::nanopub::{Nanopub, NanopubError};
use crate::vocab;

/// Errors from network generation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("span {begin}..{end} out of bounds for a text of {len} characters")]
    SpanOutOfBounds {
        begin: usize,
        end: usize,
        len: usize,
    },
    #[error("annotation references a word that was never minted: {0}")]
    DanglingWordReference(String),
    #[error("bad corpus manifest: {0}")]
    Manifest(String),
    #[error(transparent)]
    Nanopub(#[from] NanopubError),
}

/// Whether a corpus contributes texts or annotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusKind {
    TextCorpus,
    AnnotationCorpus,
}

impl CorpusKind {
    pub fn class_iri(self) -> &'static str {
        match self {
            CorpusKind::TextCorpus => vocab::pvcp::TEXT_CORPUS,
            CorpusKind::AnnotationCorpus => vocab::pvcp::ANNOTATION_CORPUS,
        }
    }
}

/// Corpus-level configuration: identity, metadata, licensing, namespaces.
///
/// Manifests are small key/value text files:
///
/// ```text
/// kind: annotation-corpus
/// title: PARC Annotation corpus
/// corpus-iri: https://w3id.org/provcorp/corpus/parc-annotations
/// base-namespace: https://w3id.org/provcorp/np/
/// see-also: https://example.org/annotation-scheme.pdf
/// creator: https://orcid.org/0000-0001-2345-6789
/// annotator: https://example.org/projects/attribution-annotation
/// license: https://creativecommons.org/licenses/by/4.0/
/// protected: false
/// created: 2020-05-01T00:00:00
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusManifest {
    pub kind: CorpusKind,
    pub title: String,
    /// Stable IRI of the corpus entity (independent of any content hash, so
    /// members can back-reference it).
    pub corpus_iri: String,
    /// Namespace under which nanopub URIs are minted; ends with `/`.
    pub base_namespace: String,
    pub see_also: Option<String>,
    /// Creator of the nanopublications (pubinfo).
    pub creator: Option<String>,
    /// Agent behind the original annotations (provenance); distinct from the
    /// nanopub creator.
    pub annotator: Option<String>,
    pub license: String,
    pub protected_default: bool,
    /// Fixed creation timestamp stamped into every pubinfo graph, keeping
    /// conversion output byte-reproducible.
    pub created: String,
}

impl CorpusManifest {
    pub fn parse(text: &str) -> Result<CorpusManifest, ModelError> {
        let mut kind = None;
        let mut title = None;
        let mut corpus_iri = None;
        let mut base_namespace = None;
        let mut see_also = None;
        let mut creator = None;
        let mut annotator = None;
        let mut license = None;
        let mut protected = false;
        let mut created = None;
        for (line_no, raw_line) in text.lines().enumerate() {
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once(':') else {
                return Err(ModelError::Manifest(format!(
                    "line {}: expected `key: value`",
                    line_no + 1
                )));
            };
            let value = value.trim().to_owned();
            match key.trim() {
                "kind" => {
                    kind = Some(match value.as_str() {
                        "text-corpus" => CorpusKind::TextCorpus,
                        "annotation-corpus" => CorpusKind::AnnotationCorpus,
                        other => {
                            return Err(ModelError::Manifest(format!(
                                "unknown corpus kind {other:?}"
                            )))
                        }
                    })
                }
                "title" => title = Some(value),
                "corpus-iri" => corpus_iri = Some(value),
                "base-namespace" => base_namespace = Some(value),
                "see-also" => see_also = Some(value),
                "creator" => creator = Some(value),
                "annotator" => annotator = Some(value),
                "license" => license = Some(value),
                "protected" => {
                    protected = value.parse().map_err(|_| {
                        ModelError::Manifest(format!("protected must be true/false, got {value:?}"))
                    })?
                }
                "created" => created = Some(value),
                other => {
                    return Err(ModelError::Manifest(format!(
                        "line {}: unknown key {other:?}",
                        line_no + 1
                    )))
                }
            }
        }
        let manifest = CorpusManifest {
            kind: kind.ok_or_else(|| ModelError::Manifest("missing key: kind".into()))?,
            title: title.ok_or_else(|| ModelError::Manifest("missing key: title".into()))?,
            corpus_iri: corpus_iri
                .ok_or_else(|| ModelError::Manifest("missing key: corpus-iri".into()))?,
            base_namespace: base_namespace
                .ok_or_else(|| ModelError::Manifest("missing key: base-namespace".into()))?,
            see_also,
            creator,
            annotator,
            license: license.ok_or_else(|| ModelError::Manifest("missing key: license".into()))?,
            protected_default: protected,
            created: created.unwrap_or_else(|| "2020-01-01T00:00:00".to_owned()),
        };
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !self.base_namespace.ends_with('/') {
            return Err(ModelError::Manifest(format!(
                "base-namespace must end with '/': {}",
                self.base_namespace
            )));
        }
        if !self.corpus_iri.contains("://") {
            return Err(ModelError::Manifest(format!(
                "corpus-iri must be absolute: {}",
                self.corpus_iri
            )));
        }
        Ok(())
    }

    /// Last path segment of the corpus IRI; used as the output directory name.
    pub fn corpus_dir(&self) -> &str {
        self.corpus_iri
            .trim_end_matches('/')
            .rsplit('/')
            .next()
            .unwrap_or("corpus")
    }

    /// Namespace of the corpus IRI, for the `corpus:` prefix binding.
    pub fn corpus_namespace(&self) -> Option<String> {
        self.corpus_iri
            .rfind('/')
            .map(|i| self.corpus_iri[..=i].to_owned())
    }

    /// The agent the assertions are attributed to in provenance graphs.
    pub fn provenance_agent(&self) -> &str {
        self.annotator.as_deref().unwrap_or(&self.corpus_iri)
    }
}

/// What a generated nanopub represents, decided from its content.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
#[serde(rename_all = "kebab-case")]
pub enum NanopubKind {
    Corpus,
    Index,
    Document,
    Text,
    Word,
    Attribution,
    Event,
    Factuality,
    Other,
}

impl NanopubKind {
    pub fn dir_name(self) -> &'static str {
        match self {
            NanopubKind::Corpus => "corpus",
            NanopubKind::Index => "index",
            NanopubKind::Document => "document",
            NanopubKind::Text => "text",
            NanopubKind::Word => "word",
            NanopubKind::Attribution => "attribution",
            NanopubKind::Event => "event",
            NanopubKind::Factuality => "factuality",
            NanopubKind::Other => "other",
        }
    }
}

impl std::fmt::Display for NanopubKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.dir_name())
    }
}

/// Classifies a nanopub by inspecting its assertion and pubinfo graphs.
pub fn classify(nanopub: &Nanopub) -> NanopubKind {
    let has_pred = |iri: &str| {
        nanopub
            .assertion()
            .any(|q| q.predicate.as_iri() == Some(iri))
    };
    let has_type = |iri: &str| {
        nanopub.assertion().any(|q| {
            q.predicate.as_iri() == Some(vocab::rdf::TYPE) && q.object.as_iri() == Some(iri)
        })
    };
    let index_typed = nanopub.pubinfo().any(|q| {
        q.predicate.as_iri() == Some(vocab::rdf::TYPE)
            && q.object.as_iri() == Some(vocab::npx::NANOPUB_INDEX)
    });
    if index_typed || has_pred(vocab::npx::INCLUDES_ELEMENT) {
        NanopubKind::Index
    } else if has_pred(vocab::dcat::DISTRIBUTION)
        || has_type(vocab::pvcp::TEXT_CORPUS)
        || has_type(vocab::pvcp::ANNOTATION_CORPUS)
    {
        NanopubKind::Corpus
    } else if has_type(vocab::foaf::DOCUMENT) {
        NanopubKind::Document
    } else if has_type(vocab::nif::WORD) {
        NanopubKind::Word
    } else if has_type(vocab::dct::TEXT) {
        NanopubKind::Text
    } else if has_pred(vocab::pvcpf::HAS_EID) {
        NanopubKind::Event
    } else if has_pred(vocab::pvcpf::HAS_FACT_VALUE) {
        NanopubKind::Factuality
    } else if has_pred(vocab::pvcpp::HAS_SOURCE_ANNOTATED_WORD)
        || has_pred(vocab::pvcpp::HAS_CUE_ANNOTATED_WORD)
        || has_pred(vocab::pvcpp::HAS_CONTENT_ANNOTATED_WORD)
    {
        NanopubKind::Attribution
    } else {
        NanopubKind::Other
    }
}
