//! Builders for the non-word nanopublications of the network.
//!
//! Finalization order matters: the text nanopub is minted first (words and
//! the document link to it), events before factuality (factuality references
//! event annotation IRIs), members before their corpus index.

use std::collections::BTreeMap;

use super::{CorpusManifest, ModelError};
use crate::ingest::{AttributionRelation, EventRecord, FactualityRecord, SourceDocument};
use crate::nanopub::{
    build_index, IndexMetadata, IndexNanopub, Nanopub, NanopubBuilder, PLACEHOLDER,
};
use crate::rdf::Term;
use crate::vocab;

/// The two nanopubs carrying a document and its text, plus the entity IRIs
/// annotations will reference.
#[derive(Debug, Clone)]
pub struct TextLayer {
    pub text_np: Nanopub,
    pub document_np: Nanopub,
    pub text_entity_iri: String,
    pub headline_entity_iri: Option<String>,
}

/// Generates the text and document nanopublications for one parsed document.
pub fn generate_text_layer(
    doc: &SourceDocument,
    manifest: &CorpusManifest,
) -> Result<TextLayer, ModelError> {
    // text nanopub first: its URI is referenced by everything else
    let mut builder = NanopubBuilder::new();
    bind_corpus_prefix(&mut builder, manifest);
    let text_entity = NanopubBuilder::sub("text");
    builder.assertion(
        text_entity.clone(),
        Term::iri(vocab::rdf::TYPE),
        Term::iri(vocab::nif::OFFSET_BASED_STRING),
    );
    builder.assertion(
        text_entity.clone(),
        Term::iri(vocab::rdf::TYPE),
        Term::iri(vocab::dct::TEXT),
    );
    builder.assertion(
        text_entity.clone(),
        Term::iri(vocab::rdf::VALUE),
        Term::string(&doc.text),
    );
    if let Some(title) = &doc.title {
        let headline_entity = NanopubBuilder::sub("headline");
        builder.assertion(
            headline_entity.clone(),
            Term::iri(vocab::rdf::TYPE),
            Term::iri(vocab::nif::OFFSET_BASED_STRING),
        );
        builder.assertion(
            headline_entity,
            Term::iri(vocab::rdf::VALUE),
            Term::string(title),
        );
    }
    builder.assertion(
        text_entity,
        Term::iri(vocab::dct::IS_PART_OF),
        Term::iri(&manifest.corpus_iri),
    );
    builder.provenance(
        Term::iri(format!("{PLACEHOLDER}#assertion")),
        Term::iri(vocab::prov::WAS_DERIVED_FROM),
        Term::iri(&manifest.corpus_iri),
    );
    builder.pubinfo_defaults(
        &manifest.created,
        manifest.creator.as_deref(),
        Some(&manifest.license),
    );
    builder.protected(manifest.protected_default);
    let text_np = builder.finalize(&manifest.base_namespace)?;
    let text_entity_iri = format!("{}#text", text_np.uri());
    let headline_entity_iri = doc
        .title
        .as_ref()
        .map(|_| format!("{}#headline", text_np.uri()));

    // document nanopub
    let mut builder = NanopubBuilder::new();
    bind_corpus_prefix(&mut builder, manifest);
    builder.bind_prefix("textnp", format!("{}#", text_np.uri()));
    let document_entity = NanopubBuilder::sub("document");
    builder.assertion(
        document_entity.clone(),
        Term::iri(vocab::rdf::TYPE),
        Term::iri(vocab::foaf::DOCUMENT),
    );
    if let Some(title) = &doc.title {
        builder.assertion(
            document_entity.clone(),
            Term::iri(vocab::dct::TITLE),
            Term::string(title),
        );
    }
    if let Some(created) = &doc.created {
        builder.assertion(
            document_entity.clone(),
            Term::iri(vocab::dct::CREATED),
            Term::date_time(created),
        );
    }
    if let Some(source) = &doc.source_name {
        builder.assertion(
            document_entity.clone(),
            Term::iri(vocab::dct::CREATOR),
            creator_term(source),
        );
    }
    builder.assertion(
        document_entity.clone(),
        Term::iri(vocab::pvcp::HAS_TEXT),
        Term::iri(&text_entity_iri),
    );
    builder.assertion(
        document_entity,
        Term::iri(vocab::dct::IS_PART_OF),
        Term::iri(&manifest.corpus_iri),
    );
    builder.provenance(
        Term::iri(format!("{PLACEHOLDER}#assertion")),
        Term::iri(vocab::prov::WAS_DERIVED_FROM),
        Term::iri(&manifest.corpus_iri),
    );
    builder.pubinfo_defaults(
        &manifest.created,
        manifest.creator.as_deref(),
        Some(&manifest.license),
    );
    builder.protected(manifest.protected_default);
    let document_np = builder.finalize(&manifest.base_namespace)?;

    Ok(TextLayer {
        text_np,
        document_np,
        text_entity_iri,
        headline_entity_iri,
    })
}

/// Well-known journal names map to resource IRIs; anything else stays a
/// plain literal.
fn creator_term(source_name: &str) -> Term {
    match source_name {
        "The Wall Street Journal" | "Wall Street Journal" => Term::iri(vocab::sources::WSJ),
        "The New York Times" | "New York Times" => Term::iri(vocab::sources::NYT),
        "Associated Press" | "Associated Press Writer" => Term::iri(vocab::sources::APW),
        other => Term::string(other),
    }
}

/// One nanopub per attribution relation, linking each role to its word IRIs.
pub fn build_attribution_nanopub(
    relation: &AttributionRelation,
    words_by_span: &BTreeMap<(usize, usize), String>,
    text_np_uri: &str,
    manifest: &CorpusManifest,
) -> Result<Nanopub, ModelError> {
    let mut builder = NanopubBuilder::new();
    bind_corpus_prefix(&mut builder, manifest);
    builder.bind_prefix("textnp", format!("{text_np_uri}#"));
    builder.bind_prefix("textoffset", format!("{text_np_uri}#offset_"));
    let annotation = NanopubBuilder::sub("annotation");
    builder.assertion(
        annotation.clone(),
        Term::iri(vocab::rdf::TYPE),
        Term::iri(vocab::oa::ANNOTATION),
    );
    builder.assertion(
        annotation.clone(),
        Term::iri(vocab::dct::IS_PART_OF),
        Term::iri(&manifest.corpus_iri),
    );
    builder.assertion(
        annotation.clone(),
        Term::iri(vocab::rdfs::LABEL),
        Term::string(&relation.relation_id),
    );
    let roles: [(&str, &[(usize, usize)]); 3] = [
        (vocab::pvcpp::HAS_SOURCE_ANNOTATED_WORD, &relation.source_spans),
        (vocab::pvcpp::HAS_CUE_ANNOTATED_WORD, &relation.cue_spans),
        (
            vocab::pvcpp::HAS_CONTENT_ANNOTATED_WORD,
            &relation.content_spans,
        ),
    ];
    for (predicate, spans) in roles {
        let mut spans = spans.to_vec();
        spans.sort_unstable();
        for span in spans {
            let word_iri = words_by_span.get(&span).ok_or_else(|| {
                ModelError::DanglingWordReference(format!(
                    "{text_np_uri}#offset_{}-{}",
                    span.0, span.1
                ))
            })?;
            builder.assertion(annotation.clone(), Term::iri(predicate), Term::iri(word_iri));
        }
    }
    add_annotation_provenance(&mut builder, manifest);
    builder.protected(manifest.protected_default);
    Ok(builder.finalize(&manifest.base_namespace)?)
}

/// One nanopub per event: the event identifier plus its target word.
pub fn build_event_nanopub(
    event: &EventRecord,
    word_iri: &str,
    text_np_uri: &str,
    manifest: &CorpusManifest,
) -> Result<Nanopub, ModelError> {
    let mut builder = NanopubBuilder::new();
    bind_corpus_prefix(&mut builder, manifest);
    builder.bind_prefix("textnp", format!("{text_np_uri}#"));
    builder.bind_prefix("textoffset", format!("{text_np_uri}#offset_"));
    let annotation = NanopubBuilder::sub("annotation");
    builder.assertion(
        annotation.clone(),
        Term::iri(vocab::rdf::TYPE),
        Term::iri(vocab::oa::ANNOTATION),
    );
    builder.assertion(
        annotation.clone(),
        Term::iri(vocab::dct::IS_PART_OF),
        Term::iri(&manifest.corpus_iri),
    );
    builder.assertion(
        annotation.clone(),
        Term::iri(vocab::pvcpf::HAS_EID),
        Term::string(&event.event_id),
    );
    builder.assertion(
        annotation,
        Term::iri(vocab::oa::HAS_TARGET),
        Term::iri(word_iri),
    );
    add_annotation_provenance(&mut builder, manifest);
    builder.protected(manifest.protected_default);
    Ok(builder.finalize(&manifest.base_namespace)?)
}

/// One nanopub per factuality assignment, referencing the event annotation.
pub fn build_factuality_nanopub(
    factuality: &FactualityRecord,
    event_annotation_iri: &str,
    manifest: &CorpusManifest,
) -> Result<Nanopub, ModelError> {
    let mut builder = NanopubBuilder::new();
    bind_corpus_prefix(&mut builder, manifest);
    let annotation = NanopubBuilder::sub("annotation");
    builder.assertion(
        annotation.clone(),
        Term::iri(vocab::rdf::TYPE),
        Term::iri(vocab::oa::ANNOTATION),
    );
    builder.assertion(
        annotation.clone(),
        Term::iri(vocab::dct::IS_PART_OF),
        Term::iri(&manifest.corpus_iri),
    );
    builder.assertion(
        annotation.clone(),
        Term::iri(vocab::dct::REFERENCES),
        Term::iri(event_annotation_iri),
    );
    builder.assertion(
        annotation.clone(),
        Term::iri(vocab::pvcpf::HAS_RELATIVE_SOURCE),
        Term::string(&factuality.relative_source),
    );
    builder.assertion(
        annotation,
        Term::iri(vocab::pvcpf::HAS_FACT_VALUE),
        Term::string(&factuality.factuality_value),
    );
    add_annotation_provenance(&mut builder, manifest);
    builder.protected(manifest.protected_default);
    Ok(builder.finalize(&manifest.base_namespace)?)
}

/// Generates the corpus nanopub and its index over the member URIs.
/// Corpus-level metadata carries no licensed content, so both are public
/// regardless of the manifest's protected default.
pub fn generate_corpus(
    manifest: &CorpusManifest,
    members: &[String],
) -> Result<(Nanopub, IndexNanopub), ModelError> {
    let index = build_index(
        members,
        &IndexMetadata {
            title: format!("Index of {}", manifest.title),
            created: manifest.created.clone(),
            creator: manifest.creator.clone(),
            license: Some(manifest.license.clone()),
            base_namespace: manifest.base_namespace.clone(),
        },
        None,
    )?;

    let mut builder = NanopubBuilder::new();
    bind_corpus_prefix(&mut builder, manifest);
    builder.bind_prefix("indexnp", index.uri());
    let corpus = Term::iri(&manifest.corpus_iri);
    builder.assertion(
        corpus.clone(),
        Term::iri(vocab::rdf::TYPE),
        Term::iri(manifest.kind.class_iri()),
    );
    builder.assertion(
        corpus.clone(),
        Term::iri(vocab::dct::TITLE),
        Term::string(&manifest.title),
    );
    if let Some(see_also) = &manifest.see_also {
        builder.assertion(
            corpus.clone(),
            Term::iri(vocab::rdfs::SEE_ALSO),
            Term::iri(see_also),
        );
    }
    builder.assertion(
        corpus,
        Term::iri(vocab::dcat::DISTRIBUTION),
        Term::iri(index.uri()),
    );
    builder.provenance(
        Term::iri(format!("{PLACEHOLDER}#assertion")),
        Term::iri(vocab::prov::WAS_ATTRIBUTED_TO),
        Term::iri(manifest.provenance_agent()),
    );
    builder.pubinfo_defaults(
        &manifest.created,
        manifest.creator.as_deref(),
        Some(&manifest.license),
    );
    let corpus_np = builder.finalize(&manifest.base_namespace)?;
    Ok((corpus_np, index))
}

fn bind_corpus_prefix(builder: &mut NanopubBuilder, manifest: &CorpusManifest) {
    if let Some(ns) = manifest.corpus_namespace() {
        builder.bind_prefix("corpus", ns);
    }
}

fn add_annotation_provenance(builder: &mut NanopubBuilder, manifest: &CorpusManifest) {
    builder.provenance(
        Term::iri(format!("{PLACEHOLDER}#assertion")),
        Term::iri(vocab::prov::WAS_ATTRIBUTED_TO),
        Term::iri(manifest.provenance_agent()),
    );
    builder.pubinfo_defaults(
        &manifest.created,
        manifest.creator.as_deref(),
        Some(&manifest.license),
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{
        build_sentence_index, parse_document, Channel, ParseOptions, SentenceOptions,
    };
    use crate::model::{classify, CorpusKind, NanopubKind};

    fn text_manifest(protected: bool) -> CorpusManifest {
        CorpusManifest {
            kind: CorpusKind::TextCorpus,
            title: "WSJ text corpus".into(),
            corpus_iri: "https://w3id.org/provcorp/corpus/wsj-text".into(),
            base_namespace: "https://w3id.org/provcorp/np/".into(),
            see_also: None,
            creator: Some("https://orcid.org/0000-0001-2345-6789".into()),
            annotator: None,
            license: "https://example.org/licenses/restricted".into(),
            protected_default: protected,
            created: "2020-05-01T00:00:00".into(),
        }
    }

    fn financing_doc() -> SourceDocument {
        let raw = "<DOC>\n<DOCNO> wsj_0010 </DOCNO>\n<HL> Financing Business: @  Rogers Communications Inc. </HL>\n<DD> 11/02/89 </DD>\n<SO> @ Wall Street Journal </SO>\n<TEXT>\n   ROGERS COMMUNICATIONS Inc. said it plans to raise funds.\n</TEXT>\n</DOC>\n";
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
    fn document_nanopub_carries_title_and_created() {
        let layer = generate_text_layer(&financing_doc(), &text_manifest(true)).unwrap();
        assert!(layer.document_np.verify().valid);
        assert!(layer.text_np.verify().valid);
        let trig = layer.document_np.to_trig();
        assert!(
            trig.contains("dct:title \"Financing Business: @  Rogers Communications Inc.\""),
            "{trig}"
        );
        assert!(trig.contains("dct:created \"1989-11-02T00:00:00\"^^xsd:dateTime"));
        assert!(trig.contains("a foaf:Document"));
        assert!(trig.contains("pvcp:hasText textnp:text"));
        assert_eq!(classify(&layer.document_np), NanopubKind::Document);
        assert_eq!(classify(&layer.text_np), NanopubKind::Text);
    }

    #[test]
    fn missing_title_omits_the_quad() {
        let mut doc = financing_doc();
        doc.title = None;
        doc.headline_span = None;
        let layer = generate_text_layer(&doc, &text_manifest(true)).unwrap();
        assert!(layer.document_np.verify().valid);
        assert!(!layer.document_np.to_trig().contains("dct:title"));
        assert!(layer.headline_entity_iri.is_none());
    }

    #[test]
    fn protection_follows_the_manifest_default() {
        let layer = generate_text_layer(&financing_doc(), &text_manifest(true)).unwrap();
        assert!(layer.text_np.is_protected());
        assert!(layer.document_np.is_protected());
        let open = generate_text_layer(&financing_doc(), &text_manifest(false)).unwrap();
        assert!(!open.text_np.is_protected());
        assert!(!open.document_np.is_protected());
    }

    #[test]
    fn attribution_nanopub_links_roles_to_words() {
        let doc = financing_doc();
        let manifest = text_manifest(true);
        let layer = generate_text_layer(&doc, &manifest).unwrap();
        let parc = CorpusManifest {
            kind: CorpusKind::AnnotationCorpus,
            title: "PARC Annotation corpus".into(),
            corpus_iri: "https://w3id.org/provcorp/corpus/parc-annotations".into(),
            protected_default: false,
            ..manifest.clone()
        };
        let relation = AttributionRelation {
            relation_id: "wsj_0010_set_1".into(),
            source_spans: vec![(3, 9), (10, 24), (25, 29)],
            cue_spans: vec![(30, 34)],
            content_spans: vec![(35, 37)],
        };
        let mut words = BTreeMap::new();
        for &(b, e) in [(3, 9), (10, 24), (25, 29), (30, 34), (35, 37)].iter() {
            words.insert(
                (b, e),
                crate::model::word_iri_for(layer.text_np.uri(), Channel::Body, b, e),
            );
        }
        let np =
            build_attribution_nanopub(&relation, &words, layer.text_np.uri(), &parc).unwrap();
        assert!(np.verify().valid);
        assert!(!np.is_protected());
        let trig = np.to_trig();
        assert!(trig.contains("pvcpp:hasCueAnnotatedWord textoffset:30-34"), "{trig}");
        assert!(trig.contains(
            "pvcpp:hasSourceAnnotatedWord textoffset:10-24, textoffset:25-29, textoffset:3-9"
        ));
        assert_eq!(classify(&np), NanopubKind::Attribution);
    }

    #[test]
    fn dangling_word_reference_is_an_error() {
        let doc = financing_doc();
        let manifest = text_manifest(false);
        let layer = generate_text_layer(&doc, &manifest).unwrap();
        let relation = AttributionRelation {
            relation_id: "r".into(),
            source_spans: vec![(3, 9)],
            cue_spans: vec![],
            content_spans: vec![],
        };
        let words = BTreeMap::new();
        match build_attribution_nanopub(&relation, &words, layer.text_np.uri(), &manifest) {
            Err(ModelError::DanglingWordReference(iri)) => assert!(iri.contains("offset_3-9")),
            other => panic!("expected DanglingWordReference, got {other:?}"),
        }
    }

    #[test]
    fn event_and_factuality_chain() {
        let manifest = CorpusManifest {
            kind: CorpusKind::AnnotationCorpus,
            title: "Event corpus".into(),
            corpus_iri: "https://w3id.org/provcorp/corpus/factbank-annotations".into(),
            protected_default: true,
            ..text_manifest(true)
        };
        let event = EventRecord {
            event_id: "e1".into(),
            sentence_number: 1,
            token_index: 3,
            token_string: "said".into(),
            resolved_span: (30, 34),
            channel: Channel::Body,
        };
        let text_np_uri =
            "https://w3id.org/provcorp/np/BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB";
        let word_iri = format!("{text_np_uri}#offset_30-34");
        let event_np = build_event_nanopub(&event, &word_iri, text_np_uri, &manifest).unwrap();
        assert!(event_np.verify().valid);
        assert!(event_np.to_trig().contains("pvcpf:hasEID \"e1\""));
        assert_eq!(classify(&event_np), NanopubKind::Event);

        let factuality = FactualityRecord {
            event_id: "e1".into(),
            relative_source: "AUTHOR".into(),
            factuality_value: "CT+".into(),
        };
        let event_annotation = format!("{}#annotation", event_np.uri());
        let fact_np = build_factuality_nanopub(&factuality, &event_annotation, &manifest).unwrap();
        assert!(fact_np.verify().valid);
        let trig = fact_np.to_trig();
        assert!(trig.contains("pvcpf:hasFactValue \"CT+\""));
        assert!(trig.contains("pvcpf:hasRelativeSource \"AUTHOR\""));
        assert_eq!(classify(&fact_np), NanopubKind::Factuality);
    }

    #[test]
    fn corpus_and_index_are_public_and_linked() {
        let manifest = CorpusManifest {
            see_also: Some("https://example.org/about.pdf".into()),
            protected_default: true,
            ..text_manifest(true)
        };
        let member =
            "https://w3id.org/provcorp/np/CCCCCCCCCCCCCCCCCCCCCCCCCCCCCCCCCCCCCCCCCCC".to_owned();
        let (corpus_np, index) = generate_corpus(&manifest, &[member]).unwrap();
        assert!(corpus_np.verify().valid);
        assert!(index.nanopub().verify().valid);
        assert!(!corpus_np.is_protected());
        assert!(!index.nanopub().is_protected());
        let trig = corpus_np.to_trig();
        assert!(trig.contains("a pvcp:TextCorpus"));
        assert!(trig.contains("dct:title \"WSJ text corpus\""));
        assert!(trig.contains("rdfs:seeAlso"));
        assert!(trig.contains("dcat:distribution indexnp:"), "{trig}");
        assert_eq!(classify(&corpus_np), NanopubKind::Corpus);
        assert_eq!(classify(index.nanopub()), NanopubKind::Index);
    }

    #[test]
    fn empty_corpus_propagates_empty_index() {
        match generate_corpus(&text_manifest(false), &[]) {
            Err(ModelError::Nanopub(crate::nanopub::NanopubError::EmptyIndex)) => {}
            other => panic!("expected EmptyIndex, got {other:?}"),
        }
    }
}
