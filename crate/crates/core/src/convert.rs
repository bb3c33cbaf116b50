//! End-to-end conversion: raw documents plus annotation layers in,
//! a tree of `.trig` nanopublications plus a machine-readable report out.
//!
//! Per-document work (parsing, text layer, annotation building) fans out in
//! parallel; word deduplication and corpus/index assembly are sequential
//! merge steps. Two runs over identical inputs produce byte-identical trees.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use crate::ingest::{
    build_sentence_index, parse_document, parse_factbank_tables, parse_parc_annotations,
    ChallengeDiagnostic, Channel, DocOverrides, EventRecord, FactualityRecord, IngestError,
    ParcAnnotations, ParseOptions, Resolution, SentenceOptions, SourceDocument,
};
use crate::model::{
    build_attribution_nanopub, build_event_nanopub, build_factuality_nanopub, classify,
    dedup_words, generate_corpus, generate_text_layer, mint_word, word_iri_for, CorpusManifest,
    MergeReport, ModelError, NanopubKind, WordDraft, WordExtras,
};
use crate::nanopub::Nanopub;
use crate::par;

/// Conversion configuration. The annotation layers are optional but must be
/// configured as manifest + directory pairs.
#[derive(Debug, Clone)]
pub struct ConvertConfig {
    pub text_manifest: CorpusManifest,
    pub parc_manifest: Option<CorpusManifest>,
    pub factbank_manifest: Option<CorpusManifest>,
    pub raw_dir: PathBuf,
    pub parc_dir: Option<PathBuf>,
    pub factbank_dir: Option<PathBuf>,
    pub overrides_dir: Option<PathBuf>,
    pub output_dir: PathBuf,
    /// Collapse identical word nanopubs across corpora (default true).
    pub dedup_words: bool,
    /// Raw files store one sentence per line (default true).
    pub line_split: bool,
}

/// File names expected inside the factbank directory.
pub const FACTBANK_EVENT_TABLE: &str = "tml_event.txt";
pub const FACTBANK_FACTUALITY_TABLE: &str = "fb_factValue.txt";

/// Errors that abort the whole conversion (per-document problems exclude
/// only the affected document instead).
#[derive(Debug, thiserror::Error)]
pub enum ConvertError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
}

/// Why a document was left out, mapped onto the challenge catalog.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Exclusion {
    pub challenge_id: u8,
    pub reason: String,
}

/// Per-document outcome in the conversion report.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DocReport {
    pub doc_id: String,
    pub status: String,
    pub diagnostics: Vec<ChallengeDiagnostic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exclusion: Option<Exclusion>,
}

/// Summary of one conversion run.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ConversionReport {
    pub documents: Vec<DocReport>,
    pub counts: BTreeMap<NanopubKind, usize>,
    pub merge: MergeReport,
    pub converted: usize,
    pub excluded: usize,
}

impl ConversionReport {
    /// All challenge ids present across document diagnostics, sorted.
    pub fn diagnostic_ids(&self) -> Vec<u8> {
        let mut ids: Vec<u8> = self
            .documents
            .iter()
            .flat_map(|d| d.diagnostics.iter().map(|x| x.challenge_id))
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// JSON-lines rendering: one line per document, one per merge report,
    /// one per counts summary.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for doc in &self.documents {
            let mut line = serde_json::Map::new();
            line.insert("type".into(), "document".into());
            let doc_json = serde_json::to_value(doc).expect("report serializes");
            if let serde_json::Value::Object(map) = doc_json {
                line.extend(map);
            }
            out.push_str(&serde_json::Value::Object(line).to_string());
            out.push('\n');
        }
        let mut merge = serde_json::Map::new();
        merge.insert("type".into(), "merge".into());
        if let serde_json::Value::Object(map) =
            serde_json::to_value(&self.merge).expect("report serializes")
        {
            merge.extend(map);
        }
        out.push_str(&serde_json::Value::Object(merge).to_string());
        out.push('\n');
        let mut counts = serde_json::Map::new();
        counts.insert("type".into(), "counts".into());
        for (kind, n) in &self.counts {
            counts.insert(kind.dir_name().into(), (*n).into());
        }
        counts.insert("converted".into(), self.converted.into());
        counts.insert("excluded".into(), self.excluded.into());
        out.push_str(&serde_json::Value::Object(counts).to_string());
        out.push('\n');
        out
    }
}

struct DocBundle {
    doc: SourceDocument,
    parc: Option<ParcAnnotations>,
    events: Vec<EventRecord>,
    factuality: Vec<FactualityRecord>,
}

enum DocOutcome {
    Converted(Box<DocBundle>),
    Excluded { doc_id: String, exclusion: Exclusion },
}

/// Runs the full conversion. Per-document ingestion failures exclude the
/// document and are reported; configuration and generation failures abort.
pub fn run_convert(config: &ConvertConfig) -> Result<ConversionReport, ConvertError> {
    validate_config(config)?;

    let raw_files = list_files(&config.raw_dir)?;
    if raw_files.is_empty() {
        return Err(ConvertError::Config(format!(
            "raw directory {} holds no files",
            config.raw_dir.display()
        )));
    }

    let factbank_tables = match (&config.factbank_manifest, &config.factbank_dir) {
        (Some(_), Some(dir)) => {
            let events = std::fs::read_to_string(dir.join(FACTBANK_EVENT_TABLE))
                .map_err(|e| ConvertError::Config(format!("{FACTBANK_EVENT_TABLE}: {e}")))?;
            let facts = std::fs::read_to_string(dir.join(FACTBANK_FACTUALITY_TABLE))
                .map_err(|e| {
                    ConvertError::Config(format!("{FACTBANK_FACTUALITY_TABLE}: {e}"))
                })?;
            Some((events, facts))
        }
        _ => None,
    };

    // phase 1: parse + ingest, one task per document
    let tables_ref = &factbank_tables;
    let outcomes: Vec<std::io::Result<DocOutcome>> = par::map_collect(raw_files, move |path| {
        ingest_one(config, tables_ref, &path)
    });

    let mut bundles: Vec<DocBundle> = Vec::new();
    let mut reports: Vec<DocReport> = Vec::new();
    for outcome in outcomes {
        match outcome? {
            DocOutcome::Converted(bundle) => bundles.push(*bundle),
            DocOutcome::Excluded { doc_id, exclusion } => reports.push(DocReport {
                doc_id,
                status: "excluded".into(),
                diagnostics: vec![ChallengeDiagnostic::new(
                    exclusion.challenge_id,
                    Resolution::Excluded,
                )],
                exclusion: Some(exclusion),
            }),
        }
    }
    bundles.sort_by(|a, b| a.doc.doc_id.cmp(&b.doc.doc_id));

    // phase 2: text layer per document
    let text_manifest = &config.text_manifest;
    let layers = par::map_collect(std::mem::take(&mut bundles), move |bundle| {
        let layer = generate_text_layer(&bundle.doc, text_manifest)?;
        Ok::<_, ModelError>((bundle, layer))
    });
    let mut docs = Vec::with_capacity(layers.len());
    for result in layers {
        docs.push(result?);
    }

    // phase 3: mint words (both passes), then dedup
    let mut word_drafts: Vec<WordDraft> = Vec::new();
    for (bundle, layer) in &docs {
        word_drafts.extend(mint_document_words(bundle, layer.text_np.uri(), text_manifest)?);
    }
    let (word_drafts, merge) = if config.dedup_words {
        dedup_words(word_drafts)
    } else {
        (word_drafts, MergeReport::default())
    };

    // phase 4: finalize word nanopubs
    let word_results = par::map_collect(word_drafts, move |draft| draft.to_nanopub(text_manifest));
    let mut word_nps = Vec::with_capacity(word_results.len());
    for result in word_results {
        word_nps.push(result?);
    }

    // phase 5: event nanopubs (their URIs are needed by factuality)
    let mut event_nps: Vec<Nanopub> = Vec::new();
    let mut event_annotation_iris: HashMap<(String, String), String> = HashMap::new();
    if let Some(manifest) = &config.factbank_manifest {
        for (bundle, layer) in &docs {
            for event in &bundle.events {
                let word_iri = event_word_iri(event, layer.text_np.uri());
                let np = build_event_nanopub(event, &word_iri, layer.text_np.uri(), manifest)?;
                event_annotation_iris.insert(
                    (bundle.doc.doc_id.clone(), event.event_id.clone()),
                    format!("{}#annotation", np.uri()),
                );
                event_nps.push(np);
            }
        }
    }

    // phase 6: attribution and factuality nanopubs
    let mut attribution_nps: Vec<Nanopub> = Vec::new();
    if let Some(manifest) = &config.parc_manifest {
        for (bundle, layer) in &docs {
            if let Some(parc) = &bundle.parc {
                let words_by_span: BTreeMap<(usize, usize), String> = bundle
                    .relation_spans(parc)
                    .into_iter()
                    .map(|span| {
                        (
                            span,
                            word_iri_for(layer.text_np.uri(), Channel::Body, span.0, span.1),
                        )
                    })
                    .collect();
                for relation in &parc.relations {
                    attribution_nps.push(build_attribution_nanopub(
                        relation,
                        &words_by_span,
                        layer.text_np.uri(),
                        manifest,
                    )?);
                }
            }
        }
    }
    let mut factuality_nps: Vec<Nanopub> = Vec::new();
    if let Some(manifest) = &config.factbank_manifest {
        for (bundle, _) in &docs {
            for factuality in &bundle.factuality {
                let key = (bundle.doc.doc_id.clone(), factuality.event_id.clone());
                let event_iri = event_annotation_iris.get(&key).ok_or_else(|| {
                    ModelError::DanglingWordReference(format!(
                        "event {} of {}",
                        factuality.event_id, bundle.doc.doc_id
                    ))
                })?;
                factuality_nps.push(build_factuality_nanopub(factuality, event_iri, manifest)?);
            }
        }
    }

    // phase 7: corpora and indexes
    let mut outputs: Vec<(String, NanopubKind, Nanopub)> = Vec::new();
    let text_dir = text_manifest.corpus_dir().to_owned();
    let mut text_members = Vec::new();
    for (_, layer) in &docs {
        text_members.push(layer.document_np.uri().to_owned());
        text_members.push(layer.text_np.uri().to_owned());
        outputs.push((text_dir.clone(), NanopubKind::Document, layer.document_np.clone()));
        outputs.push((text_dir.clone(), NanopubKind::Text, layer.text_np.clone()));
    }
    for np in &word_nps {
        text_members.push(np.uri().to_owned());
        outputs.push((text_dir.clone(), NanopubKind::Word, np.clone()));
    }
    let (text_corpus_np, text_index) = generate_corpus(text_manifest, &text_members)?;
    outputs.push((text_dir.clone(), NanopubKind::Corpus, text_corpus_np));
    outputs.push((text_dir.clone(), NanopubKind::Index, text_index.nanopub().clone()));

    if let Some(manifest) = &config.parc_manifest {
        let dir = manifest.corpus_dir().to_owned();
        let members: Vec<String> = attribution_nps.iter().map(|np| np.uri().to_owned()).collect();
        for np in &attribution_nps {
            outputs.push((dir.clone(), NanopubKind::Attribution, np.clone()));
        }
        let (corpus_np, index) = generate_corpus(manifest, &members)?;
        outputs.push((dir.clone(), NanopubKind::Corpus, corpus_np));
        outputs.push((dir.clone(), NanopubKind::Index, index.nanopub().clone()));
    }
    if let Some(manifest) = &config.factbank_manifest {
        let dir = manifest.corpus_dir().to_owned();
        let mut members: Vec<String> = Vec::new();
        for np in &event_nps {
            members.push(np.uri().to_owned());
            outputs.push((dir.clone(), NanopubKind::Event, np.clone()));
        }
        for np in &factuality_nps {
            members.push(np.uri().to_owned());
            outputs.push((dir.clone(), NanopubKind::Factuality, np.clone()));
        }
        let (corpus_np, index) = generate_corpus(manifest, &members)?;
        outputs.push((dir.clone(), NanopubKind::Corpus, corpus_np));
        outputs.push((dir.clone(), NanopubKind::Index, index.nanopub().clone()));
    }

    // phase 8: write the tree and the report; counts are files on disk, so
    // identical content minted twice (same code) is counted once
    let mut counts: BTreeMap<NanopubKind, usize> = BTreeMap::new();
    let mut written: std::collections::HashSet<PathBuf> = std::collections::HashSet::new();
    for (corpus_dir, kind, np) in &outputs {
        debug_assert_eq!(classify(np), *kind);
        let code = np.artifact_code().expect("finalized nanopub");
        let dir = config.output_dir.join(corpus_dir).join(kind.dir_name());
        std::fs::create_dir_all(&dir)?;
        let path = dir.join(format!("{code}.trig"));
        if written.insert(path.clone()) {
            std::fs::write(path, np.to_trig())?;
            *counts.entry(*kind).or_default() += 1;
        }
    }

    for (bundle, _) in &docs {
        reports.push(DocReport {
            doc_id: bundle.doc.doc_id.clone(),
            status: "converted".into(),
            diagnostics: bundle.doc.diagnostics.clone(),
            exclusion: None,
        });
    }
    reports.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));

    let report = ConversionReport {
        converted: docs.len(),
        excluded: reports.iter().filter(|r| r.status == "excluded").count(),
        documents: reports,
        counts,
        merge,
    };
    std::fs::write(config.output_dir.join("report.jsonl"), report.to_jsonl())?;
    Ok(report)
}

impl DocBundle {
    /// Every span any relation references, deduplicated.
    fn relation_spans(&self, parc: &ParcAnnotations) -> Vec<(usize, usize)> {
        let mut spans: Vec<(usize, usize)> = parc
            .relations
            .iter()
            .flat_map(|r| {
                r.source_spans
                    .iter()
                    .chain(&r.cue_spans)
                    .chain(&r.content_spans)
                    .copied()
            })
            .collect();
        spans.sort_unstable();
        spans.dedup();
        spans
    }
}

fn event_word_iri(event: &EventRecord, text_np_uri: &str) -> String {
    word_iri_for(
        text_np_uri,
        event.channel,
        event.resolved_span.0,
        event.resolved_span.1,
    )
}

/// Words referenced by this document's annotations, from both passes.
/// Word-level extras (lemma, part of speech) come from the attribution
/// token table when the span matches; protection follows the text corpus.
fn mint_document_words(
    bundle: &DocBundle,
    text_np_uri: &str,
    text_manifest: &CorpusManifest,
) -> Result<Vec<WordDraft>, ModelError> {
    let doc = &bundle.doc;
    let protected = text_manifest.protected_default;
    let mut drafts = Vec::new();
    if let Some(parc) = &bundle.parc {
        let token_for: HashMap<(usize, usize), &crate::ingest::ParcToken> = parc
            .tokens
            .iter()
            .map(|t| ((t.begin, t.end), t))
            .collect();
        for span in bundle.relation_spans(parc) {
            let token = token_for.get(&span);
            let extras = WordExtras {
                lemma: token.and_then(|t| t.lemma.clone()),
                pos: token.and_then(|t| t.pos.clone()),
                sentence_number: sentence_number_for(doc, span.0),
                channel: Channel::Body,
            };
            drafts.push(mint_word(
                text_np_uri,
                span.0,
                span.1,
                &doc.text,
                &extras,
                protected,
            )?);
        }
    }
    // The event tables carry no word-level extras; spans shared with the
    // attribution pass converge on the same identifier and dedup unions the
    // extras afterwards.
    for event in &bundle.events {
        let channel_text: &str = match event.channel {
            Channel::Body => &doc.text,
            Channel::Headline => doc.title.as_deref().unwrap_or_default(),
        };
        let extras = WordExtras {
            lemma: None,
            pos: None,
            sentence_number: event.sentence_number,
            channel: event.channel,
        };
        drafts.push(mint_word(
            text_np_uri,
            event.resolved_span.0,
            event.resolved_span.1,
            channel_text,
            &extras,
            protected,
        )?);
    }
    Ok(drafts)
}

/// Number of the sentence containing the character position, or the nearest
/// preceding one for positions in inter-sentence whitespace.
fn sentence_number_for(doc: &SourceDocument, position: usize) -> u32 {
    let mut best = doc.sentences.first().map(|s| s.number).unwrap_or(0);
    for sentence in &doc.sentences {
        if sentence.begin <= position {
            best = sentence.number;
        } else {
            break;
        }
    }
    best
}

fn ingest_one(
    config: &ConvertConfig,
    factbank_tables: &Option<(String, String)>,
    path: &Path,
) -> std::io::Result<DocOutcome> {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("unknown")
        .to_owned();
    let raw = std::fs::read(path)?;

    let overrides = match &config.overrides_dir {
        Some(dir) => {
            let fix_path = dir.join(format!("{stem}.fix"));
            if fix_path.exists() {
                match DocOverrides::parse(&std::fs::read_to_string(&fix_path)?) {
                    Ok(o) => Some(o),
                    Err(e) => {
                        return Ok(DocOutcome::Excluded {
                            doc_id: stem,
                            exclusion: Exclusion {
                                challenge_id: 3,
                                reason: format!("bad override sidecar: {e}"),
                            },
                        })
                    }
                }
            } else {
                None
            }
        }
        None => None,
    };

    let options = ParseOptions {
        dialect_hint: None,
        fallback_doc_id: Some(&stem),
        overrides: overrides.as_ref(),
    };
    let mut doc = match parse_document(&raw, &options) {
        Ok(doc) => doc,
        Err(e) => {
            return Ok(DocOutcome::Excluded {
                doc_id: stem,
                exclusion: exclusion_for(&e),
            })
        }
    };

    let sentence_options = SentenceOptions {
        line_split_available: config.line_split,
        split_on_semicolon: true,
        override_sentences: overrides
            .as_ref()
            .filter(|o| !o.sentences.is_empty())
            .map(|o| o.sentences.clone()),
    };
    if let Err(e) = build_sentence_index(&mut doc, &sentence_options) {
        return Ok(DocOutcome::Excluded {
            doc_id: doc.doc_id,
            exclusion: exclusion_for(&e),
        });
    }

    let parc = match &config.parc_dir {
        Some(dir) => {
            let xml_path = dir.join(format!("{stem}.xml"));
            if xml_path.exists() {
                match parse_parc_annotations(&std::fs::read(&xml_path)?, &mut doc) {
                    Ok(parc) => Some(parc),
                    Err(e) => {
                        return Ok(DocOutcome::Excluded {
                            doc_id: doc.doc_id,
                            exclusion: exclusion_for(&e),
                        })
                    }
                }
            } else {
                None
            }
        }
        None => None,
    };

    let (events, factuality) = match factbank_tables {
        Some((event_table, factuality_table)) => {
            match parse_factbank_tables(event_table, factuality_table, &mut doc) {
                Ok(pair) => pair,
                Err(e) => {
                    return Ok(DocOutcome::Excluded {
                        doc_id: doc.doc_id,
                        exclusion: exclusion_for(&e),
                    })
                }
            }
        }
        None => (Vec::new(), Vec::new()),
    };

    Ok(DocOutcome::Converted(Box::new(DocBundle {
        doc,
        parc,
        events,
        factuality,
    })))
}

/// Maps a per-document failure onto the challenge catalog.
fn exclusion_for(error: &IngestError) -> Exclusion {
    let challenge_id = match error {
        IngestError::UnknownSentence { .. } | IngestError::TokenResolutionFailure { .. } => 3,
        IngestError::UnrecoverableStructure { .. } => 6,
        _ => 1,
    };
    Exclusion {
        challenge_id,
        reason: error.to_string(),
    }
}

fn validate_config(config: &ConvertConfig) -> Result<(), ConvertError> {
    if !config.raw_dir.is_dir() {
        return Err(ConvertError::Config(format!(
            "raw directory does not exist: {}",
            config.raw_dir.display()
        )));
    }
    let pairing = |name: &str,
                   manifest: &Option<CorpusManifest>,
                   dir: &Option<PathBuf>|
     -> Result<(), ConvertError> {
        match (manifest, dir) {
            (Some(_), Some(d)) if d.is_dir() => Ok(()),
            (Some(_), Some(d)) => Err(ConvertError::Config(format!(
                "{name} directory does not exist: {}",
                d.display()
            ))),
            (Some(_), None) | (None, Some(_)) => Err(ConvertError::Config(format!(
                "{name} layer needs both a manifest and a directory"
            ))),
            (None, None) => Ok(()),
        }
    };
    pairing("parc", &config.parc_manifest, &config.parc_dir)?;
    pairing("factbank", &config.factbank_manifest, &config.factbank_dir)?;
    if let Some(dir) = &config.overrides_dir {
        if !dir.is_dir() {
            return Err(ConvertError::Config(format!(
                "overrides directory does not exist: {}",
                dir.display()
            )));
        }
    }
    Ok(())
}

fn list_files(dir: &Path) -> Result<Vec<PathBuf>, std::io::Error> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|entry| entry.ok())
        .map(|entry| entry.path())
        .filter(|path| path.is_file())
        .collect();
    files.sort();
    Ok(files)
}

/// Network closure check over a set of nanopubs: every IRI referenced in an
/// assertion and minted under one of the loaded base namespaces must be the
/// subject of some assertion or a loaded nanopub URI. Returns the dangling
/// IRIs, sorted.
pub fn dangling_references(nanopubs: &[Nanopub]) -> Vec<String> {
    use std::collections::HashSet;
    let np_uris: HashSet<&str> = nanopubs.iter().map(|np| np.uri()).collect();
    let bases: HashSet<String> = nanopubs
        .iter()
        .filter_map(|np| np.uri().rfind('/').map(|i| np.uri()[..=i].to_owned()))
        .collect();
    let subjects: HashSet<&str> = nanopubs
        .iter()
        .flat_map(|np| np.assertion().filter_map(|q| q.subject.as_iri()))
        .collect();
    let mut dangling: Vec<String> = Vec::new();
    for np in nanopubs {
        for quad in np.assertion() {
            let Some(object) = quad.object.as_iri() else {
                continue;
            };
            let internal = bases.iter().any(|b| object.starts_with(b.as_str()));
            if internal && !subjects.contains(object) && !np_uris.contains(object) {
                dangling.push(object.to_owned());
            }
        }
    }
    dangling.sort();
    dangling.dedup();
    dangling
}
