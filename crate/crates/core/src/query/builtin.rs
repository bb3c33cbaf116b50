//! The built-in questions `q1`–`q6` over the merged annotation layers.
//!
//! Each question compiles to a basic graph pattern; a few add a
//! deterministic post-processing step (grouping rows into phrases, lemma
//! matching) on top of the evaluator output.

use std::collections::BTreeMap;
use std::str::FromStr;

use super::eval::{
    evaluate, BindingTable, CountAggregate, GroupBy, PatternTerm, Query, TriplePattern,
};
use super::{QuadStore, QueryError};
use crate::ingest::char_slice;
use crate::rdf::Term;
use crate::vocab;

/// The six built-in questions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Question {
    /// Who talked about an event, and what is its factuality value?
    Q1,
    /// Which events carry more than one factuality value annotation?
    Q2,
    /// Which factuality values are expressed per document?
    Q3,
    /// How often are annotation values used?
    Q4,
    /// How many events carry a given attribution component?
    Q5,
    /// Where is a given word/lemma annotated with a given attribution label?
    Q6,
}

impl FromStr for Question {
    type Err = QueryError;

    fn from_str(s: &str) -> Result<Question, QueryError> {
        match s.to_ascii_lowercase().as_str() {
            "q1" => Ok(Question::Q1),
            "q2" => Ok(Question::Q2),
            "q3" => Ok(Question::Q3),
            "q4" => Ok(Question::Q4),
            "q5" => Ok(Question::Q5),
            "q6" => Ok(Question::Q6),
            other => Err(QueryError::UnknownQuestion(other.to_owned())),
        }
    }
}

/// Attribution roles addressable by parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributionLabel {
    Source,
    Cue,
    Content,
}

impl AttributionLabel {
    pub fn predicate(self) -> &'static str {
        match self {
            AttributionLabel::Source => vocab::pvcpp::HAS_SOURCE_ANNOTATED_WORD,
            AttributionLabel::Cue => vocab::pvcpp::HAS_CUE_ANNOTATED_WORD,
            AttributionLabel::Content => vocab::pvcpp::HAS_CONTENT_ANNOTATED_WORD,
        }
    }
}

impl FromStr for AttributionLabel {
    type Err = QueryError;

    fn from_str(s: &str) -> Result<AttributionLabel, QueryError> {
        match s.to_ascii_lowercase().as_str() {
            "source" => Ok(AttributionLabel::Source),
            "cue" => Ok(AttributionLabel::Cue),
            "content" => Ok(AttributionLabel::Content),
            other => Err(QueryError::BadQuery(format!(
                "unknown attribution label {other:?} (expected source, cue or content)"
            ))),
        }
    }
}

/// Q4 counts either event-source values or attribution types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Q4Mode {
    /// Count factuality annotations per relative source.
    #[default]
    SourceValues,
    /// Count distinct event words per attribution role.
    AttributionTypes,
}

impl FromStr for Q4Mode {
    type Err = QueryError;

    fn from_str(s: &str) -> Result<Q4Mode, QueryError> {
        match s.to_ascii_lowercase().as_str() {
            "source-values" | "sources" => Ok(Q4Mode::SourceValues),
            "attribution-types" | "attribution" => Ok(Q4Mode::AttributionTypes),
            other => Err(QueryError::BadQuery(format!(
                "unknown q4 mode {other:?} (expected source-values or attribution-types)"
            ))),
        }
    }
}

/// Parameters accepted by the built-in questions.
#[derive(Debug, Clone, Default)]
pub struct BuiltinParams {
    /// Q6: the word or lemma searched for (required).
    pub lemma: Option<String>,
    /// Q5/Q6: which attribution component to look at.
    pub label: Option<AttributionLabel>,
    /// Q4: what to count.
    pub q4_mode: Q4Mode,
}

/// A compiled question: the graph pattern the evaluator runs.
#[derive(Debug, Clone)]
pub struct CompiledQuestion {
    pub query: Query,
}

// variable-name shorthands used by the compiled patterns
const FACT: &str = "fact";
const EVENT: &str = "event";
const WORD: &str = "word";
const ATTR: &str = "attr";
const SRC_WORD: &str = "srcWord";

fn pat(s: PatternTerm, p: &str, o: PatternTerm) -> TriplePattern {
    TriplePattern::new(s, PatternTerm::iri(p), o)
}

/// Compiles a question to its graph pattern.
pub fn compile_builtin(
    question: Question,
    params: &BuiltinParams,
) -> Result<CompiledQuestion, QueryError> {
    let query = match question {
        Question::Q1 => Query {
            patterns: vec![
                pat(PatternTerm::var(FACT), vocab::dct::REFERENCES, PatternTerm::var(EVENT)),
                pat(
                    PatternTerm::var(FACT),
                    vocab::pvcpf::HAS_FACT_VALUE,
                    PatternTerm::var("factValue"),
                ),
                pat(
                    PatternTerm::var(FACT),
                    vocab::pvcpf::HAS_RELATIVE_SOURCE,
                    PatternTerm::var("relativeSource"),
                ),
                pat(PatternTerm::var(EVENT), vocab::pvcpf::HAS_EID, PatternTerm::var("eID")),
                pat(PatternTerm::var(EVENT), vocab::oa::HAS_TARGET, PatternTerm::var(WORD)),
                pat(
                    PatternTerm::var(WORD),
                    vocab::nif::ANCHOR_OF,
                    PatternTerm::var("eventWord"),
                ),
                pat(
                    PatternTerm::var(WORD),
                    vocab::pvcp::IS_PART_OF_TEXT,
                    PatternTerm::var("textID"),
                ),
                TriplePattern::new(
                    PatternTerm::var(ATTR),
                    PatternTerm::var("role"),
                    PatternTerm::var(WORD),
                ),
                pat(
                    PatternTerm::var(ATTR),
                    vocab::pvcpp::HAS_SOURCE_ANNOTATED_WORD,
                    PatternTerm::var(SRC_WORD),
                ),
                pat(
                    PatternTerm::var(SRC_WORD),
                    vocab::nif::BEGIN_INDEX,
                    PatternTerm::var("srcBegin"),
                ),
                pat(
                    PatternTerm::var(SRC_WORD),
                    vocab::nif::END_INDEX,
                    PatternTerm::var("srcEnd"),
                ),
                pat(
                    PatternTerm::var("textID"),
                    vocab::rdf::VALUE,
                    PatternTerm::var("fullText"),
                ),
            ],
            values: role_values(),
            projection: vec![
                "textID".into(),
                "eID".into(),
                "eventWord".into(),
                "factValue".into(),
                "relativeSource".into(),
                ATTR.into(),
                "srcBegin".into(),
                "srcEnd".into(),
                "fullText".into(),
            ],
            distinct: true,
            ..Default::default()
        },
        Question::Q2 => Query {
            patterns: vec![
                pat(PatternTerm::var(FACT), vocab::dct::REFERENCES, PatternTerm::var(EVENT)),
                pat(
                    PatternTerm::var(FACT),
                    vocab::pvcpf::HAS_FACT_VALUE,
                    PatternTerm::var("factValue"),
                ),
                pat(
                    PatternTerm::var(FACT),
                    vocab::pvcpf::HAS_RELATIVE_SOURCE,
                    PatternTerm::var("relativeSource"),
                ),
                pat(PatternTerm::var(EVENT), vocab::pvcpf::HAS_EID, PatternTerm::var("eID")),
                pat(PatternTerm::var(EVENT), vocab::oa::HAS_TARGET, PatternTerm::var(WORD)),
                pat(
                    PatternTerm::var(WORD),
                    vocab::nif::ANCHOR_OF,
                    PatternTerm::var("eventWord"),
                ),
            ],
            projection: vec![
                EVENT.into(),
                "eID".into(),
                "eventWord".into(),
                "factValue".into(),
                "relativeSource".into(),
            ],
            distinct: true,
            ..Default::default()
        },
        Question::Q3 => Query {
            patterns: vec![
                pat(PatternTerm::var(FACT), vocab::dct::REFERENCES, PatternTerm::var(EVENT)),
                pat(
                    PatternTerm::var(FACT),
                    vocab::pvcpf::HAS_FACT_VALUE,
                    PatternTerm::var("factValue"),
                ),
                pat(PatternTerm::var(EVENT), vocab::oa::HAS_TARGET, PatternTerm::var(WORD)),
                pat(
                    PatternTerm::var(WORD),
                    vocab::pvcp::IS_PART_OF_TEXT,
                    PatternTerm::var("textID"),
                ),
            ],
            projection: vec![FACT.into(), "textID".into(), "factValue".into()],
            ..Default::default()
        },
        Question::Q4 => match params.q4_mode {
            Q4Mode::SourceValues => Query {
                patterns: vec![pat(
                    PatternTerm::var(FACT),
                    vocab::pvcpf::HAS_RELATIVE_SOURCE,
                    PatternTerm::var("relativeSource"),
                )],
                group_by: Some(GroupBy {
                    keys: vec!["relativeSource".into()],
                    count: CountAggregate {
                        var: FACT.into(),
                        distinct: true,
                        output: "Count".into(),
                    },
                }),
                ..Default::default()
            },
            Q4Mode::AttributionTypes => Query {
                patterns: vec![
                    pat(PatternTerm::var(EVENT), vocab::pvcpf::HAS_EID, PatternTerm::var("eID")),
                    pat(PatternTerm::var(EVENT), vocab::oa::HAS_TARGET, PatternTerm::var(WORD)),
                    TriplePattern::new(
                        PatternTerm::var(ATTR),
                        PatternTerm::var("Attribution"),
                        PatternTerm::var(WORD),
                    ),
                ],
                values: {
                    let mut values = BTreeMap::new();
                    values.insert(
                        "Attribution".to_owned(),
                        vec![
                            Term::iri(vocab::pvcpp::HAS_CONTENT_ANNOTATED_WORD),
                            Term::iri(vocab::pvcpp::HAS_CUE_ANNOTATED_WORD),
                            Term::iri(vocab::pvcpp::HAS_SOURCE_ANNOTATED_WORD),
                        ],
                    );
                    values
                },
                group_by: Some(GroupBy {
                    keys: vec!["Attribution".into()],
                    count: CountAggregate {
                        var: WORD.into(),
                        distinct: true,
                        output: "Count".into(),
                    },
                }),
                ..Default::default()
            },
        },
        Question::Q5 => {
            let label = params.label.unwrap_or(AttributionLabel::Source);
            Query {
                patterns: vec![
                    pat(PatternTerm::var(EVENT), vocab::pvcpf::HAS_EID, PatternTerm::var("eID")),
                    pat(PatternTerm::var(EVENT), vocab::oa::HAS_TARGET, PatternTerm::var(WORD)),
                    pat(PatternTerm::var(ATTR), label.predicate(), PatternTerm::var(WORD)),
                ],
                group_by: Some(GroupBy {
                    keys: vec![],
                    count: CountAggregate {
                        var: EVENT.into(),
                        distinct: true,
                        output: "Count".into(),
                    },
                }),
                ..Default::default()
            }
        }
        Question::Q6 => {
            let label = params.label.unwrap_or(AttributionLabel::Cue);
            Query {
                patterns: vec![
                    pat(PatternTerm::var(ATTR), label.predicate(), PatternTerm::var(WORD)),
                    pat(
                        PatternTerm::var(WORD),
                        vocab::nif::ANCHOR_OF,
                        PatternTerm::var("anchor"),
                    ),
                    pat(
                        PatternTerm::var(WORD),
                        vocab::pvcp::IS_PART_OF_TEXT,
                        PatternTerm::var("textID"),
                    ),
                    pat(
                        PatternTerm::var(WORD),
                        vocab::nif::BEGIN_INDEX,
                        PatternTerm::var("beginIndex"),
                    ),
                    pat(
                        PatternTerm::var(WORD),
                        vocab::nif::END_INDEX,
                        PatternTerm::var("endIndex"),
                    ),
                ],
                projection: vec![
                    "textID".into(),
                    WORD.into(),
                    "anchor".into(),
                    "beginIndex".into(),
                    "endIndex".into(),
                ],
                distinct: true,
                ..Default::default()
            }
        }
    };
    Ok(CompiledQuestion { query })
}

fn role_values() -> BTreeMap<String, Vec<Term>> {
    let mut values = BTreeMap::new();
    values.insert(
        "role".to_owned(),
        vec![
            Term::iri(vocab::pvcpp::HAS_SOURCE_ANNOTATED_WORD),
            Term::iri(vocab::pvcpp::HAS_CUE_ANNOTATED_WORD),
            Term::iri(vocab::pvcpp::HAS_CONTENT_ANNOTATED_WORD),
        ],
    );
    values
}

/// Which annotation layers a question needs in the store.
fn check_layers(store: &QuadStore, question: Question, params: &BuiltinParams) -> Result<(), QueryError> {
    let parc_present = store.has_predicate(vocab::pvcpp::HAS_SOURCE_ANNOTATED_WORD)
        || store.has_predicate(vocab::pvcpp::HAS_CUE_ANNOTATED_WORD)
        || store.has_predicate(vocab::pvcpp::HAS_CONTENT_ANNOTATED_WORD);
    let factbank_present =
        store.has_predicate(vocab::pvcpf::HAS_EID) || store.has_predicate(vocab::pvcpf::HAS_FACT_VALUE);
    let (needs_parc, needs_factbank) = match question {
        Question::Q1 | Question::Q5 => (true, true),
        Question::Q2 | Question::Q3 => (false, true),
        Question::Q4 => match params.q4_mode {
            Q4Mode::SourceValues => (false, true),
            Q4Mode::AttributionTypes => (true, true),
        },
        Question::Q6 => (true, false),
    };
    if needs_factbank && !factbank_present {
        return Err(QueryError::MissingLayer("factbank".into()));
    }
    if needs_parc && !parc_present {
        return Err(QueryError::MissingLayer("parc".into()));
    }
    Ok(())
}

/// Runs a built-in question: layer check, evaluation, post-processing.
pub fn run_builtin(
    store: &QuadStore,
    question: Question,
    params: &BuiltinParams,
) -> Result<BindingTable, QueryError> {
    check_layers(store, question, params)?;
    if question == Question::Q6 && params.lemma.is_none() {
        return Err(QueryError::BadQuery("q6 needs a lemma to search for".into()));
    }
    let compiled = compile_builtin(question, params)?;
    let raw = evaluate(store, &compiled.query)?;
    let table = match question {
        Question::Q1 => q1_post(raw),
        Question::Q2 => q2_post(raw),
        Question::Q3 => q3_post(raw),
        Question::Q4 | Question::Q5 => raw,
        Question::Q6 => q6_post(store, raw, params.lemma.as_deref().unwrap_or_default()),
    };
    Ok(table)
}

/// Groups Q1 rows per (text, event, value, source, attribution) and renders
/// the source phrase as the text span from the first to the last source word.
fn q1_post(raw: BindingTable) -> BindingTable {
    let col = |name: &str| raw.column_index(name).expect("q1 projection");
    let (c_text, c_eid, c_word, c_value, c_source, c_attr) = (
        col("textID"),
        col("eID"),
        col("eventWord"),
        col("factValue"),
        col("relativeSource"),
        col(ATTR),
    );
    let (c_begin, c_end, c_full) = (col("srcBegin"), col("srcEnd"), col("fullText"));

    let mut groups: BTreeMap<Vec<Term>, (usize, usize, String)> = BTreeMap::new();
    for row in &raw.rows {
        let key = vec![
            row[c_text].clone(),
            row[c_eid].clone(),
            row[c_word].clone(),
            row[c_value].clone(),
            row[c_source].clone(),
            row[c_attr].clone(),
        ];
        let (Ok(begin), Ok(end)) = (
            row[c_begin].plain().parse::<usize>(),
            row[c_end].plain().parse::<usize>(),
        ) else {
            continue;
        };
        let full = row[c_full].plain().to_owned();
        groups
            .entry(key)
            .and_modify(|(b, e, _)| {
                *b = (*b).min(begin);
                *e = (*e).max(end);
            })
            .or_insert((begin, end, full));
    }

    let columns = vec![
        "textID".to_owned(),
        "eID".to_owned(),
        "eventWord".to_owned(),
        "factValue".to_owned(),
        "relativeSource".to_owned(),
        "sourcePhrase".to_owned(),
    ];
    let mut rows: Vec<Vec<Term>> = Vec::new();
    for (key, (begin, end, full)) in groups {
        let Some(phrase) = char_slice(&full, begin, end) else {
            continue;
        };
        let mut row = key[..5].to_vec();
        row.push(Term::string(phrase));
        rows.push(row);
    }
    rows.sort();
    rows.dedup();
    BindingTable { columns, rows }
}

/// Keeps events carrying at least two distinct (source, value) pairs.
fn q2_post(raw: BindingTable) -> BindingTable {
    let col = |name: &str| raw.column_index(name).expect("q2 projection");
    let (c_event, c_eid, c_word, c_value, c_source) = (
        col(EVENT),
        col("eID"),
        col("eventWord"),
        col("factValue"),
        col("relativeSource"),
    );
    let mut per_event: BTreeMap<Term, Vec<&Vec<Term>>> = BTreeMap::new();
    for row in &raw.rows {
        per_event.entry(row[c_event].clone()).or_default().push(row);
    }
    let columns = vec![
        "eID".to_owned(),
        "eventWord".to_owned(),
        "factValue".to_owned(),
        "relativeSource".to_owned(),
    ];
    let mut rows = Vec::new();
    for (_, event_rows) in per_event {
        let pairs: std::collections::HashSet<(&Term, &Term)> = event_rows
            .iter()
            .map(|r| (&r[c_source], &r[c_value]))
            .collect();
        if pairs.len() > 1 {
            for r in event_rows {
                rows.push(vec![
                    r[c_eid].clone(),
                    r[c_word].clone(),
                    r[c_value].clone(),
                    r[c_source].clone(),
                ]);
            }
        }
    }
    rows.sort();
    rows.dedup();
    BindingTable { columns, rows }
}

/// One row per document: the distinct values joined by `;` plus the total
/// number of factuality annotations.
fn q3_post(raw: BindingTable) -> BindingTable {
    let col = |name: &str| raw.column_index(name).expect("q3 projection");
    let (c_text, c_value) = (col("textID"), col("factValue"));
    let mut per_doc: BTreeMap<Term, Vec<&Term>> = BTreeMap::new();
    for row in &raw.rows {
        per_doc.entry(row[c_text].clone()).or_default().push(&row[c_value]);
    }
    let columns = vec!["textID".to_owned(), "factValues".to_owned(), "count".to_owned()];
    let mut rows = Vec::new();
    for (text, values) in per_doc {
        let total = values.len();
        let mut distinct: Vec<&str> = values.iter().map(|v| v.plain()).collect();
        distinct.sort_unstable();
        distinct.dedup();
        rows.push(vec![
            text,
            Term::string(distinct.join(";")),
            Term::int(total as i64),
        ]);
    }
    rows.sort();
    BindingTable { columns, rows }
}

/// Case-insensitive match on the word's lemma when it has one, else on its
/// anchor.
fn q6_post(store: &QuadStore, raw: BindingTable, needle: &str) -> BindingTable {
    let col = |name: &str| raw.column_index(name).expect("q6 projection");
    let (c_word, c_anchor) = (col(WORD), col("anchor"));
    let needle = needle.to_lowercase();
    let rows = raw
        .rows
        .iter()
        .filter(|row| {
            let lemma = store.object_of(&row[c_word], vocab::nif::LEMMA);
            let candidate = lemma.map(|t| t.plain()).unwrap_or(row[c_anchor].plain());
            candidate.to_lowercase() == needle
        })
        .cloned()
        .collect();
    BindingTable {
        columns: raw.columns,
        rows,
    }
}
