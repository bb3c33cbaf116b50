//! Shared helpers for the integration suites: fixture paths, conversion
//! drivers, output-tree loading, randomized data generators, and an
//! independent brute-force query oracle.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use provcorp::convert::{run_convert, ConversionReport, ConvertConfig};
use provcorp::model::CorpusManifest;
use provcorp::nanopub::{Nanopub, NanopubBuilder, PLACEHOLDER};
use provcorp::query::{LoadScope, PatternTerm, QuadStore, Query};
use provcorp::rdf::{parse_trig, Quad, Term};
use provcorp::vocab;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn fixture_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(rel)
}

pub fn load_manifest(name: &str) -> CorpusManifest {
    let text = std::fs::read_to_string(fixture_path(&format!("manifests/{name}.manifest")))
        .expect("manifest fixture");
    CorpusManifest::parse(&text).expect("manifest parses")
}

/// Conversion config over one fixture corpus directory.
pub fn fixture_config(fixture: &str, parc: bool, factbank: bool, out: &Path) -> ConvertConfig {
    ConvertConfig {
        text_manifest: load_manifest("wsj-text"),
        parc_manifest: parc.then(|| load_manifest("parc")),
        factbank_manifest: factbank.then(|| load_manifest("factbank")),
        raw_dir: fixture_path(&format!("{fixture}/raw")),
        parc_dir: parc.then(|| fixture_path(&format!("{fixture}/parc"))),
        factbank_dir: factbank.then(|| fixture_path(&format!("{fixture}/factbank"))),
        overrides_dir: None,
        output_dir: out.to_path_buf(),
        dedup_words: true,
        line_split: true,
    }
}

pub fn convert_fixture(fixture: &str, parc: bool, factbank: bool, out: &Path) -> ConversionReport {
    run_convert(&fixture_config(fixture, parc, factbank, out)).expect("conversion succeeds")
}

/// Every nanopub in an output tree, sorted by URI.
pub fn load_output_nanopubs(out: &Path) -> Vec<Nanopub> {
    let mut nanopubs = Vec::new();
    let mut stack = vec![out.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).expect("output dir") {
            let path = entry.expect("dir entry").path();
            if path.is_dir() {
                stack.push(path);
            } else if path.extension().and_then(|e| e.to_str()) == Some("trig") {
                let text = std::fs::read_to_string(&path).expect("trig file");
                let dataset = parse_trig(&text).expect("output parses");
                nanopubs.extend(Nanopub::from_dataset(&dataset).expect("nanopub bundle"));
            }
        }
    }
    nanopubs.sort_by(|a, b| a.uri().cmp(b.uri()));
    nanopubs
}

pub fn store_over(nanopubs: &[Nanopub]) -> QuadStore {
    let mut store = QuadStore::new();
    store
        .load(nanopubs, LoadScope::AssertionsOnly)
        .expect("load verified output");
    store
}

// ---------------------------------------------------------------------------
// randomized generators
// ---------------------------------------------------------------------------

const WORD_POOL: [&str; 12] = [
    "markets", "rose", "said", "officials", "plan", "surprise", "warned", "council", "profit",
    "watch", "deal", "review",
];
const FACT_VALUES: [&str; 5] = ["CT+", "CT-", "PR+", "PS+", "Uu"];
const REL_SOURCES: [&str; 4] = ["AUTHOR", "officials_AUTHOR", "council_AUTHOR", "critics_AUTHOR"];

/// A random draft nanopub: 1-5 assertion quads plus standard provenance and
/// publication info, protected with the given probability.
pub fn random_builder(rng: &mut ChaCha8Rng, protected_probability: f64) -> NanopubBuilder {
    let mut builder = NanopubBuilder::new();
    let quads = rng.gen_range(1..=5);
    for i in 0..quads {
        let subject = if rng.gen_bool(0.4) {
            NanopubBuilder::sub(&format!("entity{i}"))
        } else {
            Term::iri(format!("http://x.org/resource/{}", rng.gen_range(0..50)))
        };
        let object = match rng.gen_range(0..4) {
            0 => Term::string(*WORD_POOL.choose(rng).unwrap()),
            1 => Term::int(rng.gen_range(-100..100)),
            2 => Term::lang_string(*WORD_POOL.choose(rng).unwrap(), "en"),
            _ => Term::iri(format!("http://x.org/resource/{}", rng.gen_range(0..50))),
        };
        builder.assertion(
            subject,
            Term::iri(format!("http://x.org/vocab/p{}", rng.gen_range(0..8))),
            object,
        );
    }
    builder.provenance(
        Term::iri(format!("{PLACEHOLDER}#assertion")),
        Term::iri(vocab::prov::WAS_ATTRIBUTED_TO),
        Term::iri("http://x.org/agent"),
    );
    builder.pubinfo_defaults(
        "2020-01-01T00:00:00",
        Some("https://orcid.org/0000-0001-2345-6789"),
        Some("https://creativecommons.org/licenses/by/4.0/"),
    );
    builder.protected(rng.gen_bool(protected_probability));
    builder
}

pub fn g() -> Term {
    Term::iri("http://x.org/g")
}

fn quad(s: Term, p: &str, o: Term) -> Quad {
    Quad::new(s, Term::iri(p), o, g()).expect("valid quad")
}

/// A randomized miniature annotation network in the store: texts, words,
/// attributions, events, factuality assignments.
pub fn random_store(rng: &mut ChaCha8Rng) -> QuadStore {
    let mut store = QuadStore::new();
    let docs = rng.gen_range(1..=2);
    let mut all_words: Vec<(Term, usize, usize)> = Vec::new();
    for d in 0..docs {
        let words: Vec<&str> = (0..rng.gen_range(6..12))
            .map(|_| *WORD_POOL.choose(rng).unwrap())
            .collect();
        let text = words.join(" ");
        let text_entity = Term::iri(format!("http://x.org/text{d}#text"));
        store.insert(quad(text_entity.clone(), vocab::rdf::VALUE, Term::string(&text)));
        let mut begin = 0usize;
        for w in &words {
            let end = begin + w.chars().count();
            let word_iri = Term::iri(format!("http://x.org/text{d}#offset_{begin}-{end}"));
            store.insert(quad(word_iri.clone(), vocab::nif::ANCHOR_OF, Term::string(*w)));
            store.insert(quad(word_iri.clone(), vocab::nif::BEGIN_INDEX, Term::int(begin as i64)));
            store.insert(quad(word_iri.clone(), vocab::nif::END_INDEX, Term::int(end as i64)));
            store.insert(quad(
                word_iri.clone(),
                vocab::pvcp::IS_PART_OF_TEXT,
                text_entity.clone(),
            ));
            if rng.gen_bool(0.5) {
                store.insert(quad(
                    word_iri.clone(),
                    vocab::nif::LEMMA,
                    Term::string(w.trim_end_matches('s')),
                ));
            }
            all_words.push((word_iri, begin, end));
            begin = end + 1;
        }
    }

    let roles = [
        vocab::pvcpp::HAS_SOURCE_ANNOTATED_WORD,
        vocab::pvcpp::HAS_CUE_ANNOTATED_WORD,
        vocab::pvcpp::HAS_CONTENT_ANNOTATED_WORD,
    ];
    for a in 0..rng.gen_range(1..=4) {
        let attr = Term::iri(format!("http://x.org/attr{a}#annotation"));
        for _ in 0..rng.gen_range(1..=4) {
            let (word, ..) = all_words.choose(rng).unwrap();
            store.insert(quad(attr.clone(), roles.choose(rng).unwrap(), word.clone()));
        }
    }

    let events = rng.gen_range(1..=4);
    for e in 0..events {
        let event = Term::iri(format!("http://x.org/event{e}#annotation"));
        let (word, ..) = all_words.choose(rng).unwrap();
        store.insert(quad(event.clone(), vocab::pvcpf::HAS_EID, Term::string(format!("e{e}"))));
        store.insert(quad(event, vocab::oa::HAS_TARGET, word.clone()));
    }
    for f in 0..rng.gen_range(1..=6) {
        let fact = Term::iri(format!("http://x.org/fact{f}#annotation"));
        let event = Term::iri(format!("http://x.org/event{}#annotation", rng.gen_range(0..events)));
        store.insert(quad(fact.clone(), vocab::dct::REFERENCES, event));
        store.insert(quad(
            fact.clone(),
            vocab::pvcpf::HAS_FACT_VALUE,
            Term::string(*FACT_VALUES.choose(rng).unwrap()),
        ));
        store.insert(quad(
            fact,
            vocab::pvcpf::HAS_RELATIVE_SOURCE,
            Term::string(*REL_SOURCES.choose(rng).unwrap()),
        ));
    }
    store
}

// ---------------------------------------------------------------------------
// brute-force oracle: nested loops over all quads in written pattern order,
// no indexes, no reordering — independent of the evaluator's join machinery
// ---------------------------------------------------------------------------

pub fn naive_evaluate(store: &QuadStore, query: &Query) -> Vec<Vec<Term>> {
    let mut bindings: Vec<BTreeMap<String, Term>> = vec![BTreeMap::new()];
    for pattern in &query.patterns {
        let mut next = Vec::new();
        for binding in &bindings {
            for q in store.quads() {
                let mut candidate = binding.clone();
                let mut ok = true;
                for (slot, term) in [
                    (&pattern.subject, &q.subject),
                    (&pattern.predicate, &q.predicate),
                    (&pattern.object, &q.object),
                ] {
                    match slot {
                        PatternTerm::Const(expected) => {
                            if expected != term {
                                ok = false;
                                break;
                            }
                        }
                        PatternTerm::Var(name) => match candidate.get(name) {
                            Some(existing) if existing != term => {
                                ok = false;
                                break;
                            }
                            Some(_) => {}
                            None => {
                                candidate.insert(name.clone(), term.clone());
                            }
                        },
                    }
                }
                if ok {
                    next.push(candidate);
                }
            }
        }
        bindings = next;
    }

    bindings.retain(|b| {
        query.values.iter().all(|(var, allowed)| match b.get(var) {
            Some(term) => allowed.contains(term),
            None => true,
        })
    });
    bindings.retain(|b| {
        query.filters.iter().all(|filter| match filter {
            provcorp::query::Filter::Eq { var, term } => b.get(var) == Some(term),
            provcorp::query::Filter::Contains {
                var,
                needle,
                case_insensitive,
            } => b.get(var).is_some_and(|t| {
                let hay = t.plain();
                if *case_insensitive {
                    hay.to_lowercase().contains(&needle.to_lowercase())
                } else {
                    hay.contains(needle.as_str())
                }
            }),
        })
    });

    let mut rows: Vec<Vec<Term>> = if let Some(group) = &query.group_by {
        let mut groups: BTreeMap<Vec<Term>, Vec<Term>> = BTreeMap::new();
        if group.keys.is_empty() {
            groups.insert(Vec::new(), Vec::new());
        }
        for b in &bindings {
            let Some(key) = group
                .keys
                .iter()
                .map(|k| b.get(k).cloned())
                .collect::<Option<Vec<Term>>>()
            else {
                continue;
            };
            if let Some(counted) = b.get(&group.count.var) {
                groups.entry(key).or_default().push(counted.clone());
            }
        }
        groups
            .into_iter()
            .map(|(mut key, counted)| {
                let n = if group.count.distinct {
                    let unique: std::collections::BTreeSet<&Term> = counted.iter().collect();
                    unique.len()
                } else {
                    counted.len()
                };
                key.push(Term::int(n as i64));
                key
            })
            .collect()
    } else {
        let mut rows: Vec<Vec<Term>> = bindings
            .iter()
            .map(|b| {
                query
                    .projection
                    .iter()
                    .map(|v| b.get(v).expect("bound").clone())
                    .collect()
            })
            .collect();
        if query.distinct {
            rows.sort();
            rows.dedup();
        }
        rows
    };
    rows.sort();
    rows
}
