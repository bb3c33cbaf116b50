//! Criterion benches over the hash-bound batch operations and the full
//! conversion pipeline.
//!
//! The batch groups compare an explicit sequential loop against a rayon
//! fan-out of the same work. The `convert` group exercises the library's own
//! dispatch: with default features it runs data-parallel, under
//! `--no-default-features` it runs the sequential fallback, and the
//! benchmark id says which one was measured.

use std::path::Path;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rayon::prelude::*;

use provcorp::convert::{run_convert, ConvertConfig};
use provcorp::model::{CorpusKind, CorpusManifest};
use provcorp::nanopub::{Nanopub, NanopubBuilder, PLACEHOLDER};
use provcorp::rdf::Term;
use provcorp::vocab;

fn sample_builders(n: usize) -> Vec<NanopubBuilder> {
    (0..n)
        .map(|i| {
            let mut builder = NanopubBuilder::new();
            for j in 0..6 {
                builder.assertion(
                    NanopubBuilder::sub(&format!("entity{j}")),
                    Term::iri(format!("http://x.org/vocab/p{j}")),
                    Term::string(format!("value {i} {j}")),
                );
            }
            builder.provenance(
                Term::iri(format!("{PLACEHOLDER}#assertion")),
                Term::iri(vocab::prov::WAS_ATTRIBUTED_TO),
                Term::iri("http://x.org/agent"),
            );
            builder.pubinfo_defaults("2020-01-01T00:00:00", None, None);
            builder
        })
        .collect()
}

fn bench_finalize(c: &mut Criterion) {
    let builders = sample_builders(512);
    let base = "https://w3id.org/provcorp/np/";
    let mut group = c.benchmark_group("finalize_batch");
    group.throughput(Throughput::Elements(builders.len() as u64));
    group.bench_function("sequential", |b| {
        b.iter(|| {
            builders
                .iter()
                .map(|builder| builder.finalize(base).unwrap())
                .collect::<Vec<_>>()
        })
    });
    group.bench_function("parallel", |b| {
        b.iter(|| {
            builders
                .par_iter()
                .map(|builder| builder.finalize(base).unwrap())
                .collect::<Vec<_>>()
        })
    });
    group.finish();
}

fn bench_verify(c: &mut Criterion) {
    let nanopubs: Vec<Nanopub> = sample_builders(512)
        .iter()
        .map(|b| b.finalize("https://w3id.org/provcorp/np/").unwrap())
        .collect();
    let mut group = c.benchmark_group("verify_batch");
    group.throughput(Throughput::Elements(nanopubs.len() as u64));
    group.bench_function("sequential", |b| {
        b.iter(|| nanopubs.iter().filter(|np| np.verify().valid).count())
    });
    group.bench_function("parallel", |b| {
        b.iter(|| nanopubs.par_iter().filter(|np| np.verify().valid).count())
    });
    group.finish();
}

/// Synthesizes a corpus of `docs` raw files with event tables.
fn synthesize_corpus(dir: &Path, docs: usize) {
    let raw = dir.join("raw");
    let factbank = dir.join("factbank");
    std::fs::create_dir_all(&raw).unwrap();
    std::fs::create_dir_all(&factbank).unwrap();
    let mut events = String::new();
    let mut facts = String::new();
    for d in 0..docs {
        let id = format!("wsj_{d:04}");
        let body: String = (0..12)
            .map(|s| format!("   Analysts reported that firm {d} expected result {s} soon.\n"))
            .collect();
        std::fs::write(
            raw.join(format!("{id}.sgm")),
            format!(
                "<DOC>\n<DOCNO> {id} </DOCNO>\n<HL> Story {d} </HL>\n<DD> 11/02/89 </DD>\n<SO> @ Wall Street Journal </SO>\n<TEXT>\n{body}</TEXT>\n</DOC>\n"
            ),
        )
        .unwrap();
        for s in 1..=12 {
            events.push_str(&format!("{id}|||{s}|||1|||e{d}_{s}|||reported\n"));
            facts.push_str(&format!("{id}|||e{d}_{s}|||AUTHOR|||CT+\n"));
        }
    }
    std::fs::write(factbank.join("tml_event.txt"), events).unwrap();
    std::fs::write(factbank.join("fb_factValue.txt"), facts).unwrap();
}

fn manifest(kind: CorpusKind, name: &str, protected: bool) -> CorpusManifest {
    CorpusManifest {
        kind,
        title: format!("{name} corpus"),
        corpus_iri: format!("https://w3id.org/provcorp/corpus/{name}"),
        base_namespace: "https://w3id.org/provcorp/np/".into(),
        see_also: None,
        creator: None,
        annotator: None,
        license: "https://creativecommons.org/licenses/by/4.0/".into(),
        protected_default: protected,
        created: "2020-01-01T00:00:00".into(),
    }
}

fn bench_convert(c: &mut Criterion) {
    let input = tempfile::tempdir().unwrap();
    synthesize_corpus(input.path(), 48);
    let mode = if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "sequential"
    };
    let mut group = c.benchmark_group("convert");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("pipeline", mode), |b| {
        b.iter(|| {
            let out = tempfile::tempdir().unwrap();
            let config = ConvertConfig {
                text_manifest: manifest(CorpusKind::TextCorpus, "bench-text", true),
                parc_manifest: None,
                factbank_manifest: Some(manifest(
                    CorpusKind::AnnotationCorpus,
                    "bench-events",
                    true,
                )),
                raw_dir: input.path().join("raw"),
                parc_dir: None,
                factbank_dir: Some(input.path().join("factbank")),
                overrides_dir: None,
                output_dir: out.path().to_path_buf(),
                dedup_words: true,
                line_split: true,
            };
            let report = run_convert(&config).unwrap();
            assert_eq!(report.converted, 48);
        })
    });
    group.finish();
}

criterion_group!(benches, bench_finalize, bench_verify, bench_convert);
criterion_main!(benches);
