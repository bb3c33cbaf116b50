//! Frozen-value checks for the content-addressing path.
//!
//! The expected canonical form below was written down by hand and the
//! artifact code recomputed outside this crate (`sha256sum` on the canonical
//! bytes, digest base64url-encoded without padding), so the hashing path is
//! pinned against an independent implementation.

use std::collections::HashMap;

use provcorp::nanopub::{
    build_index, resolve_index, IndexMetadata, Nanopub, NanopubBuilder, NanopubError, TrustyRef,
    PLACEHOLDER,
};
use provcorp::rdf::{canonical_nquads, Dataset, Term};
use provcorp::vocab;

fn document_draft() -> NanopubBuilder {
    let mut builder = NanopubBuilder::new();
    let document = NanopubBuilder::sub("document");
    builder.assertion(
        document.clone(),
        Term::iri(vocab::rdf::TYPE),
        Term::iri(vocab::foaf::DOCUMENT),
    );
    builder.assertion(
        document.clone(),
        Term::iri(vocab::dct::TITLE),
        Term::string("Financing Business: @  Rogers Communications Inc."),
    );
    builder.assertion(
        document,
        Term::iri(vocab::dct::CREATED),
        Term::date_time("1989-11-02T00:00:00"),
    );
    builder.provenance(
        Term::iri(format!("{PLACEHOLDER}#assertion")),
        Term::iri(vocab::prov::WAS_DERIVED_FROM),
        Term::iri("https://w3id.org/provcorp/corpus/newswire-text"),
    );
    builder.pubinfo_defaults(
        "2020-05-01T00:00:00",
        Some("https://orcid.org/0000-0001-2345-6789"),
        Some("https://example.org/licenses/newswire-restricted"),
    );
    builder
}

const EXPECTED_CANONICAL: &str = "\
_:np <http://purl.org/dc/terms/created> \"2020-05-01T00:00:00\"^^<http://www.w3.org/2001/XMLSchema#dateTime> _:np#pubinfo .
_:np <http://purl.org/dc/terms/creator> <https://orcid.org/0000-0001-2345-6789> _:np#pubinfo .
_:np <http://purl.org/dc/terms/license> <https://example.org/licenses/newswire-restricted> _:np#pubinfo .
_:np <http://www.nanopub.org/nschema#hasAssertion> _:np#assertion _:np#Head .
_:np <http://www.nanopub.org/nschema#hasProvenance> _:np#provenance _:np#Head .
_:np <http://www.nanopub.org/nschema#hasPublicationInfo> _:np#pubinfo _:np#Head .
_:np <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.nanopub.org/nschema#Nanopublication> _:np#Head .
_:np#assertion <http://www.w3.org/ns/prov#wasDerivedFrom> <https://w3id.org/provcorp/corpus/newswire-text> _:np#provenance .
_:np#document <http://purl.org/dc/terms/created> \"1989-11-02T00:00:00\"^^<http://www.w3.org/2001/XMLSchema#dateTime> _:np#assertion .
_:np#document <http://purl.org/dc/terms/title> \"Financing Business: @  Rogers Communications Inc.\" _:np#assertion .
_:np#document <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://xmlns.com/foaf/0.1/Document> _:np#assertion .
";

/// SHA-256 of `EXPECTED_CANONICAL` computed with sha256sum:
/// f40bbf57161068c9f0530015e8b27d25526e583e6769f63bb48d32c302052531,
/// then base64url-encoded without padding.
const EXPECTED_CODE: &str = "9Au_VxYQaMnwUwAV6LJ9JVJuWD5nafY7tI0ywwIFJTE";

#[test]
fn canonical_form_matches_the_frozen_bytes() {
    let draft = document_draft().draft().unwrap();
    let canonical = canonical_nquads(draft.dataset(), PLACEHOLDER).unwrap();
    assert_eq!(canonical, EXPECTED_CANONICAL);
}

#[test]
fn artifact_code_matches_the_external_hash() {
    let np = document_draft()
        .finalize("https://w3id.org/provcorp/np/")
        .unwrap();
    assert_eq!(np.artifact_code().as_deref(), Some(EXPECTED_CODE));
    assert_eq!(
        np.uri(),
        format!("https://w3id.org/provcorp/np/{EXPECTED_CODE}")
    );
    assert_eq!(EXPECTED_CODE.len(), 43);
    assert!(TrustyRef::parse(np.uri()).is_some());
    assert!(np.verify().valid);
}

#[test]
fn tampering_yields_hash_mismatch_reason() {
    let np = document_draft()
        .finalize("https://w3id.org/provcorp/np/")
        .unwrap();
    let mut quads: Vec<_> = np.dataset().quads().to_vec();
    for quad in &mut quads {
        if quad.object == Term::string("Financing Business: @  Rogers Communications Inc.") {
            quad.object = Term::string("Financing Business: @  Rogers Communications Ltd.");
        }
    }
    let tampered = Nanopub::new_unverified(np.uri().to_owned(), quads.into_iter().collect());
    let report = tampered.verify();
    assert!(!report.valid);
    assert_eq!(report.reason.as_deref(), Some("hash mismatch"));
}

#[test]
fn missing_provenance_yields_structure_reason() {
    let np = document_draft()
        .finalize("https://w3id.org/provcorp/np/")
        .unwrap();
    let provenance_graph = np.provenance_graph();
    let gutted: Dataset = np
        .dataset()
        .quads()
        .iter()
        .filter(|q| q.graph.as_iri() != Some(provenance_graph.as_str()))
        .cloned()
        .collect();
    let report = Nanopub::new_unverified(np.uri().to_owned(), gutted).verify();
    assert!(!report.valid);
    assert!(
        report.reason.as_deref().unwrap_or_default().starts_with("structure"),
        "reason: {:?}",
        report.reason
    );
}

/// Two nanopubs written into one file read back as a bundle of two.
#[test]
fn multi_nanopub_bundle_reads_back() {
    let a = document_draft()
        .finalize("https://w3id.org/provcorp/np/")
        .unwrap();
    let mut other = document_draft();
    other.assertion(
        NanopubBuilder::sub("document"),
        Term::iri(vocab::dct::TITLE),
        Term::string("A second document"),
    );
    let b = other.finalize("https://w3id.org/provcorp/np/").unwrap();

    let bundle_text = format!("{}{}", a.to_trig(), b.to_trig());
    let parsed = Nanopub::from_trig(&bundle_text).unwrap();
    assert_eq!(parsed.len(), 2);
    for np in &parsed {
        assert!(np.verify().valid, "{} fails after bundle round trip", np.uri());
    }
    let uris: Vec<&str> = parsed.iter().map(|np| np.uri()).collect();
    assert!(uris.contains(&a.uri()));
    assert!(uris.contains(&b.uri()));
}

#[test]
fn self_appending_index_is_a_cycle() {
    let member =
        format!("https://w3id.org/provcorp/np/{}", "A".repeat(43));
    let phantom = format!("https://w3id.org/provcorp/np/{}", "B".repeat(43));
    let index = build_index(
        std::slice::from_ref(&member),
        &IndexMetadata {
            title: "self-chained".into(),
            created: "2020-01-01T00:00:00".into(),
            creator: None,
            license: None,
            base_namespace: "https://w3id.org/provcorp/np/".into(),
        },
        Some(&phantom),
    )
    .unwrap();
    // resolving under a source that maps the appended URI back to this very
    // index makes the append link loop
    let mut source = HashMap::new();
    source.insert(phantom.clone(), index.nanopub().clone());
    match resolve_index(&phantom, &source) {
        Err(NanopubError::CycleDetected(uri)) => assert_eq!(uri, phantom),
        other => panic!("expected CycleDetected, got {other:?}"),
    }
}
