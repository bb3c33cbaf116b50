//! IRIs of the vocabularies used across the generated nanopublication network.
//!
//! Namespaces are grouped by prefix; `default_prefixes` returns the binding
//! set that every generated dataset starts from.

/// RDF core namespace.
pub mod rdf {
    pub const NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const VALUE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#value";
    pub const LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
}

pub mod rdfs {
    pub const NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
    pub const SEE_ALSO: &str = "http://www.w3.org/2000/01/rdf-schema#seeAlso";
    pub const LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
}

pub mod xsd {
    pub const NS: &str = "http://www.w3.org/2001/XMLSchema#";
    pub const STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const INT: &str = "http://www.w3.org/2001/XMLSchema#int";
    pub const DATE_TIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";
}

/// Dublin Core terms.
pub mod dct {
    pub const NS: &str = "http://purl.org/dc/terms/";
    pub const TITLE: &str = "http://purl.org/dc/terms/title";
    pub const CREATED: &str = "http://purl.org/dc/terms/created";
    pub const CREATOR: &str = "http://purl.org/dc/terms/creator";
    pub const LICENSE: &str = "http://purl.org/dc/terms/license";
    pub const IS_PART_OF: &str = "http://purl.org/dc/terms/isPartOf";
    pub const REFERENCES: &str = "http://purl.org/dc/terms/references";
    pub const TEXT: &str = "http://purl.org/dc/terms/Text";
}

pub mod dcat {
    pub const NS: &str = "http://www.w3.org/ns/dcat#";
    pub const DISTRIBUTION: &str = "http://www.w3.org/ns/dcat#distribution";
}

pub mod foaf {
    pub const NS: &str = "http://xmlns.com/foaf/0.1/";
    pub const DOCUMENT: &str = "http://xmlns.com/foaf/0.1/Document";
}

/// NLP Interchange Format core ontology.
pub mod nif {
    pub const NS: &str = "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#";
    pub const OFFSET_BASED_STRING: &str =
        "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#OffsetBasedString";
    pub const WORD: &str = "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#Word";
    pub const BEGIN_INDEX: &str =
        "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#beginIndex";
    pub const END_INDEX: &str =
        "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#endIndex";
    pub const ANCHOR_OF: &str =
        "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#anchorOf";
    pub const LEMMA: &str = "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#lemma";
}

/// Annotation-terminology namespace used for the part-of-speech literal.
pub mod olia {
    pub const NS: &str = "http://purl.org/olia/";
    pub const POS: &str = "http://purl.org/olia/POS";
}

/// Web Annotation vocabulary.
pub mod oa {
    pub const NS: &str = "http://www.w3.org/ns/oa#";
    pub const ANNOTATION: &str = "http://www.w3.org/ns/oa#Annotation";
    pub const HAS_TARGET: &str = "http://www.w3.org/ns/oa#hasTarget";
}

pub mod prov {
    pub const NS: &str = "http://www.w3.org/ns/prov#";
    pub const WAS_DERIVED_FROM: &str = "http://www.w3.org/ns/prov#wasDerivedFrom";
    pub const WAS_ATTRIBUTED_TO: &str = "http://www.w3.org/ns/prov#wasAttributedTo";
}

/// Nanopublication schema (head-graph structure).
pub mod np {
    pub const NS: &str = "http://www.nanopub.org/nschema#";
    pub const NANOPUBLICATION: &str = "http://www.nanopub.org/nschema#Nanopublication";
    pub const HAS_ASSERTION: &str = "http://www.nanopub.org/nschema#hasAssertion";
    pub const HAS_PROVENANCE: &str = "http://www.nanopub.org/nschema#hasProvenance";
    pub const HAS_PUBLICATION_INFO: &str = "http://www.nanopub.org/nschema#hasPublicationInfo";
}

/// Nanopublication extensions: protected marking and index structure.
pub mod npx {
    pub const NS: &str = "http://purl.org/nanopub/x/";
    pub const PROTECTED_NANOPUB: &str = "http://purl.org/nanopub/x/ProtectedNanopub";
    pub const NANOPUB_INDEX: &str = "http://purl.org/nanopub/x/NanopubIndex";
    pub const INCLUDES_ELEMENT: &str = "http://purl.org/nanopub/x/includesElement";
    pub const APPENDS_INDEX: &str = "http://purl.org/nanopub/x/appendsIndex";
}

/// General corpus vocabulary.
pub mod pvcp {
    pub const NS: &str = "https://w3id.org/provcorp/vocab/";
    pub const TEXT_CORPUS: &str = "https://w3id.org/provcorp/vocab/TextCorpus";
    pub const ANNOTATION_CORPUS: &str = "https://w3id.org/provcorp/vocab/AnnotationCorpus";
    pub const HAS_TEXT: &str = "https://w3id.org/provcorp/vocab/hasText";
    pub const HAS_SENTENCE_NUMBER: &str = "https://w3id.org/provcorp/vocab/hasSentenceNumber";
    pub const IS_PART_OF_TEXT: &str = "https://w3id.org/provcorp/vocab/isPartOfText";
}

/// Attribution-relation vocabulary (source / cue / content roles).
pub mod pvcpp {
    pub const NS: &str = "https://w3id.org/provcorp/vocab/parc/";
    pub const HAS_SOURCE_ANNOTATED_WORD: &str =
        "https://w3id.org/provcorp/vocab/parc/hasSourceAnnotatedWord";
    pub const HAS_CUE_ANNOTATED_WORD: &str =
        "https://w3id.org/provcorp/vocab/parc/hasCueAnnotatedWord";
    pub const HAS_CONTENT_ANNOTATED_WORD: &str =
        "https://w3id.org/provcorp/vocab/parc/hasContentAnnotatedWord";
}

/// Event and factuality vocabulary.
pub mod pvcpf {
    pub const NS: &str = "https://w3id.org/provcorp/vocab/FactBank/";
    pub const HAS_EID: &str = "https://w3id.org/provcorp/vocab/FactBank/hasEID";
    pub const HAS_RELATIVE_SOURCE: &str =
        "https://w3id.org/provcorp/vocab/FactBank/hasRelativeSource";
    pub const HAS_FACT_VALUE: &str = "https://w3id.org/provcorp/vocab/FactBank/hasFactValue";
}

/// Creator IRIs for the newswire sources recognized by document ingestion.
pub mod sources {
    pub const WSJ: &str = "http://dbpedia.org/resource/The_Wall_Street_Journal";
    pub const NYT: &str = "http://dbpedia.org/resource/The_New_York_Times";
    pub const APW: &str = "http://dbpedia.org/resource/Associated_Press";
}

/// Prefix bindings shared by every generated dataset.
pub fn default_prefixes() -> Vec<(&'static str, &'static str)> {
    vec![
        ("rdf", rdf::NS),
        ("rdfs", rdfs::NS),
        ("xsd", xsd::NS),
        ("dct", dct::NS),
        ("dcat", dcat::NS),
        ("foaf", foaf::NS),
        ("nif", nif::NS),
        ("olia", olia::NS),
        ("oa", oa::NS),
        ("prov", prov::NS),
        ("np", np::NS),
        ("npx", npx::NS),
        ("pvcp", pvcp::NS),
        ("pvcpp", pvcpp::NS),
        ("pvcpf", pvcpf::NS),
    ]
}
