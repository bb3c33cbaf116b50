//! Converts heterogeneously annotated text corpora — raw newswire documents,
//! attribution-relation XML, and event/factuality tables — into an
//! interoperable network of content-hash-identified nanopublications, and
//! answers integrated queries over the merged result.
//!
//! The pipeline is organized in layers:
//!
//! * [`rdf`] — quads, datasets, TriG and canonical N-Quads serialization.
//! * [`nanopub`] — the four-graph nanopublication structure, content-hash
//!   identifiers, verification, and index nanopubs.
//! * [`ingest`] — parsers for the three source formats, normalizing all text
//!   addressing to character offsets over one canonical text per document.
//! * [`model`] — generation of the nanopublication network: corpus, index,
//!   document, text, word, and annotation nanopubs.
//! * [`query`] — an in-memory quad store and a basic-graph-pattern evaluator
//!   with tabular CSV/JSON export, plus the built-in questions `q1`–`q6`.
//! * [`registry`] — a local file-based publication registry that refuses
//!   protected nanopublications and verifies on every read.
//! * [`convert`] — the end-to-end conversion driver.
//!
//! Document-level work is embarrassingly parallel; with the default
//! `parallel` feature the driver fans out over rayon, without it everything
//! runs sequentially on one thread.

pub mod convert;
pub mod ingest;
pub mod model;
pub mod nanopub;
pub mod query;
pub mod rdf;
pub mod registry;
pub mod vocab;

mod par;
