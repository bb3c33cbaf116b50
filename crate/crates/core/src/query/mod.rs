//! In-memory quad store and query evaluation over loaded nanopublications.
//!
//! The store keeps the union of the loaded graphs with set semantics on
//! (subject, predicate, object), so loading the same layers from separate
//! files or from one bundle yields identical query results. Loading refuses
//! nanopubs that fail verification.

mod builtin;
mod eval;
mod export;

pub use builtin::{
    compile_builtin, run_builtin, AttributionLabel, BuiltinParams, CompiledQuestion, Q4Mode,
    Question,
};
pub use eval::{
    evaluate, BindingTable, CountAggregate, Filter, GroupBy, PatternTerm, Query, TriplePattern,
};
pub use export::{export, term_plain, ExportFormat};

use std::collections::HashMap;

use crate::nanopub::Nanopub;
use crate::rdf::{Quad, Term};

/// Errors from loading and querying.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("refusing to load tampered nanopub {0}")]
    VerificationFailure(String),
    #[error("projected variable ?{0} is bound by no pattern")]
    UnboundProjection(String),
    #[error("unknown question {0:?} (expected q1..q6)")]
    UnknownQuestion(String),
    #[error("store lacks the {0} annotation layer required by this question")]
    MissingLayer(String),
    #[error("bad query: {0}")]
    BadQuery(String),
}

/// Which graphs of each nanopub to load.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoadScope {
    /// Assertion graphs only (what the built-in questions bind).
    #[default]
    AssertionsOnly,
    /// All four graphs, for provenance queries.
    AllGraphs,
}

/// Quad store with subject/predicate/object and pair indexes, plus a
/// registry of the nanopubs it was loaded from.
#[derive(Debug, Default)]
pub struct QuadStore {
    quads: Vec<Quad>,
    triples_seen: std::collections::HashSet<(Term, Term, Term)>,
    by_subject: HashMap<Term, Vec<u32>>,
    by_predicate: HashMap<Term, Vec<u32>>,
    by_object: HashMap<Term, Vec<u32>>,
    by_sp: HashMap<(Term, Term), Vec<u32>>,
    by_po: HashMap<(Term, Term), Vec<u32>>,
    registry: HashMap<String, Nanopub>,
}

impl QuadStore {
    pub fn new() -> QuadStore {
        QuadStore::default()
    }

    /// Inserts one quad. Quads equal on (subject, predicate, object) to an
    /// already-stored one are dropped: the store is a graph union.
    pub fn insert(&mut self, quad: Quad) {
        let key = (
            quad.subject.clone(),
            quad.predicate.clone(),
            quad.object.clone(),
        );
        if !self.triples_seen.insert(key) {
            return;
        }
        let id = self.quads.len() as u32;
        self.by_subject
            .entry(quad.subject.clone())
            .or_default()
            .push(id);
        self.by_predicate
            .entry(quad.predicate.clone())
            .or_default()
            .push(id);
        self.by_object
            .entry(quad.object.clone())
            .or_default()
            .push(id);
        self.by_sp
            .entry((quad.subject.clone(), quad.predicate.clone()))
            .or_default()
            .push(id);
        self.by_po
            .entry((quad.predicate.clone(), quad.object.clone()))
            .or_default()
            .push(id);
        self.quads.push(quad);
    }

    /// Verifies and loads nanopubs under the given scope.
    pub fn load(&mut self, nanopubs: &[Nanopub], scope: LoadScope) -> Result<(), QueryError> {
        for nanopub in nanopubs {
            let report = nanopub.verify();
            if !report.valid {
                return Err(QueryError::VerificationFailure(nanopub.uri().to_owned()));
            }
        }
        for nanopub in nanopubs {
            match scope {
                LoadScope::AssertionsOnly => {
                    for quad in nanopub.assertion() {
                        self.insert(quad.clone());
                    }
                }
                LoadScope::AllGraphs => {
                    for quad in nanopub.dataset().quads() {
                        self.insert(quad.clone());
                    }
                }
            }
            self.registry
                .insert(nanopub.uri().to_owned(), nanopub.clone());
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.quads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }

    pub fn quads(&self) -> &[Quad] {
        &self.quads
    }

    pub fn nanopub(&self, uri: &str) -> Option<&Nanopub> {
        self.registry.get(uri)
    }

    pub fn nanopubs(&self) -> impl Iterator<Item = &Nanopub> {
        self.registry.values()
    }

    pub fn has_predicate(&self, iri: &str) -> bool {
        self.by_predicate.contains_key(&Term::iri(iri))
    }

    /// First object of (subject, predicate), if any.
    pub fn object_of(&self, subject: &Term, predicate: &str) -> Option<&Term> {
        let ids = self.by_sp.get(&(subject.clone(), Term::iri(predicate)))?;
        ids.first().map(|&id| &self.quads[id as usize].object)
    }

    /// Upper bound on the quads matching the given constants.
    pub fn estimate(&self, s: Option<&Term>, p: Option<&Term>, o: Option<&Term>) -> usize {
        self.candidate_ids(s, p, o)
            .map(|ids| ids.len())
            .unwrap_or(self.quads.len())
    }

    fn candidate_ids(
        &self,
        s: Option<&Term>,
        p: Option<&Term>,
        o: Option<&Term>,
    ) -> Option<&[u32]> {
        static EMPTY: [u32; 0] = [];
        fn found(hit: Option<&Vec<u32>>) -> Option<&[u32]> {
            Some(hit.map(|v| v.as_slice()).unwrap_or(&EMPTY))
        }
        match (s, p, o) {
            (Some(s), Some(p), _) => found(self.by_sp.get(&(s.clone(), p.clone()))),
            (_, Some(p), Some(o)) => found(self.by_po.get(&(p.clone(), o.clone()))),
            (Some(s), ..) => found(self.by_subject.get(s)),
            (_, _, Some(o)) => found(self.by_object.get(o)),
            (_, Some(p), _) => found(self.by_predicate.get(p)),
            (None, None, None) => None,
        }
    }

    /// All quads matching the bound positions.
    pub fn match_pattern(
        &self,
        s: Option<&Term>,
        p: Option<&Term>,
        o: Option<&Term>,
    ) -> Vec<&Quad> {
        let check = |quad: &Quad| {
            s.map(|t| quad.subject == *t).unwrap_or(true)
                && p.map(|t| quad.predicate == *t).unwrap_or(true)
                && o.map(|t| quad.object == *t).unwrap_or(true)
        };
        match self.candidate_ids(s, p, o) {
            Some(ids) => ids
                .iter()
                .map(|&id| &self.quads[id as usize])
                .filter(|q| check(q))
                .collect(),
            None => self.quads.iter().filter(|q| check(q)).collect(),
        }
    }
}
