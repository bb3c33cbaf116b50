//! Minimal RDF data model: terms, quads, and prefix-aware datasets.
//!
//! The model is deliberately small — exactly what nanopublication
//! construction, hashing, storage, and interchange require. IRIs must be
//! absolute, literals always carry a datatype, and blank node labels are
//! restricted to `[A-Za-z0-9]+`.

mod nquads;
mod trig;

pub use nquads::canonical_nquads;
pub use trig::{parse_trig, serialize_trig};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use crate::vocab;

/// Errors produced by the RDF layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RdfError {
    /// Malformed TriG input.
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// Canonicalization requires a fully skolemized dataset.
    #[error("blank node present in dataset; canonical form is only defined for skolemized data")]
    BlankNodePresent,
    /// A term violates its structural invariant.
    #[error("invalid term: {0}")]
    InvalidTerm(String),
}

impl RdfError {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        RdfError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}

/// An RDF term: IRI, literal, or blank node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// An absolute IRI.
    Iri(String),
    /// A literal with lexical form, datatype IRI and optional language tag.
    Literal {
        lexical: String,
        datatype: String,
        lang: Option<String>,
    },
    /// A blank node label (`[A-Za-z0-9]+`).
    BlankNode(String),
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Term {
        Term::Iri(value.into())
    }

    /// A plain string literal (`xsd:string`).
    pub fn string(lexical: impl Into<String>) -> Term {
        Term::Literal {
            lexical: lexical.into(),
            datatype: vocab::xsd::STRING.to_owned(),
            lang: None,
        }
    }

    /// A typed literal with an explicit datatype IRI.
    pub fn typed(lexical: impl Into<String>, datatype: impl Into<String>) -> Term {
        Term::Literal {
            lexical: lexical.into(),
            datatype: datatype.into(),
            lang: None,
        }
    }

    /// An `xsd:int` literal.
    pub fn int(value: i64) -> Term {
        Term::typed(value.to_string(), vocab::xsd::INT)
    }

    /// An `xsd:dateTime` literal.
    pub fn date_time(lexical: impl Into<String>) -> Term {
        Term::typed(lexical, vocab::xsd::DATE_TIME)
    }

    /// A language-tagged string; the datatype is fixed to `rdf:langString`.
    pub fn lang_string(lexical: impl Into<String>, lang: impl Into<String>) -> Term {
        Term::Literal {
            lexical: lexical.into(),
            datatype: vocab::rdf::LANG_STRING.to_owned(),
            lang: Some(lang.into()),
        }
    }

    pub fn blank(label: impl Into<String>) -> Term {
        Term::BlankNode(label.into())
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    /// Lexical form for literals, IRI string for IRIs, label for blank nodes.
    pub fn plain(&self) -> &str {
        match self {
            Term::Iri(iri) => iri,
            Term::Literal { lexical, .. } => lexical,
            Term::BlankNode(label) => label,
        }
    }

    /// Checks the structural invariants for this term.
    pub fn validate(&self) -> Result<(), RdfError> {
        match self {
            Term::Iri(iri) => {
                if !iri_is_absolute(iri) {
                    return Err(RdfError::InvalidTerm(format!("IRI not absolute: {iri}")));
                }
            }
            Term::Literal { datatype, lang, .. } => {
                if !iri_is_absolute(datatype) {
                    return Err(RdfError::InvalidTerm(format!(
                        "datatype IRI not absolute: {datatype}"
                    )));
                }
                match lang {
                    Some(tag) if datatype != vocab::rdf::LANG_STRING => {
                        return Err(RdfError::InvalidTerm(format!(
                            "language-tagged literal \"{tag}\" must use rdf:langString"
                        )));
                    }
                    Some(tag)
                        if tag.is_empty()
                            || !tag.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') =>
                    {
                        return Err(RdfError::InvalidTerm(format!("bad language tag: {tag}")));
                    }
                    _ => {}
                }
            }
            Term::BlankNode(label) => {
                if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric()) {
                    return Err(RdfError::InvalidTerm(format!(
                        "blank node label must match [A-Za-z0-9]+: {label:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn rank(&self) -> u8 {
        match self {
            Term::Iri(_) => 0,
            Term::BlankNode(_) => 1,
            Term::Literal { .. } => 2,
        }
    }
}

/// Total order used for deterministic serialization. `xsd:int` literals with
/// equal datatype compare numerically so query output sorts naturally.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Term::Iri(a), Term::Iri(b)) => a.cmp(b),
            (Term::BlankNode(a), Term::BlankNode(b)) => a.cmp(b),
            (
                Term::Literal {
                    lexical: la,
                    datatype: da,
                    lang: ga,
                },
                Term::Literal {
                    lexical: lb,
                    datatype: db,
                    lang: gb,
                },
            ) => {
                if da == db && da == vocab::xsd::INT {
                    if let (Ok(ia), Ok(ib)) = (la.parse::<i64>(), lb.parse::<i64>()) {
                        return ia.cmp(&ib).then_with(|| ga.cmp(gb));
                    }
                }
                da.cmp(db).then_with(|| la.cmp(lb)).then_with(|| ga.cmp(gb))
            }
            (a, b) => a.rank().cmp(&b.rank()),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::BlankNode(label) => write!(f, "_:{label}"),
            Term::Literal {
                lexical,
                datatype,
                lang,
            } => {
                write!(f, "\"{}\"", escape_literal(lexical))?;
                if let Some(tag) = lang {
                    write!(f, "@{tag}")
                } else if datatype != vocab::xsd::STRING {
                    write!(f, "^^<{datatype}>")
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Escapes `"`, `\`, newline, carriage return and tab; everything else is
/// emitted as UTF-8.
pub(crate) fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            other => out.push(other),
        }
    }
    out
}

fn iri_is_absolute(iri: &str) -> bool {
    // A scheme followed by ':'. Schemes are ALPHA *(ALPHA / DIGIT / "+" / "-" / ".")
    let Some(colon) = iri.find(':') else {
        return false;
    };
    let scheme = &iri[..colon];
    let mut chars = scheme.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '+' || c == '-' || c == '.')
}

/// A graph-qualified RDF statement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quad {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
    pub graph: Term,
}

impl Quad {
    /// Builds a quad, checking the positional invariants: the subject is an
    /// IRI or blank node, the predicate and graph are IRIs.
    pub fn new(subject: Term, predicate: Term, object: Term, graph: Term) -> Result<Quad, RdfError> {
        if matches!(subject, Term::Literal { .. }) {
            return Err(RdfError::InvalidTerm("literal in subject position".into()));
        }
        if !predicate.is_iri() {
            return Err(RdfError::InvalidTerm("predicate must be an IRI".into()));
        }
        if !graph.is_iri() {
            return Err(RdfError::InvalidTerm("graph must be an IRI".into()));
        }
        for term in [&subject, &predicate, &object, &graph] {
            term.validate()?;
        }
        Ok(Quad {
            subject,
            predicate,
            object,
            graph,
        })
    }
}

/// An ordered multiset of quads plus a prefix map.
///
/// Iteration order is insertion order; canonicalization and serialization
/// impose their own deterministic orders independently of it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    quads: Vec<Quad>,
    prefixes: BTreeMap<String, String>,
}

impl Dataset {
    pub fn new() -> Dataset {
        Dataset::default()
    }

    pub fn insert(&mut self, quad: Quad) {
        self.quads.push(quad);
    }

    /// Convenience constructor that validates positional invariants.
    pub fn insert_terms(
        &mut self,
        subject: Term,
        predicate: Term,
        object: Term,
        graph: Term,
    ) -> Result<(), RdfError> {
        self.insert(Quad::new(subject, predicate, object, graph)?);
        Ok(())
    }

    pub fn bind_prefix(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) {
        self.prefixes.insert(prefix.into(), namespace.into());
    }

    pub fn prefixes(&self) -> &BTreeMap<String, String> {
        &self.prefixes
    }

    pub fn quads(&self) -> &[Quad] {
        &self.quads
    }

    pub fn len(&self) -> usize {
        self.quads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }

    /// Quads belonging to one named graph, in insertion order.
    pub fn graph<'a>(&'a self, graph_iri: &'a str) -> impl Iterator<Item = &'a Quad> {
        self.quads
            .iter()
            .filter(move |q| q.graph.as_iri() == Some(graph_iri))
    }

    /// Like [`Dataset::graph`] but takes ownership of the graph IRI, for
    /// callers that compute it on the fly.
    pub fn graph_owned(&self, graph_iri: String) -> impl Iterator<Item = &Quad> {
        self.quads
            .iter()
            .filter(move |q| q.graph.as_iri() == Some(graph_iri.as_str()))
    }

    /// The distinct graph IRIs present, in first-seen order.
    pub fn graph_names(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for quad in &self.quads {
            if let Some(g) = quad.graph.as_iri() {
                if !seen.contains(&g) {
                    seen.push(g);
                }
            }
        }
        seen
    }

    /// Set-semantics equality on quads, ignoring prefix maps and duplicates.
    pub fn quad_set_eq(&self, other: &Dataset) -> bool {
        let a: BTreeSet<&Quad> = self.quads.iter().collect();
        let b: BTreeSet<&Quad> = other.quads.iter().collect();
        a == b
    }

    /// Rewrites every IRI that equals `from` or extends it to start with `to`
    /// instead, in quads and prefix bindings alike.
    pub fn rewrite_iri_prefix(&self, from: &str, to: &str) -> Dataset {
        let rewrite = |term: &Term| -> Term {
            match term {
                Term::Iri(iri) => match iri.strip_prefix(from) {
                    Some(rest) => Term::Iri(format!("{to}{rest}")),
                    None => term.clone(),
                },
                _ => term.clone(),
            }
        };
        let quads = self
            .quads
            .iter()
            .map(|q| Quad {
                subject: rewrite(&q.subject),
                predicate: rewrite(&q.predicate),
                object: rewrite(&q.object),
                graph: rewrite(&q.graph),
            })
            .collect();
        let prefixes = self
            .prefixes
            .iter()
            .map(|(p, ns)| {
                let ns = match ns.strip_prefix(from) {
                    Some(rest) => format!("{to}{rest}"),
                    None => ns.clone(),
                };
                (p.clone(), ns)
            })
            .collect();
        Dataset { quads, prefixes }
    }
}

impl FromIterator<Quad> for Dataset {
    fn from_iter<I: IntoIterator<Item = Quad>>(iter: I) -> Dataset {
        Dataset {
            quads: iter.into_iter().collect(),
            prefixes: BTreeMap::new(),
        }
    }
}
