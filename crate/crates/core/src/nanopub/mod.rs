//! The nanopublication abstraction: four named graphs (head, assertion,
//! provenance, publication info), content-hash identifiers, verification,
//! protected marking, and index nanopublications.
//!
//! An identifier is minted by rendering the draft's four graphs as canonical
//! N-Quads with the draft's placeholder URI substituted out, hashing with
//! SHA-256, and encoding the digest as 43 base64url characters. Every IRI
//! derived from the placeholder is then rewritten to the final URI, so the
//! published artifact can be re-verified by reversing the substitution.

mod index;

pub use index::{build_index, resolve_index, IndexMetadata, IndexNanopub};

use crate::rdf::{canonical_nquads, parse_trig, serialize_trig, Dataset, Quad, RdfError, Term};
use crate::vocab;
use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine as _;
use sha2::{Digest, Sha256};

/// Reserved base IRI carried by drafts until finalize mints the real one.
pub const PLACEHOLDER: &str = "http://purl.org/nanopub/temp/np";

/// Errors from nanopublication construction and resolution.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NanopubError {
    #[error("invalid nanopub structure: {0}")]
    InvalidStructure(String),
    #[error(transparent)]
    Rdf(#[from] RdfError),
    #[error("index must list at least one member")]
    EmptyIndex,
    #[error("nanopub not found: {0}")]
    NotFound(String),
    #[error("index append links form a cycle at {0}")]
    CycleDetected(String),
    #[error("not an index nanopub: {0}")]
    NotAnIndex(String),
}

/// A syntactically valid trusty reference: a URI whose last path segment is
/// a 43-character base64url artifact code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrustyRef {
    pub artifact_code: String,
    pub full_uri: String,
}

impl TrustyRef {
    pub fn parse(uri: &str) -> Option<TrustyRef> {
        let (_, code) = uri.rsplit_once('/')?;
        if code.len() == 43
            && code
                .bytes()
                .all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_')
        {
            Some(TrustyRef {
                artifact_code: code.to_owned(),
                full_uri: uri.to_owned(),
            })
        } else {
            None
        }
    }
}

/// Outcome of [`Nanopub::verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub valid: bool,
    pub reason: Option<String>,
}

impl VerificationReport {
    fn ok() -> Self {
        VerificationReport {
            valid: true,
            reason: None,
        }
    }

    fn fail(reason: impl Into<String>) -> Self {
        VerificationReport {
            valid: false,
            reason: Some(reason.into()),
        }
    }
}

/// A finalized (or externally loaded) nanopublication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nanopub {
    uri: String,
    dataset: Dataset,
}

impl Nanopub {
    /// Wraps a URI and dataset without verification, e.g. when reading from
    /// disk. Call [`Nanopub::verify`] before trusting the content.
    pub fn new_unverified(uri: String, dataset: Dataset) -> Nanopub {
        Nanopub { uri, dataset }
    }

    pub fn uri(&self) -> &str {
        &self.uri
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    pub fn artifact_code(&self) -> Option<String> {
        TrustyRef::parse(&self.uri).map(|t| t.artifact_code)
    }

    pub fn head_graph(&self) -> String {
        format!("{}#Head", self.uri)
    }

    pub fn assertion_graph(&self) -> String {
        format!("{}#assertion", self.uri)
    }

    pub fn provenance_graph(&self) -> String {
        format!("{}#provenance", self.uri)
    }

    pub fn pubinfo_graph(&self) -> String {
        format!("{}#pubinfo", self.uri)
    }

    pub fn assertion(&self) -> impl Iterator<Item = &Quad> {
        self.dataset.graph_owned(self.assertion_graph())
    }

    pub fn provenance(&self) -> impl Iterator<Item = &Quad> {
        self.dataset.graph_owned(self.provenance_graph())
    }

    pub fn pubinfo(&self) -> impl Iterator<Item = &Quad> {
        self.dataset.graph_owned(self.pubinfo_graph())
    }

    /// True when the publication info marks this nanopub as protected.
    pub fn is_protected(&self) -> bool {
        let this = Term::iri(&self.uri);
        self.pubinfo().any(|q| {
            q.subject == this
                && q.predicate.as_iri() == Some(vocab::rdf::TYPE)
                && q.object.as_iri() == Some(vocab::npx::PROTECTED_NANOPUB)
        })
    }

    /// Recomputes the artifact code from content and checks every structural
    /// invariant. Never errors: problems are reported, not thrown.
    pub fn verify(&self) -> VerificationReport {
        let Some(trusty) = TrustyRef::parse(&self.uri) else {
            return VerificationReport::fail("structure: URI carries no artifact code");
        };
        if let Err(reason) = check_structure(&self.dataset, &self.uri) {
            return VerificationReport::fail(format!("structure: {reason}"));
        }
        let canonical = match canonical_nquads(&self.dataset, &self.uri) {
            Ok(text) => text,
            Err(e) => return VerificationReport::fail(format!("structure: {e}")),
        };
        if artifact_code(&canonical) != trusty.artifact_code {
            return VerificationReport::fail("hash mismatch");
        }
        VerificationReport::ok()
    }

    pub fn to_trig(&self) -> String {
        serialize_trig(&self.dataset)
    }

    /// Splits a parsed dataset into the nanopublications it bundles. Quads
    /// that belong to no nanopub make the bundle invalid.
    pub fn from_dataset(dataset: &Dataset) -> Result<Vec<Nanopub>, NanopubError> {
        let mut uris: Vec<String> = Vec::new();
        for quad in dataset.quads() {
            if quad.predicate.as_iri() == Some(vocab::np::HAS_ASSERTION) {
                if let Some(uri) = quad.subject.as_iri() {
                    if !uris.iter().any(|u| u == uri) {
                        uris.push(uri.to_owned());
                    }
                }
            }
        }
        uris.sort();
        let mut nanopubs = Vec::with_capacity(uris.len());
        let mut claimed = 0usize;
        for uri in uris {
            let graphs = [
                format!("{uri}#Head"),
                format!("{uri}#assertion"),
                format!("{uri}#provenance"),
                format!("{uri}#pubinfo"),
            ];
            let mut sub = Dataset::new();
            for (prefix, ns) in dataset.prefixes() {
                sub.bind_prefix(prefix.clone(), ns.clone());
            }
            for quad in dataset.quads() {
                if graphs.iter().any(|g| quad.graph.as_iri() == Some(g)) {
                    sub.insert(quad.clone());
                    claimed += 1;
                }
            }
            nanopubs.push(Nanopub { uri, dataset: sub });
        }
        if claimed != dataset.len() {
            return Err(NanopubError::InvalidStructure(format!(
                "{} quads belong to no nanopub",
                dataset.len() - claimed
            )));
        }
        if nanopubs.is_empty() {
            return Err(NanopubError::InvalidStructure(
                "no nanopub head found".into(),
            ));
        }
        Ok(nanopubs)
    }

    /// Parses a `.trig` file that holds one nanopub or a bundle.
    pub fn from_trig(text: &str) -> Result<Vec<Nanopub>, NanopubError> {
        let dataset = parse_trig(text)?;
        Nanopub::from_dataset(&dataset)
    }
}

/// Computes the 43-character base64url artifact code of a canonical form.
pub fn artifact_code(canonical: &str) -> String {
    let digest = Sha256::digest(canonical.as_bytes());
    URL_SAFE_NO_PAD.encode(digest)
}

/// A structurally complete nanopub still carrying the placeholder URI.
#[derive(Debug, Clone)]
pub struct DraftNanopub {
    dataset: Dataset,
}

impl DraftNanopub {
    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    /// Mints the content-hash identifier and rewrites every placeholder-derived
    /// IRI to it. The result verifies by construction.
    pub fn finalize(&self, base_namespace: &str) -> Result<Nanopub, NanopubError> {
        let canonical = canonical_nquads(&self.dataset, PLACEHOLDER)?;
        let code = artifact_code(&canonical);
        let uri = if base_namespace.ends_with('/') {
            format!("{base_namespace}{code}")
        } else {
            format!("{base_namespace}/{code}")
        };
        let dataset = self.dataset.rewrite_iri_prefix(PLACEHOLDER, &uri);
        Ok(Nanopub { uri, dataset })
    }
}

/// Assembles drafts: head quads are generated, the other three graphs are
/// filled by the caller. All self-referential IRIs hang off [`PLACEHOLDER`].
#[derive(Debug, Clone)]
pub struct NanopubBuilder {
    assertion: Vec<(Term, Term, Term)>,
    provenance: Vec<(Term, Term, Term)>,
    pubinfo: Vec<(Term, Term, Term)>,
    prefixes: Vec<(String, String)>,
    protected: bool,
}

impl NanopubBuilder {
    pub fn new() -> NanopubBuilder {
        let prefixes = vocab::default_prefixes()
            .into_iter()
            .map(|(p, ns)| (p.to_owned(), ns.to_owned()))
            .collect();
        NanopubBuilder {
            assertion: Vec::new(),
            provenance: Vec::new(),
            pubinfo: Vec::new(),
            prefixes,
            protected: false,
        }
    }

    /// The draft's own URI (placeholder until finalize).
    pub fn this() -> Term {
        Term::iri(PLACEHOLDER)
    }

    /// A `#`-fragment entity under the draft's URI.
    pub fn sub(fragment: &str) -> Term {
        Term::iri(format!("{PLACEHOLDER}#{fragment}"))
    }

    pub fn assertion(&mut self, s: Term, p: Term, o: Term) -> &mut Self {
        self.assertion.push((s, p, o));
        self
    }

    pub fn provenance(&mut self, s: Term, p: Term, o: Term) -> &mut Self {
        self.provenance.push((s, p, o));
        self
    }

    pub fn pubinfo(&mut self, s: Term, p: Term, o: Term) -> &mut Self {
        self.pubinfo.push((s, p, o));
        self
    }

    /// Marks the draft as protected (unpublishable to open registries).
    pub fn protected(&mut self, protected: bool) -> &mut Self {
        self.protected = protected;
        self
    }

    pub fn bind_prefix(&mut self, prefix: impl Into<String>, ns: impl Into<String>) -> &mut Self {
        self.prefixes.push((prefix.into(), ns.into()));
        self
    }

    /// Standard publication info: creation timestamp, creator, license.
    pub fn pubinfo_defaults(
        &mut self,
        created: &str,
        creator: Option<&str>,
        license: Option<&str>,
    ) -> &mut Self {
        let this = Self::this();
        self.pubinfo(
            this.clone(),
            Term::iri(vocab::dct::CREATED),
            Term::date_time(created),
        );
        if let Some(creator) = creator {
            self.pubinfo(this.clone(), Term::iri(vocab::dct::CREATOR), Term::iri(creator));
        }
        if let Some(license) = license {
            self.pubinfo(this, Term::iri(vocab::dct::LICENSE), Term::iri(license));
        }
        self
    }

    /// Validates the draft structure and assembles the four graphs.
    pub fn draft(&self) -> Result<DraftNanopub, NanopubError> {
        let this = Term::iri(PLACEHOLDER);
        let head = Term::iri(format!("{PLACEHOLDER}#Head"));
        let assertion_g = Term::iri(format!("{PLACEHOLDER}#assertion"));
        let provenance_g = Term::iri(format!("{PLACEHOLDER}#provenance"));
        let pubinfo_g = Term::iri(format!("{PLACEHOLDER}#pubinfo"));

        let mut dataset = Dataset::new();
        for (prefix, ns) in &self.prefixes {
            dataset.bind_prefix(prefix.clone(), ns.clone());
        }
        dataset.bind_prefix("this", PLACEHOLDER);
        dataset.bind_prefix("sub", format!("{PLACEHOLDER}#"));

        let head_quads = [
            (this.clone(), Term::iri(vocab::rdf::TYPE), Term::iri(vocab::np::NANOPUBLICATION)),
            (this.clone(), Term::iri(vocab::np::HAS_ASSERTION), assertion_g.clone()),
            (this.clone(), Term::iri(vocab::np::HAS_PROVENANCE), provenance_g.clone()),
            (this.clone(), Term::iri(vocab::np::HAS_PUBLICATION_INFO), pubinfo_g.clone()),
        ];
        for (s, p, o) in head_quads {
            push_quad(&mut dataset, s, p, o, head.clone())?;
        }
        for (s, p, o) in &self.assertion {
            push_quad(&mut dataset, s.clone(), p.clone(), o.clone(), assertion_g.clone())?;
        }
        for (s, p, o) in &self.provenance {
            push_quad(&mut dataset, s.clone(), p.clone(), o.clone(), provenance_g.clone())?;
        }
        for (s, p, o) in &self.pubinfo {
            push_quad(&mut dataset, s.clone(), p.clone(), o.clone(), pubinfo_g.clone())?;
        }
        if self.protected {
            push_quad(
                &mut dataset,
                this,
                Term::iri(vocab::rdf::TYPE),
                Term::iri(vocab::npx::PROTECTED_NANOPUB),
                pubinfo_g,
            )?;
        }
        check_structure(&dataset, PLACEHOLDER).map_err(NanopubError::InvalidStructure)?;
        Ok(DraftNanopub { dataset })
    }

    /// Shorthand for `draft()?.finalize(base)`.
    pub fn finalize(&self, base_namespace: &str) -> Result<Nanopub, NanopubError> {
        self.draft()?.finalize(base_namespace)
    }
}

impl Default for NanopubBuilder {
    fn default() -> Self {
        NanopubBuilder::new()
    }
}

fn push_quad(dataset: &mut Dataset, s: Term, p: Term, o: Term, g: Term) -> Result<(), NanopubError> {
    dataset
        .insert_terms(s, p, o, g)
        .map_err(|e| NanopubError::InvalidStructure(e.to_string()))
}

/// Checks the graph-structure invariants of a nanopub dataset against `uri`
/// (a placeholder or a final URI).
pub(crate) fn check_structure(dataset: &Dataset, uri: &str) -> Result<(), String> {
    let head_g = format!("{uri}#Head");
    let assertion_g = format!("{uri}#assertion");
    let provenance_g = format!("{uri}#provenance");
    let pubinfo_g = format!("{uri}#pubinfo");

    for quad in dataset.quads() {
        let g = quad.graph.as_iri().unwrap_or_default();
        if g != head_g && g != assertion_g && g != provenance_g && g != pubinfo_g {
            return Err(format!("quad in unexpected graph {g}"));
        }
    }

    let head: Vec<&Quad> = dataset.graph(&head_g).collect();
    if head.len() != 4 {
        return Err(format!("head graph must hold exactly 4 quads, found {}", head.len()));
    }
    let this = Term::iri(uri);
    let expect = [
        (vocab::rdf::TYPE, vocab::np::NANOPUBLICATION),
        (vocab::np::HAS_ASSERTION, assertion_g.as_str()),
        (vocab::np::HAS_PROVENANCE, provenance_g.as_str()),
        (vocab::np::HAS_PUBLICATION_INFO, pubinfo_g.as_str()),
    ];
    for (pred, obj) in expect {
        let found = head.iter().any(|q| {
            q.subject == this && q.predicate.as_iri() == Some(pred) && q.object.as_iri() == Some(obj)
        });
        if !found {
            return Err(format!("head graph lacks <{pred}> link"));
        }
    }

    if dataset.graph(&assertion_g).next().is_none() {
        return Err("assertion graph is empty".into());
    }
    if dataset.graph(&provenance_g).next().is_none() {
        return Err("provenance graph is empty".into());
    }
    if dataset.graph(&pubinfo_g).next().is_none() {
        return Err("publication info graph is empty".into());
    }

    let assertion_term = Term::iri(&assertion_g);
    if !dataset.graph(&provenance_g).any(|q| q.subject == assertion_term) {
        return Err("provenance graph says nothing about the assertion graph".into());
    }
    if !dataset.graph(&pubinfo_g).any(|q| q.subject == this) {
        return Err("publication info graph says nothing about the nanopub".into());
    }
    Ok(())
}

/// Anything that can resolve nanopub URIs, e.g. a registry or an in-memory map.
pub trait NanopubSource {
    fn get_nanopub(&self, uri: &str) -> Option<Nanopub>;
}

impl NanopubSource for std::collections::HashMap<String, Nanopub> {
    fn get_nanopub(&self, uri: &str) -> Option<Nanopub> {
        self.get(uri).cloned()
    }
}
