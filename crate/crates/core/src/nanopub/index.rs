//! Index nanopublications: nanopubs whose assertion enumerates other
//! nanopubs, defining a dataset. An index may append to a previous index,
//! forming a chain that is resolved transitively.

use super::{Nanopub, NanopubBuilder, NanopubError, NanopubSource, TrustyRef};
use crate::rdf::Term;
use crate::vocab;

/// Metadata stamped onto a built index.
#[derive(Debug, Clone)]
pub struct IndexMetadata {
    pub title: String,
    pub created: String,
    pub creator: Option<String>,
    pub license: Option<String>,
    pub base_namespace: String,
}

/// A nanopub recognized as an index, with its member list decoded.
#[derive(Debug, Clone)]
pub struct IndexNanopub {
    nanopub: Nanopub,
    elements: Vec<String>,
    appends: Option<String>,
}

impl IndexNanopub {
    pub fn nanopub(&self) -> &Nanopub {
        &self.nanopub
    }

    pub fn uri(&self) -> &str {
        self.nanopub.uri()
    }

    /// Member nanopub URIs in listing order (this link only, no chain).
    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    /// The previous index this one extends, if chained.
    pub fn appends(&self) -> Option<&str> {
        self.appends.as_deref()
    }
}

impl TryFrom<Nanopub> for IndexNanopub {
    type Error = NanopubError;

    fn try_from(nanopub: Nanopub) -> Result<IndexNanopub, NanopubError> {
        let mut elements = Vec::new();
        let mut appends = None;
        for quad in nanopub.assertion() {
            match quad.predicate.as_iri() {
                Some(vocab::npx::INCLUDES_ELEMENT) => {
                    if let Some(member) = quad.object.as_iri() {
                        elements.push(member.to_owned());
                    }
                }
                Some(vocab::npx::APPENDS_INDEX) => {
                    appends = quad.object.as_iri().map(str::to_owned);
                }
                _ => {}
            }
        }
        if elements.is_empty() && appends.is_none() {
            return Err(NanopubError::NotAnIndex(nanopub.uri().to_owned()));
        }
        Ok(IndexNanopub {
            nanopub,
            elements,
            appends,
        })
    }
}

/// Builds and finalizes an index over `members`, optionally appending to a
/// previous index.
pub fn build_index(
    members: &[String],
    metadata: &IndexMetadata,
    previous: Option<&str>,
) -> Result<IndexNanopub, NanopubError> {
    if members.is_empty() {
        return Err(NanopubError::EmptyIndex);
    }
    for member in members {
        if TrustyRef::parse(member).is_none() {
            return Err(NanopubError::InvalidStructure(format!(
                "index member is not a trusty reference: {member}"
            )));
        }
    }
    if let Some(prev) = previous {
        if TrustyRef::parse(prev).is_none() {
            return Err(NanopubError::InvalidStructure(format!(
                "appended index is not a trusty reference: {prev}"
            )));
        }
    }

    let mut builder = NanopubBuilder::new();
    let this = NanopubBuilder::this();
    for member in members {
        builder.assertion(
            this.clone(),
            Term::iri(vocab::npx::INCLUDES_ELEMENT),
            Term::iri(member),
        );
    }
    if let Some(prev) = previous {
        builder.assertion(
            this.clone(),
            Term::iri(vocab::npx::APPENDS_INDEX),
            Term::iri(prev),
        );
    }
    let assertion_g = Term::iri(format!("{}#assertion", super::PLACEHOLDER));
    builder.provenance(
        assertion_g,
        Term::iri(vocab::prov::WAS_ATTRIBUTED_TO),
        match &metadata.creator {
            Some(creator) => Term::iri(creator),
            None => this.clone(),
        },
    );
    builder.pubinfo(
        this.clone(),
        Term::iri(vocab::rdf::TYPE),
        Term::iri(vocab::npx::NANOPUB_INDEX),
    );
    builder.pubinfo(
        this,
        Term::iri(vocab::dct::TITLE),
        Term::string(&metadata.title),
    );
    builder.pubinfo_defaults(
        &metadata.created,
        metadata.creator.as_deref(),
        metadata.license.as_deref(),
    );
    let nanopub = builder.finalize(&metadata.base_namespace)?;
    IndexNanopub::try_from(nanopub)
}

/// Resolves an index chain to the union of its member lists: oldest link
/// first, listing order within a link, duplicates dropped.
pub fn resolve_index(
    index_uri: &str,
    source: &impl NanopubSource,
) -> Result<Vec<String>, NanopubError> {
    let mut chain: Vec<IndexNanopub> = Vec::new();
    let mut visited: Vec<String> = Vec::new();
    let mut cursor = index_uri.to_owned();
    loop {
        if visited.contains(&cursor) {
            return Err(NanopubError::CycleDetected(cursor));
        }
        visited.push(cursor.clone());
        let nanopub = source
            .get_nanopub(&cursor)
            .ok_or_else(|| NanopubError::NotFound(cursor.clone()))?;
        let index = IndexNanopub::try_from(nanopub)?;
        let next = index.appends().map(str::to_owned);
        chain.push(index);
        match next {
            Some(prev) => cursor = prev,
            None => break,
        }
    }
    let mut members = Vec::new();
    for index in chain.iter().rev() {
        for member in index.elements() {
            if !members.contains(member) {
                members.push(member.clone());
            }
        }
    }
    Ok(members)
}
