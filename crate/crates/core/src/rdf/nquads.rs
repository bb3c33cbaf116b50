//! Canonical N-Quads rendering — the hash preimage for content addressing.

use super::{escape_literal, Dataset, RdfError, Term};
use crate::vocab;

/// Renders the dataset as sorted N-Quads lines with every occurrence of
/// `placeholder_iri` (exact, or as prefix of a longer IRI) replaced by the
/// reserved token `_:np`, suffix preserved. Lines are sorted lexicographically
/// by code point and the output ends with a newline.
///
/// The substitution makes the rendering independent of the identifier that
/// will later be derived from its hash, so a finalized artifact can be
/// re-checked by passing its own URI as the placeholder.
pub fn canonical_nquads(dataset: &Dataset, placeholder_iri: &str) -> Result<String, RdfError> {
    let mut lines: Vec<String> = Vec::with_capacity(dataset.len());
    for quad in dataset.quads() {
        let mut line = String::new();
        for term in [&quad.subject, &quad.predicate, &quad.object] {
            line.push_str(&render_term(term, placeholder_iri)?);
            line.push(' ');
        }
        line.push_str(&render_term(&quad.graph, placeholder_iri)?);
        line.push_str(" .\n");
        lines.push(line);
    }
    lines.sort_unstable();
    Ok(lines.concat())
}

fn render_term(term: &Term, placeholder: &str) -> Result<String, RdfError> {
    match term {
        Term::Iri(iri) => Ok(render_iri(iri, placeholder)),
        Term::BlankNode(_) => Err(RdfError::BlankNodePresent),
        Term::Literal {
            lexical,
            datatype,
            lang,
        } => {
            let mut out = format!("\"{}\"", escape_literal(lexical));
            if let Some(tag) = lang {
                out.push('@');
                out.push_str(tag);
            } else if datatype != vocab::xsd::STRING {
                out.push_str("^^");
                out.push_str(&render_iri(datatype, placeholder));
            }
            Ok(out)
        }
    }
}

fn render_iri(iri: &str, placeholder: &str) -> String {
    match iri.strip_prefix(placeholder) {
        Some(suffix) => format!("_:np{suffix}"),
        None => format!("<{iri}>"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::Quad;

    fn quad(s: &str, p: &str, o: Term, g: &str) -> Quad {
        Quad::new(Term::iri(s), Term::iri(p), o, Term::iri(g)).unwrap()
    }

    const PH: &str = "http://purl.org/nanopub/temp/np";

    #[test]
    fn order_independent() {
        let a = quad(
            "http://x.org/s",
            "http://x.org/p",
            Term::string("1"),
            "http://x.org/g",
        );
        let b = quad(
            "http://x.org/s",
            "http://x.org/p",
            Term::string("2"),
            "http://x.org/g",
        );
        let d1: Dataset = vec![a.clone(), b.clone()].into_iter().collect();
        let d2: Dataset = vec![b, a].into_iter().collect();
        assert_eq!(
            canonical_nquads(&d1, PH).unwrap(),
            canonical_nquads(&d2, PH).unwrap()
        );
    }

    #[test]
    fn placeholder_token_substitution() {
        let d: Dataset = vec![quad(
            PH,
            "http://x.org/p",
            Term::iri(format!("{PH}#assertion")),
            &format!("{PH}#Head"),
        )]
        .into_iter()
        .collect();
        let text = canonical_nquads(&d, PH).unwrap();
        assert!(text.starts_with("_:np "));
        assert!(text.contains("_:np#assertion"));
        assert!(text.contains("_:np#Head"));
        assert!(text.ends_with(".\n"));
    }

    #[test]
    fn blank_node_rejected() {
        let d: Dataset = vec![Quad::new(
            Term::blank("b1"),
            Term::iri("http://x.org/p"),
            Term::string("v"),
            Term::iri("http://x.org/g"),
        )
        .unwrap()]
        .into_iter()
        .collect();
        assert_eq!(canonical_nquads(&d, PH), Err(RdfError::BlankNodePresent));
    }

    #[test]
    fn escaping_and_plain_string_datatype_omitted() {
        let d: Dataset = vec![quad(
            "http://x.org/s",
            "http://x.org/p",
            Term::string("a\"b\\c\nd\te"),
            "http://x.org/g",
        )]
        .into_iter()
        .collect();
        let text = canonical_nquads(&d, PH).unwrap();
        assert!(text.contains("\"a\\\"b\\\\c\\nd\\te\""));
        assert!(!text.contains("^^"));
    }
}
