//! File-defined queries: a small JSON shape compiled to a graph pattern.
//!
//! ```json
//! {
//!   "patterns": [["?w", "rdf:type", "nif:Word"], ["?w", "nif:anchorOf", "?a"]],
//!   "values": {"?a": ["\"said\""]},
//!   "filters": [{"var": "?a", "contains": "sai", "caseInsensitive": true}],
//!   "project": ["?w", "?a"],
//!   "distinct": true,
//!   "groupBy": {"keys": ["?a"], "count": "?w", "countDistinct": true, "as": "Count"}
//! }
//! ```
//!
//! Terms: `?name` is a variable, `<iri>` or `prefix:local` (standard
//! prefixes) an IRI, `"lexical"` a literal with optional `^^datatype` or
//! `@lang` suffix.

use anyhow::{bail, Context, Result};
use provcorp::query::{CountAggregate, Filter, GroupBy, PatternTerm, Query, TriplePattern};
use provcorp::rdf::Term;
use provcorp::vocab;
use serde_json::Value;

pub fn parse_query_file(text: &str) -> Result<Query> {
    let json: Value = serde_json::from_str(text).context("query file is not valid JSON")?;
    let object = json.as_object().context("query file must be an object")?;

    let mut query = Query::default();
    let patterns = object
        .get("patterns")
        .and_then(|v| v.as_array())
        .context("query needs a \"patterns\" array")?;
    for pattern in patterns {
        let triple = pattern
            .as_array()
            .filter(|a| a.len() == 3)
            .context("each pattern must be a [s, p, o] array")?;
        let mut terms = triple.iter().map(|v| {
            v.as_str()
                .context("pattern positions must be strings")
                .and_then(parse_pattern_term)
        });
        query.patterns.push(TriplePattern::new(
            terms.next().unwrap()?,
            terms.next().unwrap()?,
            terms.next().unwrap()?,
        ));
    }

    if let Some(values) = object.get("values") {
        for (var, allowed) in values.as_object().context("\"values\" must be an object")? {
            let allowed = allowed
                .as_array()
                .context("values entries must be arrays")?
                .iter()
                .map(|v| {
                    v.as_str()
                        .context("values terms must be strings")
                        .and_then(parse_const_term)
                })
                .collect::<Result<Vec<Term>>>()?;
            query.values.insert(var_name(var), allowed);
        }
    }

    if let Some(filters) = object.get("filters") {
        for filter in filters.as_array().context("\"filters\" must be an array")? {
            let spec = filter.as_object().context("filters must be objects")?;
            let var = var_name(
                spec.get("var")
                    .and_then(|v| v.as_str())
                    .context("filter needs \"var\"")?,
            );
            if let Some(needle) = spec.get("contains") {
                query.filters.push(Filter::Contains {
                    var,
                    needle: needle.as_str().context("\"contains\" must be a string")?.to_owned(),
                    case_insensitive: spec
                        .get("caseInsensitive")
                        .and_then(|v| v.as_bool())
                        .unwrap_or(false),
                });
            } else if let Some(term) = spec.get("equals") {
                query.filters.push(Filter::Eq {
                    var,
                    term: parse_const_term(term.as_str().context("\"equals\" must be a string")?)?,
                });
            } else {
                bail!("filter needs \"contains\" or \"equals\"");
            }
        }
    }

    if let Some(project) = object.get("project") {
        for var in project.as_array().context("\"project\" must be an array")? {
            query
                .projection
                .push(var_name(var.as_str().context("projected names are strings")?));
        }
    }
    query.distinct = object
        .get("distinct")
        .and_then(|v| v.as_bool())
        .unwrap_or(false);

    if let Some(group) = object.get("groupBy") {
        let spec = group.as_object().context("\"groupBy\" must be an object")?;
        let keys = spec
            .get("keys")
            .and_then(|v| v.as_array())
            .map(|keys| {
                keys.iter()
                    .map(|k| k.as_str().map(var_name).context("group keys are strings"))
                    .collect::<Result<Vec<String>>>()
            })
            .transpose()?
            .unwrap_or_default();
        query.group_by = Some(GroupBy {
            keys,
            count: CountAggregate {
                var: var_name(
                    spec.get("count")
                        .and_then(|v| v.as_str())
                        .context("groupBy needs \"count\"")?,
                ),
                distinct: spec
                    .get("countDistinct")
                    .and_then(|v| v.as_bool())
                    .unwrap_or(false),
                output: spec
                    .get("as")
                    .and_then(|v| v.as_str())
                    .unwrap_or("Count")
                    .to_owned(),
            },
        });
    } else if query.projection.is_empty() {
        bail!("query needs \"project\" or \"groupBy\"");
    }
    Ok(query)
}

fn var_name(s: &str) -> String {
    s.strip_prefix('?').unwrap_or(s).to_owned()
}

fn parse_pattern_term(s: &str) -> Result<PatternTerm> {
    if let Some(name) = s.strip_prefix('?') {
        if name.is_empty() {
            bail!("empty variable name");
        }
        return Ok(PatternTerm::Var(name.to_owned()));
    }
    parse_const_term(s).map(PatternTerm::Const)
}

fn parse_const_term(s: &str) -> Result<Term> {
    if let Some(inner) = s.strip_prefix('<').and_then(|r| r.strip_suffix('>')) {
        return Ok(Term::iri(inner));
    }
    if s.starts_with('"') {
        return parse_literal(s);
    }
    if s.contains("://") || s.starts_with("urn:") {
        return Ok(Term::iri(s));
    }
    if let Some((prefix, local)) = s.split_once(':') {
        for (p, ns) in vocab::default_prefixes() {
            if p == prefix {
                return Ok(Term::iri(format!("{ns}{local}")));
            }
        }
        bail!("unknown prefix {prefix:?} in {s:?}");
    }
    bail!("cannot read term {s:?}: expected ?var, <iri>, prefix:local or \"literal\"")
}

fn parse_literal(s: &str) -> Result<Term> {
    let rest = &s[1..];
    let mut lexical = String::new();
    let mut chars = rest.chars();
    let mut closed = false;
    while let Some(c) = chars.next() {
        match c {
            '"' => {
                closed = true;
                break;
            }
            '\\' => match chars.next() {
                Some('"') => lexical.push('"'),
                Some('\\') => lexical.push('\\'),
                Some('n') => lexical.push('\n'),
                Some('t') => lexical.push('\t'),
                other => bail!("bad escape \\{other:?} in literal {s:?}"),
            },
            other => lexical.push(other),
        }
    }
    if !closed {
        bail!("unterminated literal {s:?}");
    }
    let suffix: String = chars.collect();
    if suffix.is_empty() {
        Ok(Term::string(lexical))
    } else if let Some(lang) = suffix.strip_prefix('@') {
        Ok(Term::lang_string(lexical, lang))
    } else if let Some(datatype) = suffix.strip_prefix("^^") {
        let datatype = match parse_const_term(datatype)? {
            Term::Iri(iri) => iri,
            other => bail!("datatype must be an IRI, got {other:?}"),
        };
        Ok(Term::typed(lexical, datatype))
    } else {
        bail!("unexpected literal suffix {suffix:?} in {s:?}")
    }
}
