//! Basic graph pattern evaluation: index nested-loop joins with pattern
//! reordering by estimated selectivity, VALUES domain restriction, filters,
//! DISTINCT, and a GROUP BY/COUNT aggregate.
//!
//! Results are deterministic regardless of the join plan: rows are sorted by
//! the full projected tuple, first column primary.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::{QuadStore, QueryError};
use crate::rdf::Term;

/// A position in a triple pattern: a constant term or a variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternTerm {
    Var(String),
    Const(Term),
}

impl PatternTerm {
    pub fn var(name: &str) -> PatternTerm {
        PatternTerm::Var(name.to_owned())
    }

    pub fn iri(iri: &str) -> PatternTerm {
        PatternTerm::Const(Term::iri(iri))
    }

    fn as_var(&self) -> Option<&str> {
        match self {
            PatternTerm::Var(name) => Some(name),
            PatternTerm::Const(_) => None,
        }
    }
}

/// One subject/predicate/object pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(subject: PatternTerm, predicate: PatternTerm, object: PatternTerm) -> Self {
        TriplePattern {
            subject,
            predicate,
            object,
        }
    }

    fn vars(&self) -> impl Iterator<Item = &str> {
        [&self.subject, &self.predicate, &self.object]
            .into_iter()
            .filter_map(|t| t.as_var())
    }
}

/// Row filters applied after pattern matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Filter {
    /// Variable equals the given term.
    Eq { var: String, term: Term },
    /// The variable's plain string contains the needle.
    Contains {
        var: String,
        needle: String,
        case_insensitive: bool,
    },
}

impl Filter {
    fn var(&self) -> &str {
        match self {
            Filter::Eq { var, .. } | Filter::Contains { var, .. } => var,
        }
    }

    fn accepts(&self, term: &Term) -> bool {
        match self {
            Filter::Eq { term: expected, .. } => term == expected,
            Filter::Contains {
                needle,
                case_insensitive,
                ..
            } => {
                let hay = term.plain();
                if *case_insensitive {
                    hay.to_lowercase().contains(&needle.to_lowercase())
                } else {
                    hay.contains(needle.as_str())
                }
            }
        }
    }
}

/// COUNT aggregate over one variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountAggregate {
    pub var: String,
    pub distinct: bool,
    /// Output column name.
    pub output: String,
}

/// GROUP BY clause. Empty `keys` means one global group: the result is then
/// always a single row, even over an empty match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupBy {
    pub keys: Vec<String>,
    pub count: CountAggregate,
}

/// A basic graph pattern query.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Query {
    pub patterns: Vec<TriplePattern>,
    /// Allowed term lists per variable.
    pub values: BTreeMap<String, Vec<Term>>,
    pub filters: Vec<Filter>,
    pub projection: Vec<String>,
    pub distinct: bool,
    pub group_by: Option<GroupBy>,
}

/// Query results: ordered columns, rows of terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Term>>,
}

impl BindingTable {
    pub fn empty(columns: Vec<String>) -> BindingTable {
        BindingTable {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn sort_rows(&mut self) {
        self.rows.sort();
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

type Binding = HashMap<String, Term>;

/// Evaluates the query against the store.
pub fn evaluate(store: &QuadStore, query: &Query) -> Result<BindingTable, QueryError> {
    let pattern_vars: HashSet<&str> = query.patterns.iter().flat_map(|p| p.vars()).collect();
    let mut output_columns: Vec<String> = query.projection.clone();
    if let Some(group) = &query.group_by {
        for key in &group.keys {
            if !pattern_vars.contains(key.as_str()) {
                return Err(QueryError::UnboundProjection(key.clone()));
            }
        }
        if !pattern_vars.contains(group.count.var.as_str()) {
            return Err(QueryError::UnboundProjection(group.count.var.clone()));
        }
        output_columns = group.keys.clone();
        output_columns.push(group.count.output.clone());
    } else {
        for var in &query.projection {
            if !pattern_vars.contains(var.as_str()) {
                return Err(QueryError::UnboundProjection(var.clone()));
            }
        }
    }
    for filter in &query.filters {
        if !pattern_vars.contains(filter.var()) {
            return Err(QueryError::UnboundProjection(filter.var().to_owned()));
        }
    }

    // reorder by ascending selectivity estimate (constants only)
    let mut order: Vec<usize> = (0..query.patterns.len()).collect();
    order.sort_by_key(|&i| {
        let p = &query.patterns[i];
        let as_const = |t: &PatternTerm| match t {
            PatternTerm::Const(term) => Some(term.clone()),
            PatternTerm::Var(_) => None,
        };
        store.estimate(
            as_const(&p.subject).as_ref(),
            as_const(&p.predicate).as_ref(),
            as_const(&p.object).as_ref(),
        )
    });

    let mut bindings: Vec<Binding> = vec![Binding::new()];
    for &idx in &order {
        let pattern = &query.patterns[idx];
        let mut next: Vec<Binding> = Vec::new();
        for binding in &bindings {
            let resolve = |t: &PatternTerm| -> Option<Term> {
                match t {
                    PatternTerm::Const(term) => Some(term.clone()),
                    PatternTerm::Var(name) => binding.get(name).cloned(),
                }
            };
            let s = resolve(&pattern.subject);
            let p = resolve(&pattern.predicate);
            let o = resolve(&pattern.object);
            for quad in store.match_pattern(s.as_ref(), p.as_ref(), o.as_ref()) {
                let mut extended = binding.clone();
                if extend(&mut extended, pattern, &quad.subject, &quad.predicate, &quad.object)
                    && values_ok(&extended, &query.values)
                {
                    next.push(extended);
                }
            }
        }
        bindings = next;
        if bindings.is_empty() {
            break;
        }
    }

    // filters
    bindings.retain(|binding| {
        query.filters.iter().all(|filter| {
            binding
                .get(filter.var())
                .map(|term| filter.accepts(term))
                .unwrap_or(false)
        })
    });

    let mut table = if let Some(group) = &query.group_by {
        aggregate(&bindings, group)
    } else {
        let mut rows: Vec<Vec<Term>> = bindings
            .iter()
            .map(|b| {
                query
                    .projection
                    .iter()
                    .map(|var| b.get(var).cloned().expect("projection validated"))
                    .collect()
            })
            .collect();
        if query.distinct {
            let mut seen = HashSet::new();
            rows.retain(|row| seen.insert(row.clone()));
        }
        BindingTable {
            columns: output_columns,
            rows,
        }
    };
    table.sort_rows();
    Ok(table)
}

fn extend(
    binding: &mut Binding,
    pattern: &TriplePattern,
    s: &Term,
    p: &Term,
    o: &Term,
) -> bool {
    for (slot, term) in [(&pattern.subject, s), (&pattern.predicate, p), (&pattern.object, o)] {
        if let PatternTerm::Var(name) = slot {
            match binding.get(name) {
                Some(existing) if existing != term => return false,
                Some(_) => {}
                None => {
                    binding.insert(name.clone(), term.clone());
                }
            }
        }
    }
    true
}

fn values_ok(binding: &Binding, values: &BTreeMap<String, Vec<Term>>) -> bool {
    values.iter().all(|(var, allowed)| match binding.get(var) {
        Some(term) => allowed.contains(term),
        None => true,
    })
}

fn aggregate(bindings: &[Binding], group: &GroupBy) -> BindingTable {
    let mut columns = group.keys.clone();
    columns.push(group.count.output.clone());

    let mut groups: BTreeMap<Vec<Term>, Vec<Term>> = BTreeMap::new();
    if group.keys.is_empty() {
        groups.insert(Vec::new(), Vec::new());
    }
    for binding in bindings {
        let Some(key) = group
            .keys
            .iter()
            .map(|k| binding.get(k).cloned())
            .collect::<Option<Vec<Term>>>()
        else {
            continue;
        };
        let Some(counted) = binding.get(&group.count.var).cloned() else {
            continue;
        };
        groups.entry(key).or_default().push(counted);
    }

    let rows = groups
        .into_iter()
        .map(|(mut key, counted)| {
            let count = if group.count.distinct {
                counted.iter().collect::<HashSet<_>>().len()
            } else {
                counted.len()
            };
            key.push(Term::int(count as i64));
            key
        })
        .collect();
    BindingTable { columns, rows }
}
