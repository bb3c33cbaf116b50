//! TriG serialization and parsing.
//!
//! The writer groups quads by graph, then by subject with `;`-chained
//! predicates and `,`-chained objects, using the dataset's prefix map for
//! compaction. Output is deterministic: graphs, subjects, predicates and
//! objects are emitted in sorted order (with `rdf:type` leading its subject
//! block as `a`).
//!
//! The reader covers exactly the feature set the writer emits, plus long
//! (`"""`) literals and comments for convenience.

use super::{escape_literal, Dataset, Quad, RdfError, Term};
use crate::vocab;
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub fn serialize_trig(dataset: &Dataset) -> String {
    let mut out = String::new();
    for (prefix, ns) in dataset.prefixes() {
        let _ = writeln!(out, "@prefix {prefix}: <{ns}> .");
    }
    if !dataset.prefixes().is_empty() {
        out.push('\n');
    }

    // graph -> subject -> predicate -> objects
    let mut graphs: BTreeMap<&Term, BTreeMap<&Term, BTreeMap<&Term, Vec<&Term>>>> = BTreeMap::new();
    for quad in dataset.quads() {
        graphs
            .entry(&quad.graph)
            .or_default()
            .entry(&quad.subject)
            .or_default()
            .entry(&quad.predicate)
            .or_default()
            .push(&quad.object);
    }

    let mut first_graph = true;
    for (graph, subjects) in graphs {
        if !first_graph {
            out.push('\n');
        }
        first_graph = false;
        let _ = writeln!(out, "{} {{", compact_term(graph, dataset.prefixes()));
        for (subject, predicates) in subjects {
            let _ = write!(out, "  {}", compact_term(subject, dataset.prefixes()));
            let mut preds: Vec<(&Term, Vec<&Term>)> = predicates.into_iter().collect();
            // rdf:type leads, rendered as `a`
            preds.sort_by_key(|(p, _)| (p.as_iri() != Some(vocab::rdf::TYPE), *p));
            let last = preds.len() - 1;
            for (i, (predicate, mut objects)) in preds.into_iter().enumerate() {
                objects.sort_unstable();
                objects.dedup();
                let pred_str = if predicate.as_iri() == Some(vocab::rdf::TYPE) {
                    "a".to_owned()
                } else {
                    compact_term(predicate, dataset.prefixes())
                };
                let objs = objects
                    .iter()
                    .map(|o| compact_term(o, dataset.prefixes()))
                    .collect::<Vec<_>>()
                    .join(", ");
                if i == 0 {
                    let _ = write!(out, " {pred_str} {objs}");
                } else {
                    let _ = write!(out, "\n    {pred_str} {objs}");
                }
                out.push_str(if i == last { " .\n" } else { ";" });
            }
        }
        out.push_str("}\n");
    }
    out
}

/// Compacts an IRI against the prefix map: longest matching namespace wins,
/// ties broken by prefix name. Falls back to `<...>` when the local part
/// would not be a valid prefixed-name suffix.
fn compact_term(term: &Term, prefixes: &BTreeMap<String, String>) -> String {
    match term {
        Term::Iri(iri) => compact_iri(iri, prefixes),
        Term::BlankNode(label) => format!("_:{label}"),
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
                out.push_str(&compact_iri(datatype, prefixes));
            }
            out
        }
    }
}

fn compact_iri(iri: &str, prefixes: &BTreeMap<String, String>) -> String {
    let mut best: Option<(&str, &str)> = None; // (prefix, local)
    for (prefix, ns) in prefixes {
        if let Some(local) = iri.strip_prefix(ns.as_str()) {
            if local_name_ok(local) {
                let better = match best {
                    Some((_, cur)) => local.len() < cur.len(),
                    None => true,
                };
                if better {
                    best = Some((prefix, local));
                }
            }
        }
    }
    match best {
        Some((prefix, local)) => format!("{prefix}:{local}"),
        None => format!("<{iri}>"),
    }
}

fn local_name_ok(local: &str) -> bool {
    if local.is_empty() {
        return true;
    }
    let mut chars = local.chars();
    let first = chars.next().unwrap();
    if !(first.is_ascii_alphanumeric() || first == '_') {
        return false;
    }
    if local.ends_with('.') {
        return false;
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.')
}

pub fn parse_trig(text: &str) -> Result<Dataset, RdfError> {
    Parser::new(text).parse()
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Iri(String),
    Pname(String, String),
    Blank(String),
    Str(String),
    LangTag(String),
    PrefixKeyword,
    A,
    OpenBrace,
    CloseBrace,
    Semicolon,
    Comma,
    Dot,
    Carets,
    Eof,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
    // Statement-terminating dots consumed while scanning a prefixed name are
    // handed back through this counter.
    pushback_dot: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
            pushback_dot: 0,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.chars.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(&c) = self.chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn err(&self, message: impl Into<String>) -> RdfError {
        RdfError::syntax(self.line, self.column, message)
    }

    /// Next token plus its start position.
    fn next_token(&mut self) -> Result<(Token, usize, usize), RdfError> {
        self.skip_trivia();
        let (line, column) = (self.line, self.column);
        let Some(&c) = self.chars.peek() else {
            return Ok((Token::Eof, line, column));
        };
        let token = match c {
            '<' => {
                self.bump();
                let mut iri = String::new();
                loop {
                    match self.bump() {
                        Some('>') => break,
                        Some('\n') | None => return Err(self.err("unterminated IRI")),
                        Some(ch) => iri.push(ch),
                    }
                }
                Token::Iri(iri)
            }
            '"' => Token::Str(self.lex_string()?),
            '@' => {
                self.bump();
                let word = self.lex_word(|ch| ch.is_ascii_alphanumeric() || ch == '-');
                if word == "prefix" {
                    Token::PrefixKeyword
                } else if !word.is_empty() {
                    Token::LangTag(word)
                } else {
                    return Err(self.err("expected language tag or @prefix"));
                }
            }
            '{' => {
                self.bump();
                Token::OpenBrace
            }
            '}' => {
                self.bump();
                Token::CloseBrace
            }
            ';' => {
                self.bump();
                Token::Semicolon
            }
            ',' => {
                self.bump();
                Token::Comma
            }
            '.' => {
                self.bump();
                Token::Dot
            }
            '^' => {
                self.bump();
                if self.chars.peek() == Some(&'^') {
                    self.bump();
                    Token::Carets
                } else {
                    return Err(self.err("expected ^^"));
                }
            }
            '_' => {
                self.bump();
                if self.bump() != Some(':') {
                    return Err(self.err("expected _: for blank node"));
                }
                let label = self.lex_word(|ch| ch.is_ascii_alphanumeric());
                if label.is_empty() {
                    return Err(self.err("empty blank node label"));
                }
                Token::Blank(label)
            }
            c if c.is_ascii_alphanumeric() => {
                let word = self.lex_word(pname_char);
                // prefixed name or the `a` keyword
                if let Some(colon) = word.find(':') {
                    let (prefix, local) = word.split_at(colon);
                    Token::Pname(prefix.to_owned(), local[1..].to_owned())
                } else if word == "a" {
                    Token::A
                } else {
                    return Err(RdfError::syntax(
                        line,
                        column,
                        format!("unexpected token: {word}"),
                    ));
                }
            }
            other => return Err(self.err(format!("unexpected character: {other:?}"))),
        };
        Ok((token, line, column))
    }

    fn lex_word(&mut self, keep: impl Fn(char) -> bool) -> String {
        let mut word = String::new();
        while let Some(&c) = self.chars.peek() {
            if keep(c) {
                word.push(c);
                self.bump();
            } else {
                break;
            }
        }
        // A trailing '.' is the statement terminator, not part of the name.
        while word.ends_with('.') {
            word.pop();
            self.pushback_dot += 1;
        }
        word
    }

    fn lex_string(&mut self) -> Result<String, RdfError> {
        self.bump(); // opening quote
        let long = if self.chars.peek() == Some(&'"') {
            self.bump();
            if self.chars.peek() == Some(&'"') {
                self.bump();
                true
            } else {
                return Ok(String::new()); // empty short string
            }
        } else {
            false
        };
        let mut value = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(self.err("unterminated string literal"));
            };
            match c {
                '"' if !long => break,
                '"' if long => {
                    let mut quotes = 1;
                    while self.chars.peek() == Some(&'"') {
                        self.bump();
                        quotes += 1;
                    }
                    if quotes >= 3 {
                        // last three quotes close; any before them are content
                        for _ in 0..quotes - 3 {
                            value.push('"');
                        }
                        break;
                    }
                    for _ in 0..quotes {
                        value.push('"');
                    }
                }
                '\\' => match self.bump() {
                    Some('"') => value.push('"'),
                    Some('\\') => value.push('\\'),
                    Some('n') => value.push('\n'),
                    Some('r') => value.push('\r'),
                    Some('t') => value.push('\t'),
                    other => return Err(self.err(format!("bad escape: \\{other:?}"))),
                },
                '\n' if !long => return Err(self.err("newline in short string literal")),
                other => value.push(other),
            }
        }
        Ok(value)
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    lookahead: Option<(Token, usize, usize)>,
    prefixes: BTreeMap<String, String>,
    quads: Vec<Quad>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            lexer: Lexer::new(text),
            lookahead: None,
            prefixes: BTreeMap::new(),
            quads: Vec::new(),
        }
    }

    fn next(&mut self) -> Result<(Token, usize, usize), RdfError> {
        if let Some(t) = self.lookahead.take() {
            return Ok(t);
        }
        if self.lexer.pushback_dot > 0 {
            self.lexer.pushback_dot -= 1;
            return Ok((Token::Dot, self.lexer.line, self.lexer.column));
        }
        self.lexer.next_token()
    }

    fn peek(&mut self) -> Result<&Token, RdfError> {
        if self.lookahead.is_none() {
            let t = self.next()?;
            self.lookahead = Some(t);
        }
        Ok(&self.lookahead.as_ref().unwrap().0)
    }

    fn expect(&mut self, expected: Token, what: &str) -> Result<(), RdfError> {
        let (token, line, column) = self.next()?;
        if token == expected {
            Ok(())
        } else {
            Err(RdfError::syntax(
                line,
                column,
                format!("expected {what}, found {token:?}"),
            ))
        }
    }

    fn parse(mut self) -> Result<Dataset, RdfError> {
        loop {
            match self.peek()? {
                Token::Eof => break,
                Token::PrefixKeyword => self.parse_prefix_decl()?,
                _ => self.parse_graph_block()?,
            }
        }
        let mut dataset: Dataset = self.quads.into_iter().collect();
        for (prefix, ns) in self.prefixes {
            dataset.bind_prefix(prefix, ns);
        }
        Ok(dataset)
    }

    fn parse_prefix_decl(&mut self) -> Result<(), RdfError> {
        self.next()?; // @prefix
        let (token, line, column) = self.next()?;
        let prefix = match token {
            Token::Pname(prefix, local) if local.is_empty() => prefix,
            other => {
                return Err(RdfError::syntax(
                    line,
                    column,
                    format!("expected prefix name, found {other:?}"),
                ))
            }
        };
        let (token, line, column) = self.next()?;
        let ns = match token {
            Token::Iri(iri) => iri,
            other => {
                return Err(RdfError::syntax(
                    line,
                    column,
                    format!("expected namespace IRI, found {other:?}"),
                ))
            }
        };
        self.expect(Token::Dot, "'.'")?;
        self.prefixes.insert(prefix, ns);
        Ok(())
    }

    fn parse_graph_block(&mut self) -> Result<(), RdfError> {
        let (token, line, column) = self.next()?;
        let graph = self.token_to_iri_term(token, line, column)?;
        self.expect(Token::OpenBrace, "'{'")?;
        loop {
            match self.peek()? {
                Token::CloseBrace => {
                    self.next()?;
                    break;
                }
                Token::Eof => {
                    let (_, line, column) = self.next()?;
                    return Err(RdfError::syntax(line, column, "unclosed graph block"));
                }
                _ => self.parse_triples(&graph)?,
            }
        }
        Ok(())
    }

    fn parse_triples(&mut self, graph: &Term) -> Result<(), RdfError> {
        let (token, line, column) = self.next()?;
        let subject = match token {
            Token::Blank(label) => Term::blank(label),
            other => self.token_to_iri_term(other, line, column)?,
        };
        loop {
            let (token, line, column) = self.next()?;
            let predicate = match token {
                Token::A => Term::iri(vocab::rdf::TYPE),
                other => self.token_to_iri_term(other, line, column)?,
            };
            loop {
                let object = self.parse_object()?;
                let quad = Quad::new(subject.clone(), predicate.clone(), object, graph.clone())
                    .map_err(|e| RdfError::syntax(line, column, e.to_string()))?;
                self.quads.push(quad);
                if matches!(self.peek()?, Token::Comma) {
                    self.next()?;
                } else {
                    break;
                }
            }
            match self.next()? {
                (Token::Semicolon, ..) => {
                    // allow a dangling ';' before '.'
                    if matches!(self.peek()?, Token::Dot) {
                        self.next()?;
                        return Ok(());
                    }
                }
                (Token::Dot, ..) => return Ok(()),
                (other, line, column) => {
                    return Err(RdfError::syntax(
                        line,
                        column,
                        format!("expected ';' or '.', found {other:?}"),
                    ))
                }
            }
        }
    }

    fn parse_object(&mut self) -> Result<Term, RdfError> {
        let (token, line, column) = self.next()?;
        match token {
            Token::Blank(label) => Ok(Term::blank(label)),
            Token::Str(value) => match self.peek()? {
                Token::LangTag(_) => {
                    let (Token::LangTag(tag), ..) = self.next()? else {
                        unreachable!()
                    };
                    Ok(Term::lang_string(value, tag))
                }
                Token::Carets => {
                    self.next()?;
                    let (token, line, column) = self.next()?;
                    let datatype = self.token_to_iri_term(token, line, column)?;
                    let Term::Iri(datatype) = datatype else {
                        unreachable!()
                    };
                    if datatype == vocab::rdf::LANG_STRING {
                        return Err(RdfError::syntax(
                            line,
                            column,
                            "rdf:langString literal requires a language tag",
                        ));
                    }
                    Ok(Term::typed(value, datatype))
                }
                _ => Ok(Term::string(value)),
            },
            other => self.token_to_iri_term(other, line, column),
        }
    }

    fn token_to_iri_term(
        &self,
        token: Token,
        line: usize,
        column: usize,
    ) -> Result<Term, RdfError> {
        match token {
            Token::Iri(iri) => Ok(Term::iri(iri)),
            Token::Pname(prefix, local) => match self.prefixes.get(&prefix) {
                Some(ns) => Ok(Term::iri(format!("{ns}{local}"))),
                None => Err(RdfError::syntax(
                    line,
                    column,
                    format!("undeclared prefix: {prefix}:"),
                )),
            },
            other => Err(RdfError::syntax(
                line,
                column,
                format!("expected IRI or prefixed name, found {other:?}"),
            )),
        }
    }
}

fn pname_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == ':' || c == '_' || c == '-' || c == '.'
}
