//! Line-oriented knowledge-base files.
//!
//! ```text
//! role NAME
//! attribute NAME
//! individual NAME
//! host-type NAME [subtype-of NAME]
//! concept NAME := DESC
//! disjoint NAME NAME ...
//! ```
//!
//! `#` starts a comment that runs to the end of the line. A concept
//! definition may continue over several lines while its parentheses are
//! unbalanced. Declarations may appear in any order.

use super::ast::Name;
use super::lexer::{is_ident_char, is_ident_start, Origin};
use super::parser::{collect_hints, parse_term, Elaborator, Hints, Source};
use crate::error::{Error, ParseError};
use crate::kb::{KbBuilder, KnowledgeBase};

/// One logical statement with the position of its first character.
struct Statement {
    text: String,
    line: usize,
}

fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' if in_str => escaped = true,
            '"' => in_str = !in_str,
            '#' if !in_str => return &line[..i],
            _ => {}
        }
    }
    line
}

fn paren_depth(text: &str) -> i64 {
    let mut depth = 0;
    let mut in_str = false;
    let mut escaped = false;
    for c in text.chars() {
        match c {
            _ if escaped => escaped = false,
            '\\' if in_str => escaped = true,
            '"' => in_str = !in_str,
            '(' if !in_str => depth += 1,
            ')' if !in_str => depth -= 1,
            _ => {}
        }
    }
    depth
}

fn statements(text: &str) -> Vec<Statement> {
    let mut out: Vec<Statement> = Vec::new();
    let mut open = false;
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if open {
            let last = out.last_mut().unwrap();
            last.text.push('\n');
            last.text.push_str(line);
            open = paren_depth(&last.text) > 0;
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        out.push(Statement {
            text: line.to_string(),
            line: i + 1,
        });
        open = line.trim_start().starts_with("concept") && paren_depth(line) > 0;
    }
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse(ParseError {
        line,
        column,
        message: message.into(),
        expected: Vec::new(),
    })
}

fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if is_ident_start(c)) && cs.all(is_ident_char)
}

/// Words of a statement together with their 1-based columns.
fn words(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out.into_iter()
        .map(|(s, w)| (text[..s].chars().count() + 1, w))
        .collect()
}

fn name_at(st: &Statement, word: Option<&(usize, &str)>, what: &str) -> Result<Name, Error> {
    match word {
        Some((_, w)) if is_identifier(w) => Ok(Name::new(w)),
        Some((col, w)) => Err(err(st.line, *col, format!("`{w}` is not a valid {what}"))),
        None => Err(err(st.line, st.text.chars().count() + 1, format!("missing {what}"))),
    }
}

struct PendingConcept {
    name: Name,
    text: String,
    origin: Origin,
}

/// Parses a knowledge-base file.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase, Error> {
    let mut b = KbBuilder::default();
    let mut concepts = Vec::new();
    let mut host_types = Vec::new();
    let mut disjoint = Vec::new();
    for st in statements(text) {
        let ws = words(&st.text);
        let (kw_col, kw) = ws[0];
        let arity = |n: usize| -> Result<(), Error> {
            match ws.get(n) {
                Some((col, w)) => Err(err(st.line, *col, format!("unexpected `{w}`"))),
                None => Ok(()),
            }
        };
        match kw {
            "role" => {
                b.declare_role(name_at(&st, ws.get(1), "role name")?)?;
                arity(2)?;
            }
            "attribute" => {
                b.declare_attribute(name_at(&st, ws.get(1), "attribute name")?)?;
                arity(2)?;
            }
            "individual" => {
                b.declare_individual(name_at(&st, ws.get(1), "individual name")?)?;
                arity(2)?;
            }
            "host-type" => {
                let name = name_at(&st, ws.get(1), "host type name")?;
                let parent = match ws.get(2) {
                    None => None,
                    Some((_, "subtype-of")) => {
                        let p = name_at(&st, ws.get(3), "host type name")?;
                        arity(4)?;
                        Some(p)
                    }
                    Some((col, w)) => {
                        return Err(Error::Parse(ParseError {
                            line: st.line,
                            column: *col,
                            message: format!("unexpected `{w}`"),
                            expected: vec!["`subtype-of`".into(), "end of line".into()],
                        }))
                    }
                };
                host_types.push((name, parent));
            }
            "concept" => {
                let name = name_at(&st, ws.get(1), "concept name")?;
                let Some(&(def_col, ":=")) = ws.get(2) else {
                    let col = ws.get(2).map(|w| w.0).unwrap_or(st.text.len() + 1);
                    return Err(Error::Parse(ParseError {
                        line: st.line,
                        column: col,
                        message: "expected `:=` after the concept name".into(),
                        expected: vec!["`:=`".into()],
                    }));
                };
                // Byte offset just after `:=`.
                let byte = st.text.char_indices().nth(def_col - 1).map(|(i, _)| i).unwrap() + 2;
                let body = &st.text[byte..];
                let origin = Origin {
                    line: st.line,
                    column: def_col + 2,
                };
                b.declare_concept(name.clone())?;
                concepts.push(PendingConcept {
                    name,
                    text: body.to_string(),
                    origin,
                });
            }
            "disjoint" => {
                let names = ws[1..]
                    .iter()
                    .map(|w| name_at(&st, Some(w), "concept name"))
                    .collect::<Result<Vec<_>, _>>()?;
                if names.len() < 2 {
                    return Err(err(st.line, kw_col, "`disjoint` needs at least two names"));
                }
                disjoint.push(names);
            }
            other => {
                return Err(Error::Parse(ParseError {
                    line: st.line,
                    column: kw_col,
                    message: format!("unknown declaration `{other}`"),
                    expected: ["role", "attribute", "individual", "host-type", "concept", "disjoint"]
                        .iter()
                        .map(|s| format!("`{s}`"))
                        .collect(),
                }))
            }
        }
    }
    b.declare_host_types(host_types)?;

    let sources = concepts
        .iter()
        .map(|c| {
            Ok(Source {
                text: &c.text,
                origin: c.origin,
                term: parse_term(&c.text, c.origin)?,
            })
        })
        .collect::<Result<Vec<_>, ParseError>>()?;
    let mut hints = Hints::new();
    let vocabulary = b.vocabulary();
    for s in &sources {
        collect_hints(vocabulary, s, &mut hints)?;
    }
    let el = Elaborator {
        kb: vocabulary,
        hints: &hints,
    };
    let mut bodies = Vec::new();
    for (c, s) in concepts.iter().zip(&sources) {
        bodies.push((c.name.clone(), el.description(s, &s.term)?));
    }
    b.add_inferred(&hints);
    for (name, body) in bodies {
        b.define(name, body);
    }
    for group in disjoint {
        b.declare_disjoint(group);
    }
    b.finish()
}
