//! Recursive-descent parser for descriptions.
//!
//! Parsing happens in two phases. The token stream is first read into a
//! generic term tree (identifiers, literals, calls and tuples). The tree is
//! then elaborated into a [`Description`] against a knowledge base, which
//! decides whether a name is a role, an attribute, a named concept or a host
//! type. Names the knowledge base does not declare get their kind from how
//! they are used: names in `same-as` chains are attributes, names in number
//! restrictions are roles, and anything else defaults to a role.

use std::collections::BTreeMap;

use super::ast::{Description, HostValue, Individual, Name, Realm};
use super::lexer::{tokenize, Origin, Tok, Token};
use crate::error::ParseError;
use crate::kb::KnowledgeBase;

#[derive(Clone, Debug)]
pub(crate) enum Term {
    Ident { name: String, at: usize },
    Int { value: i64, at: usize },
    Decimal { text: String, at: usize },
    Str { value: String, at: usize },
    Call { head: String, at: usize, args: Vec<Term> },
    Tuple { items: Vec<Term>, at: usize },
}

impl Term {
    fn at(&self) -> usize {
        match self {
            Term::Ident { at, .. }
            | Term::Int { at, .. }
            | Term::Decimal { at, .. }
            | Term::Str { at, .. }
            | Term::Call { at, .. }
            | Term::Tuple { at, .. } => *at,
        }
    }
}

/// Kind of a property name: role or attribute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropertyKind {
    Role,
    Attribute,
}

const CONSTRUCTORS: [&str; 9] = [
    "and",
    "all",
    "at-least",
    "at-most",
    "same-as",
    "fills",
    "one-of",
    "primitive",
    "test",
];

struct TermParser<'a> {
    src: &'a str,
    origin: Origin,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a> TermParser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        self.origin
            .error(self.src, t.offset, format!("unexpected {}", t.tok.describe()), expected)
    }

    fn expect(&mut self, tok: Tok, label: &str) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.fail(&[label]))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let start = self.pos;
        let t = self.bump();
        match t.tok {
            Tok::Ident(name) => {
                if self.peek().tok == Tok::LParen {
                    self.bump();
                    let args = self.list()?;
                    Ok(Term::Call {
                        head: name,
                        at: t.offset,
                        args,
                    })
                } else {
                    Ok(Term::Ident { name, at: t.offset })
                }
            }
            Tok::Int(value) => Ok(Term::Int { value, at: t.offset }),
            Tok::Decimal(text) => Ok(Term::Decimal { text, at: t.offset }),
            Tok::Str(value) => Ok(Term::Str { value, at: t.offset }),
            Tok::LParen => {
                let items = self.list()?;
                Ok(Term::Tuple { items, at: t.offset })
            }
            _ => {
                self.pos = start;
                Err(self.fail(&["identifier", "literal", "`(`"]))
            }
        }
    }

    /// Comma-separated terms after an opening parenthesis, through `)`.
    fn list(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut items = vec![self.term()?];
        loop {
            match self.peek().tok {
                Tok::Comma => {
                    self.bump();
                    items.push(self.term()?);
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(items);
                }
                _ => return Err(self.fail(&["`,`", "`)`"])),
            }
        }
    }
}

pub(crate) fn parse_term(src: &str, origin: Origin) -> Result<Term, ParseError> {
    let toks = tokenize(src, origin)?;
    let mut p = TermParser {
        src,
        origin,
        toks,
        pos: 0,
    };
    let t = p.term()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(t)
}

/// A term together with the text it was read from.
pub(crate) struct Source<'a> {
    pub text: &'a str,
    pub origin: Origin,
    pub term: Term,
}

impl Source<'_> {
    fn error(&self, at: usize, msg: impl Into<String>, expected: &[&str]) -> ParseError {
        self.origin.error(self.text, at, msg, expected)
    }
}

/// Usage-based kinds for property names the knowledge base does not
/// declare.
pub(crate) type Hints = BTreeMap<String, PropertyKind>;

pub(crate) fn collect_hints(kb: &KnowledgeBase, src: &Source<'_>, hints: &mut Hints) -> Result<(), ParseError> {
    fn hint(
        kb: &KnowledgeBase,
        src: &Source<'_>,
        hints: &mut Hints,
        name: &str,
        at: usize,
        kind: PropertyKind,
    ) -> Result<(), ParseError> {
        if kb.property_kind(name).is_some() {
            return Ok(());
        }
        match hints.get(name) {
            Some(k) if *k != kind => {
                Err(src.error(at, format!("`{name}` is used both as a role and as an attribute"), &[]))
            }
            _ => {
                hints.insert(name.to_string(), kind);
                Ok(())
            }
        }
    }
    fn walk(kb: &KnowledgeBase, src: &Source<'_>, t: &Term, hints: &mut Hints) -> Result<(), ParseError> {
        match t {
            Term::Call { head, args, .. } => {
                match head.as_str() {
                    "same-as" => {
                        for chain in args {
                            if let Term::Tuple { items, .. } = chain {
                                for it in items {
                                    if let Term::Ident { name, at } = it {
                                        hint(kb, src, hints, name, *at, PropertyKind::Attribute)?;
                                    }
                                }
                            }
                        }
                    }
                    "at-least" | "at-most" => {
                        if let Some(Term::Ident { name, at }) = args.get(1) {
                            hint(kb, src, hints, name, *at, PropertyKind::Role)?;
                        }
                    }
                    _ => {}
                }
                args.iter().try_for_each(|a| walk(kb, src, a, hints))
            }
            Term::Tuple { items, .. } => items.iter().try_for_each(|a| walk(kb, src, a, hints)),
            _ => Ok(()),
        }
    }
    walk(kb, src, &src.term, hints)
}

pub(crate) struct Elaborator<'a> {
    pub kb: &'a KnowledgeBase,
    pub hints: &'a Hints,
}

impl Elaborator<'_> {
    fn property_kind(&self, name: &str) -> PropertyKind {
        self.kb
            .property_kind(name)
            .or_else(|| self.hints.get(name).copied())
            .unwrap_or(PropertyKind::Role)
    }

    pub(crate) fn description(&self, src: &Source<'_>, t: &Term) -> Result<Description, ParseError> {
        match t {
            Term::Ident { name, at } => self.concept_name(src, name, *at),
            Term::Call { head, at, args } => self.call(src, head, *at, args),
            other => Err(src.error(other.at(), "expected a description", &["concept name", "constructor"])),
        }
    }

    fn concept_name(&self, src: &Source<'_>, name: &str, at: usize) -> Result<Description, ParseError> {
        Ok(match name {
            "thing" => Description::Thing,
            "classic-thing" => Description::ClassicThing,
            "host-thing" => Description::HostThing,
            "nothing" => Description::Nothing,
            n if CONSTRUCTORS.contains(&n) => {
                return Err(src.error(at, format!("constructor `{n}` needs arguments"), &["`(`"]))
            }
            n if self.kb.is_named(n) => Description::Named(Name::new(n)),
            n if self.kb.lattice().contains(n) => Description::HostConcept(Name::new(n)),
            n => {
                if let Some(kind) = self.kb.property_kind(n) {
                    let what = match kind {
                        PropertyKind::Role => "role",
                        PropertyKind::Attribute => "attribute",
                    };
                    return Err(src.error(at, format!("`{n}` is a {what}, not a concept"), &[]));
                }
                if self.kb.is_individual(n) {
                    return Err(src.error(at, format!("`{n}` is an individual, not a concept"), &[]));
                }
                Description::Concept(Name::new(n))
            }
        })
    }

    fn arity(&self, src: &Source<'_>, head: &str, at: usize, args: &[Term], n: usize) -> Result<(), ParseError> {
        if args.len() == n {
            Ok(())
        } else {
            Err(src.error(at, format!("`{head}` takes {n} arguments, found {}", args.len()), &[]))
        }
    }

    fn ident<'t>(&self, src: &Source<'_>, t: &'t Term, what: &str) -> Result<(&'t str, usize), ParseError> {
        match t {
            Term::Ident { name, at } => Ok((name, *at)),
            other => Err(src.error(other.at(), format!("expected {what}"), &[what])),
        }
    }

    fn role(&self, src: &Source<'_>, t: &Term) -> Result<Name, ParseError> {
        let (name, at) = self.ident(src, t, "role name")?;
        match self.property_kind(name) {
            PropertyKind::Role => Ok(Name::new(name)),
            PropertyKind::Attribute => Err(src.error(at, format!("`{name}` is an attribute, expected a role"), &[])),
        }
    }

    fn attribute(&self, src: &Source<'_>, t: &Term) -> Result<Name, ParseError> {
        let (name, at) = self.ident(src, t, "attribute name")?;
        match self.property_kind(name) {
            PropertyKind::Attribute => Ok(Name::new(name)),
            PropertyKind::Role => Err(src.error(
                at,
                format!("`{name}` is a role; same-as chains may only contain attributes"),
                &[],
            )),
        }
    }

    fn count(&self, src: &Source<'_>, t: &Term, min: i64) -> Result<u32, ParseError> {
        match t {
            Term::Int { value, at } => {
                if *value < min || *value > u32::MAX as i64 {
                    Err(src.error(*at, format!("number restriction bound must be at least {min}"), &[]))
                } else {
                    Ok(*value as u32)
                }
            }
            other => Err(src.error(other.at(), "expected an integer", &["integer"])),
        }
    }

    pub(crate) fn individual(&self, src: &Source<'_>, t: &Term) -> Result<Individual, ParseError> {
        Ok(match t {
            Term::Ident { name, at } => {
                if self.kb.property_kind(name).is_some() || self.kb.is_named(name) {
                    return Err(src.error(*at, format!("`{name}` is not an individual"), &[]));
                }
                Individual::Classic(Name::new(name))
            }
            Term::Int { value, .. } => Individual::Host(HostValue::Integer(*value)),
            Term::Decimal { text, .. } => Individual::Host(HostValue::Decimal(Name::new(text))),
            Term::Str { value, .. } => Individual::Host(HostValue::Str(Name::new(value))),
            other => return Err(src.error(other.at(), "expected an individual", &["identifier", "literal"])),
        })
    }

    fn chain(&self, src: &Source<'_>, t: &Term) -> Result<Vec<Name>, ParseError> {
        match t {
            Term::Tuple { items, .. } => items.iter().map(|i| self.attribute(src, i)).collect(),
            other => Err(src.error(other.at(), "expected a parenthesised attribute chain", &["`(`"])),
        }
    }

    fn call(&self, src: &Source<'_>, head: &str, at: usize, args: &[Term]) -> Result<Description, ParseError> {
        match head {
            "and" => {
                if args.len() < 2 {
                    return Err(src.error(at, "`and` needs at least two conjuncts", &[]));
                }
                let parts = args
                    .iter()
                    .map(|a| self.description(src, a))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Description::And(parts))
            }
            "all" => {
                self.arity(src, head, at, args, 2)?;
                let (p, _) = self.ident(src, &args[0], "role or attribute name")?;
                let body = Box::new(self.description(src, &args[1])?);
                Ok(match self.property_kind(p) {
                    PropertyKind::Role => Description::AllRole(Name::new(p), body),
                    PropertyKind::Attribute => Description::AllAttr(Name::new(p), body),
                })
            }
            "at-least" | "at-most" => {
                self.arity(src, head, at, args, 2)?;
                let role = self.role(src, &args[1])?;
                if head == "at-least" {
                    Ok(Description::AtLeast(self.count(src, &args[0], 1)?, role))
                } else {
                    Ok(Description::AtMost(self.count(src, &args[0], 0)?, role))
                }
            }
            "same-as" => {
                self.arity(src, head, at, args, 2)?;
                Ok(Description::SameAs(
                    self.chain(src, &args[0])?,
                    self.chain(src, &args[1])?,
                ))
            }
            "fills" => {
                self.arity(src, head, at, args, 2)?;
                let (p, _) = self.ident(src, &args[0], "role or attribute name")?;
                let l = self.individual(src, &args[1])?;
                Ok(match self.property_kind(p) {
                    PropertyKind::Role => Description::FillsRole(Name::new(p), l),
                    PropertyKind::Attribute => Description::FillsAttr(Name::new(p), l),
                })
            }
            "one-of" => {
                let ls = args
                    .iter()
                    .map(|a| self.individual(src, a))
                    .collect::<Result<Vec<_>, _>>()?;
                let host = ls[0].is_host();
                if let Some(bad) = args.iter().zip(&ls).find(|(_, l)| l.is_host() != host) {
                    return Err(src.error(bad.0.at(), "one-of mixes host values with classic individuals", &[]));
                }
                Ok(Description::OneOf(ls))
            }
            "primitive" => {
                self.arity(src, head, at, args, 2)?;
                let body = self.description(src, &args[0])?;
                let (tag, _) = self.ident(src, &args[1], "primitive tag")?;
                Ok(Description::Primitive(Box::new(body), Name::new(tag)))
            }
            "test" => {
                self.arity(src, head, at, args, 2)?;
                let (fun, _) = self.ident(src, &args[0], "function name")?;
                let realm = match self.ident(src, &args[1], "`classic` or `host`")? {
                    ("classic", _) => Realm::Classic,
                    ("host", _) => Realm::Host,
                    (_, at) => return Err(src.error(at, "unknown realm", &["`classic`", "`host`"])),
                };
                Ok(Description::Test(Name::new(fun), realm))
            }
            other => Err(src.error(at, format!("unknown constructor `{other}`"), &CONSTRUCTORS)),
        }
    }
}

/// Parses one description against `kb`.
pub fn parse_description(text: &str, kb: &KnowledgeBase) -> Result<Description, ParseError> {
    let mut v = parse_descriptions(&[text], kb)?;
    Ok(v.pop().unwrap())
}

/// Parses several descriptions that share one vocabulary: an undeclared
/// name gets a single kind across all of them.
pub fn parse_descriptions(texts: &[&str], kb: &KnowledgeBase) -> Result<Vec<Description>, ParseError> {
    let sources = texts
        .iter()
        .map(|t| {
            Ok(Source {
                text: t,
                origin: Origin::default(),
                term: parse_term(t, Origin::default())?,
            })
        })
        .collect::<Result<Vec<_>, ParseError>>()?;
    let mut hints = Hints::new();
    for s in &sources {
        collect_hints(kb, s, &mut hints)?;
    }
    let el = Elaborator { kb, hints: &hints };
    sources.iter().map(|s| el.description(s, &s.term)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_kb;

    fn kb(text: &str) -> KnowledgeBase {
        parse_kb(text).unwrap()
    }

    #[test]
    fn maps_constructors_directly() {
        let d = parse_description("and(GAME, at-least(4, participants))", &KnowledgeBase::default()).unwrap();
        assert_eq!(
            d,
            Description::And(vec![
                Description::concept("GAME"),
                Description::at_least(4, "participants")
            ])
        );
    }

    #[test]
    fn figure_one_description() {
        let d = parse_description(
            "and(GAME, all(participants, PERSON), same-as((coach),(captain,father)))",
            &KnowledgeBase::default(),
        )
        .unwrap();
        assert_eq!(
            d,
            Description::And(vec![
                Description::concept("GAME"),
                Description::all_role("participants", Description::concept("PERSON")),
                Description::same_as(&["coach"], &["captain", "father"]),
            ])
        );
    }

    #[test]
    fn role_in_same_as_is_rejected() {
        let k = kb("role participants\nattribute friend");
        let e = parse_description("same-as((friend),(participants))", &k).unwrap_err();
        assert!(e.message.contains("participants"), "{e}");
        assert_eq!((e.line, e.column), (1, 19));
    }

    #[test]
    fn usage_decides_undeclared_kinds() {
        let k = KnowledgeBase::default();
        let ds = parse_descriptions(
            &["all(friend, all(friend, TALL))", "same-as((friend),(friend,friend))"],
            &k,
        )
        .unwrap();
        assert!(matches!(ds[0], Description::AllAttr(..)));
        let e = parse_description("and(at-least(1, f), same-as((f),(g)))", &k).unwrap_err();
        assert!(e.message.contains("both"), "{e}");
    }

    #[test]
    fn host_types_and_literals() {
        let d = parse_description("and(INTEGER, one-of(1, 2))", &KnowledgeBase::default()).unwrap();
        assert_eq!(
            d,
            Description::And(vec![
                Description::HostConcept(Name::new("INTEGER")),
                Description::OneOf(vec![Individual::int(1), Individual::int(2)]),
            ])
        );
    }

    #[test]
    fn heterogeneous_one_of() {
        let e = parse_description("one-of(Pat, 3)", &KnowledgeBase::default()).unwrap_err();
        assert!(e.message.contains("mixes"));
        assert_eq!(e.column, 13);
    }

    #[test]
    fn syntax_errors_carry_expectations() {
        let e = parse_description("and(A B)", &KnowledgeBase::default()).unwrap_err();
        assert_eq!(e.column, 7);
        assert!(e.expected.contains(&"`,`".to_string()));
        assert!(parse_description("and(A)", &KnowledgeBase::default()).is_err());
        assert!(parse_description("at-least(0, r)", &KnowledgeBase::default()).is_err());
        assert!(parse_description("at-most(0, r)", &KnowledgeBase::default()).is_ok());
        assert!(parse_description("frob(A, B)", &KnowledgeBase::default()).is_err());
        assert!(parse_description("", &KnowledgeBase::default()).is_err());
        assert!(parse_description("A)", &KnowledgeBase::default()).is_err());
    }

    #[test]
    fn names_of_other_kinds_are_not_concepts() {
        let k = kb("role r\nindividual Pat");
        assert!(parse_description("r", &k).is_err());
        assert!(parse_description("Pat", &k).is_err());
        assert!(parse_description("one-of(Pat)", &k).is_ok());
    }

    #[test]
    fn named_references_resolve() {
        let k = kb("concept E := at-least(1, r)");
        assert_eq!(parse_description("E", &k).unwrap(), Description::Named(Name::new("E")));
    }

    #[test]
    fn tests_and_primitives() {
        let k = KnowledgeBase::default();
        assert_eq!(
            parse_description("test(prime, host)", &k).unwrap(),
            Description::Test(Name::new("prime"), Realm::Host)
        );
        assert!(parse_description("test(prime, both)", &k).is_err());
        assert!(matches!(
            parse_description("primitive(PERSON, person)", &k).unwrap(),
            Description::Primitive(..)
        ));
    }
}
