//! Textual syntax: the description grammar and the knowledge-base file
//! format.
//!
//! ```text
//! desc  := name | thing | classic-thing | host-thing | nothing
//!        | and(desc, desc, ...) | all(pname, desc)
//!        | at-least(int, role) | at-most(int, role)
//!        | same-as((attr, ...), (attr, ...))
//!        | fills(pname, indiv) | one-of(indiv, ...)
//!        | primitive(desc, tag) | test(fun, classic|host)
//! indiv := identifier | integer | decimal | "string"
//! ```

mod ast;
mod kb_file;
mod lexer;
mod parser;

pub use ast::{Description, HostValue, Individual, Name, Realm, RealmHint};
pub use kb_file::parse_kb;
pub use parser::{parse_description, parse_descriptions, PropertyKind};

pub(crate) use parser::Hints;
