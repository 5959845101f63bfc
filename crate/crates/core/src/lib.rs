//! The CLASSIC description logic: descriptions, description graphs,
//! canonical forms and structural subsumption, with an executable
//! finite-model semantics to check them against.
//!
//! The usual pipeline is [`syntax::parse_kb`] or [`syntax::parse_description`],
//! then [`kb::KnowledgeBase::canonical`] for the subsumee and
//! [`subsume::subsumes_graph`] for the test. [`subsume::subsumes`] does all
//! of it at once.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod fuzz;
pub mod graph;
pub mod kb;
pub mod lattice;
pub mod normalize;
pub mod oracle;
pub mod reduction;
pub mod subsume;
pub mod syntax;

pub use error::{Error, ParseError, Result};
pub use graph::DescriptionGraph;
pub use kb::KnowledgeBase;
pub use syntax::{Description, Individual, Name};
