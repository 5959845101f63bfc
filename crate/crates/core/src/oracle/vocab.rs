//! The atomic names a query touches.

use std::collections::BTreeSet;

use crate::graph::{Atom, DescriptionGraph};
use crate::kb::KnowledgeBase;
use crate::syntax::{Description, HostValue, Individual, Name, Realm};

/// Names and literals collected from descriptions, graphs and knowledge
/// bases, plus the largest number restriction seen.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub concepts: BTreeSet<Name>,
    pub roles: BTreeSet<Name>,
    pub attributes: BTreeSet<Name>,
    pub individuals: BTreeSet<Name>,
    pub values: BTreeSet<HostValue>,
    pub tests: BTreeSet<(Name, Realm)>,
    pub max_number: u32,
}

impl Vocabulary {
    pub fn new() -> Self {
        Vocabulary::default()
    }

    /// Declared roles, attributes and individuals of `kb`, plus every
    /// name its definitions mention.
    pub fn with_kb(mut self, kb: &KnowledgeBase) -> Self {
        self.roles.extend(kb.roles().cloned());
        self.attributes.extend(kb.attributes().cloned());
        self.individuals.extend(kb.individuals().cloned());
        for (_, d) in kb.named() {
            self.add_description(d);
        }
        for (_, d) in kb.primitives() {
            self.add_description(d);
        }
        for group in kb.disjoint_groups() {
            for a in group {
                self.add_atom(a);
            }
        }
        self
    }

    pub fn with_description(mut self, d: &Description) -> Self {
        self.add_description(d);
        self
    }

    pub fn with_graph(mut self, g: &DescriptionGraph) -> Self {
        self.add_graph(g);
        self
    }

    fn individual(&mut self, l: &Individual) {
        match l {
            Individual::Classic(n) => {
                self.individuals.insert(n.clone());
            }
            Individual::Host(v) => {
                self.values.insert(v.clone());
            }
        }
    }

    pub fn add_description(&mut self, d: &Description) {
        d.visit(&mut |d| match d {
            Description::Concept(c) => {
                self.concepts.insert(c.clone());
            }
            Description::Test(f, r) => {
                self.tests.insert((f.clone(), *r));
            }
            Description::AllRole(r, _) => {
                self.roles.insert(r.clone());
            }
            Description::AllAttr(a, _) => {
                self.attributes.insert(a.clone());
            }
            Description::AtLeast(n, r) | Description::AtMost(n, r) => {
                self.roles.insert(r.clone());
                self.max_number = self.max_number.max(*n);
            }
            Description::SameAs(a, b) => self.attributes.extend(a.iter().chain(b).cloned()),
            Description::FillsRole(r, l) => {
                self.roles.insert(r.clone());
                self.individual(l);
            }
            Description::FillsAttr(a, l) => {
                self.attributes.insert(a.clone());
                self.individual(l);
            }
            Description::OneOf(ls) => ls.iter().for_each(|l| self.individual(l)),
            _ => {}
        });
    }

    fn add_atom(&mut self, a: &Atom) {
        match a {
            Atom::Concept(c) => {
                self.concepts.insert(c.clone());
            }
            Atom::Test(f, r) => {
                self.tests.insert((f.clone(), *r));
            }
            _ => {}
        }
    }

    pub fn add_graph(&mut self, g: &DescriptionGraph) {
        for (_, n) in g.nodes() {
            n.atoms.iter().for_each(|a| self.add_atom(a));
            n.dom.finite().into_iter().flatten().for_each(|l| self.individual(l));
            for e in &n.r_edges {
                self.roles.insert(e.role.clone());
                self.max_number = self.max_number.max(e.min);
                if let Some(m) = e.max.finite() {
                    self.max_number = self.max_number.max(m);
                }
                e.fillers.iter().for_each(|l| self.individual(l));
                self.add_graph(&e.restriction);
            }
        }
        for e in g.a_edges() {
            self.attributes.insert(e.attr.clone());
            e.fillers.iter().for_each(|l| self.individual(l));
        }
    }

    /// Union of two vocabularies.
    pub fn union(mut self, other: &Vocabulary) -> Self {
        self.concepts.extend(other.concepts.iter().cloned());
        self.roles.extend(other.roles.iter().cloned());
        self.attributes.extend(other.attributes.iter().cloned());
        self.individuals.extend(other.individuals.iter().cloned());
        self.values.extend(other.values.iter().cloned());
        self.tests.extend(other.tests.iter().cloned());
        self.max_number = self.max_number.max(other.max_number);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_description, parse_kb};

    #[test]
    fn collects_names_and_numbers() {
        let kb = parse_kb("attribute f").unwrap();
        let d = parse_description("and(A, at-least(3, r), all(f, one-of(1, 2)), fills(s, P))", &kb).unwrap();
        let v = Vocabulary::new().with_description(&d);
        assert_eq!(v.max_number, 3);
        assert!(v.attributes.contains("f"));
        assert!(v.roles.contains("s"));
        assert_eq!(v.values.len(), 2);
        assert!(v.individuals.contains("P"));
        let g = kb.canonical(&d).unwrap();
        let w = Vocabulary::new().with_graph(&g);
        assert_eq!(w.concepts, v.concepts);
        assert_eq!(w.individuals, v.individuals);
    }
}
