//! Finite possible worlds under the modified semantics for individuals.
//!
//! A world is a finite domain split into a classic and a host realm, with
//! extensions for atomic concepts, roles, attributes, tests and classic
//! individuals. Host values are elements of their own, so a host value
//! denotes itself; classic individuals denote pairwise disjoint non-empty
//! sets of classic elements.
//!
//! The host realm of a real world is infinite. Here it is a finite carrier
//! of the host values that matter plus anonymous elements, each typed by a
//! most specific host type or by none.

mod bounded;
mod dump;
mod eval;
mod sample;
mod vocab;
mod witness;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::Atom;
use crate::kb::KnowledgeBase;
use crate::lattice::HostLattice;
use crate::syntax::{HostValue, Name, Realm};

pub use bounded::{bounded_model_search, SearchOutcome};
pub use dump::{dump_world, load_world, world_to_json};
pub use eval::{eval_description, eval_graph, eval_node, Evaluator};
pub use sample::{sample_world, SampleConfig};
pub use vocab::Vocabulary;
pub use witness::{construct_graphical_world, GraphicalWorld};

/// A domain element.
pub type Elem = u32;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementKind {
    Classic,
    /// The host element that a literal denotes.
    Value(HostValue),
    /// An anonymous host element, in exactly the given host type and its
    /// supertypes, or in no host type.
    Fresh(Option<Name>),
}

impl ElementKind {
    pub fn realm(&self) -> Realm {
        match self {
            ElementKind::Classic => Realm::Classic,
            _ => Realm::Host,
        }
    }
}

/// A finite interpretation.
///
/// Concepts, roles and tests that the world never mentions have empty
/// extensions. Attributes and classic individuals must be present: an
/// attribute is a total function and an individual a non-empty set, so
/// neither has a neutral default.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpretation {
    pub(crate) lattice: HostLattice,
    pub(crate) kinds: Vec<ElementKind>,
    pub(crate) values: BTreeMap<HostValue, Elem>,
    pub(crate) concepts: BTreeMap<Name, BTreeSet<Elem>>,
    pub(crate) tests: BTreeMap<(Name, Realm), BTreeSet<Elem>>,
    pub(crate) roles: BTreeMap<Name, BTreeMap<Elem, BTreeSet<Elem>>>,
    pub(crate) attrs: BTreeMap<Name, BTreeMap<Elem, Elem>>,
    pub(crate) individuals: BTreeMap<Name, BTreeSet<Elem>>,
}

impl Default for Interpretation {
    fn default() -> Self {
        Interpretation::new(HostLattice::default())
    }
}

impl Interpretation {
    pub fn new(lattice: HostLattice) -> Self {
        Interpretation {
            lattice,
            kinds: Vec::new(),
            values: BTreeMap::new(),
            concepts: BTreeMap::new(),
            tests: BTreeMap::new(),
            roles: BTreeMap::new(),
            attrs: BTreeMap::new(),
            individuals: BTreeMap::new(),
        }
    }

    pub fn lattice(&self) -> &HostLattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.kinds.len() as Elem
    }

    pub fn kind(&self, e: Elem) -> &ElementKind {
        &self.kinds[e as usize]
    }

    pub fn is_classic(&self, e: Elem) -> bool {
        self.kinds[e as usize] == ElementKind::Classic
    }

    pub fn classic_domain(&self) -> impl Iterator<Item = Elem> + '_ {
        self.elements().filter(|&e| self.is_classic(e))
    }

    pub fn host_domain(&self) -> impl Iterator<Item = Elem> + '_ {
        self.elements().filter(|&e| !self.is_classic(e))
    }

    pub fn add_classic(&mut self) -> Elem {
        self.push(ElementKind::Classic)
    }

    /// The element for a literal, added on first use.
    pub fn add_value(&mut self, v: &HostValue) -> Elem {
        if let Some(&e) = self.values.get(v) {
            return e;
        }
        let e = self.push(ElementKind::Value(v.clone()));
        self.values.insert(v.clone(), e);
        e
    }

    /// A new anonymous host element. `ty` must be a host type of the
    /// world's lattice.
    pub fn add_fresh(&mut self, ty: Option<Name>) -> Elem {
        if let Some(t) = &ty {
            assert!(self.lattice.contains(t), "unknown host type {t}");
        }
        self.push(ElementKind::Fresh(ty))
    }

    fn push(&mut self, k: ElementKind) -> Elem {
        self.kinds.push(k);
        (self.kinds.len() - 1) as Elem
    }

    pub fn value(&self, v: &HostValue) -> Option<Elem> {
        self.values.get(v).copied()
    }

    pub fn add_concept(&mut self, c: &Name, e: Elem) {
        self.concepts.entry(c.clone()).or_default().insert(e);
    }

    pub fn add_test(&mut self, f: &Name, realm: Realm, e: Elem) {
        self.tests.entry((f.clone(), realm)).or_default().insert(e);
    }

    pub fn add_role(&mut self, r: &Name, from: Elem, to: Elem) {
        self.roles
            .entry(r.clone())
            .or_default()
            .entry(from)
            .or_default()
            .insert(to);
    }

    /// Declares a role with no pairs yet.
    pub fn declare_role(&mut self, r: &Name) {
        self.roles.entry(r.clone()).or_default();
    }

    /// Declares an attribute; its table is filled by [`Self::set_attr`] and
    /// [`Self::complete`].
    pub fn declare_attr(&mut self, a: &Name) {
        self.attrs.entry(a.clone()).or_default();
    }

    pub fn set_attr(&mut self, a: &Name, from: Elem, to: Elem) {
        self.attrs.entry(a.clone()).or_default().insert(from, to);
    }

    pub fn attr(&self, a: &str, from: Elem) -> Option<Elem> {
        self.attrs.get(a).and_then(|t| t.get(&from)).copied()
    }

    pub fn has_attr(&self, a: &str) -> bool {
        self.attrs.contains_key(a)
    }

    pub fn declare_individual(&mut self, l: &Name) {
        self.individuals.entry(l.clone()).or_default();
    }

    pub fn add_to_individual(&mut self, l: &Name, e: Elem) {
        self.individuals.entry(l.clone()).or_default().insert(e);
    }

    pub fn concept_ext(&self, c: &str) -> Option<&BTreeSet<Elem>> {
        self.concepts.get(c)
    }

    pub fn individual_ext(&self, l: &str) -> Option<&BTreeSet<Elem>> {
        self.individuals.get(l)
    }

    /// Fillers of `e` for role `r`.
    pub fn fillers(&self, r: &str, e: Elem) -> impl Iterator<Item = Elem> + '_ {
        self.roles.get(r).and_then(|m| m.get(&e)).into_iter().flatten().copied()
    }

    /// Whether host element `e` lies in host type `ty`.
    pub fn has_host_type(&self, e: Elem, ty: &str) -> bool {
        match self.kind(e) {
            ElementKind::Classic => false,
            ElementKind::Value(v) => self.lattice.value_has_type(v, ty),
            ElementKind::Fresh(t) => t.as_ref().is_some_and(|t| self.lattice.is_subtype(t, ty)),
        }
    }

    /// Makes the world well formed: every declared individual gets a
    /// dedicated classic element if its extension is empty, and every
    /// attribute gets a dedicated untyped host sink for each classic
    /// element it does not map yet. New dummy elements are in no concept
    /// and have no role fillers.
    pub fn complete(&mut self) {
        let empty: Vec<Name> = self
            .individuals
            .iter()
            .filter(|(_, s)| s.is_empty())
            .map(|(l, _)| l.clone())
            .collect();
        for l in empty {
            let e = self.add_classic();
            self.add_to_individual(&l, e);
        }
        self.fill_attributes();
    }

    /// Maps every unmapped classic element to a fresh sink, per attribute.
    /// Sinks are host elements and need no attribute values of their own.
    fn fill_attributes(&mut self) {
        let attrs: Vec<Name> = self.attrs.keys().cloned().collect();
        let classic: Vec<Elem> = self.classic_domain().collect();
        for a in &attrs {
            for &e in &classic {
                if self.attr(a, e).is_none() {
                    let sink = self.add_fresh(None);
                    self.set_attr(a, e, sink);
                }
            }
        }
    }

    /// Checks the well-formedness conditions of a possible world.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Dump(m));
        let n = self.kinds.len() as Elem;
        for (c, s) in &self.concepts {
            if s.iter().any(|&e| e >= n || !self.is_classic(e)) {
                return bad(format!("concept {c} has a non-classic element"));
            }
        }
        for ((f, realm), s) in &self.tests {
            if s.iter().any(|&e| e >= n || self.kind(e).realm() != *realm) {
                return bad(format!("test {f} has an element of the wrong realm"));
            }
        }
        for (r, m) in &self.roles {
            if m.iter()
                .any(|(&s, ts)| s >= n || !self.is_classic(s) || ts.iter().any(|&t| t >= n))
            {
                return bad(format!("role {r} has a pair outside the domain or from the host realm"));
            }
        }
        for (a, t) in &self.attrs {
            if t.iter().any(|(&s, &v)| s >= n || v >= n || !self.is_classic(s)) {
                return bad(format!("attribute {a} maps outside the classic realm"));
            }
            if self.classic_domain().any(|e| !t.contains_key(&e)) {
                return bad(format!("attribute {a} is not total"));
            }
        }
        let mut owner = BTreeMap::new();
        for (l, s) in &self.individuals {
            if s.is_empty() {
                return bad(format!("individual {l} has an empty extension"));
            }
            for &e in s {
                if e >= n || !self.is_classic(e) {
                    return bad(format!("individual {l} has a non-classic element"));
                }
                if let Some(other) = owner.insert(e, l) {
                    return bad(format!("individuals {other} and {l} overlap"));
                }
            }
        }
        for (v, &e) in &self.values {
            if e >= n || self.kind(e) != &ElementKind::Value(v.clone()) {
                return bad(format!("value {v} is indexed wrongly"));
            }
        }
        Ok(())
    }

    /// Whether the world honours the disjointness declarations of `kb`.
    pub fn respects(&self, kb: &KnowledgeBase) -> bool {
        kb.disjoint_groups().iter().all(|group| {
            let names: Vec<&Name> = group
                .iter()
                .filter_map(|a| match a {
                    Atom::Concept(c) => Some(c),
                    _ => None,
                })
                .collect();
            let mut seen = BTreeSet::new();
            names.iter().all(|c| {
                self.concepts
                    .get(c.as_str())
                    .into_iter()
                    .flatten()
                    .all(|&e| seen.insert(e))
            })
        })
    }
}

/// The merge of two worlds: classic realms side by side, host values
/// identified, anonymous host elements kept apart. Extensions are unions
/// under that renaming. An attribute known to only one side is given sinks
/// on the other so that it stays total.
pub fn merge_worlds(i1: &Interpretation, i2: &Interpretation) -> Interpretation {
    let mut w = i1.clone();
    let map: Vec<Elem> = i2
        .kinds
        .iter()
        .map(|k| match k {
            ElementKind::Value(v) => w.add_value(v),
            k => w.push(k.clone()),
        })
        .collect();
    let m = |e: &Elem| map[*e as usize];
    for (c, s) in &i2.concepts {
        w.concepts.entry(c.clone()).or_default().extend(s.iter().map(m));
    }
    for (k, s) in &i2.tests {
        w.tests.entry(k.clone()).or_default().extend(s.iter().map(m));
    }
    for (r, pairs) in &i2.roles {
        let t = w.roles.entry(r.clone()).or_default();
        for (s, ts) in pairs {
            t.entry(m(s)).or_default().extend(ts.iter().map(m));
        }
    }
    for (l, s) in &i2.individuals {
        w.individuals.entry(l.clone()).or_default().extend(s.iter().map(m));
    }
    let attrs: BTreeSet<Name> = i1.attrs.keys().chain(i2.attrs.keys()).cloned().collect();
    for a in attrs {
        w.declare_attr(&a);
        if let Some(t) = i2.attrs.get(&a) {
            for (s, v) in t {
                w.set_attr(&a, m(s), m(v));
            }
        }
    }
    w.fill_attributes();
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Interpretation {
        let mut w = Interpretation::default();
        let a = w.add_classic();
        let b = w.add_classic();
        let one = w.add_value(&HostValue::Integer(1));
        w.add_concept(&Name::new("A"), a);
        w.add_role(&Name::new("r"), a, b);
        w.add_role(&Name::new("r"), a, one);
        w.add_to_individual(&Name::new("P"), b);
        w.declare_attr(&Name::new("f"));
        w.set_attr(&Name::new("f"), a, b);
        w.complete();
        w
    }

    #[test]
    fn completion_makes_attributes_total() {
        let w = small();
        assert!(w.validate().is_ok());
        let sink = w.attr("f", 1).unwrap();
        assert_eq!(w.kind(sink), &ElementKind::Fresh(None));
        assert_eq!(w.attr("f", 0), Some(1));
    }

    #[test]
    fn validation_catches_overlap() {
        let mut w = small();
        w.add_to_individual(&Name::new("Q"), 1);
        assert!(w.validate().is_err());
    }

    #[test]
    fn merge_is_a_disjoint_union_on_the_classic_realm() {
        let w = small();
        let m = merge_worlds(&w, &w);
        assert_eq!(m.classic_domain().count(), 2 * w.classic_domain().count());
        assert_eq!(m.values.len(), 1);
        assert_eq!(m.individual_ext("P").unwrap().len(), 2);
        assert!(m.validate().is_ok());
        let e = merge_worlds(&w, &Interpretation::default());
        assert_eq!(e, w);
    }

    #[test]
    fn host_typing_follows_the_lattice() {
        let mut w = Interpretation::default();
        let i = w.add_fresh(Some(Name::new("INTEGER")));
        let v = w.add_value(&HostValue::Decimal(Name::new("2.5")));
        assert!(w.has_host_type(i, "NUMBER"));
        assert!(!w.has_host_type(v, "INTEGER"));
        assert!(w.has_host_type(v, "REAL"));
    }
}
