//! Knowledge bases: vocabulary, named concepts, primitives, disjointness
//! declarations, expansion and classification.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use indexmap::IndexMap;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{translate, Atom, DescriptionGraph};
use crate::lattice::HostLattice;
use crate::normalize::canonicalize;
use crate::subsume::{equivalent_expanded, subsumes_graph};
use crate::syntax::{Description, Hints, Individual, Name, PropertyKind};

/// Default ceiling on the size of an expanded description.
pub const DEFAULT_EXPANSION_LIMIT: usize = 250_000;

/// Name of the atom minted for primitive tag `tag`. The `:` cannot occur
/// in parsed identifiers, so minted atoms never collide with user atoms.
pub fn primitive_atom(tag: &str) -> Name {
    Name::new(format!("primitive:{tag}"))
}

#[derive(Clone, Debug)]
pub struct KnowledgeBase {
    roles: BTreeSet<Name>,
    attributes: BTreeSet<Name>,
    individuals: BTreeSet<Name>,
    lattice: HostLattice,
    named: IndexMap<Name, Description>,
    /// Tag → expanded body (without the minted atom).
    primitives: BTreeMap<Name, Description>,
    disjoint: Vec<BTreeSet<Atom>>,
    expansion_limit: usize,
}

impl Default for KnowledgeBase {
    fn default() -> Self {
        KnowledgeBase {
            roles: BTreeSet::new(),
            attributes: BTreeSet::new(),
            individuals: BTreeSet::new(),
            lattice: HostLattice::default(),
            named: IndexMap::new(),
            primitives: BTreeMap::new(),
            disjoint: Vec::new(),
            expansion_limit: DEFAULT_EXPANSION_LIMIT,
        }
    }
}

impl KnowledgeBase {
    pub fn roles(&self) -> impl Iterator<Item = &Name> {
        self.roles.iter()
    }

    pub fn attributes(&self) -> impl Iterator<Item = &Name> {
        self.attributes.iter()
    }

    pub fn individuals(&self) -> impl Iterator<Item = &Name> {
        self.individuals.iter()
    }

    pub fn lattice(&self) -> &HostLattice {
        &self.lattice
    }

    /// Named concepts in declaration order, with their unexpanded bodies.
    pub fn named(&self) -> impl Iterator<Item = (&Name, &Description)> {
        self.named.iter()
    }

    pub fn definition(&self, name: &str) -> Option<&Description> {
        self.named.get(name)
    }

    pub fn primitives(&self) -> impl Iterator<Item = (&Name, &Description)> {
        self.primitives.iter()
    }

    pub fn disjoint_groups(&self) -> &[BTreeSet<Atom>] {
        &self.disjoint
    }

    pub fn property_kind(&self, name: &str) -> Option<PropertyKind> {
        if self.roles.contains(name) {
            Some(PropertyKind::Role)
        } else if self.attributes.contains(name) {
            Some(PropertyKind::Attribute)
        } else {
            None
        }
    }

    pub fn is_named(&self, name: &str) -> bool {
        self.named.contains_key(name)
    }

    pub fn is_individual(&self, name: &str) -> bool {
        self.individuals.contains(name)
    }

    pub fn expansion_limit(&self) -> usize {
        self.expansion_limit
    }

    pub fn with_expansion_limit(mut self, limit: usize) -> Self {
        self.expansion_limit = limit;
        self
    }

    /// Whether some disjointness declaration covers two of `atoms`.
    pub fn clashes(&self, atoms: &BTreeSet<Atom>) -> bool {
        self.disjoint.iter().any(|g| g.intersection(atoms).nth(1).is_some())
    }

    /// Replaces named references by their definitions and primitives by
    /// the conjunction of their minted atom and body.
    pub fn expand(&self, d: &Description) -> Result<Description> {
        let mut memo = HashMap::new();
        let size = self.expanded_size(d, &mut memo)?;
        if size > self.expansion_limit {
            return Err(Error::ExpansionTooLarge(self.expansion_limit));
        }
        let mut local = BTreeMap::new();
        self.expand_with(d, &mut local)
    }

    /// Expansion followed by translation.
    pub fn graph(&self, d: &Description) -> Result<DescriptionGraph> {
        translate(&self.expand(d)?)
    }

    /// Expansion, translation and canonicalization.
    pub fn canonical(&self, d: &Description) -> Result<DescriptionGraph> {
        Ok(canonicalize(&self.graph(d)?, self))
    }

    fn expanded_size(&self, d: &Description, memo: &mut HashMap<Name, usize>) -> Result<usize> {
        Ok(match d {
            Description::Named(n) => {
                if let Some(&s) = memo.get(n) {
                    return Ok(s);
                }
                let body = self.named.get(n).ok_or_else(|| Error::UnknownName(n.clone()))?;
                let s = self.expanded_size(body, memo)?;
                memo.insert(n.clone(), s);
                s
            }
            Description::And(ds) => ds.iter().try_fold(1usize, |acc, d| {
                Ok::<_, Error>(acc.saturating_add(self.expanded_size(d, memo)?))
            })?,
            Description::AllRole(_, c) | Description::AllAttr(_, c) | Description::Primitive(c, _) => {
                2usize.saturating_add(self.expanded_size(c, memo)?)
            }
            other => other.size(),
        })
    }

    fn expand_with(&self, d: &Description, local: &mut BTreeMap<Name, Description>) -> Result<Description> {
        Ok(match d {
            Description::Named(n) => {
                let body = self.named.get(n).ok_or_else(|| Error::UnknownName(n.clone()))?;
                self.expand_with(body, local)?
            }
            Description::Primitive(body, tag) => {
                let body = self.expand_with(body, local)?;
                self.check_primitive(tag, &body, local)?;
                Description::and([Description::Concept(primitive_atom(tag)), body])
            }
            Description::And(ds) => Description::and(
                ds.iter()
                    .map(|d| self.expand_with(d, local))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Description::AllRole(r, c) => Description::AllRole(r.clone(), Box::new(self.expand_with(c, local)?)),
            Description::AllAttr(a, c) => Description::AllAttr(a.clone(), Box::new(self.expand_with(c, local)?)),
            other => other.clone(),
        })
    }

    /// A tag may only be reused with an equivalent body.
    fn check_primitive(&self, tag: &Name, body: &Description, local: &mut BTreeMap<Name, Description>) -> Result<()> {
        match self.primitives.get(tag).or_else(|| local.get(tag)) {
            Some(known) if known == body => Ok(()),
            Some(known) => {
                if equivalent_expanded(known, body, self)? {
                    Ok(())
                } else {
                    Err(Error::PrimitiveConflict(tag.clone()))
                }
            }
            None => {
                local.insert(tag.clone(), body.clone());
                Ok(())
            }
        }
    }

    /// Computes the subsumption hierarchy over the named concepts.
    pub fn classify(&self) -> Result<Taxonomy> {
        let names: Vec<Name> = self.named.keys().cloned().collect();
        let exps = names
            .iter()
            .map(|n| self.expand(&Description::Named(n.clone())))
            .collect::<Result<Vec<_>>>()?;
        let graphs = exps
            .iter()
            .map(|d| Ok(canonicalize(&translate(d)?, self)))
            .collect::<Result<Vec<_>>>()?;
        let n = names.len();
        // above[i][j]: concept i subsumes concept j.
        let above: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| i == j || subsumes_graph(&exps[i], &graphs[j])).collect())
            .collect();
        let thing = DescriptionGraph::thing();
        let top: Vec<bool> = exps.iter().map(|d| subsumes_graph(d, &thing)).collect();

        // Equivalence classes; node 0 is the top.
        let mut class = vec![usize::MAX; n];
        let mut nodes = vec![TaxonomyNode {
            members: vec![Name::new("thing")],
            parents: Vec::new(),
        }];
        for i in 0..n {
            if top[i] {
                class[i] = 0;
                nodes[0].members.push(names[i].clone());
            }
        }
        for i in 0..n {
            if class[i] != usize::MAX {
                continue;
            }
            class[i] = nodes.len();
            let mut members = vec![names[i].clone()];
            for j in i + 1..n {
                if class[j] == usize::MAX && above[i][j] && above[j][i] {
                    class[j] = nodes.len();
                    members.push(names[j].clone());
                }
            }
            nodes.push(TaxonomyNode {
                members,
                parents: Vec::new(),
            });
        }
        let rep: Vec<usize> = (0..nodes.len())
            .map(|c| {
                if c == 0 {
                    usize::MAX
                } else {
                    class.iter().position(|&k| k == c).unwrap()
                }
            })
            .collect();
        let strictly_above = |a: usize, b: usize| a != b && b != 0 && (a == 0 || above[rep[a]][rep[b]]);
        for b in 1..nodes.len() {
            let ups: Vec<usize> = (0..nodes.len()).filter(|&a| strictly_above(a, b)).collect();
            nodes[b].parents = ups
                .iter()
                .copied()
                .filter(|&a| !ups.iter().any(|&c| c != a && strictly_above(a, c)))
                .collect();
        }
        Ok(Taxonomy { nodes })
    }
}

/// One equivalence class of named concepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaxonomyNode {
    pub members: Vec<Name>,
    /// Indices of the immediate subsumers.
    pub parents: Vec<usize>,
}

/// The classified hierarchy. Node 0 is the top, labelled `thing`, and
/// also holds every named concept equivalent to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Taxonomy {
    pub nodes: Vec<TaxonomyNode>,
}

impl Taxonomy {
    /// Index of the node containing `name`.
    pub fn node_of(&self, name: &str) -> Option<usize> {
        self.nodes
            .iter()
            .position(|n| n.members.iter().any(|m| m.as_str() == name))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.nodes
                .iter()
                .enumerate()
                .map(|(i, n)| json!({"node": i, "members": n.members, "parents": n.parents}))
                .collect(),
        )
    }
}

/// Accumulates declarations while a knowledge-base file is read.
#[derive(Default)]
pub(crate) struct KbBuilder {
    kb: KnowledgeBase,
    disjoint: Vec<Vec<Name>>,
}

impl KbBuilder {
    fn claim(&self, name: &Name) -> Result<()> {
        let kb = &self.kb;
        if kb.roles.contains(name)
            || kb.attributes.contains(name)
            || kb.individuals.contains(name)
            || kb.named.contains_key(name)
            || kb.lattice.contains(name)
        {
            Err(Error::Redeclaration(name.clone()))
        } else {
            Ok(())
        }
    }

    pub(crate) fn declare_role(&mut self, name: Name) -> Result<()> {
        self.claim(&name)?;
        self.kb.roles.insert(name);
        Ok(())
    }

    pub(crate) fn declare_attribute(&mut self, name: Name) -> Result<()> {
        self.claim(&name)?;
        self.kb.attributes.insert(name);
        Ok(())
    }

    pub(crate) fn declare_individual(&mut self, name: Name) -> Result<()> {
        self.claim(&name)?;
        self.kb.individuals.insert(name);
        Ok(())
    }

    pub(crate) fn declare_concept(&mut self, name: Name) -> Result<()> {
        self.claim(&name)?;
        self.kb.named.insert(name, Description::Thing);
        Ok(())
    }

    /// Declares host types in an order where parents come first, so the
    /// file may mention them in any order.
    pub(crate) fn declare_host_types(&mut self, mut pending: Vec<(Name, Option<Name>)>) -> Result<()> {
        for (name, _) in &pending {
            let kb = &self.kb;
            if kb.roles.contains(name)
                || kb.attributes.contains(name)
                || kb.individuals.contains(name)
                || kb.named.contains_key(name)
            {
                return Err(Error::Redeclaration(name.clone()));
            }
        }
        while !pending.is_empty() {
            let before = pending.len();
            let mut rest = Vec::new();
            for (name, parent) in pending {
                match &parent {
                    Some(p) if !self.kb.lattice.contains(p) => rest.push((name, parent)),
                    _ => self.kb.lattice.declare(name, parent)?,
                }
            }
            if rest.len() == before {
                let (_, parent) = &rest[0];
                return Err(Error::UnknownHostType(parent.clone().unwrap()));
            }
            pending = rest;
        }
        Ok(())
    }

    pub(crate) fn vocabulary(&self) -> &KnowledgeBase {
        &self.kb
    }

    pub(crate) fn add_inferred(&mut self, hints: &Hints) {
        for (name, kind) in hints {
            let name = Name::new(name);
            match kind {
                PropertyKind::Role => self.kb.roles.insert(name),
                PropertyKind::Attribute => self.kb.attributes.insert(name),
            };
        }
    }

    pub(crate) fn define(&mut self, name: Name, body: Description) {
        body.visit(&mut |d| {
            let ls: &[Individual] = match d {
                Description::OneOf(ls) => ls,
                Description::FillsRole(_, l) | Description::FillsAttr(_, l) => std::slice::from_ref(l),
                _ => &[],
            };
            for l in ls {
                if let Individual::Classic(n) = l {
                    self.kb.individuals.insert(n.clone());
                }
            }
        });
        self.kb.named.insert(name, body);
    }

    pub(crate) fn declare_disjoint(&mut self, names: Vec<Name>) {
        self.disjoint.push(names);
    }

    fn check_acyclic(&self) -> Result<()> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        fn visit(kb: &KnowledgeBase, i: usize, marks: &mut Vec<Mark>) -> Result<()> {
            match marks[i] {
                Mark::Done => return Ok(()),
                Mark::Active => {
                    let (name, _) = kb.named.get_index(i).unwrap();
                    return Err(Error::RecursiveConcept(name.clone()));
                }
                Mark::New => {}
            }
            marks[i] = Mark::Active;
            let (_, body) = kb.named.get_index(i).unwrap();
            let mut refs = Vec::new();
            body.visit(&mut |d| {
                if let Description::Named(n) = d {
                    refs.push(n.clone());
                }
            });
            for r in refs {
                let j = kb.named.get_index_of(&r).ok_or(Error::UnknownName(r))?;
                visit(kb, j, marks)?;
            }
            marks[i] = Mark::Done;
            Ok(())
        }
        let mut marks = vec![Mark::New; self.kb.named.len()];
        (0..marks.len()).try_for_each(|i| visit(&self.kb, i, &mut marks))
    }

    /// The atom a name in a disjointness declaration stands for: an atomic
    /// concept, or the minted atom of a named primitive.
    fn disjoint_atom(&self, name: &Name) -> Result<Atom> {
        let kb = &self.kb;
        if kb.property_kind(name).is_some() || kb.individuals.contains(name) || kb.lattice.contains(name) {
            return Err(Error::NotDisjointable(name.clone()));
        }
        let mut cur = match kb.named.get(name) {
            None => return Ok(Atom::Concept(name.clone())),
            Some(d) => d,
        };
        loop {
            match cur {
                Description::Named(n) => cur = &kb.named[n],
                Description::Primitive(_, tag) => return Ok(Atom::Concept(primitive_atom(tag))),
                Description::Concept(c) => return Ok(Atom::Concept(c.clone())),
                _ => return Err(Error::NotDisjointable(name.clone())),
            }
        }
    }

    pub(crate) fn finish(mut self) -> Result<KnowledgeBase> {
        self.check_acyclic()?;
        let groups = self
            .disjoint
            .iter()
            .map(|g| g.iter().map(|n| self.disjoint_atom(n)).collect::<Result<BTreeSet<_>>>())
            .collect::<Result<Vec<_>>>()?;
        self.kb.disjoint = groups;
        let mut registry = BTreeMap::new();
        let names: Vec<Name> = self.kb.named.keys().cloned().collect();
        for n in names {
            let mut memo = HashMap::new();
            if self.kb.expanded_size(&Description::Named(n.clone()), &mut memo)? > self.kb.expansion_limit {
                return Err(Error::ExpansionTooLarge(self.kb.expansion_limit));
            }
            self.kb.expand_with(&Description::Named(n), &mut registry)?;
        }
        self.kb.primitives = registry;
        Ok(self.kb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_description, parse_kb};

    fn named(n: &str) -> Description {
        Description::Named(Name::new(n))
    }

    #[test]
    fn primitive_expansion_mints_an_atom() {
        let kb = parse_kb("concept EMPLOYEE := primitive(and(PERSON, at-least(1, employeeNr)), employee)").unwrap();
        let e = kb.expand(&named("EMPLOYEE")).unwrap();
        assert_eq!(
            e,
            Description::And(vec![
                Description::Concept(primitive_atom("employee")),
                Description::concept("PERSON"),
                Description::at_least(1, "employeeNr"),
            ])
        );
    }

    #[test]
    fn equivalent_primitive_bodies_share_the_atom() {
        let kb = parse_kb("concept X := primitive(and(A, B), t)\nconcept Y := primitive(and(B, A), t)").unwrap();
        let x = kb.expand(&named("X")).unwrap();
        let y = kb.expand(&named("Y")).unwrap();
        let atom = Description::Concept(primitive_atom("t"));
        assert!(matches!(&x, Description::And(v) if v[0] == atom));
        assert!(matches!(&y, Description::And(v) if v[0] == atom));
        let e = parse_kb("concept X := primitive(A, t)\nconcept Y := primitive(B, t)").unwrap_err();
        assert!(matches!(e, Error::PrimitiveConflict(_)));
        // Queries are checked against the registry as well.
        let q = parse_description("primitive(C, t)", &kb).unwrap();
        assert!(matches!(kb.expand(&q), Err(Error::PrimitiveConflict(_))));
    }

    #[test]
    fn two_step_substitution() {
        let kb = parse_kb("concept F := E\nconcept E := GAME").unwrap();
        assert_eq!(kb.expand(&named("F")).unwrap(), Description::concept("GAME"));
    }

    #[test]
    fn expansion_is_idempotent() {
        let kb = parse_kb("concept A := and(X, all(r, B))\nconcept B := primitive(at-least(1, s), b)").unwrap();
        let once = kb.expand(&named("A")).unwrap();
        assert_eq!(kb.expand(&once).unwrap(), once);
    }

    #[test]
    fn exponential_expansion_hits_the_ceiling() {
        let mut text = String::from("concept C0 := A\n");
        for i in 1..40 {
            text.push_str(&format!("concept C{i} := and(C{p}, all(r, C{p}))\n", p = i - 1));
        }
        assert!(matches!(parse_kb(&text), Err(Error::ExpansionTooLarge(_))));
    }

    #[test]
    fn classification() {
        let kb = parse_kb("concept A := at-least(4, r)\nconcept B := at-least(2, r)").unwrap();
        let t = kb.classify().unwrap();
        let (a, b) = (t.node_of("A").unwrap(), t.node_of("B").unwrap());
        assert_eq!(t.nodes[a].parents, vec![b]);
        assert_eq!(t.nodes[b].parents, vec![0]);

        let kb = parse_kb("concept A := GAME\nconcept B := GAME").unwrap();
        let t = kb.classify().unwrap();
        assert_eq!(t.nodes.len(), 2);
        assert_eq!(t.node_of("A"), t.node_of("B"));

        let t = KnowledgeBase::default().classify().unwrap();
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.to_json(), json!([{"node": 0, "members": ["thing"], "parents": []}]));
    }

    #[test]
    fn taxonomy_is_a_transitive_reduction() {
        let kb = parse_kb(
            "concept A := at-least(1, r)\nconcept B := at-least(2, r)\nconcept C := and(at-least(3, r), X)\nconcept D := and(B, X)",
        )
        .unwrap();
        let t = kb.classify().unwrap();
        let id = |n| t.node_of(n).unwrap();
        assert_eq!(t.nodes[id("B")].parents, vec![id("A")]);
        assert_eq!(t.nodes[id("D")].parents, vec![id("B")]);
        assert_eq!(t.nodes[id("C")].parents, vec![id("D")]);
    }
}
