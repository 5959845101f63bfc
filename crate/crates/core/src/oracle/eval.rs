//! Extensions of descriptions, nodes and graphs in a finite world.
//!
//! Number restrictions count fillers modulo congruence: two elements are
//! congruent when they are equal or lie in the extension of one classic
//! individual.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Elem, Interpretation};
use crate::error::{Error, Result};
use crate::graph::{Atom, DescriptionGraph, Dom, Node, NodeId};
use crate::syntax::{Description, Individual, Name, Realm};

type Set = BTreeSet<Elem>;

/// Evaluation context for one world. Restriction graphs are evaluated once
/// per evaluator and cached by address, so keep the graphs alive and
/// unchanged while the evaluator is in use.
pub struct Evaluator<'w> {
    w: &'w Interpretation,
    congruence: Vec<Elem>,
    cache: RefCell<HashMap<usize, Set>>,
}

impl<'w> Evaluator<'w> {
    pub fn new(w: &'w Interpretation) -> Self {
        let mut congruence: Vec<Elem> = w.elements().collect();
        for ext in w.individuals.values() {
            if let Some(&first) = ext.iter().next() {
                for &e in ext {
                    congruence[e as usize] = first;
                }
            }
        }
        Evaluator {
            w,
            congruence,
            cache: RefCell::new(HashMap::new()),
        }
    }

    fn all(&self) -> Set {
        self.w.elements().collect()
    }

    fn classic(&self) -> Set {
        self.w.classic_domain().collect()
    }

    fn host(&self) -> Set {
        self.w.host_domain().collect()
    }

    /// Number of congruence classes among `es`.
    fn classes(&self, es: impl IntoIterator<Item = Elem>) -> u32 {
        es.into_iter()
            .map(|e| self.congruence[e as usize])
            .collect::<BTreeSet<_>>()
            .len() as u32
    }

    /// The extension of an individual.
    pub fn individual(&self, l: &Individual) -> Result<Set> {
        match l {
            Individual::Classic(n) => self
                .w
                .individuals
                .get(n)
                .cloned()
                .ok_or_else(|| Error::Uninterpreted(n.to_string())),
            Individual::Host(v) => Ok(self.w.value(v).into_iter().collect()),
        }
    }

    fn attr(&self, a: &Name, e: Elem) -> Result<Option<Elem>> {
        let table = self.w.attrs.get(a).ok_or_else(|| Error::Uninterpreted(a.to_string()))?;
        Ok(table.get(&e).copied())
    }

    /// Follows an attribute chain; `None` once it leaves the classic realm.
    fn path(&self, e: Elem, path: &[Name]) -> Result<Option<Elem>> {
        let mut cur = e;
        for a in path {
            if !self.w.is_classic(cur) {
                return Ok(None);
            }
            match self.attr(a, cur)? {
                Some(next) => cur = next,
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }

    fn host_type(&self, h: &Name) -> Set {
        self.w.host_domain().filter(|&e| self.w.has_host_type(e, h)).collect()
    }

    fn test(&self, f: &Name, realm: Realm) -> Set {
        self.w.tests.get(&(f.clone(), realm)).cloned().unwrap_or_default()
    }

    fn concept(&self, c: &Name) -> Set {
        self.w.concepts.get(c).cloned().unwrap_or_default()
    }

    /// Extension of an expanded description.
    pub fn description(&self, d: &Description) -> Result<Set> {
        let w = self.w;
        Ok(match d {
            Description::Thing => self.all(),
            Description::ClassicThing => self.classic(),
            Description::HostThing => self.host(),
            Description::Nothing => Set::new(),
            Description::Concept(c) => self.concept(c),
            Description::HostConcept(h) => self.host_type(h),
            Description::Test(f, realm) => self.test(f, *realm),
            Description::And(ds) => {
                let mut acc = self.all();
                for c in ds {
                    let ext = self.description(c)?;
                    acc.retain(|e| ext.contains(e));
                }
                acc
            }
            Description::AllRole(r, c) => {
                let ext = self.description(c)?;
                w.classic_domain()
                    .filter(|&e| w.fillers(r, e).all(|x| ext.contains(&x)))
                    .collect()
            }
            Description::AllAttr(a, c) => {
                let ext = self.description(c)?;
                let mut out = Set::new();
                for e in w.classic_domain() {
                    if self.attr(a, e)?.is_some_and(|x| ext.contains(&x)) {
                        out.insert(e);
                    }
                }
                out
            }
            Description::AtLeast(n, r) => w
                .classic_domain()
                .filter(|&e| self.classes(w.fillers(r, e)) >= *n)
                .collect(),
            Description::AtMost(n, r) => w
                .classic_domain()
                .filter(|&e| self.classes(w.fillers(r, e)) <= *n)
                .collect(),
            Description::SameAs(a, b) => {
                let mut out = Set::new();
                for e in w.classic_domain() {
                    let (x, y) = (self.path(e, a)?, self.path(e, b)?);
                    if x.is_some() && x == y {
                        out.insert(e);
                    }
                }
                out
            }
            Description::FillsRole(r, l) => {
                let ext = self.individual(l)?;
                w.classic_domain()
                    .filter(|&e| w.fillers(r, e).any(|x| ext.contains(&x)))
                    .collect()
            }
            Description::FillsAttr(a, l) => {
                let ext = self.individual(l)?;
                let mut out = Set::new();
                for e in w.classic_domain() {
                    if self.attr(a, e)?.is_some_and(|x| ext.contains(&x)) {
                        out.insert(e);
                    }
                }
                out
            }
            Description::OneOf(ls) => {
                let mut out = Set::new();
                for l in ls {
                    out.extend(self.individual(l)?);
                }
                out
            }
            Description::Named(n) => return Err(Error::NotExpanded(n.to_string())),
            Description::Primitive(_, tag) => return Err(Error::NotExpanded(format!("primitive {tag}"))),
        })
    }

    fn atom(&self, a: &Atom, e: Elem) -> bool {
        let w = self.w;
        match a {
            Atom::Thing => true,
            Atom::ClassicThing => w.is_classic(e),
            Atom::HostThing => !w.is_classic(e),
            Atom::Nothing => false,
            Atom::Concept(c) => w.concepts.get(c).is_some_and(|s| s.contains(&e)),
            Atom::Host(h) => w.has_host_type(e, h),
            Atom::Test(f, realm) => w.tests.get(&(f.clone(), *realm)).is_some_and(|s| s.contains(&e)),
        }
    }

    fn in_some(&self, ls: &BTreeSet<Individual>, e: Elem) -> Result<bool> {
        for l in ls {
            if self.individual(l)?.contains(&e) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Whether `e` lies in the extension of a node.
    pub fn in_node(&self, n: &Node, e: Elem) -> Result<bool> {
        if !n.atoms.iter().all(|a| self.atom(a, e)) {
            return Ok(false);
        }
        if let Dom::Finite(s) = &n.dom {
            if !self.in_some(s, e)? {
                return Ok(false);
            }
        }
        for r in &n.r_edges {
            let fillers: Vec<Elem> = self.w.fillers(&r.role, e).collect();
            let count = self.classes(fillers.iter().copied());
            if count < r.min || !r.max.admits(count) {
                return Ok(false);
            }
            let ext = self.graph(&r.restriction)?;
            if !fillers.iter().all(|x| ext.contains(x)) {
                return Ok(false);
            }
            for f in &r.fillers {
                let fe = self.individual(f)?;
                if !fillers.iter().any(|x| fe.contains(x)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn node(&self, n: &Node) -> Result<Set> {
        let mut out = Set::new();
        for e in self.w.elements() {
            if self.in_node(n, e)? {
                out.insert(e);
            }
        }
        Ok(out)
    }

    /// Extension of a graph: the elements with a witnessing assignment.
    pub fn graph(&self, g: &DescriptionGraph) -> Result<Set> {
        let key = g as *const DescriptionGraph as usize;
        if let Some(s) = self.cache.borrow().get(&key) {
            return Ok(s.clone());
        }
        let mut out = Set::new();
        for d in self.w.elements() {
            if self.witness(g, d)?.is_some() {
                out.insert(d);
            }
        }
        self.cache.borrow_mut().insert(key, out.clone());
        Ok(out)
    }

    /// An assignment of elements to nodes with `d` at the root, if one
    /// exists. Nodes reachable from the root are forced by the attribute
    /// functions; any others are searched exhaustively.
    pub fn witness(&self, g: &DescriptionGraph, d: Elem) -> Result<Option<BTreeMap<NodeId, Elem>>> {
        let mut assign: Vec<Option<Elem>> = vec![None; g.node_count()];
        assign[g.root().index()] = Some(d);
        if !self.propagate(g, &mut assign)? {
            return Ok(None);
        }
        self.extend(g, assign)
    }

    fn extend(&self, g: &DescriptionGraph, assign: Vec<Option<Elem>>) -> Result<Option<BTreeMap<NodeId, Elem>>> {
        let Some(free) = assign.iter().position(Option::is_none) else {
            for (i, e) in assign.iter().enumerate() {
                if !self.in_node(g.node(NodeId::new(i)), e.unwrap())? {
                    return Ok(None);
                }
            }
            return Ok(Some(
                assign
                    .iter()
                    .enumerate()
                    .map(|(i, e)| (NodeId::new(i), e.unwrap()))
                    .collect(),
            ));
        };
        for e in self.w.elements() {
            let mut next = assign.clone();
            next[free] = Some(e);
            if self.propagate(g, &mut next)? {
                if let Some(found) = self.extend(g, next)? {
                    return Ok(Some(found));
                }
            }
        }
        Ok(None)
    }

    /// Pushes assignments along a-edges to a fixpoint and checks edge
    /// fillers. `false` on a conflict.
    fn propagate(&self, g: &DescriptionGraph, assign: &mut [Option<Elem>]) -> Result<bool> {
        loop {
            let mut changed = false;
            for e in g.a_edges() {
                let Some(s) = assign[e.source.index()] else { continue };
                if !self.w.is_classic(s) {
                    return Ok(false);
                }
                let Some(t) = self.attr(&e.attr, s)? else {
                    return Ok(false);
                };
                match assign[e.target.index()] {
                    Some(u) if u != t => return Ok(false),
                    Some(_) => {}
                    None => {
                        assign[e.target.index()] = Some(t);
                        changed = true;
                    }
                }
                for f in &e.fillers {
                    if !self.individual(f)?.contains(&t) {
                        return Ok(false);
                    }
                }
            }
            if !changed {
                return Ok(true);
            }
        }
    }
}

/// Extension of an expanded description.
pub fn eval_description(d: &Description, w: &Interpretation) -> Result<Set> {
    Evaluator::new(w).description(d)
}

/// Extension of a description graph.
pub fn eval_graph(g: &DescriptionGraph, w: &Interpretation) -> Result<Set> {
    Evaluator::new(w).graph(g)
}

/// Extension of a single node.
pub fn eval_node(n: &Node, w: &Interpretation) -> Result<Set> {
    Evaluator::new(w).node(n)
}
