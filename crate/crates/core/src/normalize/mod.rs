//! Canonical forms of description graphs.
//!
//! Normalization runs post-order: restriction graphs are canonicalized
//! before the island that owns them. Within an island the node-local steps
//! run to a fixpoint, then identically labelled a-edges are merged through
//! a congruence closure, then filler information is pushed along a-edges;
//! the whole round repeats until nothing changes.
//!
//! Besides the steps for atoms, number restrictions, edges and individuals
//! the normalizer applies a few consequences of fixed host values: a finite
//! dom of host values types its node, nodes of one island pinned to the
//! same host value are merged, and role fillers must fit the realm and host
//! types of the restriction root.

mod union_find;

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{AEdge, Atom, Bound, DescriptionGraph, Dom, Node, NodeId, REdge};
use crate::kb::KnowledgeBase;
use crate::syntax::{HostValue, Individual};
use union_find::Congruence;

/// Order in which rewrites are applied. Both reach the same canonical form
/// up to node renaming; the second exists to check that empirically.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    /// Congruence closure for a-edges, r-edges folded left to right.
    #[default]
    PostOrder,
    /// One a-edge merge at a time, last pair first, with a full round of
    /// node steps in between; r-edges folded right to left.
    Pairwise,
}

/// Canonical form of `g` under the default schedule.
pub fn canonicalize(g: &DescriptionGraph, kb: &KnowledgeBase) -> DescriptionGraph {
    canonicalize_with(g, kb, Schedule::PostOrder)
}

pub fn canonicalize_with(g: &DescriptionGraph, kb: &KnowledgeBase, schedule: Schedule) -> DescriptionGraph {
    Normalizer { kb, schedule }.graph(g.clone())
}

/// Merges two r-edges with the same role: larger min, smaller max, merged
/// restriction, united fillers. The restriction is not canonicalized.
pub fn merge_r_edges(e1: &REdge, e2: &REdge) -> REdge {
    assert_eq!(e1.role, e2.role, "r-edges are not mergeable");
    let mut fillers = e1.fillers.clone();
    fillers.extend(e2.fillers.iter().cloned());
    REdge {
        role: e1.role.clone(),
        min: e1.min.max(e2.min),
        max: e1.max.min(e2.max),
        restriction: e1.restriction.merge(&e2.restriction),
        fillers,
    }
}

struct Normalizer<'a> {
    kb: &'a KnowledgeBase,
    schedule: Schedule,
}

fn mark(n: &mut Node) -> bool {
    *n = Node::incoherent();
    true
}

fn host_types(atoms: &BTreeSet<Atom>) -> impl Iterator<Item = &crate::syntax::Name> {
    atoms.iter().filter_map(|a| match a {
        Atom::Host(t) => Some(t),
        _ => None,
    })
}

impl Normalizer<'_> {
    /// Whether an element of individual `l` may carry all of `atoms`, as far
    /// as realms and host types decide.
    fn admits(&self, atoms: &BTreeSet<Atom>, l: &Individual) -> bool {
        match l {
            Individual::Host(v) => {
                !atoms.contains(&Atom::ClassicThing)
                    && host_types(atoms).all(|t| self.kb.lattice().value_has_type(v, t))
            }
            Individual::Classic(_) => !atoms.contains(&Atom::HostThing),
        }
    }

    fn graph(&self, mut g: DescriptionGraph) -> DescriptionGraph {
        for n in &mut g.nodes {
            for e in &mut n.r_edges {
                let r = std::mem::replace(&mut e.restriction, DescriptionGraph::thing());
                e.restriction = self.graph(r);
            }
        }
        loop {
            let mut changed = false;
            for n in &mut g.nodes {
                changed |= self.node(n);
                if n.is_incoherent() {
                    return DescriptionGraph::incoherent();
                }
            }
            changed |= match self.schedule {
                Schedule::PostOrder => merge_congruent(&mut g),
                Schedule::Pairwise => merge_one_pair(&mut g),
            };
            match push_fillers(&mut g) {
                None => return DescriptionGraph::incoherent(),
                Some(c) => changed |= c,
            }
            if !changed {
                break;
            }
        }
        g.compact();
        g
    }

    fn node(&self, n: &mut Node) -> bool {
        let mut changed = false;
        while self.node_pass(n) {
            changed = true;
            if n.is_incoherent() {
                break;
            }
        }
        changed
    }

    fn node_pass(&self, n: &mut Node) -> bool {
        if n.has(&Atom::Nothing) {
            return *n != Node::incoherent() && mark(n);
        }
        let lattice = self.kb.lattice();
        let mut changed = false;

        // Atom closure, including what a finite dom implies.
        let mut add = Vec::new();
        for a in &n.atoms {
            match a {
                Atom::Concept(_) => add.push(Atom::ClassicThing),
                Atom::Host(t) => {
                    add.push(Atom::HostThing);
                    add.extend(lattice.ancestors(t).map(|s| Atom::Host(s.clone())));
                }
                _ => {}
            }
        }
        if let Some(s) = n.dom.finite().filter(|s| !s.is_empty()) {
            if s.iter().all(Individual::is_host) {
                add.push(Atom::HostThing);
                let values = s.iter().filter_map(|l| match l {
                    Individual::Host(v) => Some(v),
                    Individual::Classic(_) => None,
                });
                add.extend(lattice.common_types(values).into_iter().map(Atom::Host));
            } else if !s.iter().any(Individual::is_host) {
                add.push(Atom::ClassicThing);
            }
        }
        for a in add {
            changed |= n.atoms.insert(a);
        }

        // Realm and host-type clashes, declared disjointness.
        if n.has(&Atom::ClassicThing) && n.has(&Atom::HostThing) {
            return mark(n);
        }
        let hosts: Vec<_> = host_types(&n.atoms).collect();
        for (i, a) in hosts.iter().enumerate() {
            if hosts[i + 1..].iter().any(|b| !lattice.related(a, b)) {
                return mark(n);
            }
        }
        if self.kb.clashes(&n.atoms) {
            return mark(n);
        }

        // Dom elements the atoms rule out, then an empty dom.
        if let Dom::Finite(s) = &n.dom {
            let kept: BTreeSet<Individual> = s.iter().filter(|l| self.admits(&n.atoms, l)).cloned().collect();
            if kept.len() != s.len() {
                n.dom = Dom::Finite(kept);
                changed = true;
            }
        }
        if n.dom.is_empty() {
            return mark(n);
        }

        changed |= self.merge_same_roles(n);

        let mut bad = false;
        for e in &mut n.r_edges {
            changed |= self.r_edge(e);
            if Bound::Finite(e.min) > e.max {
                bad = true;
                break;
            }
            if !e.restriction.is_incoherent() {
                let root = e.restriction.root_node();
                if !e
                    .fillers
                    .iter()
                    .all(|f| root.dom.contains(f) && self.admits(&root.atoms, f))
                {
                    bad = true;
                    break;
                }
            }
        }
        if bad {
            return mark(n);
        }
        changed
    }

    /// Sorts r-edges by role and merges runs with the same role.
    fn merge_same_roles(&self, n: &mut Node) -> bool {
        if n.r_edges.windows(2).all(|w| w[0].role < w[1].role) {
            return false;
        }
        let mut edges = std::mem::take(&mut n.r_edges);
        edges.sort_by(|a, b| a.role.cmp(&b.role));
        let mut groups: Vec<Vec<REdge>> = Vec::new();
        for e in edges {
            match groups.last_mut() {
                Some(g) if g[0].role == e.role => g.push(e),
                _ => groups.push(vec![e]),
            }
        }
        for mut g in groups {
            if self.schedule == Schedule::Pairwise {
                g.reverse();
            }
            let mut it = g.into_iter();
            let first = it.next().unwrap();
            let merged = it.fold(first, |acc, e| {
                let mut m = merge_r_edges(&acc, &e);
                m.restriction = self.graph(m.restriction);
                m
            });
            n.r_edges.push(merged);
        }
        true
    }

    /// Number and filler steps on one r-edge. Clashes are left for the
    /// caller to detect.
    fn r_edge(&self, e: &mut REdge) -> bool {
        let mut changed = false;
        if e.restriction.is_incoherent() && e.max != Bound::Finite(0) {
            e.max = Bound::Finite(0);
            changed = true;
        }
        if e.max == Bound::Finite(0) && !e.restriction.is_incoherent() {
            e.restriction = DescriptionGraph::incoherent();
            changed = true;
        }
        if let Some(dom) = e.restriction.root_node().dom.finite() {
            let k = dom.len() as u32;
            if e.max > Bound::Finite(k) {
                e.max = Bound::Finite(k);
                changed = true;
            }
            if e.min >= k && !e.fillers.is_superset(dom) {
                e.fillers.extend(dom.iter().cloned());
                changed = true;
            }
        }
        let count = e.fillers.len() as u32;
        if e.min < count {
            e.min = count;
            changed = true;
        }
        if e.max == Bound::Finite(count) && !e.restriction.is_incoherent() {
            let root = e.restriction.root();
            let dom = e.restriction.root_node().dom.intersect(&Dom::Finite(e.fillers.clone()));
            if dom != e.restriction.root_node().dom {
                e.restriction.nodes[root.index()].dom = dom;
                let r = std::mem::replace(&mut e.restriction, DescriptionGraph::thing());
                e.restriction = self.graph(r);
                changed = true;
            }
        }
        changed
    }
}

/// Host value a node is pinned to by a singleton dom.
fn pinned(n: &Node) -> Option<&HostValue> {
    match n.dom.finite() {
        Some(s) if s.len() == 1 => match s.iter().next() {
            Some(Individual::Host(v)) => Some(v),
            _ => None,
        },
        _ => None,
    }
}

/// Merges every pair of a-edges sharing source and attribute, and every
/// pair of nodes pinned to the same host value, through one congruence
/// closure.
fn merge_congruent(g: &mut DescriptionGraph) -> bool {
    let n = g.nodes.len();
    let mut cc = Congruence::new(n);
    for e in &g.a_edges {
        cc.edge(e.source.index(), &e.attr, e.target.index());
    }
    let mut values: BTreeMap<&HostValue, usize> = BTreeMap::new();
    for (i, node) in g.nodes.iter().enumerate() {
        if let Some(v) = pinned(node) {
            match values.get(v) {
                Some(&j) => cc.union(j, i),
                None => {
                    values.insert(v, i);
                }
            }
        }
    }
    let merges = cc.close();
    let duplicates = g
        .a_edges
        .windows(2)
        .any(|w| (w[0].source, &w[0].attr) == (w[1].source, &w[1].attr));
    if merges == 0 && !duplicates {
        return false;
    }

    // One node per class, ordered by its smallest member.
    let mut slot = vec![usize::MAX; n];
    let mut nodes: Vec<Node> = Vec::new();
    let mut index = vec![0; n];
    for (i, node) in std::mem::take(&mut g.nodes).into_iter().enumerate() {
        let c = cc.find(i);
        if slot[c] == usize::MAX {
            slot[c] = nodes.len();
            nodes.push(node);
        } else {
            nodes[slot[c]].absorb(node);
        }
        index[i] = slot[c];
    }
    let mut edges: Vec<AEdge> = Vec::with_capacity(g.a_edges.len());
    let mut old = std::mem::take(&mut g.a_edges);
    for e in &mut old {
        e.source = NodeId::new(index[e.source.index()]);
        e.target = NodeId::new(index[e.target.index()]);
    }
    old.sort_by(|x, y| (x.source, &x.attr).cmp(&(y.source, &y.attr)));
    for e in old {
        match edges.last_mut() {
            Some(last) if last.source == e.source && last.attr == e.attr => {
                debug_assert_eq!(last.target, e.target);
                last.fillers.extend(e.fillers);
            }
            _ => edges.push(e),
        }
    }
    let root = NodeId::new(index[g.root.index()]);
    *g = DescriptionGraph::from_parts(nodes, edges, root);
    true
}

/// A single merge: the last pair of a-edges sharing source and attribute,
/// else the last two nodes pinned to the same host value.
fn merge_one_pair(g: &mut DescriptionGraph) -> bool {
    let es = &g.a_edges;
    if let Some(i) = (1..es.len())
        .rev()
        .find(|&i| (es[i - 1].source, &es[i - 1].attr) == (es[i].source, &es[i].attr))
    {
        *g = g.merge_a_edges(i, i - 1);
        return true;
    }
    let mut seen: BTreeMap<HostValue, NodeId> = BTreeMap::new();
    let mut pair = None;
    for (id, node) in g.nodes() {
        if let Some(v) = pinned(node) {
            if let Some(&j) = seen.get(v) {
                pair = Some((j, id));
            } else {
                seen.insert(v.clone(), id);
            }
        }
    }
    match pair {
        Some((keep, gone)) => {
            g.merge_nodes(keep, gone);
            true
        }
        None => false,
    }
}

/// Filler steps along a-edges. `None` when the graph turns out incoherent.
fn push_fillers(g: &mut DescriptionGraph) -> Option<bool> {
    let mut changed = false;
    if g.a_edges.iter().any(|e| e.fillers.len() > 1) {
        return None;
    }
    for i in 0..g.a_edges.len() {
        let Some(f) = g.a_edges[i].fillers.iter().next().cloned() else {
            continue;
        };
        let t = &mut g.nodes[g.a_edges[i].target.index()];
        match &t.dom {
            Dom::Finite(s) if !s.contains(&f) => return None,
            Dom::Finite(s) if s.len() == 1 => {}
            _ => {
                t.dom = Dom::Finite([f].into());
                changed = true;
            }
        }
    }
    for i in 0..g.a_edges.len() {
        let t = g.a_edges[i].target.index();
        if let Some(s) = g.nodes[t].dom.finite().filter(|s| s.len() == 1) {
            let e = &mut g.a_edges[i];
            if e.fillers.is_empty() {
                e.fillers = s.clone();
                changed = true;
            } else if e.fillers != *s {
                return None;
            }
        }
    }
    Some(changed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{isomorphic, translate};
    use crate::syntax::{parse_description, parse_kb, Name};

    fn canon_in(text: &str, kb: &KnowledgeBase) -> DescriptionGraph {
        canonicalize(
            &translate(&kb.expand(&parse_description(text, kb).unwrap()).unwrap()).unwrap(),
            kb,
        )
    }

    fn canon(text: &str) -> DescriptionGraph {
        canon_in(text, &KnowledgeBase::default())
    }

    fn attrs(decl: &str) -> KnowledgeBase {
        parse_kb(decl).unwrap()
    }

    #[test]
    fn min_above_max_is_incoherent() {
        assert!(canon("and(at-least(2,r), at-most(1,r))").is_incoherent());
    }

    #[test]
    fn max_zero_marks_the_restriction() {
        let g = canon("and(at-most(0,r), all(r, GAME))");
        assert!(!g.is_incoherent());
        let e = g.root_node().r_edge("r").unwrap();
        assert_eq!(e.max, Bound::Finite(0));
        assert!(e.restriction.is_incoherent());
    }

    #[test]
    fn chain_collapses_to_two_nodes() {
        let n = 5;
        let mut parts: Vec<String> = (1..=n).map(|i| format!("same-as((a{i}),(b{i}))")).collect();
        parts.extend((1..n).map(|i| format!("same-as((a{i}),(a{}))", i + 1)));
        let g = canon(&format!("and({})", parts.join(",")));
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.a_edges().len(), 2 * n);
    }

    #[test]
    fn two_attribute_fillers_clash() {
        let kb = attrs("attribute coach");
        assert!(canon_in("and(fills(coach, Pat), fills(coach, Kim))", &kb).is_incoherent());
        assert!(!canon_in("and(fills(coach, Pat), fills(coach, Pat))", &kb).is_incoherent());
    }

    #[test]
    fn enough_fillers_enumerate_the_dom() {
        let g = canon("and(all(r, one-of(P,Q)), at-least(2,r))");
        let e = g.root_node().r_edge("r").unwrap();
        let pq: BTreeSet<_> = [Individual::classic("P"), Individual::classic("Q")].into();
        assert_eq!(e.fillers, pq);
        assert_eq!((e.min, e.max), (2, Bound::Finite(2)));
    }

    #[test]
    fn self_referential_collapse() {
        let g = canon("and(same-as((friend),(friend,friend)), all(friend, TALL))");
        assert_eq!(g.node_count(), 2);
        let x = g.a_edge(g.root(), "friend").unwrap().target;
        assert_ne!(x, g.root());
        assert!(g.node(x).has(&Atom::Concept(Name::new("TALL"))));
        assert_eq!(g.a_edge(x, "friend").unwrap().target, x);
    }

    #[test]
    fn merged_r_edges() {
        let a = REdge::new(Name::new("r"), 1, Bound::Infinite, DescriptionGraph::thing());
        let mut b = REdge::new(
            Name::new("r"),
            0,
            Bound::Finite(3),
            DescriptionGraph::of_atom(Atom::Concept(Name::new("GAME"))),
        );
        b.fillers.insert(Individual::classic("Q"));
        let m = merge_r_edges(&a, &b);
        assert_eq!((m.min, m.max), (1, Bound::Finite(3)));
        assert_eq!(m.restriction.node_count(), 1);
        assert_eq!(m.fillers.len(), 1);
    }

    #[test]
    fn host_atoms_close_upwards_and_clash() {
        let g = canon("INTEGER");
        let atoms: Vec<String> = g.root_node().atoms.iter().map(|a| a.to_string()).collect();
        assert_eq!(atoms, ["HOST-THING", "COMPLEX", "INTEGER", "NUMBER", "REAL"]);
        assert!(canon("and(INTEGER, STRING)").is_incoherent());
        assert!(canon("and(INTEGER, GAME)").is_incoherent());
        assert!(canon("and(one-of(1, \"x\"), INTEGER)").root_node().dom.len() == Some(1));
        assert!(canon("and(one-of(\"x\"), INTEGER)").is_incoherent());
    }

    #[test]
    fn host_dom_types_its_node() {
        let g = canon("one-of(1, 2)");
        assert!(g.root_node().has(&Atom::Host(Name::new("INTEGER"))));
        let g = canon("one-of(1, 2.5)");
        assert!(g.root_node().has(&Atom::Host(Name::new("REAL"))));
        assert!(!g.root_node().has(&Atom::Host(Name::new("INTEGER"))));
    }

    #[test]
    fn attribute_fillers_pin_the_target() {
        let kb = attrs("attribute a\nattribute b");
        let g = canon_in("and(fills(a, 1), fills(b, 1))", &kb);
        assert_eq!(g.node_count(), 2);
        let g = canon_in("and(fills(a, P), fills(b, P))", &kb);
        assert_eq!(g.node_count(), 3);
        let g = canon_in("and(fills(a, P), all(a, one-of(P, Q)))", &kb);
        let t = g.a_edge(g.root(), "a").unwrap().target;
        assert_eq!(g.node(t).dom.len(), Some(1));
        assert!(canon_in("and(fills(a, P), all(a, one-of(Q)))", &kb).is_incoherent());
        let g = canon_in("all(a, one-of(P))", &kb);
        assert_eq!(g.a_edges()[0].fillers.len(), 1);
    }

    #[test]
    fn role_fillers_must_fit_the_restriction() {
        assert!(canon("and(fills(r, 1), all(r, STRING))").is_incoherent());
        assert!(canon("and(fills(r, P), all(r, INTEGER))").is_incoherent());
        assert!(canon("and(fills(r, P), all(r, one-of(Q)))").is_incoherent());
        assert!(!canon("and(fills(r, 1), all(r, NUMBER))").is_incoherent());
    }

    #[test]
    fn filler_count_bounds() {
        let g = canon("and(fills(r, P), fills(r, Q))");
        assert_eq!(g.root_node().r_edge("r").unwrap().min, 2);
        assert!(canon("and(fills(r, P), fills(r, Q), at-most(1, r))").is_incoherent());
        let g = canon("and(fills(r, P), at-most(1, r))");
        let e = g.root_node().r_edge("r").unwrap();
        assert_eq!(e.restriction.root_node().dom.len(), Some(1));
    }

    #[test]
    fn disjoint_atoms_clash() {
        let kb = parse_kb("disjoint MALE FEMALE").unwrap();
        assert!(canon_in("and(MALE, FEMALE)", &kb).is_incoherent());
        assert!(!canon_in("and(MALE, PERSON)", &kb).is_incoherent());
        let g = canon_in("all(r, and(MALE, FEMALE))", &kb);
        assert_eq!(g.root_node().r_edge("r").unwrap().max, Bound::Finite(0));
    }

    #[test]
    fn schedules_agree_and_are_idempotent() {
        let kb = attrs("attribute a\nattribute b\nattribute c");
        for text in [
            "and(same-as((a),(b)), same-as((b),(c)), all(a, X), all(c, Y))",
            "and(same-as((a,b),(c)), same-as((a),(c,b)), all(r, A), all(r, at-least(1, s)), at-most(3, r))",
            "and(fills(a, 1), fills(c, 1), all(b, one-of(1, 2)), same-as((b),(c)))",
        ] {
            let raw = translate(&parse_description(text, &kb).unwrap()).unwrap();
            let g1 = canonicalize(&raw, &kb);
            let g2 = canonicalize_with(&raw, &kb, Schedule::Pairwise);
            assert!(isomorphic(&g1, &g2), "{text}");
            assert!(isomorphic(&canonicalize(&g1, &kb), &g1), "{text}");
        }
    }
}
