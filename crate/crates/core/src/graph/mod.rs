//! Description graphs.
//!
//! A graph is an island of nodes joined by attribute edges (a-edges), with a
//! distinguished root. Each node carries atoms, a bag of role edges (r-edges)
//! and a `dom`. Every r-edge owns a nested restriction graph; nested graphs
//! never share nodes with their parents, so role edges are cut-edges and a
//! graph is a tree of islands.

mod dump;
mod translate;

use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{Individual, Name, Realm};

pub use dump::{dump_graph, graph_to_json, isomorphic};
pub use translate::translate;

/// A node label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Thing,
    ClassicThing,
    HostThing,
    Nothing,
    /// Atomic classic concept, including atoms minted for primitives.
    Concept(Name),
    /// Host type from the host lattice.
    Host(Name),
    /// Opaque test concept keyed by function name and realm.
    Test(Name, Realm),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Thing => f.write_str("THING"),
            Atom::ClassicThing => f.write_str("CLASSIC-THING"),
            Atom::HostThing => f.write_str("HOST-THING"),
            Atom::Nothing => f.write_str("NOTHING"),
            Atom::Concept(n) | Atom::Host(n) => write!(f, "{n}"),
            Atom::Test(fun, realm) => write!(f, "test({fun},{realm})"),
        }
    }
}

/// Upper bound of an r-edge. `Infinite` orders above every finite bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    Finite(u32),
    Infinite,
}

impl Bound {
    pub fn finite(self) -> Option<u32> {
        match self {
            Bound::Finite(n) => Some(n),
            Bound::Infinite => None,
        }
    }

    /// Whether `n` lies at or below the bound.
    pub fn admits(self, n: u32) -> bool {
        Bound::Finite(n) <= self
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(n) => write!(f, "{n}"),
            Bound::Infinite => f.write_str("inf"),
        }
    }
}

/// The admissible individuals of a node.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dom {
    Universal,
    Finite(BTreeSet<Individual>),
}

impl Dom {
    pub fn finite(&self) -> Option<&BTreeSet<Individual>> {
        match self {
            Dom::Universal => None,
            Dom::Finite(s) => Some(s),
        }
    }

    /// Cardinality, `None` for the universal marker.
    pub fn len(&self) -> Option<usize> {
        self.finite().map(BTreeSet::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn contains(&self, l: &Individual) -> bool {
        match self {
            Dom::Universal => true,
            Dom::Finite(s) => s.contains(l),
        }
    }

    pub fn includes(&self, ls: &BTreeSet<Individual>) -> bool {
        match self {
            Dom::Universal => true,
            Dom::Finite(s) => ls.is_subset(s),
        }
    }

    /// Intersection, with the universal marker as identity.
    pub fn intersect(&self, other: &Dom) -> Dom {
        match (self, other) {
            (Dom::Universal, d) | (d, Dom::Universal) => d.clone(),
            (Dom::Finite(a), Dom::Finite(b)) => Dom::Finite(a.intersection(b).cloned().collect()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn new(i: usize) -> Self {
        NodeId(i as u32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct REdge {
    pub role: Name,
    pub min: u32,
    pub max: Bound,
    pub restriction: DescriptionGraph,
    pub fillers: BTreeSet<Individual>,
}

impl REdge {
    pub fn new(role: Name, min: u32, max: Bound, restriction: DescriptionGraph) -> Self {
        REdge {
            role,
            min,
            max,
            restriction,
            fillers: BTreeSet::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AEdge {
    pub source: NodeId,
    pub target: NodeId,
    pub attr: Name,
    pub fillers: BTreeSet<Individual>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub atoms: BTreeSet<Atom>,
    pub r_edges: Vec<REdge>,
    pub dom: Dom,
}

impl Node {
    pub fn with_atoms(atoms: impl IntoIterator<Item = Atom>) -> Self {
        Node {
            atoms: atoms.into_iter().collect(),
            r_edges: Vec::new(),
            dom: Dom::Universal,
        }
    }

    pub fn incoherent() -> Self {
        Node::with_atoms([Atom::Nothing])
    }

    pub fn is_incoherent(&self) -> bool {
        self.atoms.contains(&Atom::Nothing)
    }

    pub fn has(&self, a: &Atom) -> bool {
        self.atoms.contains(a)
    }

    /// The r-edge for `role`. Binary search, so the r-edges must be sorted
    /// by role, as they are in canonical graphs.
    pub fn r_edge(&self, role: &str) -> Option<&REdge> {
        self.r_edges
            .binary_search_by(|e| e.role.as_str().cmp(role))
            .ok()
            .map(|i| &self.r_edges[i])
    }

    /// Node merge: atoms united, r-edges bag-united, doms intersected.
    pub fn merge(&self, other: &Node) -> Node {
        let mut n = self.clone();
        n.absorb(other.clone());
        n
    }

    pub(crate) fn absorb(&mut self, other: Node) {
        self.atoms.extend(other.atoms);
        self.r_edges.extend(other.r_edges);
        self.dom = self.dom.intersect(&other.dom);
    }

    /// Number of labels, edges and individuals, counted recursively.
    pub fn size(&self) -> usize {
        let dom = self.dom.len().unwrap_or(0);
        self.atoms.len()
            + dom
            + self
                .r_edges
                .iter()
                .map(|e| 3 + e.fillers.len() + e.restriction.size())
                .sum::<usize>()
    }
}

/// A rooted description graph. Nodes live in an arena indexed by
/// [`NodeId`]; a-edges are kept sorted by source and attribute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescriptionGraph {
    pub(crate) nodes: Vec<Node>,
    pub(crate) a_edges: Vec<AEdge>,
    pub(crate) root: NodeId,
}

impl DescriptionGraph {
    /// One node, no a-edges.
    pub fn single(node: Node) -> Self {
        DescriptionGraph {
            nodes: vec![node],
            a_edges: Vec::new(),
            root: NodeId(0),
        }
    }

    pub fn of_atom(a: Atom) -> Self {
        DescriptionGraph::single(Node::with_atoms([a]))
    }

    /// `G_THING`.
    pub fn thing() -> Self {
        DescriptionGraph::of_atom(Atom::Thing)
    }

    pub fn incoherent() -> Self {
        DescriptionGraph::single(Node::incoherent())
    }

    /// Builds a graph from parts; a-edges are sorted on the way in.
    pub fn from_parts(nodes: Vec<Node>, mut a_edges: Vec<AEdge>, root: NodeId) -> Self {
        assert!(root.index() < nodes.len(), "root out of range");
        for e in &a_edges {
            assert!(
                e.source.index() < nodes.len() && e.target.index() < nodes.len(),
                "a-edge endpoint out of range"
            );
        }
        a_edges.sort_by(|x, y| (x.source, &x.attr).cmp(&(y.source, &y.attr)));
        DescriptionGraph { nodes, a_edges, root }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn root_node(&self) -> &Node {
        &self.nodes[self.root.index()]
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId::new(i), n))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn a_edges(&self) -> &[AEdge] {
        &self.a_edges
    }

    /// Marked incoherent: the root carries `NOTHING`.
    pub fn is_incoherent(&self) -> bool {
        self.root_node().is_incoherent()
    }

    /// The a-edge leaving `source` labelled `attr`, by binary search. In a
    /// canonical graph there is at most one.
    pub fn a_edge(&self, source: NodeId, attr: &str) -> Option<&AEdge> {
        let i = self
            .a_edges
            .partition_point(|e| (e.source, e.attr.as_str()) < (source, attr));
        self.a_edges
            .get(i)
            .filter(|e| e.source == source && e.attr.as_str() == attr)
    }

    /// Follows a chain of attributes from `from`; `None` if some edge is
    /// missing.
    pub fn follow<'a>(&self, from: NodeId, path: impl IntoIterator<Item = &'a Name>) -> Option<NodeId> {
        path.into_iter()
            .try_fold(from, |n, a| self.a_edge(n, a).map(|e| e.target))
    }

    /// Total size: nodes, labels, edges and nested graphs.
    pub fn size(&self) -> usize {
        self.nodes.iter().map(|n| 1 + n.size()).sum::<usize>()
            + self.a_edges.iter().map(|e| 1 + e.fillers.len()).sum::<usize>()
    }

    /// Number of islands, counting this one and every nested restriction.
    pub fn island_count(&self) -> usize {
        1 + self
            .nodes
            .iter()
            .flat_map(|n| &n.r_edges)
            .map(|e| e.restriction.island_count())
            .sum::<usize>()
    }

    /// Graph merge: non-root nodes of both graphs side by side, plus a new
    /// root that is the merge of the two roots. Edges touching either old
    /// root are redirected to the new one.
    pub fn merge(&self, other: &DescriptionGraph) -> DescriptionGraph {
        let mut nodes = vec![self.root_node().merge(other.root_node())];
        let map = |g: &DescriptionGraph, nodes: &mut Vec<Node>| -> Vec<NodeId> {
            g.nodes
                .iter()
                .enumerate()
                .map(|(i, n)| {
                    if i == g.root.index() {
                        NodeId(0)
                    } else {
                        nodes.push(n.clone());
                        NodeId::new(nodes.len() - 1)
                    }
                })
                .collect()
        };
        let m1 = map(self, &mut nodes);
        let m2 = map(other, &mut nodes);
        let edges = self
            .a_edges
            .iter()
            .map(|e| (e, &m1))
            .chain(other.a_edges.iter().map(|e| (e, &m2)))
            .map(|(e, m)| AEdge {
                source: m[e.source.index()],
                target: m[e.target.index()],
                attr: e.attr.clone(),
                fillers: e.fillers.clone(),
            })
            .collect();
        DescriptionGraph::from_parts(nodes, edges, NodeId(0))
    }

    /// Merges two a-edges with the same source and attribute: their targets
    /// become one node, which replaces both in every a-edge, and the filler
    /// sets are united. Indices refer to [`Self::a_edges`].
    pub fn merge_a_edges(&self, e1: usize, e2: usize) -> DescriptionGraph {
        let (a, b) = (&self.a_edges[e1], &self.a_edges[e2]);
        assert!(a.source == b.source && a.attr == b.attr, "a-edges are not mergeable");
        let (n1, n2) = (a.target, b.target);
        let mut fillers = a.fillers.clone();
        fillers.extend(b.fillers.iter().cloned());
        let mut g = self.clone();
        g.a_edges[e1].fillers = fillers;
        g.a_edges.remove(e2);
        g.merge_nodes(n1, n2);
        g
    }

    /// Folds node `n2` into `n1` and redirects every a-edge touching `n2`.
    /// Later node indices shift down by one.
    pub(crate) fn merge_nodes(&mut self, n1: NodeId, n2: NodeId) {
        if n1 == n2 {
            return;
        }
        let gone = self.nodes.remove(n2.index());
        let shift = |i: NodeId| {
            let i = if i == n2 { n1 } else { i };
            NodeId::new(if i.index() > n2.index() {
                i.index() - 1
            } else {
                i.index()
            })
        };
        self.nodes[shift(n1).index()].absorb(gone);
        let edges = std::mem::take(&mut self.a_edges)
            .into_iter()
            .map(|e| AEdge {
                source: shift(e.source),
                target: shift(e.target),
                ..e
            })
            .collect();
        *self = DescriptionGraph::from_parts(std::mem::take(&mut self.nodes), edges, shift(self.root));
    }

    /// Keeps only nodes reachable from the root along a-edges, renumbered
    /// in breadth-first order.
    pub(crate) fn compact(&mut self) {
        let order = self.bfs_order();
        if order.len() == self.nodes.len() && order.iter().enumerate().all(|(i, n)| n.index() == i) {
            return;
        }
        let mut map = vec![None; self.nodes.len()];
        for (i, n) in order.iter().enumerate() {
            map[n.index()] = Some(NodeId::new(i));
        }
        let mut old: Vec<Option<Node>> = std::mem::take(&mut self.nodes).into_iter().map(Some).collect();
        self.nodes = order.iter().map(|n| old[n.index()].take().unwrap()).collect();
        let edges = std::mem::take(&mut self.a_edges)
            .into_iter()
            .filter_map(|e| {
                Some(AEdge {
                    source: map[e.source.index()]?,
                    target: map[e.target.index()]?,
                    ..e
                })
            })
            .collect();
        *self = DescriptionGraph::from_parts(std::mem::take(&mut self.nodes), edges, NodeId(0));
    }

    /// Nodes in breadth-first order from the root, following a-edges in
    /// attribute order; unreachable nodes are left out.
    pub(crate) fn bfs_order(&self) -> Vec<NodeId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = vec![self.root];
        seen[self.root.index()] = true;
        let mut i = 0;
        while i < order.len() {
            let n = order[i];
            i += 1;
            let start = self.a_edges.partition_point(|e| e.source < n);
            for e in self.a_edges[start..].iter().take_while(|e| e.source == n) {
                if !seen[e.target.index()] {
                    seen[e.target.index()] = true;
                    order.push(e.target);
                }
            }
        }
        order
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(atoms: &[&str]) -> Node {
        Node::with_atoms(atoms.iter().map(|a| Atom::Concept(Name::new(a))))
    }

    #[test]
    fn node_merge_unions_atoms() {
        let a = Node::with_atoms([Atom::ClassicThing]);
        let b = node(&["GAME"]);
        let m = a.merge(&b);
        assert_eq!(
            m.atoms,
            [Atom::ClassicThing, Atom::Concept(Name::new("GAME"))]
                .into_iter()
                .collect()
        );
        assert_eq!(m.dom, Dom::Universal);
    }

    #[test]
    fn node_merge_intersects_doms() {
        let dom = |xs: &[&str]| Dom::Finite(xs.iter().map(|x| Individual::classic(x)).collect());
        let mut a = Node::with_atoms([Atom::ClassicThing]);
        a.dom = dom(&["P", "Q"]);
        let mut b = Node::with_atoms([Atom::ClassicThing]);
        b.dom = dom(&["Q", "R"]);
        assert_eq!(a.merge(&b).dom, dom(&["Q"]));
        assert_eq!(a.merge(&Node::with_atoms([Atom::Thing])).dom, dom(&["P", "Q"]));
    }

    #[test]
    fn node_merge_keeps_duplicate_r_edges() {
        let mut a = Node::with_atoms([Atom::ClassicThing]);
        a.r_edges.push(REdge::new(
            Name::new("r"),
            1,
            Bound::Infinite,
            DescriptionGraph::thing(),
        ));
        let mut b = a.clone();
        b.r_edges[0].min = 2;
        let m = a.merge(&b);
        assert_eq!(m.r_edges.len(), 2);
    }

    #[test]
    fn graph_merge_counts_nodes() {
        let mut g1 = DescriptionGraph::from_parts(
            vec![Node::with_atoms([Atom::ClassicThing]), node(&["X"])],
            vec![AEdge {
                source: NodeId(0),
                target: NodeId(1),
                attr: Name::new("a"),
                fillers: BTreeSet::new(),
            }],
            NodeId(0),
        );
        let g2 = g1.clone();
        let m = g1.merge(&g2);
        assert_eq!(m.node_count(), g1.node_count() + g2.node_count() - 1);
        assert_eq!(m.a_edges().len(), 2);
        assert!(m.a_edges().iter().all(|e| e.source == m.root()));
        g1.compact();
        assert_eq!(g1.node_count(), 2);
        let t = DescriptionGraph::thing().merge(&DescriptionGraph::thing());
        assert_eq!(t.node_count(), 1);
        assert_eq!(t.root_node().atoms.len(), 1);
    }

    #[test]
    fn a_edge_merge_collapses_targets() {
        let e = |s: u32, t: u32| AEdge {
            source: NodeId(s),
            target: NodeId(t),
            attr: Name::new("f"),
            fillers: BTreeSet::new(),
        };
        let g = DescriptionGraph::from_parts(
            vec![Node::with_atoms([Atom::ClassicThing]), node(&["X"]), node(&["Y"])],
            vec![e(0, 1), e(0, 2), e(2, 2)],
            NodeId(0),
        );
        let m = g.merge_a_edges(0, 1);
        assert_eq!(m.node_count(), 2);
        assert_eq!(m.a_edges().len(), 2);
        let t = m.a_edge(m.root(), "f").unwrap().target;
        assert_eq!(m.node(t).atoms.len(), 2);
        assert!(m.a_edges().iter().any(|e| e.source == t && e.target == t));
    }

    #[test]
    fn bound_order() {
        assert!(Bound::Finite(u32::MAX) < Bound::Infinite);
        assert!(Bound::Infinite.admits(7));
        assert!(!Bound::Finite(2).admits(3));
    }
}
