//! Description → graph translation.
//!
//! Conjunction merges the roots of the conjunct graphs. Instead of copying
//! whole graphs at every `and`, the builder keeps one arena per island and
//! folds the root of each later conjunct into the first root, so the
//! translation stays linear in the size of the description.

use std::collections::BTreeSet;

use super::{AEdge, Atom, Bound, DescriptionGraph, Dom, Node, NodeId, REdge};
use crate::error::{Error, Result};
use crate::syntax::{Description, Individual, Name, Realm};

/// Translates an expanded description (no named references or primitives).
pub fn translate(d: &Description) -> Result<DescriptionGraph> {
    let mut b = Builder::default();
    let root = b.build(d)?;
    Ok(b.finish(root))
}

#[derive(Default)]
struct Builder {
    nodes: Vec<Node>,
    /// Merged nodes point at the node that absorbed them.
    alias: Vec<usize>,
    edges: Vec<(usize, usize, Name, BTreeSet<Individual>)>,
}

fn realm_thing(l: &Individual) -> Atom {
    match l.realm() {
        Realm::Classic => Atom::ClassicThing,
        Realm::Host => Atom::HostThing,
    }
}

impl Builder {
    fn add(&mut self, node: Node) -> usize {
        self.nodes.push(node);
        self.alias.push(self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn atom(&mut self, a: Atom) -> usize {
        self.add(Node::with_atoms([a]))
    }

    fn with_edge(&mut self, edge: REdge) -> usize {
        let mut n = Node::with_atoms([Atom::ClassicThing]);
        n.r_edges.push(edge);
        self.add(n)
    }

    fn find(&self, mut i: usize) -> usize {
        while self.alias[i] != i {
            i = self.alias[i];
        }
        i
    }

    fn build(&mut self, d: &Description) -> Result<usize> {
        Ok(match d {
            Description::Thing => self.atom(Atom::Thing),
            Description::ClassicThing => self.atom(Atom::ClassicThing),
            Description::HostThing => self.atom(Atom::HostThing),
            Description::Nothing => self.atom(Atom::Nothing),
            Description::Concept(n) => self.atom(Atom::Concept(n.clone())),
            Description::HostConcept(n) => self.atom(Atom::Host(n.clone())),
            Description::Test(f, realm) => {
                let thing = match realm {
                    Realm::Classic => Atom::ClassicThing,
                    Realm::Host => Atom::HostThing,
                };
                self.add(Node::with_atoms([Atom::Test(f.clone(), *realm), thing]))
            }
            Description::And(ds) => {
                let root = self.build(&ds[0])?;
                for d in &ds[1..] {
                    let other = self.build(d)?;
                    let node = std::mem::replace(&mut self.nodes[other], Node::with_atoms([]));
                    self.nodes[root].absorb(node);
                    self.alias[other] = root;
                }
                root
            }
            Description::AtLeast(n, r) => {
                self.with_edge(REdge::new(r.clone(), *n, Bound::Infinite, DescriptionGraph::thing()))
            }
            Description::AtMost(n, r) => {
                self.with_edge(REdge::new(r.clone(), 0, Bound::Finite(*n), DescriptionGraph::thing()))
            }
            Description::AllRole(r, c) => self.with_edge(REdge::new(r.clone(), 0, Bound::Infinite, translate(c)?)),
            Description::AllAttr(a, c) => {
                let inner = self.build(c)?;
                let t = self.atom(Atom::ClassicThing);
                self.edges.push((t, inner, a.clone(), BTreeSet::new()));
                t
            }
            Description::SameAs(a, b) => {
                let r = self.atom(Atom::ClassicThing);
                let e = self.atom(Atom::Thing);
                self.path(r, e, a);
                self.path(r, e, b);
                r
            }
            Description::FillsRole(r, l) => {
                let mut edge = REdge::new(r.clone(), 0, Bound::Infinite, DescriptionGraph::thing());
                edge.fillers.insert(l.clone());
                self.with_edge(edge)
            }
            Description::FillsAttr(a, l) => {
                let src = self.atom(Atom::ClassicThing);
                let dst = self.atom(realm_thing(l));
                self.edges
                    .push((src, dst, a.clone(), [l.clone()].into_iter().collect()));
                src
            }
            Description::OneOf(ls) => {
                let mut n = Node::with_atoms([realm_thing(&ls[0])]);
                n.dom = Dom::Finite(ls.iter().cloned().collect());
                self.add(n)
            }
            Description::Named(n) => return Err(Error::NotExpanded(n.to_string())),
            Description::Primitive(..) => return Err(Error::NotExpanded(d.to_string())),
        })
    }

    /// A disjoint path `from -a1-> x1 -a2-> ... -an-> to` through fresh
    /// CLASSIC-THING nodes.
    fn path(&mut self, from: usize, to: usize, attrs: &[Name]) {
        let mut cur = from;
        for (i, a) in attrs.iter().enumerate() {
            let next = if i + 1 == attrs.len() {
                to
            } else {
                self.atom(Atom::ClassicThing)
            };
            self.edges.push((cur, next, a.clone(), BTreeSet::new()));
            cur = next;
        }
    }

    fn finish(self, root: usize) -> DescriptionGraph {
        let mut index = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        let root = self.find(root);
        index[root] = 0;
        let mut live = vec![root];
        live.extend((0..self.nodes.len()).filter(|&i| i != root && self.alias[i] == i));
        for (k, &i) in live.iter().enumerate() {
            index[i] = k;
        }
        let mut old: Vec<Option<Node>> = self.nodes.into_iter().map(Some).collect();
        for &i in &live {
            nodes.push(old[i].take().unwrap());
        }
        let find = |mut i: usize| {
            while self.alias[i] != i {
                i = self.alias[i];
            }
            i
        };
        let edges = self
            .edges
            .into_iter()
            .map(|(s, t, attr, fillers)| AEdge {
                source: NodeId::new(index[find(s)]),
                target: NodeId::new(index[find(t)]),
                attr,
                fillers,
            })
            .collect();
        DescriptionGraph::from_parts(nodes, edges, NodeId(0))
    }
}
