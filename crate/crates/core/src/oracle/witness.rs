//! Graphical worlds: finite worlds built from a canonical graph so that a
//! distinguished element lies in the graph's extension.
//!
//! Every node gets a fresh element in exactly the extensions of its atoms.
//! A node with a finite dom puts its element into one dom individual, or
//! picks one dom value if it is a host node. Each r-edge gets between `min`
//! and `max` filler worlds, built recursively, with one filler per required
//! filler individual. Attributes the graph leaves open point at dedicated
//! host sinks.
//!
//! Given a steering description `D` that does not subsume the graph, the
//! free choices above (filler counts, realms, dom picks, extra fillers) are
//! made so that the distinguished element falls outside `D`. The result is
//! always checked against the evaluator before it is returned.

use std::collections::{BTreeMap, BTreeSet};

use super::eval::Evaluator;
use super::{Elem, Interpretation, Vocabulary};
use crate::error::{Error, Result};
use crate::graph::{Atom, DescriptionGraph, Dom, Node, NodeId};
use crate::kb::KnowledgeBase;
use crate::subsume::{subsumes_at, subsumes_graph, thing_equivalent};
use crate::syntax::{Description, Individual, Name, Realm, RealmHint};

/// A world together with its distinguished element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphicalWorld {
    pub world: Interpretation,
    pub element: Elem,
}

/// Builds a graphical world for the canonical graph `g`. With a steering
/// description, the distinguished element is also outside its extension.
pub fn construct_graphical_world(
    g: &DescriptionGraph,
    steer: Option<&Description>,
    kb: &KnowledgeBase,
) -> Result<GraphicalWorld> {
    if g.is_incoherent() {
        return Err(Error::Incoherent);
    }
    let d = steer.map(|d| kb.expand(d)).transpose()?;
    let mut vocab = Vocabulary::new().with_kb(kb).with_graph(g);
    let plan = match &d {
        Some(d) => {
            if subsumes_graph(d, g) {
                return Err(Error::Subsumed);
            }
            vocab.add_description(d);
            let mut p = Plan::default();
            plan(d, g, g.root(), &mut p);
            Some(p)
        }
        None => None,
    };
    let mut last = String::from("no variant tried");
    for policy in Policy::VARIANTS {
        let mut b = Builder {
            w: Interpretation::new(kb.lattice().clone()),
            policy,
        };
        let element = match b.island(g, plan.as_ref(), None) {
            Ok(e) => e,
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        let mut w = b.w;
        for r in &vocab.roles {
            w.declare_role(r);
        }
        for a in &vocab.attributes {
            w.declare_attr(a);
        }
        for l in &vocab.individuals {
            w.declare_individual(l);
        }
        for v in &vocab.values {
            w.add_value(v);
        }
        w.complete();
        let ev = Evaluator::new(&w);
        if ev.witness(g, element)?.is_none() {
            last = format!("element {element} is not in the graph under {policy:?}");
            continue;
        }
        if let Some(d) = &d {
            if ev.description(d)?.contains(&element) {
                last = format!("element {element} is still in the description under {policy:?}");
                continue;
            }
        }
        return Ok(GraphicalWorld { world: w, element });
    }
    Err(Error::Construction(last))
}

/// Free choices not fixed by a plan.
#[derive(Clone, Copy, Debug)]
struct Policy {
    /// Realm of elements for nodes whose only atom is THING.
    thing_realm: Realm,
    /// Unsteered r-edges get `min + 1` fillers, capped at `max`, or `min`.
    above_min: bool,
}

impl Policy {
    const VARIANTS: [Policy; 4] = [
        Policy {
            thing_realm: Realm::Classic,
            above_min: true,
        },
        Policy {
            thing_realm: Realm::Host,
            above_min: true,
        },
        Policy {
            thing_realm: Realm::Classic,
            above_min: false,
        },
        Policy {
            thing_realm: Realm::Host,
            above_min: false,
        },
    ];
}

/// Steering directives for the nodes of one island.
#[derive(Clone, Debug, Default)]
struct Plan {
    nodes: BTreeMap<NodeId, NodeSteer>,
}

#[derive(Clone, Debug, Default)]
struct NodeSteer {
    realm: Option<Realm>,
    /// Dom choices to stay away from.
    avoid: BTreeSet<Individual>,
    /// A host type the chosen dom value must not have.
    avoid_type: Option<Name>,
    roles: BTreeMap<Name, RoleSteer>,
    /// Realm for the value of an attribute with no a-edge.
    attrs: BTreeMap<Name, Realm>,
}

impl NodeSteer {
    fn accepts(&self, l: &Individual, w: &Interpretation) -> bool {
        if self.avoid.contains(l) {
            return false;
        }
        match (&self.avoid_type, l) {
            (Some(h), Individual::Host(v)) => !w.lattice().value_has_type(v, h),
            _ => true,
        }
    }
}

#[derive(Clone, Debug, Default)]
struct RoleSteer {
    count: Option<u32>,
    /// A filler individual no filler may belong to.
    avoid: Option<Individual>,
    /// Plan for one filler of the restriction graph.
    steered: Option<Box<Plan>>,
    /// One extra filler of this realm, for roles without an r-edge.
    extra: Option<Realm>,
}

fn at(p: &mut Plan, id: NodeId) -> &mut NodeSteer {
    p.nodes.entry(id).or_default()
}

fn opposite(h: RealmHint) -> Realm {
    match h {
        RealmHint::Classic => Realm::Host,
        _ => Realm::Classic,
    }
}

/// Records how to keep the element of node `id` out of `d`. Assumes `d`
/// does not subsume the graph rooted at `id`.
fn plan(d: &Description, g: &DescriptionGraph, id: NodeId, p: &mut Plan) {
    let n = g.node(id);
    let classic = n.has(&Atom::ClassicThing);
    let host = n.has(&Atom::HostThing);
    let realm = d.realm();
    if !classic && !host {
        // Only THING: the wrong realm is enough.
        if matches!(realm, RealmHint::Classic | RealmHint::Host) {
            at(p, id).realm = Some(opposite(realm));
            return;
        }
    }
    if (host && realm == RealmHint::Classic) || (classic && realm == RealmHint::Host) {
        return;
    }
    match d {
        Description::And(ds) => {
            if let Some(c) = ds.iter().find(|c| !subsumes_at(c, g, id, true)) {
                plan(c, g, id, p);
            }
        }
        Description::HostConcept(h) => at(p, id).avoid_type = Some(h.clone()),
        Description::OneOf(ls) => at(p, id).avoid.extend(ls.iter().cloned()),
        Description::AtLeast(k, r) => {
            if let Some(e) = n.r_edge(r) {
                let count = (k - 1).min(e.max.finite().unwrap_or(u32::MAX));
                at(p, id).roles.entry(r.clone()).or_default().count = Some(count);
            }
        }
        Description::AtMost(k, r) => {
            let count = n.r_edge(r).map_or(k + 1, |e| e.min.max(k + 1));
            at(p, id).roles.entry(r.clone()).or_default().count = Some(count);
        }
        Description::AllRole(r, c) => {
            if thing_equivalent(c) {
                return;
            }
            match n.r_edge(r) {
                Some(e) => {
                    let mut sub = Plan::default();
                    plan(c, &e.restriction, e.restriction.root(), &mut sub);
                    at(p, id).roles.entry(r.clone()).or_default().steered = Some(Box::new(sub));
                }
                None => at(p, id).roles.entry(r.clone()).or_default().extra = Some(opposite(c.realm())),
            }
        }
        Description::AllAttr(a, c) => {
            if thing_equivalent(c) {
                return;
            }
            match g.a_edge(id, a) {
                Some(e) => plan(c, g, e.target, p),
                None => {
                    at(p, id).attrs.insert(a.clone(), opposite(c.realm()));
                }
            }
        }
        Description::SameAs(a, b) => {
            let (pa, pb) = (&a[..a.len() - 1], &b[..b.len() - 1]);
            if let (Some(x), Some(y)) = (g.follow(id, pa), g.follow(id, pb)) {
                let end = g.node(x);
                if x == y && !end.has(&Atom::ClassicThing) && !end.has(&Atom::HostThing) {
                    at(p, x).realm = Some(Realm::Host);
                }
            }
        }
        Description::FillsRole(r, l) => {
            if let Some(e) = n.r_edge(r) {
                let s = at(p, id).roles.entry(r.clone()).or_default();
                s.count = Some(e.min);
                s.avoid = Some(l.clone());
            }
        }
        Description::FillsAttr(a, l) => {
            if let Some(e) = g.a_edge(id, a) {
                at(p, e.target).avoid.insert(l.clone());
            }
        }
        // Atoms missing from the node stay out of the default element.
        _ => {}
    }
}

struct Builder {
    w: Interpretation,
    policy: Policy,
}

impl Builder {
    /// Builds one island and returns the element of its root. `pin`
    /// forces the root into the extension of an individual.
    fn island(&mut self, g: &DescriptionGraph, plan: Option<&Plan>, pin: Option<&Individual>) -> Result<Elem> {
        let steer = |id: NodeId| plan.and_then(|p| p.nodes.get(&id));
        // Host nodes with small doms choose first, so that distinct nodes
        // get distinct values where they can.
        let mut order: Vec<NodeId> = g.nodes().map(|(id, _)| id).collect();
        order.sort_by_key(|&id| {
            let n = g.node(id);
            (!n.has(&Atom::HostThing), n.dom.len().unwrap_or(usize::MAX), id)
        });
        let mut used = BTreeSet::new();
        let mut elems = vec![0; g.node_count()];
        for id in order {
            let pin = if id == g.root() { pin } else { None };
            elems[id.index()] = self.element(g.node(id), steer(id), pin, &mut used)?;
        }
        for e in g.a_edges() {
            self.w
                .set_attr(&e.attr, elems[e.source.index()], elems[e.target.index()]);
        }
        for (id, n) in g.nodes() {
            let e = elems[id.index()];
            if !self.w.is_classic(e) {
                continue;
            }
            self.fillers(n, e, steer(id))?;
            if let Some(s) = steer(id) {
                for (a, realm) in &s.attrs {
                    if g.a_edge(id, a).is_none() {
                        let v = match realm {
                            Realm::Classic => self.w.add_classic(),
                            Realm::Host => self.w.add_fresh(None),
                        };
                        self.w.set_attr(a, e, v);
                    }
                }
            }
        }
        Ok(elems[g.root().index()])
    }

    fn element(
        &mut self,
        n: &Node,
        steer: Option<&NodeSteer>,
        pin: Option<&Individual>,
        used: &mut BTreeSet<Individual>,
    ) -> Result<Elem> {
        let realm = if n.has(&Atom::ClassicThing) {
            Realm::Classic
        } else if n.has(&Atom::HostThing) {
            Realm::Host
        } else if let Some(l) = pin {
            l.realm()
        } else {
            steer.and_then(|s| s.realm).unwrap_or(self.policy.thing_realm)
        };
        let w = &mut self.w;
        let choice = match (pin, &n.dom) {
            (Some(l), _) => Some(l.clone()),
            (None, Dom::Finite(s)) => {
                let ok = |l: &&Individual| steer.is_none_or(|st| st.accepts(l, w));
                let pick = s
                    .iter()
                    .filter(ok)
                    .find(|l| !used.contains(*l))
                    .or_else(|| s.iter().find(ok))
                    .or_else(|| s.iter().next());
                Some(pick.ok_or_else(|| Error::Construction("empty dom".into()))?.clone())
            }
            (None, Dom::Universal) => None,
        };
        let e = match (realm, &choice) {
            (Realm::Classic, Some(Individual::Classic(l))) => {
                let e = w.add_classic();
                w.add_to_individual(l, e);
                e
            }
            (Realm::Classic, None) => w.add_classic(),
            (Realm::Host, Some(Individual::Host(v))) => w.add_value(v),
            (Realm::Host, None) => {
                let types: Vec<&Name> = n
                    .atoms
                    .iter()
                    .filter_map(|a| match a {
                        Atom::Host(h) => Some(h),
                        _ => None,
                    })
                    .collect();
                let ty = w.lattice().most_specific(types);
                w.add_fresh(ty)
            }
            (_, Some(l)) => return Err(Error::Construction(format!("{l} cannot realize a {realm} node"))),
        };
        if let Some(l) = choice {
            used.insert(l);
        }
        for a in &n.atoms {
            match a {
                Atom::Concept(c) => w.add_concept(c, e),
                Atom::Test(f, r) => w.add_test(f, *r, e),
                _ => {}
            }
        }
        Ok(e)
    }

    /// Role fillers of the classic element `e` of node `n`.
    fn fillers(&mut self, n: &Node, e: Elem, steer: Option<&NodeSteer>) -> Result<()> {
        let rsteer = |r: &Name| steer.and_then(|s| s.roles.get(r));
        for edge in &n.r_edges {
            let rs = rsteer(&edge.role);
            let max = edge.max.finite().unwrap_or(u32::MAX);
            let required = edge.fillers.len() as u32;
            let count = match rs {
                Some(RoleSteer { count: Some(c), .. }) => *c,
                Some(RoleSteer { steered: Some(_), .. }) => edge.min.max(required + 1).max(1).min(max),
                _ if self.policy.above_min => edge.min.max(edge.min.saturating_add(1).min(max)),
                _ => edge.min,
            }
            .max(required);
            let h = &edge.restriction;
            let sub = rs.and_then(|s| s.steered.as_deref());
            let sub_root = sub.and_then(|p| p.nodes.get(&h.root()));
            let avoid = rs.and_then(|s| s.avoid.as_ref());
            let mut pins: Vec<Option<Individual>> = edge.fillers.iter().cloned().map(Some).collect();
            let mut steered_at = None;
            if sub.is_some() {
                if count > required {
                    steered_at = Some(pins.len());
                } else {
                    let w = &self.w;
                    let i = pins
                        .iter()
                        .position(|l| sub_root.is_none_or(|s| s.accepts(l.as_ref().unwrap(), w)));
                    steered_at = Some(i.unwrap_or(0));
                }
            }
            let mut pool: Vec<Individual> = match &h.root_node().dom {
                Dom::Finite(s) => s
                    .iter()
                    .filter(|l| !edge.fillers.contains(*l) && Some(*l) != avoid)
                    .cloned()
                    .collect(),
                Dom::Universal => Vec::new(),
            };
            let finite = h.root_node().dom.finite().is_some();
            while (pins.len() as u32) < count {
                if !finite {
                    pins.push(None);
                    continue;
                }
                let steering = steered_at == Some(pins.len());
                let w = &self.w;
                let i = if steering {
                    pool.iter()
                        .position(|l| sub_root.is_none_or(|s| s.accepts(l, w)))
                        .unwrap_or(0)
                } else {
                    0
                };
                if pool.is_empty() {
                    return Err(Error::Construction(format!(
                        "too few individuals for role {}",
                        edge.role
                    )));
                }
                pins.push(Some(pool.remove(i)));
            }
            for (i, pin) in pins.iter().enumerate() {
                let plan = if steered_at == Some(i) { sub } else { None };
                let f = self.island(h, plan, pin.as_ref())?;
                self.w.add_role(&edge.role, e, f);
            }
        }
        if let Some(s) = steer {
            for (r, rs) in &s.roles {
                if n.r_edge(r).is_some() {
                    continue;
                }
                for _ in 0..rs.count.unwrap_or(0) {
                    let f = self.w.add_classic();
                    self.w.add_role(r, e, f);
                }
                if let Some(realm) = rs.extra {
                    let f = match realm {
                        Realm::Classic => self.w.add_classic(),
                        Realm::Host => self.w.add_fresh(None),
                    };
                    self.w.add_role(r, e, f);
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{eval_description, eval_graph};
    use crate::syntax::{parse_description, parse_kb};

    fn world(c: &str, d: Option<&str>, kb: &KnowledgeBase) -> GraphicalWorld {
        let g = kb.canonical(&parse_description(c, kb).unwrap()).unwrap();
        let d = d.map(|d| parse_description(d, kb).unwrap());
        let gw = construct_graphical_world(&g, d.as_ref(), kb).unwrap();
        assert!(gw.world.validate().is_ok());
        assert!(eval_graph(&g, &gw.world).unwrap().contains(&gw.element));
        gw
    }

    #[test]
    fn too_few_fillers() {
        let kb = KnowledgeBase::default();
        let gw = world("and(GAME, at-least(2, r))", Some("at-least(3, r)"), &kb);
        assert_eq!(gw.world.fillers("r", gw.element).count(), 2);
    }

    #[test]
    fn dom_choice_avoids_the_listed_individuals() {
        let kb = KnowledgeBase::default();
        let gw = world("one-of(P, Q)", Some("one-of(P)"), &kb);
        assert!(gw.world.individual_ext("Q").unwrap().contains(&gw.element));
    }

    #[test]
    fn same_as_gets_different_fillers() {
        let kb = parse_kb("attribute a\nattribute b\nattribute c").unwrap();
        let gw = world("same-as((a),(b))", Some("same-as((a),(c))"), &kb);
        assert_ne!(gw.world.attr("a", gw.element), gw.world.attr("c", gw.element));
    }

    #[test]
    fn unsteered_worlds_hit_the_graph() {
        let kb = parse_kb("attribute f\nattribute g").unwrap();
        for c in [
            "thing",
            "and(at-least(2, r), all(r, one-of(P, Q, R)), fills(r, P))",
            "and(same-as((f),(g)), all(f, INTEGER))",
            "all(r, and(at-least(1, s), all(s, one-of(1, 2))))",
            "fills(f, 3)",
        ] {
            world(c, None, &kb);
        }
    }

    #[test]
    fn subsumed_or_incoherent_inputs_are_rejected() {
        let kb = KnowledgeBase::default();
        let g = kb
            .canonical(&parse_description("at-least(2, r)", &kb).unwrap())
            .unwrap();
        let d = parse_description("at-least(1, r)", &kb).unwrap();
        assert!(matches!(
            construct_graphical_world(&g, Some(&d), &kb),
            Err(Error::Subsumed)
        ));
        let bad = kb
            .canonical(&parse_description("and(at-least(2,r), at-most(1,r))", &kb).unwrap())
            .unwrap();
        assert!(matches!(
            construct_graphical_world(&bad, None, &kb),
            Err(Error::Incoherent)
        ));
    }

    #[test]
    fn steering_covers_the_proof_cases() {
        let kb = parse_kb("attribute a\nattribute b\nattribute f").unwrap();
        let cases = [
            ("at-least(1, r)", "at-most(0, r)"),
            ("at-most(3, r)", "at-least(1, r)"),
            ("all(r, A)", "at-least(1, r)"),
            ("all(r, INTEGER)", "all(r, HOST-THING)"),
            ("all(a, A)", "all(a, classic-thing)"),
            ("fills(r, P)", "and(all(r, one-of(P, Q)), at-least(1, r))"),
            ("fills(a, P)", "all(a, one-of(P, Q))"),
            ("same-as((a,f),(b,f))", "same-as((a),(b))"),
            ("classic-thing", "thing"),
            ("INTEGER", "one-of(1, \"x\")"),
            ("and(A, B)", "A"),
        ];
        for (d, c) in cases {
            let gw = world(c, Some(d), &kb);
            let dd = parse_description(d, &kb).unwrap();
            assert!(
                !eval_description(&dd, &gw.world).unwrap().contains(&gw.element),
                "{d} vs {c}"
            );
        }
    }
}
