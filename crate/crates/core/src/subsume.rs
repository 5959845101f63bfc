//! Structural subsumption of a description against a canonical graph.

use std::sync::OnceLock;

use crate::error::Result;
use crate::graph::{translate, Atom, Bound, DescriptionGraph, NodeId};
use crate::kb::KnowledgeBase;
use crate::normalize::canonicalize;
use crate::syntax::Description;

fn g_thing() -> &'static DescriptionGraph {
    static THING: OnceLock<DescriptionGraph> = OnceLock::new();
    THING.get_or_init(|| canonicalize(&DescriptionGraph::thing(), &KnowledgeBase::default()))
}

/// Whether `d` subsumes the canonical graph `g`. `d` must be expanded.
pub fn subsumes_graph(d: &Description, g: &DescriptionGraph) -> bool {
    subsumes_at(d, g, g.root(), true)
}

/// Whether `d` is equivalent to THING: literally THING, or subsuming the
/// canonical graph of THING.
pub fn thing_equivalent(d: &Description) -> bool {
    match d {
        Description::Thing => true,
        _ => subsumes_at(d, g_thing(), g_thing().root(), false),
    }
}

/// Subsumption against `⟨N, E, at⟩`. With `top` unset the THING test is
/// skipped, which is what stops it from recursing into itself.
pub(crate) fn subsumes_at(d: &Description, g: &DescriptionGraph, at: NodeId, top: bool) -> bool {
    if g.is_incoherent() {
        return true;
    }
    match d {
        Description::Thing => true,
        Description::And(ds) => ds.iter().all(|c| subsumes_at(c, g, at, top)),
        _ => structural(d, g, at) || (top && thing_equivalent(d)),
    }
}

fn structural(d: &Description, g: &DescriptionGraph, at: NodeId) -> bool {
    let n = g.node(at);
    let classic = || n.has(&Atom::ClassicThing);
    match d {
        Description::Thing => true,
        Description::ClassicThing => classic(),
        Description::HostThing => n.has(&Atom::HostThing),
        Description::Nothing => n.is_incoherent(),
        Description::Concept(c) => n.has(&Atom::Concept(c.clone())),
        Description::HostConcept(h) => n.has(&Atom::Host(h.clone())),
        Description::Test(f, realm) => n.has(&Atom::Test(f.clone(), *realm)),
        Description::AtLeast(k, r) => n.r_edge(r).is_some_and(|e| e.min >= *k),
        Description::AtMost(k, r) => n.r_edge(r).is_some_and(|e| e.max <= Bound::Finite(*k)),
        Description::AllRole(r, c) => {
            n.r_edge(r).is_some_and(|e| subsumes_graph(c, &e.restriction))
                || (classic() && subsumes_graph(c, g_thing()))
        }
        Description::AllAttr(a, c) => {
            g.a_edge(at, a).is_some_and(|e| subsumes_at(c, g, e.target, true))
                || (classic() && subsumes_graph(c, g_thing()))
        }
        Description::SameAs(a, b) => {
            let ends = (g.follow(at, a), g.follow(at, b));
            if let (Some(x), Some(y)) = ends {
                if x == y {
                    return true;
                }
            }
            let (pa, pb) = (&a[..a.len() - 1], &b[..b.len() - 1]);
            a.last() == b.last()
                && match (g.follow(at, pa), g.follow(at, pb)) {
                    (Some(x), Some(y)) => x == y && g.node(x).has(&Atom::ClassicThing),
                    _ => false,
                }
        }
        Description::FillsRole(r, l) => n.r_edge(r).is_some_and(|e| e.fillers.contains(l)),
        Description::FillsAttr(a, l) => g.a_edge(at, a).is_some_and(|e| e.fillers.contains(l)),
        Description::OneOf(ls) => n.dom.finite().is_some_and(|s| s.iter().all(|l| ls.contains(l))),
        Description::And(ds) => ds.iter().all(|c| subsumes_at(c, g, at, true)),
        Description::Named(_) | Description::Primitive(..) => false,
    }
}

/// Whether `d` subsumes `c`, both parsed against `kb`.
pub fn subsumes(d: &Description, c: &Description, kb: &KnowledgeBase) -> Result<bool> {
    let g = kb.canonical(c)?;
    Ok(subsumes_graph(&kb.expand(d)?, &g))
}

/// Mutual subsumption.
pub fn equivalent(d: &Description, c: &Description, kb: &KnowledgeBase) -> Result<bool> {
    Ok(subsumes(d, c, kb)? && subsumes(c, d, kb)?)
}

/// Mutual subsumption of two already expanded descriptions.
pub(crate) fn equivalent_expanded(a: &Description, b: &Description, kb: &KnowledgeBase) -> Result<bool> {
    let ga = canonicalize(&translate(a)?, kb);
    let gb = canonicalize(&translate(b)?, kb);
    Ok(subsumes_graph(a, &gb) && subsumes_graph(b, &ga))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_description, parse_kb};

    fn holds(d: &str, c: &str, kb: &KnowledgeBase) -> bool {
        let d = parse_description(d, kb).unwrap();
        let c = parse_description(c, kb).unwrap();
        subsumes(&d, &c, kb).unwrap()
    }

    fn yes(d: &str, c: &str) -> bool {
        holds(d, c, &KnowledgeBase::default())
    }

    #[test]
    fn participants() {
        assert!(yes(
            "and(GAME, at-least(2, participants))",
            "and(GAME, at-least(4, participants), all(participants, and(PERSON, fills(gender, F))))"
        ));
        assert!(!yes("at-least(4, participants)", "at-least(2, participants)"));
    }

    #[test]
    fn arbitrary_depth_through_same_as() {
        let c = "and(all(friend, TALL), same-as((friend),(friend,friend)))";
        let kb = parse_kb("attribute friend").unwrap();
        let mut d = String::from("TALL");
        for _ in 0..6 {
            d = format!("all(friend, {d})");
            assert!(holds(&d, c, &kb), "{d}");
        }
    }

    #[test]
    fn at_most_zero() {
        assert!(yes("all(r, GAME)", "at-most(0, r)"));
        let kb = KnowledgeBase::default();
        let a = parse_description("at-most(0,r)", &kb).unwrap();
        let b = parse_description("all(r, nothing)", &kb).unwrap();
        assert!(equivalent(&a, &b, &kb).unwrap());
    }

    #[test]
    fn equal_fillers_do_not_imply_equality() {
        let kb = parse_kb("attribute isLocatedIn\nattribute originatesIn").unwrap();
        assert!(!holds(
            "same-as((isLocatedIn),(originatesIn))",
            "and(fills(isLocatedIn, Arctic), fills(originatesIn, Arctic))",
            &kb
        ));
        // Host values have a single realization.
        assert!(holds(
            "same-as((isLocatedIn),(originatesIn))",
            "and(fills(isLocatedIn, 1), fills(originatesIn, 1))",
            &kb
        ));
    }

    #[test]
    fn extending_equal_paths_needs_a_classic_end() {
        let kb = parse_kb("attribute a\nattribute b\nattribute f").unwrap();
        assert!(!holds("same-as((a,f),(b,f))", "same-as((a),(b))", &kb));
        assert!(holds(
            "same-as((a,f),(b,f))",
            "and(same-as((a),(b)), all(a, classic-thing))",
            &kb
        ));
        assert!(holds("same-as((a),(a))", "classic-thing", &kb));
    }

    #[test]
    fn incoherent_and_thing() {
        assert!(yes("at-least(3, r)", "nothing"));
        assert!(yes("thing", "at-least(3, r)"));
        assert!(yes("and(thing, thing)", "one-of(1)"));
        assert!(!yes("classic-thing", "thing"));
        assert!(yes("all(r, thing)", "at-least(1, s)"));
        assert!(!yes("all(r, thing)", "thing"));
    }

    #[test]
    fn fillers_from_enumerated_doms() {
        assert!(yes("fills(r, P)", "and(all(r, one-of(P)), at-least(1, r))"));
        assert!(!yes("fills(r, P)", "and(all(r, one-of(P, Q)), at-least(1, r))"));
        assert!(yes("at-most(2, r)", "all(r, one-of(P, Q))"));
        assert!(yes("one-of(P, Q, R)", "one-of(Q, P)"));
        assert!(!yes("one-of(P)", "one-of(Q, P)"));
        assert!(yes("INTEGER", "one-of(1, 2)"));
        assert!(yes("host-thing", "one-of(\"x\")"));
    }

    #[test]
    fn conjunction_decomposes() {
        assert!(yes("and(A, at-least(1, r))", "and(A, B, at-least(2, r))"));
        assert!(!yes("and(A, C)", "and(A, B)"));
        assert!(equivalent(
            &parse_description("and(A,B)", &KnowledgeBase::default()).unwrap(),
            &parse_description("and(B,A)", &KnowledgeBase::default()).unwrap(),
            &KnowledgeBase::default()
        )
        .unwrap());
    }
}
