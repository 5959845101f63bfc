//! Exhaustive search for small models of a graph.
//!
//! Worlds are enumerated in order of classic domain size. The host carrier
//! is fixed: the values the graph mentions, one anonymous element per host
//! type it mentions, and one untyped element. Every world over that
//! carrier and the graph's vocabulary is visited, up to a cap.

use super::eval::Evaluator;
use super::{Elem, GraphicalWorld, Interpretation, Vocabulary};
use crate::graph::{Atom, DescriptionGraph};
use crate::kb::KnowledgeBase;
use crate::syntax::{Name, Realm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A world and an element of the graph's extension in it.
    Model(GraphicalWorld),
    /// Every world within the bound was visited; none is a model.
    NoModel,
    /// The cap ran out first.
    CapReached,
}

fn host_types(g: &DescriptionGraph, out: &mut Vec<Name>) {
    for (_, n) in g.nodes() {
        for a in &n.atoms {
            if let Atom::Host(h) = a {
                if !out.contains(h) {
                    out.push(h.clone());
                }
            }
        }
        for e in &n.r_edges {
            host_types(&e.restriction, out);
        }
    }
}

/// Looks for a world with at most `max_classic` classic elements in which
/// `g` has a non-empty extension, visiting at most `cap` worlds.
pub fn bounded_model_search(g: &DescriptionGraph, kb: &KnowledgeBase, max_classic: usize, cap: u64) -> SearchOutcome {
    let vocab = Vocabulary::new().with_graph(g);
    let mut types = Vec::new();
    host_types(g, &mut types);
    let concepts: Vec<&Name> = vocab.concepts.iter().collect();
    let classic_tests: Vec<&Name> = vocab
        .tests
        .iter()
        .filter(|t| t.1 == Realm::Classic)
        .map(|t| &t.0)
        .collect();
    let host_tests: Vec<&Name> = vocab
        .tests
        .iter()
        .filter(|t| t.1 == Realm::Host)
        .map(|t| &t.0)
        .collect();
    let roles: Vec<&Name> = vocab.roles.iter().collect();
    let attrs: Vec<&Name> = vocab.attributes.iter().collect();
    let individuals: Vec<&Name> = vocab.individuals.iter().collect();
    let mut visited = 0u64;
    for n in individuals.len().max(1)..=max_classic {
        let mut base = Interpretation::new(kb.lattice().clone());
        for _ in 0..n {
            base.add_classic();
        }
        for v in &vocab.values {
            base.add_value(v);
        }
        for t in &types {
            base.add_fresh(Some(t.clone()));
        }
        base.add_fresh(None);
        let size = base.len() as u32;
        let hosts = size - n as u32;
        // Digit layout, per classic element: concepts, classic tests,
        // individual (0 for none), role pairs, attribute values. Then host
        // tests per host element.
        let per = concepts.len() + classic_tests.len() + 1 + roles.len() * size as usize + attrs.len();
        let mut radix = Vec::new();
        for _ in 0..n {
            radix.extend(std::iter::repeat_n(2, concepts.len() + classic_tests.len()));
            radix.push(individuals.len() as u32 + 1);
            radix.extend(std::iter::repeat_n(2, roles.len() * size as usize));
            radix.extend(std::iter::repeat_n(size, attrs.len()));
        }
        radix.extend(std::iter::repeat_n(2, host_tests.len() * hosts as usize));
        let mut digits = vec![0u32; radix.len()];
        loop {
            if visited >= cap {
                return SearchOutcome::CapReached;
            }
            visited += 1;
            let mut w = base.clone();
            for a in &attrs {
                w.declare_attr(a);
            }
            for l in &individuals {
                w.declare_individual(l);
            }
            for e in 0..n {
                let d = &digits[e * per..(e + 1) * per];
                let e = e as Elem;
                let mut k = 0;
                for c in &concepts {
                    if d[k] == 1 {
                        w.add_concept(c, e);
                    }
                    k += 1;
                }
                for f in &classic_tests {
                    if d[k] == 1 {
                        w.add_test(f, Realm::Classic, e);
                    }
                    k += 1;
                }
                if d[k] > 0 {
                    w.add_to_individual(individuals[d[k] as usize - 1], e);
                }
                k += 1;
                for r in &roles {
                    for t in 0..size {
                        if d[k] == 1 {
                            w.add_role(r, e, t);
                        }
                        k += 1;
                    }
                }
                for a in &attrs {
                    w.set_attr(a, e, d[k]);
                    k += 1;
                }
            }
            let tail = &digits[n * per..];
            for (i, f) in host_tests.iter().enumerate() {
                for h in 0..hosts {
                    if tail[i * hosts as usize + h as usize] == 1 {
                        w.add_test(f, Realm::Host, n as Elem + h);
                    }
                }
            }
            if w.individuals.values().all(|s| !s.is_empty()) && w.respects(kb) {
                let ev = Evaluator::new(&w);
                let found = w.elements().find(|&e| ev.witness(g, e).ok().flatten().is_some());
                if let Some(element) = found {
                    return SearchOutcome::Model(GraphicalWorld { world: w, element });
                }
            }
            // Odometer step.
            let mut i = 0;
            while i < digits.len() {
                digits[i] += 1;
                if digits[i] < radix[i] {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
        }
    }
    SearchOutcome::NoModel
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::translate;
    use crate::syntax::{parse_description, parse_kb};

    fn raw(text: &str, kb: &KnowledgeBase) -> DescriptionGraph {
        translate(&kb.expand(&parse_description(text, kb).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn finds_small_models() {
        let kb = KnowledgeBase::default();
        for text in [
            "and(A, at-least(1, r))",
            "one-of(P, Q)",
            "and(at-least(2, r), all(r, one-of(P, Q)))",
        ] {
            match bounded_model_search(&raw(text, &kb), &kb, 3, 1_000_000) {
                SearchOutcome::Model(m) => assert!(m.world.validate().is_ok(), "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn proves_small_contradictions() {
        let kb = parse_kb("disjoint A B").unwrap();
        for text in [
            "and(at-least(2, r), at-most(1, r))",
            "and(A, B)",
            "and(at-least(3, r), all(r, one-of(P, Q)))",
        ] {
            assert_eq!(
                bounded_model_search(&raw(text, &kb), &kb, 2, 1_000_000),
                SearchOutcome::NoModel,
                "{text}"
            );
        }
    }
}
