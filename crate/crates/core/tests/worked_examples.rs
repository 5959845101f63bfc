//! Worked subsumption, knowledge-base and counter-model examples, checked
//! through the public API. Where a verdict depends on the semantics, an
//! oracle run backs it up.

use classic::graph::{Atom, Bound};
use classic::oracle::{
    bounded_model_search, construct_graphical_world, eval_description, sample_world, Evaluator, SampleConfig,
    SearchOutcome, Vocabulary,
};
use classic::subsume::{equivalent, subsumes, subsumes_graph};
use classic::syntax::{parse_description, parse_kb, Description};
use classic::KnowledgeBase;

fn d(text: &str, kb: &KnowledgeBase) -> Description {
    parse_description(text, kb).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn holds(sup: &str, sub: &str, kb: &KnowledgeBase) -> bool {
    subsumes(&d(sup, kb), &d(sub, kb), kb).unwrap()
}

/// Extension containment in sampled worlds.
fn contained_in_samples(sup: &str, sub: &str, kb: &KnowledgeBase, worlds: u64) {
    let (sup, sub) = (kb.expand(&d(sup, kb)).unwrap(), kb.expand(&d(sub, kb)).unwrap());
    let vocab = Vocabulary::new()
        .with_kb(kb)
        .with_description(&sup)
        .with_description(&sub);
    let mut inhabited = 0;
    for seed in 0..worlds {
        let w = sample_world(&vocab, kb, seed, &SampleConfig::default());
        let (a, b) = (eval_description(&sub, &w).unwrap(), eval_description(&sup, &w).unwrap());
        assert!(a.is_subset(&b), "seed {seed}");
        inhabited += !a.is_empty() as usize;
    }
    assert!(inhabited > 0, "no sampled world inhabits the subsumee");
}

#[test]
fn games_with_at_least_two_participants() {
    let kb = parse_kb("attribute gender").unwrap();
    assert!(holds(
        "and(GAME, at-least(2, participants))",
        "and(GAME, at-least(4, participants), all(participants, and(PERSON, fills(gender, F))))",
        &kb
    ));
}

#[test]
fn nested_friends_under_self_similar_chain() {
    let kb = parse_kb("attribute friend").unwrap();
    let c = "and(all(friend, TALL), same-as((friend),(friend,friend)))";
    let mut sup = String::from("TALL");
    for _ in 0..12 {
        sup = format!("all(friend, {sup})");
        assert!(holds(&sup, c, &kb), "{sup}");
    }
}

#[test]
fn self_similar_chain_collapses_onto_a_loop() {
    let kb = parse_kb("attribute friend").unwrap();
    let g = kb
        .canonical(&d("and(all(friend, TALL), same-as((friend),(friend,friend)))", &kb))
        .unwrap();
    let e = g.a_edge(g.root(), "friend").unwrap();
    let x = e.target;
    assert!(g.node(x).has(&Atom::Concept("TALL".into())));
    assert_eq!(g.a_edge(x, "friend").unwrap().target, x);
}

#[test]
fn all_subsumes_at_most_zero() {
    let kb = KnowledgeBase::default();
    assert!(holds("all(r, GAME)", "at-most(0, r)", &kb));
    assert!(equivalent(&d("at-most(0,r)", &kb), &d("all(r,nothing)", &kb), &kb).unwrap());
}

#[test]
fn shared_filler_does_not_imply_equality() {
    let kb = parse_kb("attribute isLocatedIn\nattribute originatesIn").unwrap();
    assert!(!holds(
        "same-as((isLocatedIn),(originatesIn))",
        "and(fills(isLocatedIn, Arctic), fills(originatesIn, Arctic))",
        &kb
    ));
}

#[test]
fn jaded_person_is_not_bounded_by_one_visit() {
    let kb = parse_kb(
        "role wantsToVisit\nattribute hasPenguins\n\
         concept JADED := all(wantsToVisit, and(one-of(Arctic, Antarctic), all(hasPenguins, one-of(Yes))))",
    )
    .unwrap();
    assert!(!holds("at-most(1, wantsToVisit)", "JADED", &kb));
    let m = construct_graphical_world(
        &kb.canonical(&d("JADED", &kb)).unwrap(),
        Some(&d("at-most(1, wantsToVisit)", &kb)),
        &kb,
    )
    .unwrap();
    assert!(m.world.fillers("wantsToVisit", m.element).count() >= 2);
}

#[test]
fn anything_subsumes_the_incoherent_graph() {
    let kb = KnowledgeBase::default();
    for sup in ["GAME", "at-least(5, r)", "one-of(P)", "same-as((a),(b))", "nothing"] {
        assert!(holds(sup, "and(at-least(2,r), at-most(1,r))", &kb), "{sup}");
        assert!(holds(sup, "nothing", &kb), "{sup}");
    }
}

#[test]
fn equal_attributes_extend_by_a_common_step() {
    // Attributes are undefined on host elements, so a and b may both lead
    // to the same host value; the extended paths are then undefined.
    let kb = parse_kb("attribute a\nattribute b\nattribute f").unwrap();
    assert!(!holds("same-as((a,f),(b,f))", "same-as((a),(b))", &kb));
    let classic = "and(same-as((a),(b)), all(a, classic-thing))";
    assert!(holds("same-as((a,f),(b,f))", classic, &kb));
    contained_in_samples("same-as((a,f),(b,f))", classic, &kb, 60);
    let g = kb.canonical(&d("same-as((a),(b))", &kb)).unwrap();
    let m = construct_graphical_world(&g, Some(&d("same-as((a,f),(b,f))", &kb)), &kb).unwrap();
    let ev = Evaluator::new(&m.world);
    assert!(!ev
        .description(&kb.expand(&d("same-as((a,f),(b,f))", &kb)).unwrap())
        .unwrap()
        .contains(&m.element));
}

#[test]
fn enumerated_fillers_are_known_fillers() {
    let kb = KnowledgeBase::default();
    let (sup, sub) = ("fills(r, P)", "and(all(r, one-of(P)), at-least(1, r))");
    assert!(holds(sup, sub, &kb));
    contained_in_samples(sup, sub, &kb, 80);
}

#[test]
fn reflexive_top_and_bottom() {
    let kb = parse_kb("attribute a\nattribute b").unwrap();
    for c in [
        "GAME",
        "and(at-least(2, r), all(r, one-of(P, Q)))",
        "same-as((a),(b))",
        "all(a, one-of(1, 2))",
    ] {
        assert!(holds(c, c, &kb), "{c}");
        assert!(holds("thing", c, &kb), "{c}");
        assert!(holds(c, "nothing", &kb), "{c}");
    }
}

#[test]
fn equivalences() {
    let kb = KnowledgeBase::default();
    assert!(equivalent(&d("and(A,B)", &kb), &d("and(B,A)", &kb), &kb).unwrap());
    assert!(!equivalent(&d("at-least(1,r)", &kb), &d("at-least(2,r)", &kb), &kb).unwrap());
}

#[test]
fn primitives_mint_shared_atoms() {
    let kb = parse_kb(
        "role employeeNr\n\
         concept EMPLOYEE := primitive(and(PERSON, at-least(1, employeeNr)), employee)\n\
         concept WORKER := primitive(and(at-least(1, employeeNr), PERSON), employee)",
    )
    .unwrap();
    assert!(equivalent(&d("EMPLOYEE", &kb), &d("WORKER", &kb), &kb).unwrap());
    assert!(holds("PERSON", "EMPLOYEE", &kb));
    assert!(!holds("EMPLOYEE", "and(PERSON, at-least(1, employeeNr))", &kb));
    let e = kb.expand(&d("EMPLOYEE", &kb)).unwrap().to_string();
    assert!(e.contains("PERSON") && e.contains("at-least(1,employeeNr)"), "{e}");
}

#[test]
fn named_concepts_expand_through_chains() {
    let kb = parse_kb("concept F := E\nconcept E := GAME").unwrap();
    assert_eq!(kb.expand(&d("F", &kb)).unwrap(), Description::concept("GAME"));
    assert!(parse_kb("concept A := B\nconcept B := A").is_err());
}

#[test]
fn disjoint_atoms_inside_a_restriction() {
    let kb = parse_kb("disjoint MALE FEMALE").unwrap();
    assert!(kb.canonical(&d("and(MALE, FEMALE)", &kb)).unwrap().is_incoherent());
    let g = kb.canonical(&d("all(r, and(MALE, FEMALE))", &kb)).unwrap();
    let e = g.root_node().r_edge("r").unwrap();
    assert_eq!(e.max, Bound::Finite(0));
    assert!(e.restriction.is_incoherent());
    // No small world gives the restriction a member.
    let filler = kb.graph(&d("and(MALE, FEMALE)", &kb)).unwrap();
    assert_eq!(bounded_model_search(&filler, &kb, 3, 1_000_000), SearchOutcome::NoModel);
    assert!(holds("at-most(0, r)", "all(r, and(MALE, FEMALE))", &kb));
}

#[test]
fn taxonomy_orders_by_subsumption() {
    let kb = parse_kb("concept A := at-least(4, r)\nconcept B := at-least(2, r)\nconcept C := GAME\nconcept D := GAME")
        .unwrap();
    let t = kb.classify().unwrap();
    let (a, b) = (t.node_of("A").unwrap(), t.node_of("B").unwrap());
    assert!(t.nodes[a].parents.contains(&b));
    assert_eq!(t.node_of("C"), t.node_of("D"));
    let empty = KnowledgeBase::default().classify().unwrap();
    assert_eq!(empty.nodes.len(), 1);
}

#[test]
fn steered_worlds_follow_the_failed_condition() {
    let kb = KnowledgeBase::default();
    let world = |sup: &str, sub: &str| {
        construct_graphical_world(&kb.canonical(&d(sub, &kb)).unwrap(), Some(&d(sup, &kb)), &kb).unwrap()
    };

    let m = world("at-least(3, r)", "and(GAME, at-least(2, r))");
    assert_eq!(m.world.fillers("r", m.element).count(), 2);

    let m = world("one-of(P)", "one-of(P, Q)");
    assert!(m.world.individual_ext("Q").unwrap().contains(&m.element));

    let m = world("same-as((a),(c))", "same-as((a),(b))");
    assert_ne!(m.world.attr("a", m.element), m.world.attr("c", m.element));

    assert!(construct_graphical_world(
        &kb.canonical(&d("at-least(2,r)", &kb)).unwrap(),
        Some(&d("at-least(1,r)", &kb)),
        &kb
    )
    .is_err());
}

#[test]
fn congruent_fillers_count_once() {
    let kb = KnowledgeBase::default();
    let g = kb.canonical(&d("and(at-least(2, r), all(r, one-of(P)))", &kb)).unwrap();
    assert!(g.is_incoherent());
    assert!(subsumes_graph(
        &d("at-most(1, r)", &kb),
        &kb.canonical(&d("all(r, one-of(P))", &kb)).unwrap()
    ));

    // Two elements of P as fillers still count as one.
    let mut w = classic::oracle::Interpretation::new(kb.lattice().clone());
    let (x, p1, p2) = (w.add_classic(), w.add_classic(), w.add_classic());
    w.declare_individual(&"P".into());
    w.add_to_individual(&"P".into(), p1);
    w.add_to_individual(&"P".into(), p2);
    w.declare_role(&"r".into());
    w.add_role(&"r".into(), x, p1);
    w.add_role(&"r".into(), x, p2);
    assert!(eval_description(&d("at-most(1, r)", &kb), &w).unwrap().contains(&x));
    assert!(!eval_description(&d("at-least(2, r)", &kb), &w).unwrap().contains(&x));
}
