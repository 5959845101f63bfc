//! Canonical forms: attribute chains collapse, number restrictions
//! tighten, clashes mark the graph incoherent.

use classic::corpus::chain_family;
use classic::normalize::{canonicalize_with, Schedule};
use classic::syntax::parse_description;
use classic::KnowledgeBase;

fn main() -> classic::Result<()> {
    let kb = KnowledgeBase::default();

    for n in [2, 5, 10] {
        let raw = kb.graph(&chain_family(n))?;
        let g = kb.canonical(&chain_family(n))?;
        println!(
            "chain n={n}: {} nodes before, {} after",
            raw.node_count(),
            g.node_count()
        );
    }

    let enumerated = parse_description("and(all(r, one-of(P, Q)), at-least(2, r))", &kb)?;
    let g = kb.canonical(&enumerated)?;
    let e = g.root_node().r_edge("r").expect("one r-edge");
    let fillers: Vec<String> = e.fillers.iter().map(|f| f.to_string()).collect();
    println!("{enumerated}: r in [{}, {}], fillers {fillers:?}", e.min, e.max);

    let clash = parse_description("and(at-least(2, r), at-most(1, r))", &kb)?;
    println!("{clash}: incoherent = {}", kb.canonical(&clash)?.is_incoherent());

    // Both rule orders reach the same graph.
    let raw = kb.graph(&chain_family(6))?;
    let a = canonicalize_with(&raw, &kb, Schedule::PostOrder);
    let b = canonicalize_with(&raw, &kb, Schedule::Pairwise);
    println!("schedules agree: {}", classic::graph::isomorphic(&a, &b));
    Ok(())
}
