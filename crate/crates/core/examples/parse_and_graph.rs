//! Parse a description and print its description graph.
//!
//! ```text
//! cargo run --example parse_and_graph
//! ```

use classic::graph::dump_graph;
use classic::syntax::{parse_description, parse_kb};

fn main() -> classic::Result<()> {
    let kb = parse_kb("role participants\nattribute coach\nattribute captain\nattribute father")?;
    let d = parse_description(
        "and(GAME, all(participants, PERSON), same-as((coach),(captain,father)))",
        &kb,
    )?;
    println!("description: {d}");
    println!("size {} depth {}", d.size(), d.depth());

    let g = kb.graph(&d)?;
    println!("{} nodes, {} a-edges", g.node_count(), g.a_edges().len());
    for e in g.a_edges() {
        println!("  {:?} --{}--> {:?}", e.source.index(), e.attr, e.target.index());
    }
    println!("{}", dump_graph(&g));
    Ok(())
}
