//! Classify the named concepts of a knowledge base.

use classic::syntax::parse_kb;

const KB: &str = "
role participants
disjoint MALE FEMALE
concept GAME-2 := and(GAME, at-least(2, participants))
concept GAME-4 := and(GAME, at-least(4, participants))
concept TEAM-GAME := and(GAME, at-least(4, participants))
concept BROKEN := and(MALE, FEMALE)
concept MIXED := and(GAME, all(participants, MALE), all(participants, FEMALE))
";

fn main() -> classic::Result<()> {
    let kb = parse_kb(KB)?;
    let t = kb.classify()?;
    for (i, n) in t.nodes.iter().enumerate() {
        let members: Vec<&str> = n.members.iter().map(|m| m.as_str()).collect();
        println!("{i}: {members:?} under {:?}", n.parents);
    }
    println!("{}", serde_json::to_string_pretty(&t.to_json()).unwrap());
    Ok(())
}
