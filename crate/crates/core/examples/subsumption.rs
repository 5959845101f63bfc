//! Subsumption queries against a small knowledge base.

use classic::subsume::{equivalent, subsumes};
use classic::syntax::{parse_description, parse_kb};

const KB: &str = "
role participants
role friend-of
attribute gender
attribute friend
concept GAME-2 := and(GAME, at-least(2, participants))
concept GAME-4 := and(GAME, at-least(4, participants), all(participants, and(PERSON, fills(gender, F))))
";

fn main() -> classic::Result<()> {
    let kb = parse_kb(KB)?;
    let q = |d: &str, c: &str| -> classic::Result<()> {
        let (dd, cc) = (parse_description(d, &kb)?, parse_description(c, &kb)?);
        println!("{:<44} subsumes {:<60} {}", d, c, subsumes(&dd, &cc, &kb)?);
        Ok(())
    };
    q("GAME-2", "GAME-4")?;
    q("GAME-4", "GAME-2")?;
    q(
        "all(friend, all(friend, all(friend, TALL)))",
        "and(all(friend, TALL), same-as((friend),(friend,friend)))",
    )?;
    q("all(participants, GAME)", "at-most(0, participants)")?;
    q("thing", "GAME-4")?;

    let a = parse_description("at-most(0, participants)", &kb)?;
    let b = parse_description("all(participants, nothing)", &kb)?;
    println!("{a} == {b}: {}", equivalent(&a, &b, &kb)?);
    Ok(())
}
