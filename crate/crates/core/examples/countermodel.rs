//! When subsumption fails, build a world that shows why.

use classic::oracle::{construct_graphical_world, dump_world, eval_description};
use classic::syntax::{parse_description, parse_kb};

fn main() -> classic::Result<()> {
    let kb = parse_kb("attribute a\nattribute b\nattribute c")?;
    for (d, c) in [
        ("at-least(3, r)", "and(GAME, at-least(2, r))"),
        ("one-of(P)", "one-of(P, Q)"),
        ("same-as((a),(c))", "same-as((a),(b))"),
        ("all(r, A)", "and(at-least(1, r), all(r, B))"),
    ] {
        let (d, c) = (parse_description(d, &kb)?, parse_description(c, &kb)?);
        let m = construct_graphical_world(&kb.canonical(&c)?, Some(&d), &kb)?;
        let in_c = eval_description(&kb.expand(&c)?, &m.world)?.contains(&m.element);
        let in_d = eval_description(&kb.expand(&d)?, &m.world)?.contains(&m.element);
        println!(
            "{d} vs {c}: element {} of {} (in C: {in_c}, in D: {in_d})",
            m.element,
            m.world.len()
        );
    }

    let d = parse_description("at-least(3, r)", &kb)?;
    let c = parse_description("at-least(2, r)", &kb)?;
    let m = construct_graphical_world(&kb.canonical(&c)?, Some(&d), &kb)?;
    println!("{}", dump_world(&m.world));

    match construct_graphical_world(&kb.canonical(&d)?, Some(&c), &kb) {
        Err(e) => println!("reverse direction: {e}"),
        Ok(_) => unreachable!("at-least(2, r) subsumes at-least(3, r)"),
    }
    Ok(())
}
