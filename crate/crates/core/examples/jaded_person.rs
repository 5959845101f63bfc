//! Individuals as sets: a jaded person may want to visit two penguin
//! places, because Arctic can stand for more than one element.

use classic::oracle::{eval_description, Interpretation};
use classic::subsume::subsumes;
use classic::syntax::{parse_description, parse_kb};

const KB: &str = "
role wantsToVisit
attribute hasPenguins
individual Arctic
individual Antarctic
individual Yes
individual No
concept JADED-PERSON := all(wantsToVisit, and(one-of(Arctic, Antarctic), all(hasPenguins, one-of(Yes))))
";

fn main() -> classic::Result<()> {
    let kb = parse_kb(KB)?;
    let jaded = kb.expand(&parse_description("JADED-PERSON", &kb)?)?;
    let at_most = parse_description("at-most(1, wantsToVisit)", &kb)?;
    println!(
        "at-most(1, wantsToVisit) subsumes JADED-PERSON: {}",
        subsumes(&at_most, &jaded, &kb)?
    );

    let mut w = Interpretation::new(kb.lattice().clone());
    let [d1, d2, d3, d4, yes, no, person] = [(); 7].map(|_| w.add_classic());
    for (l, es) in [
        ("Arctic", [d1, d2]),
        ("Antarctic", [d3, d4]),
        ("Yes", [yes, yes]),
        ("No", [no, no]),
    ] {
        w.declare_individual(&l.into());
        for e in es {
            w.add_to_individual(&l.into(), e);
        }
    }
    for (e, v) in [(d1, yes), (d2, no), (d3, yes), (d4, no)] {
        w.set_attr(&"hasPenguins".into(), e, v);
    }
    w.declare_role(&"wantsToVisit".into());
    w.add_role(&"wantsToVisit".into(), person, d1);
    w.add_role(&"wantsToVisit".into(), person, d3);
    w.complete();

    println!("person is jaded: {}", eval_description(&jaded, &w)?.contains(&person));
    println!(
        "person visits at most one place: {}",
        eval_description(&at_most, &w)?.contains(&person)
    );
    Ok(())
}
