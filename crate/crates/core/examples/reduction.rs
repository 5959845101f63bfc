//! Encode 3CNF formulas as subsumption questions and compare the engine
//! with brute force.

use classic::reduction::{demonstrate_incompleteness, encode, parse_dimacs, CnfFormula};

fn main() -> classic::Result<()> {
    let f = parse_dimacs("c p and not p\np cnf 1 2\n1 0\n-1 0\n")?;
    let out = encode(&f);
    println!("{}", out.kb_text);
    println!("UPPER = {}", out.upper);
    println!("{:?}", demonstrate_incompleteness(&f)?);

    let mut gaps = 0;
    for seed in 0..20 {
        let f = CnfFormula::random(5, 30, seed);
        let r = demonstrate_incompleteness(&f)?;
        gaps += r.gap as usize;
        println!(
            "seed {seed:>2}: valid {:<5} engine {:<5} gap {}",
            r.validity, r.engine_verdict, r.gap
        );
    }
    println!("{gaps} of 20 unsatisfiable formulas were not derived by the engine");
    Ok(())
}
