//! Encoding of 3CNF unsatisfiability as subsumption with `one-of`.
//!
//! Under a semantics where individuals have fixed identity, deciding
//! whether `UPPER` subsumes `LOWER` amounts to deciding whether a 3CNF
//! formula is unsatisfiable. The engine here treats individuals as opaque
//! and never derives that subsumption; [`demonstrate_incompleteness`]
//! puts the two verdicts side by side.
//!
//! For a variable `v` the encoding introduces individuals `P-v` and
//! `Phat-v` (the literal and its negation), `Yes-v` and `No-v`. Each clause
//! `i` of the formula negates into a conjunction, held by individual `Ci`,
//! and `G` holds the disjunction of all of them. Truth values are the host
//! strings `"True"` and `"False"`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kb::KnowledgeBase;
use crate::subsume::subsumes;
use crate::syntax::{parse_kb, Description, Individual, Name};

/// Largest variable count the brute-force checker accepts.
pub const MAX_BRUTE_FORCE_VARIABLES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    /// Index into [`CnfFormula::variables`].
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, positive: false }
    }

    pub fn negated(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    pub fn holds(self, assignment: u32) -> bool {
        (assignment >> self.var & 1 == 1) == self.positive
    }
}

/// A conjunction of clauses of exactly three literals. Shorter clauses are
/// written by repeating a literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    variables: Vec<Name>,
    clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    pub fn new(variables: Vec<Name>, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::Formula("a formula needs at least one clause".into()));
        }
        let distinct: BTreeSet<&Name> = variables.iter().collect();
        if distinct.len() != variables.len() {
            return Err(Error::Formula("variable names must be distinct".into()));
        }
        if let Some(v) = variables.iter().find(|v| !valid_name(v)) {
            return Err(Error::Formula(format!("`{v}` cannot be used in an individual name")));
        }
        if let Some(l) = clauses.iter().flatten().find(|l| l.var >= variables.len()) {
            return Err(Error::Formula(format!(
                "literal refers to variable {} of {}",
                l.var + 1,
                variables.len()
            )));
        }
        Ok(CnfFormula { variables, clauses })
    }

    /// Variables `x1 .. xn`.
    pub fn with_numbered_variables(n: usize, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        CnfFormula::new((1..=n).map(|i| Name::new(format!("x{i}"))).collect(), clauses)
    }

    /// `n_clauses` clauses over `n_vars` variables, each with three
    /// independently drawn literals.
    pub fn random(n_vars: usize, n_clauses: usize, seed: u64) -> Self {
        assert!(n_vars > 0 && n_clauses > 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let clauses = (0..n_clauses)
            .map(|_| {
                [(); 3].map(|_| Literal {
                    var: rng.gen_range(0..n_vars),
                    positive: rng.gen_bool(0.5),
                })
            })
            .collect();
        CnfFormula::with_numbered_variables(n_vars, clauses).expect("random formulas are well formed")
    }

    pub fn variables(&self) -> &[Name] {
        &self.variables
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    /// The negation, one conjunctive term per clause.
    pub fn negate(&self) -> DnfFormula {
        DnfFormula {
            variables: self.variables.len(),
            terms: self.clauses.iter().map(|c| c.map(Literal::negated)).collect(),
        }
    }
}

fn valid_name(v: &str) -> bool {
    !v.is_empty() && v.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-'))
}

/// A disjunction of three-literal conjunctions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DnfFormula {
    pub variables: usize,
    pub terms: Vec<[Literal; 3]>,
}

/// Whether every assignment satisfies some term.
pub fn check_validity_bruteforce(g: &DnfFormula) -> Result<bool> {
    if g.variables > MAX_BRUTE_FORCE_VARIABLES {
        return Err(Error::TooManyVariables(g.variables, MAX_BRUTE_FORCE_VARIABLES));
    }
    Ok((0..1u32 << g.variables).all(|a| g.terms.iter().any(|t| t.iter().all(|l| l.holds(a)))))
}

/// Reads DIMACS CNF. Clauses may span lines and must end in `0`; clauses
/// of one or two literals are padded by repeating their last literal.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let bad = |m: String| Error::Dimacs(m);
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            match parts.as_slice() {
                ["cnf", v, c] if header.is_none() => {
                    let v = v
                        .parse()
                        .map_err(|_| bad(format!("line {}: bad variable count", no + 1)))?;
                    let c = c
                        .parse()
                        .map_err(|_| bad(format!("line {}: bad clause count", no + 1)))?;
                    header = Some((v, c));
                }
                _ => return Err(bad(format!("line {}: expected `p cnf VARIABLES CLAUSES`", no + 1))),
            }
            continue;
        }
        let (vars, _) = header.ok_or_else(|| bad(format!("line {}: clause before the problem line", no + 1)))?;
        for tok in line.split_whitespace() {
            let n: i64 = tok
                .parse()
                .map_err(|_| bad(format!("line {}: `{tok}` is not a literal", no + 1)))?;
            if n == 0 {
                let clause = match current.as_slice() {
                    [] => return Err(bad(format!("line {}: empty clause", no + 1))),
                    [a] => [*a, *a, *a],
                    [a, b] => [*a, *b, *b],
                    [a, b, c] => [*a, *b, *c],
                    _ => return Err(bad(format!("line {}: clause has more than three literals", no + 1))),
                };
                clauses.push(clause);
                current.clear();
                continue;
            }
            let var = n.unsigned_abs() as usize;
            if var > vars {
                return Err(bad(format!(
                    "line {}: variable {var} exceeds the declared {vars}",
                    no + 1
                )));
            }
            current.push(Literal {
                var: var - 1,
                positive: n > 0,
            });
        }
    }
    let (vars, count) = header.ok_or_else(|| bad("missing problem line".into()))?;
    if !current.is_empty() {
        return Err(bad("last clause is not terminated by 0".into()));
    }
    if clauses.len() != count {
        return Err(bad(format!(
            "problem line announces {count} clauses, found {}",
            clauses.len()
        )));
    }
    CnfFormula::with_numbered_variables(vars, clauses).map_err(|e| bad(e.to_string()))
}

/// Everything the encoding produces.
#[derive(Clone, Debug)]
pub struct ReductionOutput {
    /// Each individual with the description asserted of it, in order: per
    /// variable `P`, `Phat`, `Yes`, `No`; then `C1 .. Cn`; then `G`.
    pub assertions: Vec<(Name, Description)>,
    /// Dummy attribute of each assertion, in the same order.
    pub dummies: Vec<Name>,
    pub valid_formulae: Description,
    pub upper: Description,
    pub lower: Description,
    /// A knowledge base declaring the vocabulary and defining
    /// `VALID-FORMULAE`, `UPPER` and `LOWER`.
    pub kb_text: String,
}

impl ReductionOutput {
    pub fn knowledge_base(&self) -> Result<KnowledgeBase> {
        parse_kb(&self.kb_text)
    }
}

fn ind(name: &str) -> Individual {
    Individual::classic(name)
}

fn truth(value: &str) -> Description {
    Description::all_attr("truthValue", Description::OneOf(vec![Individual::string(value)]))
}

/// The individual standing for a literal.
fn literal_name(f: &CnfFormula, l: Literal) -> String {
    let v = &f.variables[l.var];
    if l.positive {
        format!("P-{v}")
    } else {
        format!("Phat-{v}")
    }
}

/// Builds the individuals, their descriptions and the two concepts.
pub fn encode(f: &CnfFormula) -> ReductionOutput {
    let mut assertions: Vec<(Name, Description)> = Vec::new();
    let mut dummies: Vec<Name> = Vec::new();
    for (i, v) in f.variables.iter().enumerate() {
        let (p, phat) = (format!("P-{v}"), format!("Phat-{v}"));
        let pair = Description::OneOf(vec![ind(&p), ind(&phat)]);
        let both = Description::all_attr(
            "truthValue",
            Description::OneOf(vec![Individual::string("True"), Individual::string("False")]),
        );
        let n = i + 1;
        assertions.push((Name::new(&p), both.clone()));
        dummies.push(Name::new(format!("dummy-p-{n}")));
        assertions.push((Name::new(&phat), both));
        dummies.push(Name::new(format!("dummy-phat-{n}")));
        assertions.push((
            Name::new(format!("Yes-{v}")),
            Description::all_attr("approve", Description::and([pair.clone(), truth("True")])),
        ));
        dummies.push(Name::new(format!("dummy-yes-{n}")));
        assertions.push((
            Name::new(format!("No-{v}")),
            Description::all_attr("deny", Description::and([pair, truth("False")])),
        ));
        dummies.push(Name::new(format!("dummy-no-{n}")));
    }
    let mut disjuncts = Vec::new();
    for (i, term) in f.negate().terms.iter().enumerate() {
        let names: BTreeSet<String> = term.iter().map(|&l| literal_name(f, l)).collect();
        let c = format!("C{}", i + 1);
        assertions.push((
            Name::new(&c),
            Description::and([
                Description::all_role("conjuncts", Description::OneOf(names.iter().map(|n| ind(n)).collect())),
                Description::at_least(names.len() as u32, "conjuncts"),
            ]),
        ));
        dummies.push(Name::new(format!("dummy-c-{}", i + 1)));
        disjuncts.push(ind(&c));
    }
    assertions.push((
        Name::new("G"),
        Description::all_role("disjunctsHolding", Description::OneOf(disjuncts)),
    ));
    dummies.push(Name::new("formula"));

    let valid_formulae = Description::and([
        Description::at_least(1, "disjunctsHolding"),
        Description::all_role("disjunctsHolding", Description::all_role("conjuncts", truth("True"))),
    ]);
    let upper = Description::all_attr("formula", Description::Named(Name::new("VALID-FORMULAE")));
    let lower = Description::and(assertions.iter().zip(&dummies).map(|((l, d), a)| {
        Description::AllAttr(
            a.clone(),
            Box::new(Description::and([
                Description::OneOf(vec![Individual::Classic(l.clone())]),
                d.clone(),
            ])),
        )
    }));

    let mut kb_text = String::new();
    for r in ["conjuncts", "disjunctsHolding"] {
        writeln!(kb_text, "role {r}").unwrap();
    }
    for a in ["truthValue", "approve", "deny"]
        .iter()
        .map(|s| s.to_string())
        .chain(dummies.iter().map(|d| d.to_string()))
    {
        writeln!(kb_text, "attribute {a}").unwrap();
    }
    for (l, _) in &assertions {
        writeln!(kb_text, "individual {l}").unwrap();
    }
    writeln!(kb_text, "concept VALID-FORMULAE := {valid_formulae}").unwrap();
    writeln!(kb_text, "concept UPPER := {upper}").unwrap();
    writeln!(kb_text, "concept LOWER := {lower}").unwrap();
    ReductionOutput {
        assertions,
        dummies,
        valid_formulae,
        upper,
        lower,
        kb_text,
    }
}

/// Brute-force validity of the negated formula next to the engine's
/// verdict on `UPPER` subsuming `LOWER`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IncompletenessReport {
    /// Whether the negation of the formula is valid, that is whether the
    /// formula is unsatisfiable.
    pub validity: bool,
    pub engine_verdict: bool,
    /// Valid, but the engine does not derive the subsumption.
    pub gap: bool,
}

pub fn demonstrate_incompleteness(f: &CnfFormula) -> Result<IncompletenessReport> {
    let validity = check_validity_bruteforce(&f.negate())?;
    let out = encode(f);
    let kb = out.knowledge_base()?;
    let engine_verdict = subsumes(
        &Description::Named(Name::new("UPPER")),
        &Description::Named(Name::new("LOWER")),
        &kb,
    )?;
    Ok(IncompletenessReport {
        validity,
        engine_verdict,
        gap: validity && !engine_verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Satisfiability by recursive splitting on the CNF itself.
    fn satisfiable(f: &CnfFormula) -> bool {
        fn go(clauses: &[[Literal; 3]], fixed: &mut Vec<Option<bool>>, next: usize) -> bool {
            let value = |l: &Literal, fixed: &Vec<Option<bool>>| fixed[l.var].map(|b| b == l.positive);
            if clauses.iter().any(|c| c.iter().all(|l| value(l, fixed) == Some(false))) {
                return false;
            }
            if next == fixed.len() {
                return true;
            }
            for b in [false, true] {
                fixed[next] = Some(b);
                if go(clauses, fixed, next + 1) {
                    return true;
                }
            }
            fixed[next] = None;
            false
        }
        go(&f.clauses, &mut vec![None; f.variables.len()], 0)
    }

    fn p_and_not_p() -> CnfFormula {
        let p = Literal::pos(0);
        CnfFormula::with_numbered_variables(1, vec![[p; 3], [p.negated(); 3]]).unwrap()
    }

    #[test]
    fn counts_follow_the_construction() {
        let f = CnfFormula::random(5, 12, 1);
        let out = encode(&f);
        assert_eq!(out.assertions.len(), 4 * 5 + 12 + 1);
        assert_eq!(out.dummies.len(), 4 * 5 + 12 + 1);
        let small = encode(&p_and_not_p());
        assert_eq!(small.assertions.len(), 4 + 2 + 1);
    }

    #[test]
    fn disjunct_descriptions() {
        let f =
            CnfFormula::with_numbered_variables(3, vec![[Literal::pos(0), Literal::neg(1), Literal::neg(2)]]).unwrap();
        let out = encode(&f);
        let (c, d) = &out.assertions[12];
        assert_eq!(c.as_str(), "C1");
        assert_eq!(
            d.to_string(),
            "and(all(conjuncts,one-of(P-x2,P-x3,Phat-x1)),at-least(3,conjuncts))"
        );
        assert_eq!(out.assertions[13].1.to_string(), "all(disjunctsHolding,one-of(C1))");
    }

    #[test]
    fn output_loads_as_a_knowledge_base() {
        for seed in 0..5 {
            let out = encode(&CnfFormula::random(4, 10, seed));
            let kb = out.knowledge_base().unwrap();
            assert!(!kb.canonical(&out.lower).unwrap().is_incoherent());
        }
    }

    #[test]
    fn brute_force_small_cases() {
        assert!(check_validity_bruteforce(&p_and_not_p().negate()).unwrap());
        let f =
            CnfFormula::with_numbered_variables(3, vec![[Literal::pos(0), Literal::pos(1), Literal::pos(2)]]).unwrap();
        assert!(!check_validity_bruteforce(&f.negate()).unwrap());
        let big = DnfFormula {
            variables: 21,
            terms: vec![],
        };
        assert!(matches!(
            check_validity_bruteforce(&big),
            Err(Error::TooManyVariables(21, 20))
        ));
    }

    #[test]
    fn brute_force_agrees_with_splitting() {
        let mut valid = 0;
        for seed in 0..200 {
            let f = CnfFormula::random(6, 60, seed);
            let v = check_validity_bruteforce(&f.negate()).unwrap();
            assert_eq!(v, !satisfiable(&f), "seed {seed}");
            valid += v as usize;
        }
        assert!(valid > 0);
    }

    #[test]
    fn reports() {
        let r = demonstrate_incompleteness(&p_and_not_p()).unwrap();
        assert_eq!(
            r,
            IncompletenessReport {
                validity: true,
                engine_verdict: false,
                gap: true
            }
        );
        let f =
            CnfFormula::with_numbered_variables(3, vec![[Literal::pos(0), Literal::pos(1), Literal::pos(2)]]).unwrap();
        let r = demonstrate_incompleteness(&f).unwrap();
        assert_eq!(
            r,
            IncompletenessReport {
                validity: false,
                engine_verdict: false,
                gap: false
            }
        );
    }

    #[test]
    fn dimacs() {
        let f = parse_dimacs("c example\np cnf 3 2\n1 -2 3 0\n-1\n 2 0\n").unwrap();
        assert_eq!(f.variables().len(), 3);
        assert_eq!(f.clauses()[1], [Literal::neg(0), Literal::pos(1), Literal::pos(1)]);
        for bad in [
            "1 2 0",
            "p cnf 2 1\n1 2 3 0",
            "p cnf 2 1\n1 2",
            "p cnf 2 2\n1 0",
            "p cnf 2 1\n1 2 -1 2 0",
            "p cnf 1 1\n0",
        ] {
            assert!(matches!(parse_dimacs(bad), Err(Error::Dimacs(_))), "{bad}");
        }
    }
}
