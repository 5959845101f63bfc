//! Seeded random descriptions over a small fixed vocabulary.
//!
//! Concepts `A`, `B`, `C` with `A` and `B` disjoint; roles `r`, `s`;
//! attributes `a`, `b`, `c`; individuals `P`, `Q`, `R`; host values `1`,
//! `2` and `"x"`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kb::KnowledgeBase;
use crate::syntax::{parse_kb, Description, Individual, Name};

pub const CORPUS_KB: &str = "\
role r
role s
attribute a
attribute b
attribute c
individual P
individual Q
individual R
disjoint A B
";

/// The knowledge base every corpus description is read against.
pub fn corpus_kb() -> KnowledgeBase {
    parse_kb(CORPUS_KB).expect("the corpus knowledge base parses")
}

/// Generator shape.
#[derive(Clone, Debug)]
pub struct CorpusConfig {
    pub max_depth: usize,
    pub max_number: u32,
    /// Individuals and values per `one-of`, at most.
    pub max_individuals: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            max_depth: 4,
            max_number: 3,
            max_individuals: 3,
        }
    }
}

const CONCEPTS: [&str; 3] = ["A", "B", "C"];
const ROLES: [&str; 2] = ["r", "s"];
const ATTRS: [&str; 3] = ["a", "b", "c"];
const HOST_TYPES: [&str; 3] = ["INTEGER", "NUMBER", "STRING"];

pub struct Generator {
    rng: ChaCha8Rng,
    cfg: CorpusConfig,
}

impl Generator {
    pub fn new(seed: u64, cfg: CorpusConfig) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cfg,
        }
    }

    fn pick(&mut self, xs: &[&str]) -> Name {
        Name::new(xs.choose(&mut self.rng).unwrap())
    }

    fn classic_individual(&mut self) -> Individual {
        Individual::Classic(self.pick(&["P", "Q", "R"]))
    }

    fn host_value(&mut self) -> Individual {
        match self.rng.gen_range(0..3) {
            0 => Individual::int(1),
            1 => Individual::int(2),
            _ => Individual::string("x"),
        }
    }

    fn individual(&mut self) -> Individual {
        if self.rng.gen_bool(0.7) {
            self.classic_individual()
        } else {
            self.host_value()
        }
    }

    fn path(&mut self) -> Vec<Name> {
        let len = self.rng.gen_range(1..=2);
        (0..len).map(|_| self.pick(&ATTRS)).collect()
    }

    fn leaf(&mut self) -> Description {
        let n = self.cfg.max_number;
        match self.rng.gen_range(0..20) {
            0..=3 => Description::Concept(self.pick(&CONCEPTS)),
            4 => Description::ClassicThing,
            5 => [Description::Thing, Description::HostThing, Description::Nothing][self.rng.gen_range(0..3)].clone(),
            6 => Description::HostConcept(self.pick(&HOST_TYPES)),
            7..=8 => Description::AtLeast(self.rng.gen_range(1..=n.max(1)), self.pick(&ROLES)),
            9..=10 => Description::AtMost(self.rng.gen_range(0..=n), self.pick(&ROLES)),
            11..=12 => Description::SameAs(self.path(), self.path()),
            13..=14 => {
                let l = self.individual();
                Description::FillsRole(self.pick(&ROLES), l)
            }
            15 => {
                let l = self.individual();
                Description::FillsAttr(self.pick(&ATTRS), l)
            }
            _ => {
                let k = self.rng.gen_range(1..=self.cfg.max_individuals.max(1));
                let host = self.rng.gen_bool(0.3);
                let mut ls: Vec<Individual> = (0..k)
                    .map(|_| {
                        if host {
                            self.host_value()
                        } else {
                            self.classic_individual()
                        }
                    })
                    .collect();
                ls.sort();
                ls.dedup();
                Description::OneOf(ls)
            }
        }
    }

    /// A random description of depth at most `depth`.
    pub fn description(&mut self, depth: usize) -> Description {
        if depth == 0 || self.rng.gen_bool(0.35) {
            return self.leaf();
        }
        match self.rng.gen_range(0..3) {
            0 => {
                let k = self.rng.gen_range(2..=3);
                Description::And((0..k).map(|_| self.description(depth - 1)).collect())
            }
            1 => {
                let r = self.pick(&ROLES);
                Description::AllRole(r, Box::new(self.description(depth - 1)))
            }
            _ => {
                let a = self.pick(&ATTRS);
                Description::AllAttr(a, Box::new(self.description(depth - 1)))
            }
        }
    }

    /// A description that tends to subsume `c`, built by dropping and
    /// loosening parts of it.
    pub fn weaken(&mut self, c: &Description) -> Description {
        match c {
            Description::And(ds) => {
                let mut kept = Vec::new();
                for d in ds {
                    if self.rng.gen_bool(0.7) {
                        kept.push(self.weaken(d));
                    }
                }
                match kept.len() {
                    0 => Description::Thing,
                    1 => kept.into_iter().next().unwrap(),
                    _ => Description::And(kept),
                }
            }
            Description::AllRole(r, d) => Description::AllRole(r.clone(), Box::new(self.weaken(d))),
            Description::AllAttr(a, d) => Description::AllAttr(a.clone(), Box::new(self.weaken(d))),
            Description::AtLeast(n, r) if *n > 1 => Description::AtLeast(n - self.rng.gen_range(0..=1), r.clone()),
            Description::AtMost(n, r) => Description::AtMost(n + self.rng.gen_range(0..=1), r.clone()),
            Description::OneOf(ls) if self.rng.gen_bool(0.5) => {
                let extra = if ls.first().is_some_and(Individual::is_host) {
                    self.host_value()
                } else {
                    self.classic_individual()
                };
                let mut ls = ls.clone();
                ls.push(extra);
                ls.sort();
                ls.dedup();
                Description::OneOf(ls)
            }
            Description::Concept(_) if self.rng.gen_bool(0.2) => Description::ClassicThing,
            other => other.clone(),
        }
    }

    /// A (subsumer candidate, subsumee) pair. A third of the pairs are
    /// independent, a third weaken the subsumee, a third strengthen the
    /// subsumer into the subsumee.
    pub fn pair(&mut self) -> (Description, Description) {
        let depth = self.cfg.max_depth;
        match self.rng.gen_range(0..3) {
            0 => (self.description(depth), self.description(depth)),
            1 => {
                let c = self.description(depth);
                (self.weaken(&c), c)
            }
            _ => {
                let d = self.description(depth.saturating_sub(1));
                let extra = self.description(depth.saturating_sub(1));
                (d.clone(), Description::And(vec![d, extra]))
            }
        }
    }
}

/// `a_i = b_i` for `i` in `1..=n` and `a_i = a_{i+1}` for `i < n`. Every
/// end node merges into one, so the canonical graph has two nodes.
pub fn chain_family(n: usize) -> Description {
    let same = |x: String, y: String| Description::SameAs(vec![Name::new(x)], vec![Name::new(y)]);
    let mut parts: Vec<Description> = (1..=n).map(|i| same(format!("a{i}"), format!("b{i}"))).collect();
    parts.extend((1..n).map(|i| same(format!("a{i}"), format!("a{}", i + 1))));
    Description::and(parts)
}

/// `k` nested `all(friend, ...)` around `TALL`.
pub fn nested_friends(k: usize) -> Description {
    (0..k).fold(Description::concept("TALL"), |d, _| Description::all_attr("friend", d))
}

/// `all(friend, TALL)` together with `friend = friend ∘ friend`.
pub fn self_similar_friends() -> Description {
    Description::and([
        nested_friends(1),
        Description::same_as(&["friend"], &["friend", "friend"]),
    ])
}
