//! Seeded random worlds over a vocabulary.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Elem, Interpretation, Vocabulary};
use crate::graph::Atom;
use crate::kb::KnowledgeBase;
use crate::syntax::{Name, Realm};

/// Shape parameters for [`sample_world`].
#[derive(Clone, Debug)]
pub struct SampleConfig {
    /// Classic elements beyond those realizing individuals, at most.
    pub extra_classic: usize,
    /// Role fillers per element and role, at most.
    pub max_fillers: u32,
    /// Probability that an element is in a given concept or test.
    pub density: f64,
    /// Probability that a filler or attribute value is classic.
    pub classic_bias: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            extra_classic: 5,
            max_fillers: 3,
            density: 0.5,
            classic_bias: 0.65,
        }
    }
}

/// A random well-formed world interpreting every name in `vocab` and
/// honouring the disjointness declarations of `kb`.
///
/// Each individual gets one to three classic elements of its own. The host
/// carrier holds every value in the vocabulary and, for each host type and
/// for no type at all, `max_number + |values| + 4` anonymous elements.
pub fn sample_world(vocab: &Vocabulary, kb: &KnowledgeBase, seed: u64, cfg: &SampleConfig) -> Interpretation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = Interpretation::new(kb.lattice().clone());
    for l in &vocab.individuals {
        for _ in 0..rng.gen_range(1..=3) {
            let e = w.add_classic();
            w.add_to_individual(l, e);
        }
    }
    for _ in 0..rng.gen_range(1..=cfg.extra_classic.max(1)) {
        w.add_classic();
    }
    let values: Vec<Elem> = vocab.values.iter().map(|v| w.add_value(v)).collect();
    let margin = vocab.max_number as usize + vocab.values.len() + 4;
    let types: Vec<Name> = kb.lattice().types().cloned().collect();
    for t in types.into_iter().map(Some).chain([None]) {
        for _ in 0..margin {
            w.add_fresh(t.clone());
        }
    }
    let classic: Vec<Elem> = w.classic_domain().collect();
    let host: Vec<Elem> = w.host_domain().collect();
    let pick = |rng: &mut ChaCha8Rng| -> Elem {
        if rng.gen_bool(cfg.classic_bias) {
            *classic.choose(rng).unwrap()
        } else if !values.is_empty() && rng.gen_bool(0.5) {
            *values.choose(rng).unwrap()
        } else {
            *host.choose(rng).unwrap()
        }
    };
    for c in &vocab.concepts {
        for &e in &classic {
            if rng.gen_bool(cfg.density) {
                w.add_concept(c, e);
            }
        }
    }
    for group in kb.disjoint_groups() {
        let names: Vec<&Name> = group
            .iter()
            .filter_map(|a| match a {
                Atom::Concept(c) => Some(c),
                _ => None,
            })
            .collect();
        for &e in &classic {
            let holders: Vec<&Name> = names
                .iter()
                .copied()
                .filter(|c| w.concept_ext(c).is_some_and(|s| s.contains(&e)))
                .collect();
            if holders.len() > 1 {
                let keep = *holders.choose(&mut rng).unwrap();
                for c in holders {
                    if c != keep {
                        w.concepts.get_mut(c).unwrap().remove(&e);
                    }
                }
            }
        }
    }
    for (f, realm) in &vocab.tests {
        let pool = if *realm == Realm::Classic { &classic } else { &host };
        for &e in pool {
            if rng.gen_bool(cfg.density) {
                w.add_test(f, *realm, e);
            }
        }
    }
    for r in &vocab.roles {
        w.declare_role(r);
        for &e in &classic {
            for _ in 0..rng.gen_range(0..=cfg.max_fillers) {
                let t = pick(&mut rng);
                w.add_role(r, e, t);
            }
        }
    }
    for a in &vocab.attributes {
        for &e in &classic {
            let t = pick(&mut rng);
            w.set_attr(a, e, t);
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_description, parse_kb};

    #[test]
    fn samples_are_valid_and_reproducible() {
        let kb = parse_kb("disjoint A B").unwrap();
        let d = parse_description(
            "and(A, B, all(f, one-of(P, Q)), at-least(2, r), same-as((f),(g)), fills(r, 3))",
            &kb,
        )
        .unwrap();
        let v = Vocabulary::new().with_kb(&kb).with_description(&d);
        let cfg = SampleConfig::default();
        for seed in 0..20 {
            let w = sample_world(&v, &kb, seed, &cfg);
            assert!(w.validate().is_ok(), "seed {seed}");
            assert!(w.respects(&kb));
            assert_eq!(w, sample_world(&v, &kb, seed, &cfg));
        }
    }
}
