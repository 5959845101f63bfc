//! Randomized cross-checks of the subsumption algorithm against the
//! world semantics.
//!
//! Each case draws a pair `(d, c)` from the corpus generator and asks
//! whether `d` subsumes `c`. A positive answer is checked for soundness:
//! the extension of `c` must lie inside that of `d` in every sampled world.
//! A negative answer is checked for completeness: a graphical world of `c`
//! steered away from `d` must exist and must separate them. Every case also
//! checks that canonicalization is idempotent and schedule-independent.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::corpus::{corpus_kb, CorpusConfig, Generator};
use crate::error::{Error, Result};
use crate::graph::{isomorphic, DescriptionGraph};
use crate::kb::KnowledgeBase;
use crate::normalize::{canonicalize, canonicalize_with, Schedule};
use crate::oracle::{
    construct_graphical_world, merge_worlds, sample_world, Evaluator, GraphicalWorld, SampleConfig, Vocabulary,
};
use crate::subsume::subsumes_graph;
use crate::syntax::Description;

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub seed: u64,
    pub cases: usize,
    /// Sampled worlds per subsumed pair.
    pub worlds: usize,
    pub corpus: CorpusConfig,
    pub sample: SampleConfig,
    pub check_soundness: bool,
    pub check_completeness: bool,
    pub check_normal_forms: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 0,
            cases: 1000,
            worlds: 50,
            corpus: CorpusConfig::default(),
            sample: SampleConfig::default(),
            check_soundness: true,
            check_completeness: true,
            check_normal_forms: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    /// `d` subsumes `c`, yet some world has an element of `c` outside `d`.
    Unsound,
    /// `d` does not subsume `c`, yet no separating world was built.
    Incomplete,
    /// The graph's extension differs from the description's.
    Extension,
    /// Canonicalizing a canonical graph changed it.
    NotIdempotent,
    /// The two schedules disagree.
    NotConfluent,
    /// The oracle itself reported an error.
    Oracle,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub case: usize,
    pub kind: FailureKind,
    pub subsumer: String,
    pub subsumee: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub cases: usize,
    pub subsumed: usize,
    pub not_subsumed: usize,
    /// Worlds in which containment was checked.
    pub worlds_checked: usize,
    /// Worlds in which the subsumee had at least one element.
    pub worlds_inhabited: usize,
    pub countermodels: usize,
    pub failures: Vec<Failure>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn count(&self, kind: FailureKind) -> usize {
        self.failures.iter().filter(|f| f.kind == kind).count()
    }
}

fn world_seed(seed: u64, case: usize, k: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((case as u64) << 20) ^ k as u64
}

/// Runs the configured checks over `cfg.cases` corpus pairs.
pub fn run(cfg: &FuzzConfig) -> FuzzReport {
    let kb = corpus_kb();
    let mut gen = Generator::new(cfg.seed, cfg.corpus.clone());
    let base = Vocabulary::new().with_kb(&kb);
    let mut report = FuzzReport {
        seed: cfg.seed,
        cases: cfg.cases,
        ..Default::default()
    };
    let start = Instant::now();
    for case in 0..cfg.cases {
        let (d, c) = gen.pair();
        let mut fail = |kind, detail: String| {
            report.failures.push(Failure {
                case,
                kind,
                subsumer: d.to_string(),
                subsumee: c.to_string(),
                detail,
            })
        };
        let outcome = check_case(cfg, &kb, &base, case, &d, &c);
        match outcome {
            Ok(o) => {
                if o.subsumed {
                    report.subsumed += 1;
                } else {
                    report.not_subsumed += 1;
                }
                report.worlds_checked += o.worlds_checked;
                report.worlds_inhabited += o.worlds_inhabited;
                report.countermodels += o.countermodel as usize;
                for (kind, detail) in o.failures {
                    fail(kind, detail);
                }
            }
            Err(e) => fail(FailureKind::Oracle, e.to_string()),
        }
    }
    report.elapsed = start.elapsed();
    report
}

#[derive(Default)]
struct CaseOutcome {
    subsumed: bool,
    worlds_checked: usize,
    worlds_inhabited: usize,
    countermodel: bool,
    failures: Vec<(FailureKind, String)>,
}

fn check_case(
    cfg: &FuzzConfig,
    kb: &KnowledgeBase,
    base: &Vocabulary,
    case: usize,
    d: &Description,
    c: &Description,
) -> Result<CaseOutcome> {
    let d = kb.expand(d)?;
    let c = kb.expand(c)?;
    let raw = kb.graph(&c)?;
    let g = canonicalize(&raw, kb);
    let mut out = CaseOutcome {
        subsumed: subsumes_graph(&d, &g),
        ..Default::default()
    };

    if cfg.check_normal_forms {
        for (x, raw_x, g_x) in [(&c, raw.clone(), g.clone()), (&d, kb.graph(&d)?, kb.canonical(&d)?)] {
            if !isomorphic(&canonicalize(&g_x, kb), &g_x) {
                out.failures.push((FailureKind::NotIdempotent, x.to_string()));
            }
            if !isomorphic(&canonicalize_with(&raw_x, kb, Schedule::Pairwise), &g_x) {
                out.failures.push((FailureKind::NotConfluent, x.to_string()));
            }
        }
    }

    if out.subsumed && cfg.check_soundness {
        let vocab = base.clone().with_description(&d).with_description(&c);
        let seeded = seeded_world(&g, kb);
        for k in 0..cfg.worlds {
            let mut w = sample_world(&vocab, kb, world_seed(cfg.seed, case, k), &cfg.sample);
            if k % 2 == 1 {
                if let Some(m) = &seeded {
                    w = merge_worlds(&w, &m.world);
                }
            }
            let ev = Evaluator::new(&w);
            let ext_c = ev.description(&c)?;
            let ext_d = ev.description(&d)?;
            let ext_g = ev.graph(&g)?;
            out.worlds_checked += 1;
            out.worlds_inhabited += !ext_c.is_empty() as usize;
            if ext_g != ext_c {
                out.failures.push((
                    FailureKind::Extension,
                    format!("world {k}: canonical graph and description differ"),
                ));
            }
            if let Some(e) = ext_c.difference(&ext_d).next() {
                out.failures.push((
                    FailureKind::Unsound,
                    format!("world {k}: element {e} is in the subsumee only"),
                ));
                break;
            }
        }
    }

    if !out.subsumed && cfg.check_completeness {
        match construct_graphical_world(&g, Some(&d), kb) {
            Ok(m) => {
                let ev = Evaluator::new(&m.world);
                let in_c = ev.description(&c)?.contains(&m.element);
                let in_d = ev.description(&d)?.contains(&m.element);
                if in_c && !in_d {
                    out.countermodel = true;
                } else {
                    out.failures.push((
                        FailureKind::Incomplete,
                        format!("constructed world does not separate (in subsumee: {in_c}, in subsumer: {in_d})"),
                    ));
                }
            }
            Err(e) => out.failures.push((FailureKind::Incomplete, e.to_string())),
        }
    }
    Ok(out)
}

/// An unsteered graphical world of `g`, so that sampled worlds merged with
/// it contain at least one element of the subsumee.
fn seeded_world(g: &DescriptionGraph, kb: &KnowledgeBase) -> Option<GraphicalWorld> {
    match construct_graphical_world(g, None, kb) {
        Ok(m) => Some(m),
        Err(Error::Incoherent) => None,
        Err(_) => None,
    }
}
