//! Command-line front end.
//!
//! Exit codes: 0 for success and for a `yes` from `subsumes`, 1 for `no`
//! and for failed runs, 2 for usage errors, 3 for malformed input
//! (descriptions, knowledge bases, DIMACS files).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::Error;
use crate::fuzz::{run as run_fuzz, FuzzConfig};
use crate::graph::dump_graph;
use crate::kb::KnowledgeBase;
use crate::oracle::{construct_graphical_world, world_to_json};
use crate::reduction::{demonstrate_incompleteness, parse_dimacs};
use crate::subsume::subsumes;
use crate::syntax::{parse_description, parse_kb, Description};

#[derive(Parser, Debug)]
#[command(
    name = "classic",
    version,
    about = "Subsumption and canonical forms for CLASSIC descriptions"
)]
pub struct Cli {
    /// Knowledge-base file that descriptions are read against.
    #[arg(long, global = true, value_name = "PATH")]
    kb: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the parse tree of a description.
    Parse { desc: String },
    /// Print the description graph before normalization.
    Graph { desc: String },
    /// Print the canonical description graph.
    Canon { desc: String },
    /// Decide whether D subsumes C. Prints yes (exit 0) or no (exit 1).
    Subsumes {
        #[arg(value_name = "D")]
        subsumer: String,
        #[arg(value_name = "C")]
        subsumee: String,
    },
    /// Classify the named concepts of the knowledge base.
    Classify,
    /// Build a world with an element of C outside D.
    Countermodel {
        #[arg(value_name = "D")]
        subsumer: String,
        #[arg(value_name = "C")]
        subsumee: String,
    },
    /// Encode a DIMACS CNF formula and compare the engine with brute force.
    Reduce { cnf: PathBuf },
    /// Run the randomized soundness, completeness and normal-form checks.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        /// Extra classic elements per sampled world, at most.
        #[arg(long, value_name = "N", default_value_t = 5)]
        max_domain: usize,
    },
}

/// What went wrong, and which exit code it earns.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn from_error(e: Error, context: Option<&str>) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::Redeclaration(_)
            | Error::RecursiveConcept(_)
            | Error::UnknownName(_)
            | Error::UnknownHostType(_)
            | Error::HostLatticeOverlap(_)
            | Error::PrimitiveConflict(_)
            | Error::NotDisjointable(_)
            | Error::ExpansionTooLarge(_)
            | Error::Formula(_)
            | Error::Dimacs(_)
            | Error::Dump(_) => 3,
            _ => 1,
        };
        let message = match context {
            Some(c) => format!("{c}: {e}"),
            None => e.to_string(),
        };
        Failure { code, message }
    }
}

type Outcome = std::result::Result<(String, i32), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: 3,
        message: format!("{}: {e}", path.display()),
    })
}

fn load_kb(path: Option<&Path>) -> std::result::Result<KnowledgeBase, Failure> {
    match path {
        None => Ok(KnowledgeBase::default()),
        Some(p) => parse_kb(&read(p)?).map_err(|e| Failure::from_error(e, Some(&p.display().to_string()))),
    }
}

fn desc(text: &str, kb: &KnowledgeBase) -> std::result::Result<Description, Failure> {
    parse_description(text, kb).map_err(|e| Failure::from_error(e.into(), Some(text)))
}

fn tree(d: &Description, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let line = |out: &mut String, s: String| writeln!(out, "{pad}{s}").unwrap();
    match d {
        Description::And(ds) => {
            line(out, "and".into());
            ds.iter().for_each(|d| tree(d, depth + 1, out));
        }
        Description::AllRole(r, c) => {
            line(out, format!("all role {r}"));
            tree(c, depth + 1, out);
        }
        Description::AllAttr(a, c) => {
            line(out, format!("all attribute {a}"));
            tree(c, depth + 1, out);
        }
        Description::Primitive(c, tag) => {
            line(out, format!("primitive {tag}"));
            tree(c, depth + 1, out);
        }
        Description::Thing => line(out, "thing".into()),
        Description::ClassicThing => line(out, "classic-thing".into()),
        Description::HostThing => line(out, "host-thing".into()),
        Description::Nothing => line(out, "nothing".into()),
        Description::Concept(c) => line(out, format!("concept {c}")),
        Description::HostConcept(h) => line(out, format!("host-type {h}")),
        Description::Named(n) => line(out, format!("named {n}")),
        Description::AtLeast(n, r) => line(out, format!("at-least {n} {r}")),
        Description::AtMost(n, r) => line(out, format!("at-most {n} {r}")),
        Description::SameAs(a, b) => {
            let path = |p: &[crate::syntax::Name]| p.iter().map(|a| a.as_str()).collect::<Vec<_>>().join(" ");
            line(out, format!("same-as ({}) ({})", path(a), path(b)))
        }
        Description::FillsRole(r, l) => line(out, format!("fills role {r} {l}")),
        Description::FillsAttr(a, l) => line(out, format!("fills attribute {a} {l}")),
        Description::OneOf(ls) => line(
            out,
            format!(
                "one-of {}",
                ls.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
            ),
        ),
        Description::Test(f, realm) => line(out, format!("test {f} {realm}")),
    }
}

fn execute(cli: Cli) -> Outcome {
    let kb_path = cli.kb.as_deref();
    let fail = |e: Error| Failure::from_error(e, None);
    match cli.command {
        Command::Parse { desc: text } => {
            let kb = load_kb(kb_path)?;
            let mut out = String::new();
            tree(&desc(&text, &kb)?, 0, &mut out);
            Ok((out, 0))
        }
        Command::Graph { desc: text } => {
            let kb = load_kb(kb_path)?;
            let g = kb.graph(&desc(&text, &kb)?).map_err(fail)?;
            Ok((dump_graph(&g) + "\n", 0))
        }
        Command::Canon { desc: text } => {
            let kb = load_kb(kb_path)?;
            let g = kb.canonical(&desc(&text, &kb)?).map_err(fail)?;
            Ok((dump_graph(&g) + "\n", 0))
        }
        Command::Subsumes { subsumer, subsumee } => {
            let kb = load_kb(kb_path)?;
            let (d, c) = (desc(&subsumer, &kb)?, desc(&subsumee, &kb)?);
            Ok(if subsumes(&d, &c, &kb).map_err(fail)? {
                ("yes\n".into(), 0)
            } else {
                ("no\n".into(), 1)
            })
        }
        Command::Classify => {
            let path = kb_path.ok_or_else(|| Failure {
                code: 2,
                message: "classify needs --kb <PATH>".into(),
            })?;
            let kb = load_kb(Some(path))?;
            let t = kb.classify().map_err(fail)?;
            Ok((serde_json::to_string_pretty(&t.to_json()).unwrap() + "\n", 0))
        }
        Command::Countermodel { subsumer, subsumee } => {
            let kb = load_kb(kb_path)?;
            let (d, c) = (desc(&subsumer, &kb)?, desc(&subsumee, &kb)?);
            let g = kb.canonical(&c).map_err(fail)?;
            let m = match construct_graphical_world(&g, Some(&d), &kb) {
                Err(Error::Incoherent) => return Err(fail(Error::Subsumed)),
                other => other.map_err(fail)?,
            };
            let v = json!({"element": m.element, "world": world_to_json(&m.world)});
            Ok((serde_json::to_string_pretty(&v).unwrap() + "\n", 0))
        }
        Command::Reduce { cnf } => {
            let f = parse_dimacs(&read(&cnf)?).map_err(|e| Failure::from_error(e, Some(&cnf.display().to_string())))?;
            let r = demonstrate_incompleteness(&f).map_err(fail)?;
            Ok((serde_json::to_string_pretty(&r).unwrap() + "\n", 0))
        }
        Command::Fuzz {
            seed,
            cases,
            max_domain,
        } => {
            let mut cfg = FuzzConfig {
                seed,
                cases,
                ..Default::default()
            };
            cfg.sample.extra_classic = max_domain;
            let report = run_fuzz(&cfg);
            let code = if report.passed() { 0 } else { 1 };
            Ok((serde_json::to_string_pretty(&report).unwrap() + "\n", code))
        }
    }
}

/// Runs one invocation, writing results to `out` and diagnostics to
/// `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("classic").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn subsumes_exit_codes() {
        let (code, out, _) = call(&[
            "subsumes",
            "at-least(2,participants)",
            "and(GAME, at-least(4,participants))",
        ]);
        assert_eq!((code, out.as_str()), (0, "yes\n"));
        let (code, out, _) = call(&["subsumes", "at-least(4,participants)", "at-least(2,participants)"]);
        assert_eq!((code, out.as_str()), (1, "no\n"));
    }

    #[test]
    fn usage_and_parse_errors() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["subsumes", "A"]).0, 2);
        assert_eq!(call(&["classify"]).0, 2);
        let (code, _, err) = call(&["canon", "and(A,"]);
        assert_eq!(code, 3);
        assert!(err.contains("1:7"), "{err}");
    }

    #[test]
    fn incoherent_canon() {
        let (code, out, _) = call(&["canon", "and(at-least(2,r), at-most(1,r))"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"incoherent\": true"), "{out}");
    }

    #[test]
    fn countermodel_output() {
        let (code, out, _) = call(&["countermodel", "at-least(3,r)", "at-least(2,r)"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let e = v["element"].as_u64().unwrap();
        let fillers = v["world"]["roles"]["r"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|p| p[0].as_u64() == Some(e))
            .count();
        assert_eq!(fillers, 2);
        assert_eq!(call(&["countermodel", "at-least(2,r)", "at-least(3,r)"]).0, 1);
    }

    #[test]
    fn output_is_deterministic() {
        let args = [
            "countermodel",
            "all(r, and(A, fills(s, P)))",
            "and(at-least(2,r), all(r, A))",
        ];
        assert_eq!(call(&args), call(&args));
    }
}
