//! The `classic` binary: outputs, exit codes, determinism.

use std::process::{Command, Output};

fn classic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_classic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn graph_matches_golden_file() {
    let o = classic(&[
        "graph",
        "and(GAME, all(participants, PERSON), same-as((coach),(captain,father)))",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), include_str!("golden/game_graph.json"));
}

#[test]
fn subsumes_answers_with_exit_code() {
    let yes = classic(&[
        "subsumes",
        "at-least(2,participants)",
        "and(GAME, at-least(4,participants))",
    ]);
    assert_eq!((yes.status.code(), stdout(&yes).as_str()), (Some(0), "yes\n"));
    let no = classic(&[
        "subsumes",
        "and(GAME, at-least(4,participants))",
        "at-least(2,participants)",
    ]);
    assert_eq!((no.status.code(), stdout(&no).as_str()), (Some(1), "no\n"));
}

#[test]
fn input_errors_exit_3_with_a_position() {
    let o = classic(&["parse", "all(r, and(A,, B))"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:14"));

    let dir = std::env::temp_dir().join(format!("classic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let kb = dir.join("bad.kb");
    std::fs::write(&kb, "role r\nconcept X := all(r,\n").unwrap();
    let o = classic(&["classify", "--kb", kb.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let cnf = dir.join("bad.cnf");
    std::fs::write(&cnf, "p cnf 2 1\n1 2 3 0\n").unwrap();
    assert_eq!(classic(&["reduce", cnf.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(classic(&[]).status.code(), Some(2));
    assert_eq!(classic(&["canon"]).status.code(), Some(2));
    assert_eq!(classic(&["fuzz", "--seed", "x"]).status.code(), Some(2));
    assert_eq!(classic(&["canon", "A", "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn classify_and_reduce() {
    let dir = std::env::temp_dir().join(format!("classic-cli-ok-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let kb = dir.join("games.kb");
    std::fs::write(
        &kb,
        "role participants\nconcept SMALL := at-least(2, participants)\nconcept BIG := at-least(4, participants)\n",
    )
    .unwrap();
    let o = classic(&["classify", "--kb", kb.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let t: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(t.as_array().unwrap().len(), 3);

    let cnf = dir.join("contradiction.cnf");
    std::fs::write(&cnf, "c p and not p\np cnf 1 2\n1 0\n-1 0\n").unwrap();
    let o = classic(&["reduce", cnf.to_str().unwrap()]);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        r,
        serde_json::json!({"validity": true, "engine_verdict": false, "gap": true})
    );
}

#[test]
fn runs_are_byte_deterministic() {
    for args in [
        &["countermodel", "at-least(3,r)", "at-least(2,r)"][..],
        &["fuzz", "--seed", "4", "--cases", "25"],
        &["canon", "and(all(r, one-of(P, Q)), at-least(2, r), same-as((a),(b,c)))"],
    ] {
        let (a, b) = (classic(args), classic(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
