use std::path::Path;
use std::process::{Command, Output};

use tensorcoh_cli::corpus;

fn tensorcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tensorcoh")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn corpus_passes() {
    let o = tensorcoh(&["run", "corpus"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}{}", stderr(&o));
    let n = corpus::builtin().len();
    assert!(out.contains(&format!("{n}/{n} fixtures passed")), "{out}");
    assert!(out.contains("veronese-canonical") && out.contains("known discrepancy"));
}

#[test]
fn fixture_outputs() {
    let o = tensorcoh(&["run", "fixture", "f-m2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), r#"{"h0":1}"#);
    let o = tensorcoh(&["run", "fixture", "f-55ii-d4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), r#"{"h":[0,1,4,4]}"#);
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).display().to_string();
    for (name, threads) in [("a", "1"), ("b", "4")] {
        let o = tensorcoh(&[
            "run",
            "corpus",
            "--no-timing",
            "--threads",
            threads,
            "--json",
            &path(&format!("{name}.json")),
            "--csv",
            &path(&format!("{name}.csv")),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let read = |n: &str| std::fs::read(dir.path().join(n)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
    assert_eq!(read("a.csv"), read("b.csv"));
    assert!(!read("a.csv").is_empty());

    let a = tensorcoh(&["explore", "vasc-81", "--trials", "40", "--seed", "42"]);
    let b = tensorcoh(&["explore", "vasc-81", "--trials", "40", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let csv = stdout(&a);
    assert!(csv.starts_with("instance_id,description,lhs,rhs,ratio\n"));
    assert_eq!(csv.lines().count(), 41);
}

#[test]
fn every_fixture_anchor_is_listed() {
    let o = tensorcoh(&["list-checks"]);
    assert_eq!(o.status.code(), Some(0));
    let listing = stdout(&o);
    for f in corpus::builtin() {
        for a in f.parse().unwrap().anchors() {
            assert!(listing.contains(&format!("anchor: {a}\n")), "{}: {a}", f.id);
        }
    }
    let o = tensorcoh(&["list-checks", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().any(|c| c["id"] == "f-m2" && c["family"] == "formula"));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.tc", "ring S = poly(vars=[x, y])\nmodule m = maximal(S)\nh m ⊗ m 0\nexpect h = 1 stated\n");
    let o = tensorcoh(&["run", &good]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains(r#""lhs":{"h":1}"#), "{}", stdout(&o));

    let wrong = write(dir.path(), "wrong.tc", "ring S = poly(vars=[x, y])\nmodule m = maximal(S)\nh m ⊗ m 0\nexpect h = 2 frozen\n");
    let o = tensorcoh(&["run", &wrong]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("wrong line 4") && err.contains("expected 2") && err.contains("got 1"), "{err}");

    let bad = write(dir.path(), "bad.tc", "ring S = poly(vars=[x, y])\nmodule M = coker S [[x+1]]\n");
    let o = tensorcoh(&["run", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.tc:2:22"), "{}", stderr(&o));

    let o = tensorcoh(&["run", "fixture", "no-such-fixture"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unexcused_failure_aborts_the_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let fixtures = corpus::builtin();
    let f_m2 = fixtures.iter().find(|f| f.id == "f-m2").unwrap();
    let veronese = fixtures.iter().find(|f| f.id == "veronese-canonical").unwrap();
    let stripped: String = veronese
        .text
        .lines()
        .filter(|l| !l.starts_with("known-discrepancy"))
        .map(|l| format!("{l}\n"))
        .collect();
    write(dir.path(), "a-f-m2.tc", &f_m2.text.replace("fixture f-m2", "fixture a-f-m2"));
    write(dir.path(), "b-veronese.tc", &stripped.replace("fixture veronese-canonical", "fixture b-veronese"));
    write(dir.path(), "c-f-m2.tc", &f_m2.text.replace("fixture f-m2", "fixture c-f-m2"));
    let o = tensorcoh(&["run", "corpus", "--dir", &dir.path().display().to_string()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("a-f-m2") && !out.contains("c-f-m2"), "{out}");
    assert!(out.contains("aborted: b-veronese") && out.contains("f-tach fails"), "{out}");
}

#[test]
fn fmt_prints_canonical_form() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s.tc", "ring  S=poly(vars=[x,y])   # comment\nmodule m=maximal(S)\nh (m&m)* 0..1\n");
    let o = tensorcoh(&["fmt", &p]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ring S = poly(vars=[x, y])\nmodule m = maximal(S)\nh (m ⊗ m)* 0..1\n");
}
