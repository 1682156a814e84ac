use proptest::prelude::*;
use proptest::test_runner::{Config, FileFailurePersistence, RngSeed};
use tensorcoh_cli::corpus;
use tensorcoh_cli::dsl::{parse, Command, Expr, StmtKind};

#[test]
fn two_line_session_has_three_statements() {
    let script = parse("ring S = poly(vars=[x, y])\nmodule m = maximal(S)\nh (m ⊗ m) 0\n").unwrap();
    assert_eq!(script.stmts.len(), 3);
    match &script.stmts[2].kind {
        StmtKind::Command(Command::H { target: Expr::Tensor(a, b), from: 0, to: None }) => {
            assert_eq!(**a, Expr::Name("m".into()));
            assert_eq!(**b, Expr::Name("m".into()));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn inhomogeneous_entry_is_located() {
    let text = "ring S = poly(vars=[x, y])\nmodule M = coker S [[x, y], [x+1, y]]\n";
    let err = parse(text).unwrap_err();
    assert_eq!((err.span.line, err.span.col), (2, 30));
    assert!(err.message.contains("x+1"), "{}", err.message);
    assert!(err.to_string().starts_with("2:30:"));
}

#[test]
fn degree_incompatible_twists_are_rejected() {
    let text = "ring S = poly(vars=[x, y])\nmodule M = coker S [[x, y^2]] twists [0] -> [1, 1]\n";
    let err = parse(text).unwrap_err();
    assert_eq!(err.span.line, 2);
    assert!(err.message.contains("y^2"), "{}", err.message);
}

#[test]
fn errors_name_the_position() {
    let cases = [
        ("ring S = poly(vars=[x])\nh M 0\n", (2, 3), "undefined name `M`"),
        ("ring S = poly(vars=[x])\nring S = poly(vars=[y])\n", (2, 6), "already defined"),
        ("ring S = poly(vars=[x])\nmodule M = frobnicate(S)\n", (2, 12), "unknown function"),
        ("ring S = poly(vars=[x])\ncheck no-such S\n", (2, 7), "unknown check"),
        ("ring S = poly(vars=[x])\nideal I = (x) in S\nexpect h = 1 guessed\n", (3, 14), "provenance"),
        ("ring S = poly(vars=[x])\nideal I = (q) in S\n", (2, 12), "unknown variable"),
    ];
    for (text, (line, col), needle) in cases {
        let err = parse(text).unwrap_err();
        assert_eq!((err.span.line, err.span.col), (line, col), "{text}: {err}");
        assert!(err.message.contains(needle), "{text}: {err}");
    }
}

#[test]
fn corpus_round_trips() {
    for f in corpus::builtin() {
        let once = parse(&f.text).unwrap_or_else(|e| panic!("{}: {e}", f.id));
        let printed = once.to_string();
        let twice = parse(&printed).unwrap_or_else(|e| panic!("{}: {e}\n{printed}", f.id));
        assert_eq!(once, twice, "{}", f.id);
        assert_eq!(printed, twice.to_string(), "{}", f.id);
    }
}

#[test]
fn corpus_fixtures_are_well_formed() {
    for f in corpus::builtin() {
        let script = f.parse().unwrap_or_else(|e| panic!("{e}"));
        assert!(script.anchors().count() > 0 || f.id.starts_with("koszul"), "{} has no anchor", f.id);
    }
}

fn expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![Just("A".to_string()), Just("B".to_string()), Just("S".to_string())];
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) ⊗ ({b})")),
            inner.clone().prop_map(|a| format!("({a})*")),
            (inner.clone(), 0..3i64).prop_map(|(a, k)| format!("syz({a}, {k})")),
            (inner.clone(), -2..3i64).prop_map(|(a, k)| format!("twist({a}, {k})")),
            (inner.clone(), inner).prop_map(|(a, b)| format!("sum({a}, {b})")),
        ]
    })
}

fn command() -> impl Strategy<Value = String> {
    prop_oneof![
        (expr(), 0..3usize, prop::option::of(0..3usize))
            .prop_map(|(e, i, j)| match j {
                Some(j) => format!("h {e} {i}..{}", i + j),
                None => format!("h {e} {i}"),
            }),
        expr().prop_map(|e| format!("length {e}")),
        (expr(), prop::option::of(1..6usize)).prop_map(|(e, b)| match b {
            Some(b) => format!("resolve {e} bound {b}"),
            None => format!("resolve {e}"),
        }),
        (expr(), expr(), prop::option::of(0..3usize)).prop_map(|(m, n, r)| match r {
            Some(r) => format!("check lemma-0 {m} {n} r={r}"),
            None => format!("check lemma-0 {m} {n}"),
        }),
        (expr(), 1..5usize).prop_map(|(e, n)| format!("depthseq {e} n={n} ideal a")),
    ]
}

proptest! {
    #![proptest_config(Config {
        cases: 64,
        failure_persistence: Some(Box::new(FileFailurePersistence::Off)),
        rng_seed: RngSeed::Fixed(0xd51),
        ..Config::default()
    })]

    #[test]
    fn generated_scripts_round_trip(cmds in prop::collection::vec(command(), 1..5)) {
        let mut text = String::from(
            "ring S = poly(vars=[x, y, z])\nideal a = (x, y^2) in S\nmodule A = ideal (x, y) in S\nmodule B = coker S [[x, y]] twists [0] -> [1, 1]\n",
        );
        for c in &cmds {
            text.push_str(c);
            text.push('\n');
        }
        let once = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        let printed = once.to_string();
        let twice = parse(&printed).map_err(|e| TestCaseError::fail(format!("{e}\n{printed}")))?;
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(printed, twice.to_string());
    }
}
