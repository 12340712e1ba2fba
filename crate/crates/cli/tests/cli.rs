use nhdm_cli::report::Report;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("nhdm").chain(args.iter().copied());
    let code = nhdm_cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn validator() -> jsonschema::Validator {
    let text = include_str!("../schema/report.schema.json");
    let schema: Value = serde_json::from_str(text).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

const JSON_INVOCATIONS: &[&[&str]] = &[
    &["classify", "--doublets", "3", "--format", "json"],
    &[
        "classify",
        "--doublets",
        "4",
        "--finite-only",
        "--format",
        "json",
    ],
    &["snf", "--matrix", "3,2;-3,-1", "--format", "json"],
    &["snf", "--matrix", "2,0;0,0", "--format", "json"],
    &["charges", "--doublets", "3", "--format", "json"],
    &[
        "construct",
        "cyclic",
        "--p",
        "9",
        "--n",
        "5",
        "--format",
        "json",
    ],
    &[
        "construct",
        "product",
        "--partition",
        "1,2",
        "--orders",
        "2,3",
        "--format",
        "json",
    ],
    &["cp-extend", "--doublets", "3", "--format", "json"],
    &[
        "cp-extend",
        "--doublets",
        "3",
        "--group",
        "Z8*",
        "--format",
        "json",
    ],
    &["check-z3z3", "--format", "json"],
    &["verify-bound", "--doublets", "3", "--format", "json"],
    &["probe-conjecture", "--doublets", "3", "--format", "json"],
    &[
        "witness",
        "--doublets",
        "3",
        "--group",
        "Z4",
        "--format",
        "json",
    ],
    &[
        "witness",
        "--doublets",
        "3",
        "--group",
        "Z5",
        "--format",
        "json",
    ],
];

#[test]
fn json_output_matches_schema_and_round_trips() {
    let v = validator();
    for args in JSON_INVOCATIONS {
        let (code, out, err) = run(args);
        assert_eq!(code, 0, "{args:?}: {err}");
        let value: Value = serde_json::from_str(&out).unwrap();
        let problems: Vec<String> = v.iter_errors(&value).map(|e| e.to_string()).collect();
        assert!(problems.is_empty(), "{args:?}: {problems:?}");
        let report: Report = serde_json::from_str(&out).unwrap();
        assert_eq!(report.to_json(), out, "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["classify", "--doublets", "4"][..],
        &["cp-extend"],
        &["charges", "--doublets", "4", "--format", "json"],
    ] {
        assert_eq!(run(args), run(args));
    }
}

#[test]
fn worked_snf_example() {
    let (code, out, _) = run(&["snf", "--matrix", "3,2;-3,-1"]);
    assert_eq!(code, 0);
    assert!(out.contains("d = (1, 3)"));
    assert!(out.contains("group: Z3"));
    assert!(out.contains("angles (1/3, 0)"));
}

#[test]
fn usage_errors_exit_two() {
    let (code, out, err) = run(&["classify", "--doublets", "99"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("doublet count out of supported range"));

    for args in [
        &["frobnicate"][..],
        &["snf", "--matrix", "1,2;3"],
        &["snf", "--matrix", "x"],
        &["construct", "cyclic", "--p", "0", "--n", "3"],
        &["construct", "cyclic", "--p", "3", "--n", "17"],
        &[
            "construct",
            "product",
            "--partition",
            "1,2",
            "--orders",
            "2",
        ],
        &["witness", "--doublets", "3", "--group", "Q8"],
        &["cp-extend", "--doublets", "4"],
        &["check-z3z3", "--doublets", "4"],
        &["verify-bound", "--doublets", "6"],
        &["classify", "--doublets", "3", "--format", "yaml"],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("classify"));
    assert!(out.contains("cp-extend"));
}

#[test]
fn negative_entries_parse() {
    let (code, out, _) = run(&["snf", "--matrix", "-2,1;1,-2"]);
    assert_eq!(code, 0);
    assert!(out.contains("group: Z3"));
}

#[test]
fn best_effort_flag_for_four_doublets() {
    let (code, out, err) = run(&[
        "cp-extend",
        "--doublets",
        "4",
        "--group",
        "Z2",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0, "{err}");
    let report: Report = serde_json::from_str(&out).unwrap();
    match report.payload {
        nhdm_cli::report::Payload::CpExtension(c) => {
            assert!(c.best_effort);
            assert!(!c.candidates.is_empty());
        }
        other => panic!("unexpected payload {other:?}"),
    }
}

#[test]
fn thread_cap_from_environment() {
    use std::process::Command;
    let bin = env!("CARGO_BIN_EXE_nhdm");
    let ok = Command::new(bin)
        .args(["classify", "--doublets", "3"])
        .env("NHDM_THREADS", "1")
        .output()
        .unwrap();
    assert!(ok.status.success());
    assert_eq!(
        String::from_utf8(ok.stdout).unwrap(),
        run(&["classify", "--doublets", "3"]).1
    );
    let bad = Command::new(bin)
        .args(["classify", "--doublets", "3"])
        .env("NHDM_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
