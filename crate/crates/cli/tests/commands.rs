use std::process::{Command, Output};

use clap::Parser;
use gl2q_cli::run::{EXIT_COUNTEREXAMPLE, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE};
use gl2q_cli::{run_command, Cli, Outcome};
use gl2q_core::verify::{ProbeReport, Verdict};
use serde_json::Value;

fn gl2q(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gl2q"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> u8 {
    out.status.code().expect("exited normally") as u8
}

fn text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn run(args: &[&str]) -> Result<Outcome, gl2q_cli::CliError> {
    let cli = Cli::try_parse_from(std::iter::once("gl2q").chain(args.iter().copied()))
        .expect("arguments parse");
    run_command(&cli.command)
}

#[test]
fn verdicts_map_to_exit_codes() {
    for (verdict, expected) in [
        (Verdict::Verified, EXIT_OK),
        (Verdict::Counterexample, EXIT_COUNTEREXAMPLE),
        (Verdict::InconclusiveBudget, EXIT_INCONCLUSIVE),
    ] {
        let outcome = Outcome {
            report: ProbeReport::new("probe", verdict),
            text: String::new(),
        };
        assert_eq!(outcome.exit_code(), expected);
    }
}

#[test]
fn act_in_each_space() {
    let out = run(&[
        "act", "--q", "2", "--mu", "1/3", "--op", "E11(0,0)", "--vec", "1",
    ])
    .unwrap();
    assert_eq!(out.text, "1/3");
    let out = run(&[
        "act",
        "--space",
        "localized",
        "--m",
        "1,0",
        "--q",
        "2",
        "--mu",
        "1/3",
        "--op",
        "E21(1,0)^-1",
        "--vec",
        "x[0,1]",
    ])
    .unwrap();
    assert_eq!(out.text, "x[0,1]*x[1,0]^-1");
    // the quotient drops the polynomial part
    let out = run(&[
        "act",
        "--space",
        "quotient",
        "--m",
        "1,0",
        "--q",
        "2",
        "--mu",
        "1/3",
        "--op",
        "E21(1,0)",
        "--vec",
        "x[1,0]^-1 + x[1,0]^-2",
    ])
    .unwrap();
    assert_eq!(out.text, "x[1,0]^-1");
}

#[test]
fn omitted_parameters_stay_symbolic() {
    let out = run(&["act", "--op", "E11(0,0) - mu", "--vec", "x[0,1]"]).unwrap();
    assert_eq!(out.text, "-x[0,1]");
    let out = run(&["weights", "--vec", "x[1,2]"]).unwrap();
    assert_eq!(out.text, "e11(0) = mu - 1, e22(0) = 1, d1 = 1, d2 = 2");
    let out = run(&[
        "act",
        "--space",
        "twisted",
        "--m",
        "1,0",
        "--op",
        "E12(-1,0)",
        "--vec",
        "x[1,0]^3",
    ])
    .unwrap();
    // -(3 - b)(2 - b - mu) = -b^2 - b*mu + 5b + 3mu - 6
    assert_eq!(out.text, "-(mu*b - 3*mu + b^2 - 5*b + 6)*x[1,0]^2");
}

#[test]
fn singular_vector_is_printed_and_checked() {
    let out = gl2q(&[
        "singular", "--mu", "0", "--m", "1,0", "--n", "0,1", "--d", "2", "--q", "3",
    ]);
    assert_eq!(code(&out), EXIT_OK);
    let t = text(&out);
    assert!(
        t.starts_with("w = -1/3*x[-1,2]*x[1,0]^-2 + x[0,1]^2*x[1,0]^-3\n"),
        "{t}"
    );
    assert!(t.contains("annihilation: verified"), "{t}");
}

#[test]
fn usage_errors_exit_with_two() {
    let cases: &[&[&str]] = &[
        &["act", "--space", "localized", "--op", "D1", "--vec", "1"],
        &["act", "--b", "1", "--op", "D1", "--vec", "1"],
        &["act", "--op", "D1", "--vec", "x[1,0]^0"],
        &["act", "--op", "E21(1,0)^-1", "--vec", "1"],
        &["act", "--q", "0", "--op", "D1", "--vec", "1"],
        &[
            "singular", "--mu", "1/2", "--m", "1,0", "--n", "0,1", "--d", "2",
        ],
        &[
            "singular", "--mu", "0", "--m", "1,0", "--n", "2,0", "--d", "2",
        ],
        &[
            "reduce",
            "--mu",
            "1",
            "--m",
            "1,0",
            "--vec",
            "x[1,0]^-1*x[0,1]",
        ],
        &["probe-nilp", "--op", "E12(1,0) + D1", "--vec", "1"],
        &["verify", "--suite", "nonsense"],
        &["act", "--op", "D1"],
        &["frobnicate"],
    ];
    for args in cases {
        let out = gl2q(args);
        assert_eq!(code(&out), EXIT_USAGE, "{args:?}: {}", text(&out));
        assert!(!out.stderr.is_empty(), "{args:?} printed no error");
    }
}

#[test]
fn parse_errors_name_the_flag_and_position() {
    let out = gl2q(&["act", "--op", "D1", "--vec", "x[1,0]^0"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--vec"), "{err}");
    assert!(err.contains("line 1, column 8"), "{err}");
    assert!(err.contains("exponent"), "{err}");
}

#[test]
fn exhausted_budgets_exit_with_three() {
    let out = gl2q(&[
        "probe-nilp",
        "--space",
        "quotient",
        "--m",
        "1,0",
        "--q",
        "2",
        "--mu",
        "1",
        "--op",
        "E12(-1,0)",
        "--vec",
        "x[1,0]^-5",
        "--budget",
        "4",
    ]);
    assert_eq!(code(&out), EXIT_INCONCLUSIVE, "{}", text(&out));
    let out = gl2q(&[
        "probe-span",
        "--q",
        "2",
        "--mu",
        "0",
        "--vec",
        "x[0,1]",
        "--target",
        "1",
        "--budget",
        "50",
    ]);
    assert_eq!(code(&out), EXIT_INCONCLUSIVE, "{}", text(&out));
    assert!(text(&out).contains("dimension cap 50 reached"));
}

#[test]
fn nilpotent_generator_is_verified() {
    let out = gl2q(&[
        "probe-nilp",
        "--q",
        "2",
        "--mu",
        "1/3",
        "--op",
        "E12(-1,0)",
        "--vec",
        "x[1,0]^2",
    ]);
    assert_eq!(code(&out), EXIT_OK, "{}", text(&out));
    assert!(text(&out).contains("nilpotent_at = 3"), "{}", text(&out));
}

#[test]
fn reduce_reports_each_step() {
    let out = gl2q(&[
        "reduce",
        "--q",
        "2",
        "--mu",
        "1/3",
        "--m",
        "1,0",
        "--vec",
        "x[1,0]^-2*x[0,1]",
    ]);
    assert_eq!(code(&out), EXIT_OK, "{}", text(&out));
    let t = text(&out);
    assert!(t.starts_with("cyclicity: verified"), "{t}");
    assert!(t.contains("apply E21(1,0)^1"), "{t}");
    assert!(t.contains("steps[degree 1] = 1"), "{t}");
}

#[test]
fn json_reports_are_versioned_and_stable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let path = path.to_str().unwrap();
    let args = [
        "verify", "--suite", "bracket", "--trials", "20", "--seed", "11", "--json", "--out", path,
    ];
    let first = gl2q(&args);
    assert_eq!(code(&first), EXIT_OK);
    let written = std::fs::read_to_string(path).unwrap();
    assert_eq!(written.trim_end(), text(&first).trim_end());
    let second = gl2q(&args);
    assert_eq!(first.stdout, second.stdout);

    let report: Value = serde_json::from_str(&written).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["suite"], "bracket");
    assert_eq!(report["verdict"], "verified");
    assert_eq!(report["seed"], 11);
    assert!(report.get("runtime_ms").is_none());

    let timed = gl2q(&[
        "verify", "--suite", "bracket", "--trials", "5", "--json", "--timing",
    ]);
    let report: Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(report["runtime_ms"].is_u64());
}

#[test]
fn act_json_carries_inputs_and_result() {
    let out = gl2q(&[
        "act",
        "--space",
        "twisted",
        "--q",
        "2",
        "--mu",
        "1/3",
        "--b",
        "1/5",
        "--m",
        "1,0",
        "--op",
        "E12(-1,0)",
        "--vec",
        "x[1,0]^3",
        "--json",
    ]);
    assert_eq!(code(&out), EXIT_OK);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["suite"], "act");
    assert_eq!(report["params"]["result"], "-308/75*x[1,0]^2");
    assert_eq!(report["params"]["b"], "1/5");
    assert_eq!(report["params"]["space"], "twisted");
}
