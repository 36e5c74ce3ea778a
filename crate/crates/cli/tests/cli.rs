//! End-to-end tests of the command surface: exit codes, determinism, and
//! agreement between the embedded presentations and the programmatic
//! builtins.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::process::Command;

use loopcalc::builtins;
use loopcalc_cli::commands::{self, builtin_presentation, CommandKind, Config, Format};
use loopcalc_cli::parser;
use loopcalc_cli::report::Report;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_loopcalc"))
}

fn config(command: CommandKind, model: &str) -> Config {
    Config {
        command,
        model: model.to_string(),
        max_degree: 12,
        cocycle: None,
        k: 2,
        format: Format::Json,
    }
}

#[test]
fn embedded_presentations_match_programmatic_builtins() {
    for name in builtins::MODEL_NAMES {
        let text = builtin_presentation(name).unwrap();
        let file = parser::parse(text).unwrap();
        let expected = builtins::sullivan_model(name, 14).unwrap();
        assert_eq!(file.algebra, expected.algebra, "{}", name);
        assert_eq!(file.dim, Some(expected.formal_dim), "{}", name);
        for index in 0..expected.algebra.len() {
            let declared = file
                .differentials
                .get(&index)
                .cloned()
                .unwrap_or_default();
            assert_eq!(declared, expected.d.value_on(index), "{}", name);
        }
        let labels: Vec<&str> = file.cocycles.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, builtins::cocycle_labels(name), "{}", name);
        for stanza in &file.cocycles {
            let programmatic = builtins::cocycle(name, &stanza.label, &expected).unwrap();
            assert_eq!(stanza.n, programmatic.n, "{} {}", name, stanza.label);
            for (index, value) in &stanza.values {
                assert_eq!(value, &programmatic.theta.value_on(*index));
            }
        }
    }
}

#[test]
fn round_trip_of_all_builtin_files() {
    for name in builtins::MODEL_NAMES {
        let text = builtin_presentation(name).unwrap();
        let file = parser::parse(text).unwrap();
        let reparsed = parser::parse(&parser::print(&file)).unwrap();
        assert_eq!(file, reparsed, "{}", name);
    }
}

#[test]
fn json_and_text_reports_carry_the_same_data() {
    let report = commands::run(&config(CommandKind::Hodge, "builtin:s2")).unwrap();
    let json = report.render_json();
    let parsed: Report = serde_json::from_str(&json).unwrap();
    assert_eq!(report, parsed);
    assert_eq!(report.render_text(), parsed.render_text());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let first = commands::run(&config(CommandKind::Report, "builtin:s3")).unwrap();
    let second = commands::run(&config(CommandKind::Report, "builtin:s3")).unwrap();
    assert_eq!(first.render_json(), second.render_json());
    assert_eq!(first.render_text(), second.render_text());
}

#[test]
fn binary_reports_are_deterministic() {
    let run = || {
        bin()
            .args([
                "report",
                "--model",
                "builtin:s2",
                "--format",
                "json",
            ])
            .output()
            .expect("binary runs")
    };
    let a = run();
    let b = run();
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes_follow_the_contract() {
    // Passing checks exit 0.
    let ok = bin()
        .args(["hodge", "--model", "builtin:s3"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    // Bad flags exit 2 with usage text.
    let usage = bin().args(["hodge", "--nope"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&usage.stderr).contains("Usage"));
    // Unknown builtins and missing cocycle labels are input errors.
    let unknown = bin()
        .args(["betti", "--model", "builtin:k3"])
        .output()
        .unwrap();
    assert_eq!(unknown.status.code(), Some(2));
    let missing = bin()
        .args(["gamma1", "--model", "builtin:s3"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("theta3"));
}

const CLEAN_BV: &str = "\
basis one 0 weight 0
basis b -1 weight 1
basis v 2 weight 1
unit one
window -1 2
product one one = one
product one b = b
product b one = b
product one v = v
product v one = v
product b b = 0
product b v = 0
product v b = 0
delta one = 0
delta b = one
delta v = 0
";

#[test]
fn injected_axiom_violation_flips_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let clean = dir.path().join("clean.loop");
    std::fs::write(&clean, format!("generator z 2\ndim 0\n{}", CLEAN_BV)).unwrap();
    let ok = bin()
        .args(["bv-verify", "--model", clean.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stdout)
    );

    // One corrupted structure constant: the unit no longer acts trivially.
    let corrupted = CLEAN_BV.replace("product one v = v", "product one v = 2 v");
    let bad = dir.path().join("bad.loop");
    std::fs::write(&bad, format!("generator z 2\ndim 0\n{}", corrupted)).unwrap();
    let fail = bin()
        .args(["bv-verify", "--model", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(1));
    let text = String::from_utf8_lossy(&fail.stdout);
    assert!(text.contains("FAIL"), "{}", text);
    assert!(text.contains("witness"), "{}", text);
}

#[test]
fn file_models_run_through_every_command() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two_sphere.loop");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "generator v 2").unwrap();
    writeln!(f, "generator w 3").unwrap();
    writeln!(f, "d w = v^2").unwrap();
    writeln!(f, "dim 2").unwrap();
    writeln!(f, "cocycle thetaW degree -1: w -> v").unwrap();
    drop(f);
    let model = path.to_str().unwrap();
    for args in [
        vec!["betti", "--model", model],
        vec!["hodge", "--model", model, "--k", "3"],
        vec!["cartan-verify", "--model", model, "--cocycle", "thetaW"],
        vec!["gamma1", "--model", model, "--cocycle", "thetaW"],
        vec!["report", "--model", model, "--max-degree", "8"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(
            out.status.code(),
            Some(0),
            "{:?}: {}{}",
            args,
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.loop");
    std::fs::write(&path, "generator v 2\nd v = u\n").unwrap();
    let out = bin()
        .args(["betti", "--model", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{}", err);
}

#[test]
fn invalid_differentials_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("notdga.loop");
    // d(v) = w, d(w) = v^2 does not square to zero.
    std::fs::write(&path, "generator v 2\ngenerator w 3\nd v = w\nd w = v^2\n").unwrap();
    let out = bin()
        .args(["betti", "--model", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("square"));
}

#[test]
fn crosscheck_via_lib_matches_exit_semantics() {
    let report = commands::run(&config(CommandKind::Crosscheck, "builtin:s5")).unwrap();
    assert!(report.passed);
    let err = commands::run(&config(CommandKind::Crosscheck, "builtin:cp3")).unwrap_err();
    assert!(err.to_string().contains("no bv presentation"));
}

#[test]
fn cocycle_values_must_be_closed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("badcocycle.loop");
    // th(v) = 1 in degree -2 is not a cocycle on the 2-sphere model.
    std::fs::write(
        &path,
        "generator v 2\ngenerator w 3\nd w = v^2\ndim 2\ncocycle bad degree -2: v -> 1\n",
    )
    .unwrap();
    let out = bin()
        .args(["betti", "--model", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a cocycle"));
}

#[test]
fn file_bv_presentations_feed_the_crosscheck() {
    // A wrong additive table must fail the crosscheck with witnesses.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wrong.loop");
    std::fs::write(
        &path,
        format!("generator v 2\ngenerator w 3\nd w = v^2\ndim 2\n{}", CLEAN_BV),
    )
    .unwrap();
    let out = bin()
        .args([
            "crosscheck",
            "--model",
            path.to_str().unwrap(),
            "--max-degree",
            "4",
        ])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}
