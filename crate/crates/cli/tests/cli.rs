//! End-to-end checks of the command line: report content, determinism,
//! exit codes.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multigerm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn resolve_reports_the_full_tree_data() {
    let out = run(&["resolve", "(3,5)"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("sequence1=(3,2,1)"), "{text}");
    assert!(text.contains("satellites=2"), "{text}");
    assert!(text.contains("modality=0"), "{text}");
    assert!(text.contains("simple=true"), "{text}");
    assert!(text.contains("label=E8"), "{text}");
}

#[test]
fn invariants_accepts_labels_and_notation() {
    let out = run(&["invariants", "(4,6,7)"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("delta=5"), "{text}");
    assert!(text.contains("semigroups=<4,6,7>"), "{text}");

    // atlas labels instantiate directly
    let out = run(&["invariants", "W8*"]);
    assert!(stdout(&out).contains("delta=4"));

    // records format is one line
    let out = run(&["invariants", "(2,3)", "--format", "records"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1, "{text}");
}

#[test]
fn classify_reports_simple_labels() {
    let out = run(&["classify", "(5,6,7,8)"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verdict=simple label=(5,6,7,8)"));
}

#[test]
fn parse_errors_exit_two() {
    let out = run(&["invariants", "(2,3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["invariants", "(0,3)"]);
    assert_eq!(out.status.code(), Some(2));
    // usage errors exit one
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn resolve_rejects_space_germs() {
    let out = run(&["resolve", "(4,6,7)"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn dot_export_is_deterministic_and_well_formed() {
    let a = run(&["adjacency-dot"]);
    let b = run(&["adjacency-dot"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    assert!(text.starts_with("digraph adjacencies {"));
    assert!(text.contains("kind=\"both\""));
    assert!(text.contains("kind=\"param\""));
    assert!(text.contains("kind=\"curve\""));
    assert!(text.trim_end().ends_with('}'));
}

#[test]
fn truncation_flag_does_not_change_certified_answers() {
    let a = run(&["invariants", "(4,6,7)", "--format", "records"]);
    let b = run(&["invariants", "(4,6,7)", "--format", "records", "--truncation", "8"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn verify_atlas_exits_clean() {
    let out = run(&["verify-atlas"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("PASS Z10"));
    assert!(text.contains("PASS S7"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn atlas_list_mentions_tags() {
    let out = run(&["atlas-list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("label=L(4,2) tag=confining"));
    assert!(text.contains("label=A tag=simple k=1..25"));
}

#[test]
fn input_from_file_and_output_to_file() {
    let dir = std::env::temp_dir();
    let input = dir.join("germ_input.txt");
    let output = dir.join("germ_output.txt");
    std::fs::write(&input, "(2,3)\n").unwrap();
    let out = run(&[
        "invariants",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let written = std::fs::read_to_string(&output).unwrap();
    assert!(written.contains("delta=1"), "{written}");
}
