//! End-to-end smoke tests of the command-line binary: every subcommand,
//! the documented exit codes, and cross-invocation determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_obtuse-billiards"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    for sub in ["period", "verify", "atlas", "hexlab", "render"] {
        assert!(stdout(&out).contains(sub), "help lists {sub}");
    }
}

#[test]
fn period_reports_both_candidates() {
    let out = run(&["period", "triangle", "1", "1"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("[4, 10]"));
}

#[test]
fn period_realizes_offset() {
    let out = run(&["period", "triangle", "1", "1", "--offset", "1/2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("period 10"));
}

#[test]
fn period_reduces_out_of_range_directions() {
    let out = run(&["period", "triangle", "3", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("reduces to (0, 1)"));
    assert!(text.contains("[8]"));
}

#[test]
fn period_rejects_zero_pair() {
    let out = run(&["period", "triangle", "0", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn period_rejects_unknown_shape() {
    let out = run(&["period", "pentagon", "1", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn period_hexagon_reports_class_and_observations() {
    let out = run(&["period", "hexagon", "4", "3", "--offset", "1/25"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("class (1 mod 3, opposite parity)"));
    assert!(text.contains("period 14"));
}

#[test]
fn verify_small_triangle_range_passes() {
    let out = run(&["verify", "triangle", "--max-sum", "3"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("0 mismatches"));
}

#[test]
fn verify_rejects_hexagon() {
    let out = run(&["verify", "hexagon", "--max-sum", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn atlas_writes_versioned_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tri.csv");
    let out = run(&[
        "atlas",
        "triangle",
        "--max-sum",
        "6",
        "--offsets",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# obtuse-billiards atlas v1\n"));
    assert!(text.lines().nth(1).unwrap().starts_with("shape,x,y,a,"));
}

#[test]
fn atlas_empty_range_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    let out = run(&[
        "atlas",
        "kite",
        "--max-sum",
        "0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2, "header comment + column row");
}

#[test]
fn atlas_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let serial = dir.path().join("serial.csv");
    let parallel = dir.path().join("parallel.csv");
    let base = [
        "atlas",
        "rhombus",
        "--max-sum",
        "8",
        "--offsets",
        "2",
        "--seed",
        "5",
    ];
    let mut serial_args: Vec<&str> = base.to_vec();
    serial_args.extend(["--jobs", "1", "--out", serial.to_str().unwrap()]);
    let mut parallel_args: Vec<&str> = base.to_vec();
    parallel_args.extend(["--jobs", "4", "--out", parallel.to_str().unwrap()]);
    assert_eq!(run(&serial_args).status.code(), Some(0));
    assert_eq!(run(&parallel_args).status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(&serial).unwrap(),
        std::fs::read_to_string(&parallel).unwrap()
    );
}

#[test]
fn hexlab_reports_counterexamples_and_exits_four() {
    let out = run(&["hexlab", "--max-sum", "8", "--offsets", "3"]);
    assert_eq!(out.status.code(), Some(4), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("counterexamples"));
    assert!(text.contains("verdict:"));
}

#[test]
fn hexlab_round_trips_an_atlas_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hex.json");
    let atlas = run(&[
        "atlas",
        "hexagon",
        "--max-sum",
        "8",
        "--offsets",
        "2",
        "--seed",
        "7",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(atlas.status.code(), Some(0), "stderr: {}", stderr(&atlas));

    let report = dir.path().join("report.json");
    let lab = run(&[
        "hexlab",
        "--dataset",
        path.to_str().unwrap(),
        "--json",
        report.to_str().unwrap(),
    ]);
    // The observed hexagon periods include values outside both conjectured
    // expression sets, so the laboratory reports counterexamples.
    assert_eq!(lab.status.code(), Some(4), "stderr: {}", stderr(&lab));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(json["observations"]
        .as_array()
        .is_some_and(|a| !a.is_empty()));
    assert!(json["unmatched"].as_array().is_some_and(|a| !a.is_empty()));
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("orbit.svg");
    let out = run(&[
        "render",
        "triangle",
        "1",
        "1",
        "--mode",
        "fold",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("version=\"1.1\""));
    assert!(svg.contains("<g id=\"orbit\">"));
}

#[test]
fn render_rejects_unknown_mode() {
    let out = run(&[
        "render",
        "triangle",
        "1",
        "1",
        "--mode",
        "spiral",
        "--out",
        "/tmp/na.svg",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn render_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.svg");
    let second = dir.path().join("b.svg");
    for path in [&first, &second] {
        let out = run(&[
            "render",
            "hexagon",
            "4",
            "3",
            "--offset",
            "1/25",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    }
    assert_eq!(
        std::fs::read_to_string(&first).unwrap(),
        std::fs::read_to_string(&second).unwrap()
    );
    assert!(Path::new(&first).exists());
}
