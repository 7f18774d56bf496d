//! End-to-end tests driving the compiled binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cut2tour(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cut2tour"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_h1(dir: &Path) {
    fs::write(dir.join("h1.maxcut"), "2 1\n0 1 5\n").unwrap();
}

fn write_h2(dir: &Path) {
    fs::write(dir.join("h2.maxcut"), "3 2\n0 1 3\n1 2 -2\n").unwrap();
}

#[test]
fn reduce_h1_reports_instance_size() {
    let dir = tempfile::tempdir().unwrap();
    write_h1(dir.path());
    let out = cut2tour(dir.path(), &["reduce", "h1.maxcut", "--k", "3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("N=15"), "{text}");
    assert!(text.contains("M=10"), "{text}");
    assert!(dir.path().join("out/h1.manifest.json").exists());
    assert!(dir.path().join("out/h1.tsp").exists());
}

#[test]
fn reduce_rejects_infeasible_k() {
    let dir = tempfile::tempdir().unwrap();
    write_h1(dir.path());
    let out = cut2tour(dir.path(), &["reduce", "h1.maxcut", "--k", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("infeasible"), "{}", stderr(&out));
}

#[test]
fn reduce_rejects_degree_six() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("star.maxcut"),
        "7 6\n0 1 1\n0 2 1\n0 3 1\n0 4 1\n0 5 1\n0 6 1\n",
    )
    .unwrap();
    let out = cut2tour(dir.path(), &["reduce", "star.maxcut"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("degree"), "{}", stderr(&out));
}

#[test]
fn paper_strict_raises_k() {
    let dir = tempfile::tempdir().unwrap();
    write_h1(dir.path());
    let out = cut2tour(dir.path(), &["reduce", "h1.maxcut", "--paper-strict"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("k=15"), "{}", stdout(&out));
}

#[test]
fn solve_maxcut_h1_from_all_first() {
    let dir = tempfile::tempdir().unwrap();
    write_h1(dir.path());
    let out = cut2tour(dir.path(), &["solve", "maxcut", "h1.maxcut"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("value 5"), "{}", stdout(&out));
    let solution = fs::read_to_string(dir.path().join("h1.maxcut.solution")).unwrap();
    assert!(solution == "01\n" || solution == "10\n", "{solution:?}");
    let trace = fs::read_to_string(dir.path().join("h1.maxcut.trace")).unwrap();
    assert_eq!(trace, "0\n");
}

#[test]
fn map_and_solve_tsp_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    write_h1(dir.path());
    let out = cut2tour(dir.path(), &["reduce", "h1.maxcut", "--k", "3"]);
    assert!(out.status.success());
    fs::write(dir.path().join("allfirst.cut"), "11\n").unwrap();
    let out = cut2tour(
        dir.path(),
        &[
            "map", "h1.maxcut", "--k", "3",
            "--to-tour", "allfirst.cut",
            "--out", "allfirst.tour",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));

    // the tour of the all-first cut round-trips to the same cut
    let out = cut2tour(
        dir.path(),
        &["map", "h1.maxcut", "--k", "3", "--to-cut", "allfirst.tour"],
    );
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "11");

    // k-Opt from that tour must end at a split-cut tour of weight zero
    let out = cut2tour(
        dir.path(),
        &[
            "solve", "tsp", "out/h1.tsp", "--k", "3",
            "--start", "allfirst.tour",
            "--out", "h1",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("weight 0"), "{}", stdout(&out));
    let terminal = fs::read_to_string(dir.path().join("h1.solution")).unwrap();
    let out = cut2tour(
        dir.path(),
        &["map", "h1.maxcut", "--k", "3", "--to-cut", "h1.solution"],
    );
    assert!(out.status.success(), "{terminal}");
    let cut = stdout(&out);
    assert!(cut.trim() == "01" || cut.trim() == "10", "{cut}");
}

#[test]
fn solve_tsp_budget_exhaustion_uses_distinct_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    write_h1(dir.path());
    cut2tour(dir.path(), &["reduce", "h1.maxcut", "--k", "3"]);
    let out = cut2tour(
        dir.path(),
        &[
            "solve", "tsp", "out/h1.tsp", "--k", "3",
            "--random-start", "--seed", "4", "--budget", "1",
        ],
    );
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn invalid_pivot_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    write_h1(dir.path());
    let out = cut2tour(
        dir.path(),
        &["solve", "maxcut", "h1.maxcut", "--pivot", "bogus"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_h1_exits_zero_and_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    write_h1(dir.path());
    let out = cut2tour(
        dir.path(),
        &[
            "verify", "h1.maxcut", "--k", "3",
            "--samples", "100", "--starts", "5",
            "--summary", "summary.txt",
        ],
    );
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("verify: PASS"));
    let summary = fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert_eq!(summary.lines().count(), 6);
    assert!(summary.lines().all(|l| l.contains(" PASS ")), "{summary}");
}

#[test]
fn verify_single_check_and_unknown_check() {
    let dir = tempfile::tempdir().unwrap();
    write_h2(dir.path());
    let out = cut2tour(
        dir.path(),
        &["verify", "h2.maxcut", "--k", "7", "--check", "all-tours-standard"],
    );
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("8 tours, expected 8"), "{}", stdout(&out));

    let out = cut2tour(dir.path(), &["verify", "h2.maxcut", "--check", "bogus"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unknown check"));
}

#[test]
fn describe_gadget_is_stable_and_complete() {
    let dir = tempfile::tempdir().unwrap();
    let first = cut2tour(dir.path(), &["describe-gadget", "strict"]);
    let second = cut2tour(dir.path(), &["describe-gadget", "strict"]);
    assert!(first.status.success());
    assert_eq!(stdout(&first), stdout(&second));
    let text = stdout(&first);
    assert_eq!(text.lines().count(), 18);
    assert!(text.contains("4 5 S"), "Z-Z' same-set edge missing: {text}");
    assert!(text.contains("5 6 D"), "Z'-a different-set edge missing: {text}");

    let flexible = cut2tour(dir.path(), &["describe-gadget", "flexible"]);
    assert_eq!(stdout(&flexible).lines().count(), 10);

    let xor = cut2tour(dir.path(), &["describe-gadget", "xor", "--order", "2"]);
    assert_eq!(stdout(&xor).lines().count(), 6);
}

#[test]
fn transition_graphs_emit_dot() {
    let dir = tempfile::tempdir().unwrap();
    write_h1(dir.path());
    let out = cut2tour(dir.path(), &["transition-graph", "maxcut", "h1.maxcut"]);
    assert!(out.status.success());
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("\"00\" -> \"01\""), "{dot}");

    let out = cut2tour(
        dir.path(),
        &["transition-graph", "tsp-standard", "h1.maxcut", "--k", "3"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let dot = stdout(&out);
    assert!(dot.contains("phi=00"), "{dot}");
    assert!(dot.contains("\"00\" -> \"01\""), "{dot}");
}

#[test]
fn metricize_shifts_weights() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("tiny.tsp"),
        "3\n0 1 1 G\n0 2 10 G\n1 2 2 G\n",
    )
    .unwrap();
    let out = cut2tour(
        dir.path(),
        &["metricize", "tiny.tsp", "--out", "metric.tsp"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let text = fs::read_to_string(dir.path().join("metric.tsp")).unwrap();
    assert_eq!(text, "3\n0 1 11 G\n0 2 20 G\n1 2 12 G\n");
}

#[test]
fn identical_inputs_produce_byte_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    write_h2(dir.path());
    let run = |out_dir: &str| {
        let out = cut2tour(
            dir.path(),
            &["reduce", "h2.maxcut", "--k", "7", "--out-dir", out_dir],
        );
        assert!(out.status.success());
        (
            fs::read(dir.path().join(out_dir).join("h2.manifest.json")).unwrap(),
            fs::read(dir.path().join(out_dir).join("h2.tsp")).unwrap(),
        )
    };
    let (manifest1, tsp1) = run("out1");
    let (manifest2, tsp2) = run("out2");
    assert_eq!(manifest1, manifest2);
    assert_eq!(tsp1, tsp2);

    // seeded solves replay byte for byte
    let solve = |prefix: &str| {
        let out = cut2tour(
            dir.path(),
            &[
                "solve", "tsp", "out1/h2.tsp", "--k", "3",
                "--random-start", "--seed", "11",
                "--out", prefix,
            ],
        );
        assert!(out.status.success(), "{}", stderr(&out));
        fs::read(dir.path().join(format!("{prefix}.trace"))).unwrap()
    };
    assert_eq!(solve("a"), solve("b"));
}
