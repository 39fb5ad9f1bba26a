//! End-to-end runs of the `motzkin` binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn motzkin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_motzkin"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn motzkin");
    child.stdin.take().expect("stdin").write_all(stdin.as_bytes()).expect("write stdin");
    child.wait_with_output().expect("wait for motzkin")
}

fn stdout_of(args: &[&str], stdin: &str) -> String {
    let out = motzkin(args, stdin);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).expect("utf-8 output")
}

#[test]
fn counts_twelve_s_paths_of_size_three() {
    assert_eq!(stdout_of(&["count", "--class", "s", "--n", "3"], ""), "12\n");
    assert_eq!(stdout_of(&["count", "--class", "t", "--n", "3", "--upto"], ""), "0 1\n1 2\n2 7\n3 30\n");
}

#[test]
fn maps_the_all_flat_first_path_to_a_left_comb() {
    let out = stdout_of(&["map", "--from", "s-path", "--to", "ternary"], "hudhudhud\n");
    assert_eq!(out, "[[[null,null,null],null,null],null,null]\n");
}

#[test]
fn map_round_trips_every_small_s_path() {
    for n in 1..=4 {
        let n = n.to_string();
        let paths = stdout_of(&["enumerate", "--class", "s", "--n", &n], "");
        for (to, back) in [("ternary", "ternary"), ("noncrossing", "noncrossing")] {
            let trees = stdout_of(&["map", "--from", "s-path", "--to", to], &paths);
            let again = stdout_of(&["map", "--from", back, "--to", "s-path"], &trees);
            assert_eq!(again, paths, "n = {n} via {to}");
        }
    }
}

#[test]
fn t_paths_round_trip_through_tree_pairs() {
    let paths = stdout_of(&["enumerate", "--class", "t", "--n", "3"], "");
    assert_eq!(paths.lines().count(), 30);
    let pairs = stdout_of(&["map", "--from", "t-path", "--to", "ternary-pair"], &paths);
    assert_eq!(stdout_of(&["map", "--from", "ternary-pair", "--to", "t-path"], &pairs), paths);
}

#[test]
fn verify_all_passes_at_small_sizes() {
    let out = motzkin(&["verify", "--suite", "all", "--max-n", "5"], "");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().last().unwrap().starts_with("PASS 7 suites"), "{text}");
    assert!(!text.lines().any(|l| l.starts_with("FAIL ")));
}

#[test]
fn exit_codes_separate_usage_from_domain_errors() {
    assert_eq!(motzkin(&["count", "--class", "s"], "").status.code(), Some(2));
    assert_eq!(motzkin(&["count", "--class", "x", "--n", "1"], "").status.code(), Some(2));
    assert_eq!(motzkin(&["frobnicate"], "").status.code(), Some(2));
    assert_eq!(motzkin(&["--help"], "").status.code(), Some(0));

    let bad = motzkin(&["map", "--from", "s-path", "--to", "ternary"], "uud\n");
    assert_eq!(bad.status.code(), Some(1));
    assert!(!bad.stderr.is_empty());
    assert_eq!(motzkin(&["map", "--from", "s-path", "--to", "t-path"], "hud\n").status.code(), Some(1));
    assert_eq!(motzkin(&["count", "--class", "u", "--n", "0"], "").status.code(), Some(1));
    let misprint = motzkin(&["limit", "--class", "t", "--stat", "axis-valley-du", "--policy", "as-printed"], "");
    assert_eq!(misprint.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&misprint.stderr).contains("evaluates to 4/1 at u = 1"));
}

#[test]
fn stats_print_exact_rationals() {
    let out = stdout_of(&["stats", "--class", "s", "--stat", "returns", "--n", "3"], "");
    let by_series: Vec<&str> = out.lines().collect();
    for method in ["bruteforce", "closedform"] {
        let other = stdout_of(&["stats", "--class", "s", "--stat", "returns", "--n", "3", "--method", method], "");
        assert_eq!(other.lines().collect::<Vec<_>>(), by_series, "{method}");
    }
    assert!(by_series[0].starts_with("mean ") && by_series[0].contains('/'));

    let dist = stdout_of(&["stats", "--class", "t", "--stat", "peaks-ud", "--n", "4", "--distribution"], "");
    let total: u64 = dist.lines().map(|l| l.split(' ').nth(1).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 143);
}

#[test]
fn limit_prints_the_corrected_law_by_default() {
    let out = stdout_of(&["limit", "--class", "t", "--stat", "axis-valley-du", "--k", "3"], "");
    assert!(out.contains("(7-3u)^2"), "{out}");
    assert!(out.lines().any(|l| l == "mean 19/12"), "{out}");
}

#[test]
fn ascii_path_has_one_row_per_height() {
    let out = stdout_of(&["render", "--kind", "path", "--format", "ascii"], "hud\n");
    assert_eq!(out, " /\\\n_\n");
}

#[test]
fn svg_is_a_single_standalone_document() {
    for (kind, value) in [("path", "hud"), ("ternary", "[null,null,null]"), ("noncrossing", "{\"children\":[{\"left\":[],\"right\":[]}]}")] {
        let out = stdout_of(&["render", "--kind", kind, "--format", "svg", "--value", value], "");
        assert!(out.starts_with("<?xml version=\"1.0\""), "{kind}");
        assert_eq!(out.matches("<svg ").count(), 1, "{kind}");
        assert_eq!(out.matches("</svg>").count(), 1, "{kind}");
    }
}

#[test]
fn tikz_draws_one_segment_per_step() {
    let out = stdout_of(&["render", "--kind", "path", "--format", "tikz"], "hud");
    assert_eq!(out.matches("\\draw").count(), 3);
    assert!(out.starts_with("\\begin{tikzpicture}") && out.trim_end().ends_with("\\end{tikzpicture}"));
}

#[test]
fn json_outputs_are_canonical() {
    let runs: [&[&str]; 5] = [
        &["count", "--class", "s", "--n", "5", "--upto", "--format", "json"],
        &["enumerate", "--class", "u", "--n", "3", "--format", "json"],
        &["stats", "--class", "t", "--stat", "returns", "--n", "6", "--format", "json"],
        &["stats", "--class", "s", "--stat", "valleys-du", "--n", "4", "--distribution", "--format", "json"],
        &["limit", "--class", "s", "--stat", "returns", "--format", "json"],
    ];
    for args in runs {
        let out = stdout_of(args, "");
        let value: serde_json::Value = serde_json::from_str(&out).expect("valid JSON");
        assert_eq!(serde_json::to_string(&value).unwrap(), out.trim_end(), "{args:?}");
    }
    let trees = stdout_of(&["map", "--from", "s-path", "--to", "noncrossing"], "huhudhudd\n");
    let value: serde_json::Value = serde_json::from_str(&trees).unwrap();
    let again = stdout_of(&["map", "--from", "noncrossing", "--to", "noncrossing"], &serde_json::to_string_pretty(&value).unwrap());
    assert_eq!(again, trees);
}
