mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::char_log;
use declare_variants::declare::{Rule, Template};
use declare_variants::discovery::{write_specification, Specification};
use declare_variants::log_io::{write_csv, write_xes, EventLog};
use declare_variants::report::{CSV_FILE, TEXT_FILE};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_declare-variants"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn logs() -> (EventLog, EventLog) {
    (
        char_log("A", &[("abc", 40), ("ac", 10)]),
        char_log("B", &[("abc", 10), ("ac", 40), ("cb", 5)]),
    )
}

fn write_pair(dir: &Path) -> (String, String) {
    let (a, b) = logs();
    let (pa, pb) = (dir.join("a.xes"), dir.join("b.xes"));
    write_xes(&a, &pa).unwrap();
    write_xes(&b, &pb).unwrap();
    (pa.display().to_string(), pb.display().to_string())
}

#[test]
fn successful_run_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = write_pair(dir.path());
    let out = dir.path().join("out");
    let o = bin(&[
        "--log-a",
        &a,
        "--log-b",
        &b,
        "--out-dir",
        out.to_str().unwrap(),
        "--seed",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(out.join(TEXT_FILE)).unwrap();
    assert!(!text.is_empty());
    assert!(text.lines().all(|l| l.contains("Variant")));
    assert!(stdout(&o).contains("seed: 5"));
    assert!(stdout(&o).contains("(discovered)"));
}

#[test]
fn csv_logs_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = logs();
    let (pa, pb) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    write_csv(&a, &pa).unwrap();
    write_csv(&b, &pb).unwrap();
    let out = dir.path().join("out");
    let o = bin(&[
        "--log-a",
        pa.to_str().unwrap(),
        "--log-b",
        pb.to_str().unwrap(),
        "--out-dir",
        out.to_str().unwrap(),
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(out.join(CSV_FILE).exists());
}

#[test]
fn missing_file_exits_1() {
    let o = bin(&[
        "--log-a",
        "/nonexistent/a.xes",
        "--log-b",
        "/nonexistent/b.xes",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn malformed_xes_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.xes");
    std::fs::write(&bad, "<log><trace><event>").unwrap();
    let p = bad.to_str().unwrap();
    assert_eq!(bin(&["--log-a", p, "--log-b", p]).status.code(), Some(1));
}

#[test]
fn bad_parameters_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = write_pair(dir.path());
    for extra in [
        ["--alpha", "1.5"],
        ["--m-min", "-0.1"],
        ["--permutations", "0"],
        ["--measure", "lift"],
    ] {
        let mut args = vec!["--log-a", a.as_str(), "--log-b", b.as_str()];
        args.extend(extra);
        let o = bin(&args);
        assert_eq!(o.status.code(), Some(2), "{extra:?}: {}", stderr(&o));
    }
    let o = bin(&["--log-a", &a, "--log-b", &b, "--alpha", "1.5"]);
    assert!(stderr(&o).contains("(0, 1)"), "{}", stderr(&o));
}

#[test]
fn empty_log_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let (a, _) = write_pair(dir.path());
    let empty = dir.path().join("empty.xes");
    std::fs::write(&empty, "<?xml version=\"1.0\"?><log></log>").unwrap();
    let o = bin(&["--log-a", &a, "--log-b", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn no_discovered_rules_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = write_pair(dir.path());
    let spec = dir.path().join("empty.json");
    write_specification(&Specification::from_rules("none", []), &spec).unwrap();
    let s = spec.to_str().unwrap();
    let o = bin(&["--log-a", &a, "--log-b", &b, "--model-a", s, "--model-b", s]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn given_models_skip_discovery() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = write_pair(dir.path());
    let spec = Specification::from_rules(
        "given",
        [
            Rule::binary(Template::Response, "a", "b"),
            Rule::unary(Template::Participation, "b"),
        ],
    );
    let path = dir.path().join("model.json");
    write_specification(&spec, &path).unwrap();
    let p = path.to_str().unwrap();
    let out = dir.path().join("out");
    let o = bin(&[
        "--log-a",
        &a,
        "--log-b",
        &b,
        "--model-a",
        p,
        "--model-b",
        p,
        "--out-dir",
        out.to_str().unwrap(),
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = stdout(&o);
    assert!(
        summary.contains("specification A: 2 rules (loaded)"),
        "{summary}"
    );
    assert!(
        summary.contains("merged specification: 2 rules"),
        "{summary}"
    );
    let mut reader = csv::Reader::from_path(out.join(CSV_FILE)).unwrap();
    for row in reader.records() {
        let row = row.unwrap();
        assert!(matches!(&row[1], "Response" | "Participation"), "{row:?}");
    }
}

#[test]
fn same_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = write_pair(dir.path());
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = bin(&[
            "--log-a",
            &a,
            "--log-b",
            &b,
            "--out-dir",
            out.to_str().unwrap(),
            "--seed",
            "42",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        (
            std::fs::read(out.join(TEXT_FILE)).unwrap(),
            std::fs::read(out.join(CSV_FILE)).unwrap(),
        )
    };
    let first = run("one");
    assert!(!first.1.is_empty());
    assert_eq!(first, run("two"));
}

#[test]
fn unseeded_runs_report_their_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = write_pair(dir.path());
    let out = dir.path().join("out");
    let o = bin(&[
        "--log-a",
        &a,
        "--log-b",
        &b,
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let line = stdout(&o)
        .lines()
        .find(|l| l.starts_with("seed: "))
        .unwrap()
        .to_owned();
    let seed = line.trim_start_matches("seed: ");
    assert!(seed.parse::<u64>().is_ok(), "{line}");

    let again = dir.path().join("again");
    let o = bin(&[
        "--log-a",
        &a,
        "--log-b",
        &b,
        "--out-dir",
        again.to_str().unwrap(),
        "--seed",
        seed,
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        std::fs::read(out.join(CSV_FILE)).unwrap(),
        std::fs::read(again.join(CSV_FILE)).unwrap()
    );
}
