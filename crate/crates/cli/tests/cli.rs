use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_uc-indicator"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Compares against `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
fn assert_golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

fn write_series(path: &Path, t_max: usize, n: usize) {
    let mut text = String::from("t");
    for i in 1..=n {
        text.push_str(&format!(",x{i}"));
    }
    text.push('\n');
    for t in 1..=t_max {
        text.push_str(&t.to_string());
        for i in 1..=n {
            text.push_str(&format!(",{}", ((t * 7 + i * 3) % 11) as f64 + 0.5));
        }
        text.push('\n');
    }
    fs::write(path, text).unwrap();
}

#[test]
fn fixture_verify_prints_totals() {
    let out = run(&["fixture-verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("basic_total 5069.94"));
    assert!(text.contains("competency_total 5491.17"));
    assert!(text.contains("delta_total 421.23"));
}

#[test]
fn fixture_verify_rejects_tampered_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    fs::write(&path, "t,basic,competency\n1,10,20\n2,30,40\n").unwrap();
    let out = run(&["fixture-verify", "--fixture", p(&path)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("published"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    let out = run(&["indicator", "x.csv", "--warmup", "sometimes"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("skip"));
}

#[test]
fn domain_errors_exit_1() {
    let out = run(&["indicator", "/nonexistent/series.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("IoError"));

    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.csv");
    write_series(&s, 20, 2);
    let out = run(&["indicator", p(&s), "--window", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("BadWindow"));
}

#[test]
fn compare_with_mismatched_lengths_names_config_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    write_series(&a, 20, 3);
    write_series(&b, 25, 3);
    let out = run(&["compare", p(&a), p(&b), "--window", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("ConfigMismatch"), "{}", stderr(&out));
    assert!(stdout(&out).is_empty());
}

#[test]
fn indicator_on_constant_series() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("ones.csv");
    let mut text = String::from("t,a,b,c\n");
    for t in 1..=8 {
        text.push_str(&format!("{t},1,1,1\n"));
    }
    fs::write(&s, text).unwrap();
    let out = run(&["indicator", p(&s), "--window", "5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,a,b,c,sum");
    assert_eq!(lines[1], "6,3.75,3.75,3.75,11.25");
    assert!(text.contains("# window_k: 5\n"));

    let shrink = stdout(&run(&[
        "indicator",
        p(&s),
        "--window",
        "5",
        "--warmup",
        "shrink",
        "--format",
        "csv",
    ]));
    assert!(shrink.lines().nth(1).unwrap().starts_with("3,6,6,6,18"));
}

#[test]
fn compare_derives_competency_series_from_compliance() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.csv");
    write_series(&s, 15, 3);
    let compliance = dir.path().join("c.csv");
    fs::write(&compliance, "competency_id,p1,p2,p3\n1,1,0,0\n2,1,1,0\n").unwrap();

    let mask = run(&[
        "compare",
        p(&s),
        "--compliance",
        p(&compliance),
        "--window",
        "4",
        "--format",
        "csv",
    ]);
    assert_eq!(mask.status.code(), Some(0), "{}", stderr(&mask));
    let text = stdout(&mask);
    assert!(text.contains("# derivation: coverage-mask\n"));
    // the third process is dropped, so the competency mode can only lose mass
    for line in text
        .lines()
        .filter(|l| l.starts_with(|c: char| c.is_ascii_digit()))
    {
        let delta: f64 = line.split(',').nth(6).unwrap().parse().unwrap();
        assert!(delta <= 0.0, "{line}");
    }

    let weight = run(&[
        "compare",
        p(&s),
        "--compliance",
        p(&compliance),
        "--derive",
        "weight",
        "--window",
        "4",
    ]);
    assert_eq!(weight.status.code(), Some(0));
    assert!(stdout(&weight).contains("# derivation: coverage-weight\n"));

    fs::write(&compliance, "competency_id,p1,p2,p3\n1,1,0,0.0\n").unwrap();
    let bad = run(&["compare", p(&s), "--compliance", p(&compliance)]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("NonBinaryEntry"));
}

#[test]
fn simulate_then_compare_matches_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["simulate", "--out", p(dir.path()), "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    for f in [
        "basic.csv",
        "competency.csv",
        "scenario.json",
        "metadata.txt",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let meta = fs::read_to_string(dir.path().join("metadata.txt")).unwrap();
    assert!(meta.contains("noise_algorithm: "));
    assert!(meta.contains("seed: 42\n"));

    let cmp = run(&[
        "compare",
        p(&dir.path().join("basic.csv")),
        p(&dir.path().join("competency.csv")),
        "--format",
        "csv",
    ]);
    let report = run(&["report", "--seed", "42", "--format", "csv"]);
    let rows = |o: &Output| -> Vec<String> {
        stdout(o)
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(str::to_owned)
            .collect()
    };
    assert_eq!(rows(&cmp), rows(&report));
    assert_eq!(rows(&cmp).len(), 1 + (57 - 12) + 1);

    let scenario = run(&[
        "report",
        "--scenario",
        p(&dir.path().join("scenario.json")),
        "--format",
        "csv",
    ]);
    assert_eq!(stdout(&scenario), stdout(&report));
}

#[test]
fn report_is_deterministic_unless_stamped() {
    let a = run(&["report", "--format", "csv"]);
    let b = run(&["report", "--format", "csv"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("generated_at"));
    let stamped = stdout(&run(&["report", "--stamp"]));
    assert!(stamped.contains("# generated_at: unix:"));
}

#[test]
fn report_golden() {
    let out = run(&["report", "--format", "csv"]);
    assert_golden("demo_scenario_report.csv", &stdout(&out));
}

#[test]
fn report_files_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut docs = Vec::new();
    for name in ["one", "two"] {
        let report = dir.path().join(format!("{name}.txt"));
        let plot = dir.path().join(format!("{name}.plot.csv"));
        let out = run(&["report", "--out", p(&report), "--plot-data", p(&plot)]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
        docs.push((fs::read(&report).unwrap(), fs::read(&plot).unwrap()));
    }
    assert_eq!(docs[0], docs[1]);
    let plot = String::from_utf8(docs[0].1.clone()).unwrap();
    assert_eq!(plot.lines().next(), Some("t,basic,competency"));
    assert_eq!(plot.lines().count(), 1 + 45);
}

#[test]
fn check_budget_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let compliance = dir.path().join("c.csv");
    fs::write(&compliance, "competency_id,p1,p2,p3\n1,1,1,1\n").unwrap();
    let costs = dir.path().join("costs.csv");
    fs::write(&costs, "competency_id,cost\n1,2936\n").unwrap();

    let ok = run(&[
        "check-budget",
        "--compliance",
        p(&compliance),
        "--costs",
        p(&costs),
        "--budget",
        "5644378",
    ]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    assert_eq!(stdout(&ok), "accept cost=2936 limit=5644378\n");

    let over = run(&[
        "check-budget",
        "--compliance",
        p(&compliance),
        "--cost-each",
        "10",
        "--budget",
        "9.99",
    ]);
    assert_eq!(over.status.code(), Some(1));
    assert_eq!(stdout(&over), "reject cost=10 limit=9.99\n");

    let usage = run(&[
        "check-budget",
        "--compliance",
        p(&compliance),
        "--budget",
        "1",
    ]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn shipped_examples_run() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/examples");
    let out = run(&[
        "check-budget",
        "--compliance",
        p(&data.join("compliance_32x32.csv")),
        "--costs",
        p(&data.join("costs_32.csv")),
        "--budget",
        "5644378",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out), "accept cost=2569 limit=5644378\n");

    let from_file = run(&["report", "--scenario", p(&data.join("demo_scenario.json"))]);
    assert_eq!(from_file.stdout, run(&["report"]).stdout);
}
