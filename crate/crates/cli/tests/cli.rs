use std::io::Write;
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_anlattice"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn gen(args: &[&str]) -> String {
    let o = run(&[&["gen"], args].concat());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    stdout(&o)
}

// canonical S(A3) with ±(e1+e2) added
fn injected_a3() -> String {
    let base = gen(&["3"]);
    let body: String = base.lines().skip(1).map(|l| format!("{l}\n")).collect();
    format!("3 14\n{body}1 1 0\n-1 -1 0\n")
}

#[test]
fn gen_writes_header_and_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("a3.set");
    let o = run(&["gen", "3", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("3 12"));
    assert_eq!(text.lines().count(), 13);
}

#[test]
fn gen_gap_contains_triple_row() {
    let text = gen(&["4", "--gap", "2"]);
    assert!(text.lines().any(|l| l == "1 -1 -1 0"), "{text}");
    assert!(text.lines().any(|l| l == "-1 1 1 0"));
}

#[test]
fn gen_scramble_matches_golden() {
    let text = gen(&["2", "--scramble", "42:20"]);
    assert_eq!(text, include_str!("golden/gen2_42_20.set"));
    assert_eq!(text, gen(&["2", "--scramble", "42:20"]));
}

#[test]
fn gen_rejects_bad_arguments() {
    for args in [
        &["gen", "0"][..],
        &["gen", "3", "--gap", "4"],
        &["gen", "3", "--scramble", "42"],
        &["gen", "3", "--scramble", "-1:5"],
        &["gen", "x"],
        &["frobnicate"],
    ] {
        assert_eq!(code(&run(args)), 3, "{args:?}");
    }
}

#[test]
fn gen_unwritable_path_exits_3() {
    let o = run(&["gen", "2", "-o", "/nonexistent-dir/a.set"]);
    assert_eq!(code(&o), 3);
    assert!(!stderr(&o).is_empty());
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn check_canonical_passes() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a4.set", &gen(&["4"]));
    let o = run(&["check", &f]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "hyp1 PASS\nhyp2 PASS\nhyp3 PASS\nhyp4 PASS\nhyp5 PASS\n");
}

#[test]
fn check_injected_sum_fails_generation() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "m.set", "2 8\n1 0\n-1 0\n0 1\n0 -1\n1 -1\n-1 1\n1 1\n-1 -1\n");
    let o = run(&["check", &f]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("hyp5 FAIL det=-2 subset=[1 1],[1 -1]"), "{out}");
    assert!(out.starts_with("hyp1 PASS\nhyp2 PASS\nhyp3 PASS\nhyp4 PASS\n"));
}

#[test]
fn check_dropped_pair_fails_cardinality() {
    let base = gen(&["3"]);
    let body: Vec<&str> = base.lines().skip(1).filter(|l| *l != "1 0 0" && *l != "-1 0 0").collect();
    let text = format!("3 10\n{}\n", body.join("\n"));
    let o = run_stdin(&["check", "-"], &text);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("hyp4 FAIL count=10 required=12"));
}

#[test]
fn malformed_files_exit_3() {
    let dir = TempDir::new().unwrap();
    let truncated = write(&dir, "t.set", "3 12\n1 0 0\n-1 0 0\n");
    for cmd in ["check", "normalize", "audit"] {
        let o = run(&[cmd, &truncated]);
        assert_eq!(code(&o), 3, "{cmd}");
        assert!(stderr(&o).contains("declared 12 vectors, found 2"), "{}", stderr(&o));
    }
    let bad = write(&dir, "b.set", "2 2\n1 x\n-1 0\n");
    assert_eq!(code(&run(&["check", &bad])), 3);
    assert_eq!(code(&run(&["check", "/nonexistent/file.set"])), 3);
}

#[test]
fn budget_exceeded_is_a_rejection() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a6.set", &gen(&["6"]));
    let o = run(&["check", &f, "--budget", "100"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).starts_with("BudgetExceeded"));
}

#[test]
fn normalize_round_trips_scrambled_set() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "s.set", &gen(&["3", "--scramble", "7:30"]));
    let o = run(&["normalize", &f]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    let normalized: String = lines[3..].iter().map(|l| format!("{l}\n")).collect();
    assert_eq!(normalized, gen(&["3"]));
    // basis rows are integer rows of length 3
    for row in &lines[..3] {
        assert_eq!(row.split(' ').filter(|t| t.parse::<i64>().is_ok()).count(), 3);
    }
}

#[test]
fn normalize_canonical_a2_gives_unimodular_basis() {
    let o = run_stdin(&["normalize", "-"], &gen(&["2"]));
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let rows: Vec<Vec<i64>> =
        out.lines().take(2).map(|l| l.split(' ').map(|t| t.parse().unwrap()).collect()).collect();
    let det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0];
    assert_eq!(det.abs(), 1);
    assert!(rows.iter().flatten().all(|c| c.abs() <= 1));
}

#[test]
fn normalize_mutant_reports_typed_error() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "m.set", &injected_a3());
    let o = run(&["normalize", &f, "--e1", "7"]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
    assert_eq!(stderr(&o), "Unclassifiable: 1 1 0\n");
    let o = run(&["normalize", &f]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).starts_with("TwinCountMismatch"));
}

#[test]
fn normalize_e1_positions() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a3.set", &gen(&["3"]));
    assert_eq!(code(&run(&["normalize", &f, "--e1", "6"])), 0);
    let o = run(&["normalize", &f, "--e1", "7"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).starts_with("E1IndexOutOfRange"));
    assert_eq!(code(&run(&["normalize", &f, "--e1", "0"])), 3);
}

#[test]
fn normalize_all_choices_reports_each_run() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "s.set", &gen(&["3", "--scramble", "1:12"]));
    let o = run(&["normalize", &f, "--all-choices"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.ends_with(" OK")).count(), 6);
    assert!(out.ends_with("choices=6 ok=6\n"));

    let m = write(&dir, "m.set", &injected_a3());
    let o = run(&["normalize", &m, "--all-choices"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("choice 3 e1=[1 0 -1] FAIL Unclassifiable: 1 1 0"));
}

#[test]
fn trace_goes_to_stderr() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "g.set", &gen(&["3", "--gap", "2"]));
    let plain = run(&["normalize", &f]);
    let traced = run(&["normalize", &f, "--trace"]);
    assert_eq!(plain.stdout, traced.stdout);
    let t = stderr(&traced);
    assert!(t.contains("twin systems: 2"), "{t}");
    assert!(t.contains("classification:"));
    assert!(t.contains("e1-e2-e3"));
    assert!(t.contains("e2 <- e1 - e2"));
}

#[test]
fn audit_canonical_a4() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a4.set", &gen(&["4"]));
    let o = run(&["audit", &f, "--lemma", "6.1.5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "6.1.5 K=1 maxminor=1 PASS\n");

    let o = run(&["audit", &f, "--lemma", "6.1.7"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 10);
    assert!(out.lines().all(|l| l.ends_with("twins=3 PASS")), "{out}");

    let o = run(&["audit", &f, "--lemma", "twins", "--e1", "2"]);
    assert_eq!(stdout(&o), "6.1.7 e1=[1 0 0 -1] twins=3 PASS\n");

    let o = run(&["audit", &f]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("6.1.6 pairs=0 triples=0 PASS"));
    assert!(stdout(&o).contains("4.2 e1=[1 0 0 0] PASS"));
}

#[test]
fn audit_finds_forbidden_triple() {
    // ±e1, ±e2, ±e3 and the three vectors (e1-e2, e1-e3, e2+e3)
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "t.set",
        "3 12\n1 0 0\n-1 0 0\n0 1 0\n0 -1 0\n0 0 1\n0 0 -1\n1 -1 0\n-1 1 0\n1 0 -1\n-1 0 1\n0 1 1\n0 -1 -1\n",
    );
    let o = run(&["audit", &f, "--lemma", "6.1.6"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("6.1.6 FAIL triple (i,j,k)=(1,2,3)"), "{}", stdout(&o));
    let o = run(&["audit", &f, "--lemma", "6.1.5"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("6.1.5 K=2 maxminor=2 FAIL"));
}

#[test]
fn audit_table_on_mutant() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "m.set", &injected_a3());
    let o = run(&["audit", &f, "--lemma", "4.2", "--e1", "7"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.starts_with("4.2 e1=[0 0 1] FAIL\n"), "{out}");
    assert!(out.contains("leftover e2+e3"));
}

#[test]
fn counterexample_reports() {
    let o = run(&["counterexample", "5", "3"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("modified_pairs=4\n"), "{out}");
    assert!(out.contains("kept_pairs=6\n"));
    assert!(out.contains("{-e2, e1-e2} {-e3, e1-e3} {-e4, e1-e4} {-e5, e1-e5}"));
    assert!(stdout(&run(&["counterexample", "4", "2"])).contains("modified_pairs=2\n"));
    for n in 3..=8 {
        let o = run(&["counterexample", &n.to_string(), &(n - 1).to_string()]);
        assert!(stdout(&o).contains(&format!("modified_pairs={}\n", n - 2)));
    }
    assert_eq!(code(&run(&["counterexample", "4", "1"])), 3);
}

#[test]
fn json_output_is_one_object() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "m.set", "2 8\n1 0\n-1 0\n0 1\n0 -1\n1 -1\n-1 1\n1 1\n-1 -1\n");
    let o = run(&["check", &f, "--json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["accepted"], false);
    assert_eq!(v["hypotheses"][4]["witness"]["det"], -2);
    assert_eq!(v["hypotheses"][4]["witness"]["vectors"], serde_json::json!([[1, 1], [1, -1]]));

    let o = run(&["counterexample", "5", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["modified_pairs"], 4);
    assert_eq!(v["reproduced"], true);
}

#[test]
fn normalize_success_implies_check_success() {
    let dir = TempDir::new().unwrap();
    for (k, args) in [&["2"][..], &["4", "--gap", "3"], &["3", "--scramble", "99:25"]].iter().enumerate() {
        let f = write(&dir, &format!("{k}.set"), &gen(args));
        assert_eq!(code(&run(&["normalize", &f])), 0);
        assert_eq!(code(&run(&["check", &f])), 0);
    }
}
