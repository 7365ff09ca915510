use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_morseflood"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const EDGE: &str = "# edge, lower-star mode\n[vertices]\n1 : 0\n2 : 1\n[facets]\n1 2\n";

#[test]
fn flood_and_verify_edge() {
    let dir = tempfile::tempdir().unwrap();
    let edge = write(dir.path(), "edge.wcf", EDGE);
    let out = run(&["flood", p(&edge), "--scheme", "maximal"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "# morse-sequence v1\nC 1 @ 0\nR 2 | 1 2 @ 1\n");

    let seq = dir.path().join("edge.seq");
    assert_eq!(run(&["flood", p(&edge), "-o", p(&seq)]).status.code(), Some(0));
    let out = run(&["verify", p(&seq), "--stack", p(&edge)]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().all(|l| l.starts_with("CHECK ") && l.contains(" PASS ")));
}

#[test]
fn verify_reports_failures() {
    let dir = tempfile::tempdir().unwrap();
    let edge = write(dir.path(), "edge.wcf", EDGE);
    // a Morse sequence on the edge that ignores the stack order
    let seq = write(dir.path(), "bad.seq", "# morse-sequence v1\nC 2\nR 1 | 1 2\n");
    let out = run(&["verify", p(&seq), "--stack", p(&edge), "--checks", "morse,fseq,flooding"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("CHECK morse PASS"));
    assert!(text.contains("CHECK fseq FAIL"));
    assert_eq!(run(&["verify", p(&seq), "--stack", p(&edge), "--checks", "nope"]).status.code(), Some(2));
}

#[test]
fn sort_restores_flooding_order() {
    let dir = tempfile::tempdir().unwrap();
    let edge = write(dir.path(), "edge.wcf", "[weighted]\n1 : 0\n2 : 1\n1 2 : 1\n");
    let seq = write(dir.path(), "f.seq", "# morse-sequence v1\nC 2\nC 1\nC 1 2\n");
    let out = run(&["sort", p(&seq), "--stack", p(&edge)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "# morse-sequence v1\nC 1 @ 0\nC 2 @ 1\nC 1 2 @ 1\n");
}

#[test]
fn stats_counts() {
    let dir = tempfile::tempdir().unwrap();
    let seq = write(dir.path(), "s.seq", "# morse-sequence v1\nC 1 @ 0\nC 2 @ 1\nC 1 2 @ 1\n");
    let out = run(&["stats", p(&seq)]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for line in ["items 3", "critical dim 0 2", "critical dim 1 1", "critical level 0 1", "critical level 1 2"] {
        assert!(text.lines().any(|l| l == line), "missing `{line}` in\n{text}");
    }
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("[weighted]\n1 : 2\n2 : 1\n1 2 : 1\n", "E_NOT_STACK"),
        ("[weighted]\n1 : 0\n1 2 : 0\n", "E_NOT_CLOSED"),
        ("[vertices]\n1 : 0\n[facets]\n1 2\n", "E_MISSING_WEIGHT"),
        ("[weighted]\n1 2 x\n", "E_SYNTAX"),
    ];
    for (i, (text, code)) in cases.iter().enumerate() {
        let path = write(dir.path(), &format!("bad{i}.wcf"), text);
        let out = run(&["validate", p(&path)]);
        assert_eq!(out.status.code(), Some(2));
        assert!(String::from_utf8(out.stderr).unwrap().contains(code));
    }
    assert_eq!(run(&["validate", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(run(&["flood"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn jobs_do_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let stack = morseflood::generate::random_instance(11, 2000);
    let input = dir.path().join("k.wcf");
    morseflood::io::write_complex(&stack, std::fs::File::create(&input).unwrap()).unwrap();
    let trace = dir.path().join("trace.txt");
    let base = run(&["flood", p(&input), "--scheme", "minmax", "--trace", p(&trace)]);
    assert_eq!(base.status.code(), Some(0));
    assert!(std::fs::read_to_string(&trace).unwrap().starts_with("# morse-trace v1"));
    for jobs in ["2", "4", "8"] {
        let out = run(&["flood", p(&input), "--scheme", "minmax", "--jobs", jobs]);
        assert_eq!(out.stdout, base.stdout);
    }
}
