//! Snapshot tests for `goi`. Regenerate with `GOI_BLESS=1 cargo test -p goi`.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn goi(args: &[&str], stdin: Option<&str>) -> Output {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_goi"))
        .args(args)
        .current_dir(root())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixtures(ext: &str) -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(root().join("fixtures"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(ext))
        .map(|n| format!("fixtures/{n}"))
        .collect();
    v.sort();
    v
}

fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("GOI_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden {}; run with GOI_BLESS=1", path.display()));
    assert_eq!(actual, want, "golden {name} differs; rerun with GOI_BLESS=1 if intended");
}

const COMMANDS: [&str; 10] =
    ["check", "net", "interpret", "measure", "exec", "nilp", "normalize", "invariance", "eq", "solve"];

#[test]
fn every_command_on_every_fixture_matches_its_golden() {
    let files = fixtures(".mall");
    assert!(files.len() >= 10);
    for cmd in COMMANDS {
        let mut args = vec![cmd];
        args.extend(files.iter().map(String::as_str));
        let o = goi(&args, None);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        golden(&format!("{cmd}.txt"), &stdout(&o));
    }
}

#[test]
fn json_reports_match_goldens_and_are_deterministic() {
    for cmd in COMMANDS {
        let a = goi(&["--format", "json", cmd, "fixtures/cut-tau-tau.mall"], None);
        let b = goi(&["--format", "json", cmd, "fixtures/cut-tau-tau.mall"], None);
        assert_eq!(a.stdout, b.stdout);
        let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
        assert_eq!(v["tool"], format!("goi {}", env!("CARGO_PKG_VERSION")));
        assert_eq!(v["command"], cmd);
        golden(&format!("{cmd}.json"), &stdout(&a));
    }
}

#[test]
fn paired_nilpotency_of_fig1_is_two() {
    for args in [["nilp", "--paired", "fixtures/fig1.mall"], ["nilp", "--mode=paired", "fixtures/fig1.mall"]] {
        let o = goi(&args, None);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), "n = 2\n");
    }
}

#[test]
fn eq_on_cut_tau_tau_prints_the_crossed_equations() {
    let o = goi(&["eq", "fixtures/cut-tau-tau.mall"], None);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "a1 = ā2"), "{out}");
    assert!(out.lines().any(|l| l == "ā1 = a2"), "{out}");
}

#[test]
fn net_passes_on_fig1() {
    let o = goi(&["net", "fixtures/fig1.mall"], None);
    assert_eq!(o.status.code(), Some(0));
    for p in ["P0", "P1", "P2", "P3"] {
        assert!(stdout(&o).contains(&format!("{p} pass")));
    }
}

#[test]
fn toggling_failure_fixture_fails_only_p3() {
    for f in fixtures(".json") {
        let o = goi(&["net", &f], None);
        assert_eq!(o.status.code(), Some(1), "{f}");
        let out = stdout(&o);
        assert!(out.contains("P0 pass") && out.contains("P1 pass") && out.contains("P2 pass"));
        assert!(out.contains("P3 fail"));
        golden("net-toggling-failure.txt", &out);
    }
}

#[test]
fn translated_json_round_trips_through_net() {
    let o = goi(&["--format", "json", "net", "fixtures/fig1.mall"], None);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let net = serde_json::to_string(&v["report"]["net"]).unwrap();
    let again = goi(&["net", "-"], Some(&net));
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(stdout(&again).lines().last(), Some("P3 pass"));
}

#[test]
fn syntax_errors_exit_2_and_rule_errors_exit_1() {
    let o = goi(&["check"], Some("ax("));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: -: "));
    let o = goi(&["check"], Some("cut(ax X, ax Y ; X)"));
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("rule error: "));
}

#[test]
fn exceeded_caps_exit_2_with_a_hint() {
    let o = goi(&["net", "--cap-linkings", "1", "fixtures/fig1.mall"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--cap-linkings"));
}

#[test]
fn missing_files_exit_2() {
    let o = goi(&["check", "fixtures/no-such-file.mall"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn divergent_execution_exits_1() {
    // Raw scalars keep a1·ā1 alive, so fig1's cycle never dies.
    let o = goi(&["nilp", "--mode", "raw", "--bound", "64", "fixtures/fig1.mall"], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "divergent: no zero power within 64\n");
    let o = goi(&["nilp", "--bound", "1", "fixtures/fig1.mall"], None);
    assert_eq!(o.status.code(), Some(1));
    let o = goi(&["nilp", "--bound", "2", "fixtures/fig1.mall"], None);
    assert_eq!(stdout(&o), "n = 2\n");
}

#[test]
fn trace_flags_add_powers_and_steps() {
    let o = goi(&["exec", "--trace", "fixtures/fig1.mall"], None);
    assert!(stdout(&o).contains("power 0:"));
    let o = goi(&["normalize", "--trace", "fixtures/case2.mall"], None);
    assert!(stdout(&o).starts_with("1. key-with-plus"));
}
