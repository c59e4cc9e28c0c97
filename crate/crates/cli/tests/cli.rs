use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltphi")).args(args).output().expect("spawn ltphi")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn multiplicative_group_law() {
    let o = run(&["--f", "multiplicative", "--N", "4", "group-law"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("ltphi-report v1\n"));
    assert!(out.contains("F: X + Y + X*Y + O(deg 4)"), "{out}");
}

// f = 2X + X^2 is (1+X)^2 - 1, so the law is multiplicative.
#[test]
fn standard_series_at_two_is_multiplicative() {
    let o = run(&["--p", "2", "--N", "6", "group-law"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("F: X + Y + X*Y + O(deg 6)"));
}

#[test]
fn config_file_and_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "run.cfg", "p = 2\n# comment\nN = 5\n");
    let o = run(&["--config", &cfg, "group-law"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("p=2 r=1 s=1 f=standard N=5"));

    let bad = write(&dir, "bad.cfg", "bogus = 1\n");
    let o = run(&["--config", &bad, "group-law"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown config key"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["--p", "4", "group-law"][..],
        &["--f", "1,x", "group-law"],
        &["--suite", "bogus", "verify"],
        &["--N", "0", "group-law"],
        &["--f", "multiplicative", "--r", "2", "group-law"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).starts_with("error: "));
    }
}

#[test]
fn verify_group_law_suite() {
    let o = run(&["--suite", "group-law", "verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("property ")));
    assert!(!out.lines().any(|l| l.ends_with(" fail")));
    assert!(out.trim_end().ends_with("failures: 0"));
}

#[test]
fn norm_check_verdicts() {
    let o = run(&["norm-check"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let verdicts: Vec<&str> =
        out.lines().filter_map(|l| l.split("criterion=").nth(1)).collect();
    assert_eq!(verdicts, ["true", "true", "false"]);
}

#[test]
fn torsion_is_eisenstein() {
    let o = run(&["torsion", "--level", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("expected degree: 6"));
    assert!(out.contains("eisenstein: true"));
}

#[test]
fn projlim_reports_fault_digit() {
    let o = run(&["projlim", "--fault-digit", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("detected: no limit at digit 2"));
    let o = run(&["projlim"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn compare_constant_modules() {
    let dir = TempDir::new().unwrap();
    let id = write(&dir, "id.txt", "rank 2 over E side pi\n[1] ; [0]\n[0] ; [1]\n");
    let teich = write(&dir, "a.txt", "rank 2 over A side varpi\n[1] ; [0]\n[0] ; [2]\n");
    for file in [&id, &teich] {
        let o = run(&["compare", file]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let out = stdout(&o);
        assert!(out.contains("verdict: isomorphic"), "{out}");
        assert!(out.contains("property compare.round_trip cases=1 pass"));
    }
}

#[test]
fn compare_rejects_singular_and_nonconstant() {
    let dir = TempDir::new().unwrap();
    let sing = write(&dir, "s.txt", "rank 2 over E side pi\n[1] ; [1]\n[1] ; [1]\n");
    let o = run(&["compare", &sing]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("not étale"));

    let series = write(&dir, "u.txt", "rank 1 over E side pi\nu*[1] + [1]\n");
    let o = run(&["compare", &series]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn malformed_spec_exits_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "rank two over E side pi\n[1]\n");
    let o = run(&["compare", &bad]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["compare", "/nonexistent/module.txt"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn same_seed_same_report() {
    let a = run(&["--seed", "7", "--suite", "two-tower", "verify"]);
    let b = run(&["--seed", "7", "--suite", "two-tower", "verify"]);
    assert_eq!(a.stdout, b.stdout);
}
