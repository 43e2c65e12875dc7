use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const ORDER21_A: &str = "semidirect\nA 7\nm 3\n2\n";
const ORDER21_B: &str = "semidirect\nA 7\nm 3\n4\n";
const Z3_4_Z4: &str = "semidirect\nA 3 3 3 3\nm 4\n0 2 0 0\n1 0 0 0\n0 0 0 2\n0 0 1 0\n";

fn z6_table() -> String {
    let mut s = "table 6\n".to_string();
    for a in 0..6 {
        let row: Vec<String> = (0..6).map(|b| ((a + b) % 6).to_string()).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grpext")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Value of the first `key …` line.
fn field(out: &str, key: &str) -> Option<String> {
    out.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
        .map(str::to_string)
}

fn without_wall_time(out: &str) -> String {
    out.lines().filter(|l| !l.starts_with("wall-ms ")).collect::<Vec<_>>().join("\n")
}

#[test]
fn element_orders() {
    let d = TempDir::new().unwrap();
    let z6 = write(&d, "z6.grp", &z6_table());
    let g = write(&d, "g.grp", ORDER21_A);
    for (file, x, want) in [(&z6, "0", "1"), (&z6, "1", "6"), (&z6, "2", "3"), (&g, "(0;1)", "3"), (&g, "(3;0)", "7")] {
        let o = run(&["order", s(file), x]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let out = stdout(&o);
        assert_eq!(field(&out, "order").as_deref(), Some(want), "{x}");
        assert!(out.lines().last().unwrap().starts_with("wall-ms "));
    }
}

#[test]
fn standard_decompositions() {
    let d = TempDir::new().unwrap();
    let cases = [(z6_table(), "1", "2 3"), (ORDER21_A.to_string(), "3", "7"), (Z3_4_Z4.to_string(), "4", "3 3 3 3")];
    for (i, (text, gamma, a_type)) in cases.iter().enumerate() {
        let p = write(&d, &format!("g{i}.grp"), text);
        let o = run(&["standard-decomposition", s(&p)]);
        assert!(o.status.success());
        let out = stdout(&o);
        assert_eq!(field(&out, "gamma").as_deref(), Some(*gamma));
        assert_eq!(field(&out, "a-type").as_deref(), Some(*a_type));
    }
}

#[test]
fn isomorphism_verdicts() {
    let d = TempDir::new().unwrap();
    let a = write(&d, "a.grp", ORDER21_A);
    let b = write(&d, "b.grp", ORDER21_B);
    let z21 = write(&d, "z21.grp", "semidirect\nA 7\nm 3\n1\n");

    let out = stdout(&run(&["isomorphic", s(&a), s(&a)]));
    assert_eq!(field(&out, "verdict").as_deref(), Some("yes"));

    let o = run(&["isomorphic", s(&a), s(&b)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(field(&out, "verdict").as_deref(), Some("yes"));
    assert_eq!(field(&out, "k").as_deref(), Some("2"));
    assert_eq!(field(&out, "mu-check").as_deref(), Some("exhaustive pass"));

    let out = stdout(&run(&["isomorphic", s(&a), s(&b), "--verify", "sampled", "--seed", "5"]));
    assert_eq!(field(&out, "mu-check").as_deref(), Some("sampled seed 5 pass"));

    let o = run(&["isomorphic", s(&a), s(&z21)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(field(&out, "verdict").as_deref(), Some("no"));
    assert!(field(&out, "reason").is_some());
}

#[test]
fn reports_do_not_depend_on_flag_order() {
    let d = TempDir::new().unwrap();
    let a = write(&d, "a.grp", ORDER21_A);
    let b = write(&d, "b.grp", ORDER21_B);
    let x = stdout(&run(&["isomorphic", s(&a), s(&b), "--verify", "sampled", "--seed", "9"]));
    let y = stdout(&run(&["isomorphic", "--seed", "9", s(&a), "--verify", "sampled", s(&b)]));
    assert_eq!(without_wall_time(&x), without_wall_time(&y));
    let z = stdout(&run(&["isomorphic", s(&a), s(&b), "--verify", "sampled", "--seed", "9"]));
    assert_eq!(without_wall_time(&x), without_wall_time(&z));
}

#[test]
fn conjugacy_verdicts() {
    let d = TempDir::new().unwrap();
    let m2 = write(&d, "m2.mat", "ptype 17 1\n2\n");
    let m4 = write(&d, "m4.mat", "ptype 17 1\n4\n");
    // distinct scalars are never conjugate
    let out = stdout(&run(&["conjugacy", s(&m2), s(&m4), "--order-cap", "100"]));
    assert_eq!(field(&out, "verdict").as_deref(), Some("no"));
    let out = stdout(&run(&["conjugacy", s(&m2), s(&m2), "--order-cap", "100"]));
    assert_eq!(field(&out, "verdict").as_deref(), Some("yes"));

    let u = write(&d, "u.mat", "ptype 3 1 1\n0 2\n1 0\n");
    let v = write(&d, "v.mat", "ptype 3 1 1\n0 1\n2 0\n");
    let w = write(&d, "w.mat", "ptype 3 1 1\n2 0\n0 2\n");
    let out = stdout(&run(&["conjugacy", s(&u), s(&v), "--order-cap", "100"]));
    assert_eq!(field(&out, "verdict").as_deref(), Some("yes"));
    assert!(field(&out, "conjugator-row").is_some());
    let out = stdout(&run(&["conjugacy", s(&u), s(&w), "--order-cap", "100"]));
    assert_eq!(field(&out, "verdict").as_deref(), Some("no"));

    // order divisible by p
    let bad = write(&d, "bad.mat", "ptype 3 2\n4\n");
    let o = run(&["conjugacy", s(&bad), s(&bad), "--order-cap", "100"]);
    assert_eq!(o.status.code(), Some(3));

    let o = run(&["conjugacy", s(&m2), s(&u), "--order-cap", "100"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn class_counts_and_emitted_representatives() {
    let d = TempDir::new().unwrap();
    let out = stdout(&run(&["count-classes", "--r", "4"]));
    assert_eq!(field(&out, "count").as_deref(), Some("9"));
    assert_eq!(out.lines().filter(|l| l.starts_with("class ")).count(), 9);

    let dir = d.path().join("reps");
    let o = run(&["count-classes", "--r", "2", "--emit-reps", "1", "--out-dir", s(&dir)]);
    assert!(o.status.success());
    let out = stdout(&o);
    let n: usize = field(&out, "count").unwrap().parse().unwrap();
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert_eq!(files.len(), n);
    for (i, f) in files.iter().enumerate() {
        let sd = stdout(&run(&["standard-decomposition", s(f)]));
        assert!(field(&sd, "gamma").is_some(), "{}", f.display());
        for g in files.iter().skip(i + 1) {
            let out = stdout(&run(&["isomorphic", s(f), s(g)]));
            assert_eq!(field(&out, "verdict").as_deref(), Some("no"));
        }
    }
}

#[test]
fn malformed_inputs_fail_with_line_numbers() {
    let d = TempDir::new().unwrap();
    let bad = write(&d, "bad.grp", "semidirect\nA 7\nm 3\n2 1\n");
    let o = run(&["standard-decomposition", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"), "{}", String::from_utf8_lossy(&o.stderr));

    let bad = write(&d, "bad.mat", "ptype 3 1 2\n1 0\n");
    let o = run(&["conjugacy", s(&bad), s(&bad), "--order-cap", "10"]);
    assert_eq!(o.status.code(), Some(2));

    let missing = d.path().join("missing.grp");
    assert_ne!(run(&["order", s(&missing), "0"]).status.code(), Some(0));
    let z6 = write(&d, "z6.grp", &z6_table());
    assert_ne!(run(&["order", s(&z6), "6"]).status.code(), Some(0));
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(field(&stdout(&o), "failed").as_deref(), Some("0"));
}
