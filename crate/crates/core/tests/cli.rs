use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use ckdual::cli::{reference_examples, ReferenceTable};
use ckdual::fgab::SearchConfig;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ckdual"));
    c.env_remove("CKDUAL_TORSION_BOUND");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Fixtures {
    dir: PathBuf,
}

impl Fixtures {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("ckdual-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Fixtures { dir }
    }

    fn file(&self, name: &str, body: &str) -> String {
        let p = self.dir.join(name);
        std::fs::write(&p, body).unwrap();
        p.to_string_lossy().into_owned()
    }
}

impl Drop for Fixtures {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.dir);
    }
}

const F: &str = "# F\n1 1\n1 0\n";
const A: &str = "1 1 1\n1 1 1\n1 0 0\n";
const A_T: &str = "1 1 1\n1 1 0\n1 1 0\n";

#[test]
fn invariants_text_and_json() {
    let fx = Fixtures::new("inv");
    let f = fx.file("f.txt", F);
    let o = run(&["invariants", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("k0_toeplitz  (Z; 1, -2)"), "{}", stdout(&o));

    let j1 = run(&["invariants", &f, "--json"]);
    let j2 = run(&["invariants", &f, "--json"]);
    assert_eq!(j1.stdout, j2.stdout);
    let v: Value = serde_json::from_slice(&j1.stdout).unwrap();
    assert_eq!(v["results"]["k0_toeplitz"]["free_rank"], 1);
    assert_eq!(v["results"]["k0_toeplitz"]["marks"], serde_json::json!([[1], [-2]]));
    assert_eq!(v["inputs"][0]["name"], "F");
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", stdout(&j1));
}

#[test]
fn transpose_flag_changes_orientation() {
    let fx = Fixtures::new("tr");
    let a = fx.file("a.txt", A);
    let at = fx.file("at.txt", A_T);
    let flipped = run(&["invariants", &a, "--transpose", "--json"]);
    let direct = run(&["invariants", &at, "--json"]);
    let fv: Value = serde_json::from_slice(&flipped.stdout).unwrap();
    let dv: Value = serde_json::from_slice(&direct.stdout).unwrap();
    assert_eq!(fv["results"], dv["results"]);
}

#[test]
fn input_errors_exit_2() {
    let fx = Fixtures::new("err");
    let ragged = fx.file("ragged.txt", "1 1\n1\n");
    let perm = fx.file("perm.txt", "0 1\n1 0\n");
    let twos = fx.file("twos.txt", "1 2\n1 0\n");
    for args in [
        vec!["invariants", ragged.as_str()],
        vec!["verify", perm.as_str()],
        vec!["invariants", twos.as_str()],
        vec!["invariants", "/nonexistent/matrix.txt"],
        vec!["iso", "x", "y"],
        vec!["enumerate", "--size", "1"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn verify_exit_codes() {
    let fx = Fixtures::new("ver");
    for body in [F, A, A_T] {
        let p = fx.file("m.txt", body);
        let o = run(&["verify", &p]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let p = fx.file("m.json", r#"{"name": "F", "matrix": [[1, 1], [1, 0]]}"#);
    let o = run(&["verify", &p, "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["results"]["report"]["checks"].as_array().unwrap().len() > 20);
}

#[test]
fn iso_exit_codes() {
    let fx = Fixtures::new("iso");
    let f = fx.file("f.txt", F);
    let b = fx.file("b.txt", "1 1\n1 1\n");
    let a = fx.file("a.txt", A);
    let at = fx.file("at.txt", A_T);
    let bm = fx.file("bm.txt", "1 1 0 0\n1 1 1 0\n0 1 1 1\n0 0 1 1\n");
    let ct = fx.file("ct.txt", "1 1 1\n1 1 0\n1 1 1\n");
    assert_eq!(run(&["iso", &f, &b, "--toeplitz"]).status.code(), Some(1));
    assert_eq!(run(&["iso", &bm, &ct, "--toeplitz"]).status.code(), Some(0));
    assert_eq!(run(&["iso", &a, &at, "--ck"]).status.code(), Some(1));
    assert_eq!(run(&["iso", &a, &at, "--extw"]).status.code(), Some(1));
    assert_eq!(run(&["iso", &f, &b, "--ck"]).status.code(), Some(0));
    assert_eq!(run(&["iso", &f, &b, "--ck", "--toeplitz"]).status.code(), Some(2));

    let o = run(&["iso", &a, &a, "--toeplitz", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"]["decision"], "yes");
    assert!(v["results"]["witness"].is_array());
}

#[test]
fn torsion_bound_from_environment() {
    let fx = Fixtures::new("env");
    let a = fx.file("a.txt", A);
    let at = fx.file("at.txt", A_T);
    let unknown = bin().args(["iso", &a, &at, "--ck"]).env("CKDUAL_TORSION_BOUND", "1").output().unwrap();
    assert_eq!(unknown.status.code(), Some(3), "{}", stdout(&unknown));
    let bad = bin().args(["iso", &a, &at, "--toeplitz"]).env("CKDUAL_TORSION_BOUND", "lots").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn stdin_dash() {
    let mut child = bin()
        .args(["invariants", "-", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(F.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["inputs"][0]["source"], "-");
}

#[test]
fn reference_examples_report_known_mismatches() {
    let o = run(&["paper-examples"]);
    let again = run(&["paper-examples"]);
    assert_eq!(o.stdout, again.stdout);
    // the two triples whose stated values differ from the computed ones,
    // and the two Toeplitz verdicts that depend on them
    let mismatches: Vec<String> = stdout(&o)
        .lines()
        .filter(|l| l.starts_with("[MISMATCH]"))
        .map(|l| l.split(':').next().unwrap().to_string())
        .collect();
    assert_eq!(
        mismatches,
        vec![
            "[MISMATCH] triple B",
            "[MISMATCH] triple D",
            "[MISMATCH] toeplitz B vs D^t",
            "[MISMATCH] toeplitz F vs D^t",
        ]
    );
    assert_eq!(o.status.code(), Some(1));

    let j = run(&["paper-examples", "--json"]);
    let v: Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v["results"].as_array().unwrap().len(), 25);
    assert_eq!(v["pass"], false);
}

#[test]
fn corrupted_reference_table_is_caught() {
    let cfg = SearchConfig::default();
    let mut table = ReferenceTable::builtin();
    table.triples.retain(|t| t.matrix.name == "F");
    table.verdicts.clear();
    assert!(reference_examples(&table, &cfg).unwrap().1);
    table.triples[0].marks[1] = vec![-3];
    let (lines, pass) = reference_examples(&table, &cfg).unwrap();
    assert!(!pass);
    assert!(!lines[0].pass);
}

#[test]
fn enumerate_counts_and_determinism() {
    let o = run(&["enumerate", "--size", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("size 2: 3 matrices, 3 pass"), "{}", stdout(&o));

    let three = run(&["enumerate", "--size", "3", "--json"]);
    let v: Value = serde_json::from_slice(&three.stdout).unwrap();
    assert_eq!(v["results"]["matrices"], 142);
    assert_eq!(v["pass"], true);

    let s1 = run(&["enumerate", "--size", "4", "--limit", "8", "--seed", "5", "--json"]);
    let s2 = run(&["enumerate", "--size", "4", "--limit", "8", "--seed", "5", "--json"]);
    let s3 = run(&["enumerate", "--size", "4", "--limit", "8", "--seed", "6", "--json"]);
    assert_eq!(s1.stdout, s2.stdout);
    assert_ne!(s1.stdout, s3.stdout);
    let v: Value = serde_json::from_slice(&s1.stdout).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", stdout(&s1));
}
