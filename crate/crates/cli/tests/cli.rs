//! End-to-end tests of the `polyalg` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

struct Env {
    dir: tempfile::TempDir,
}

impl Env {
    fn new() -> Self {
        Env { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn catalog(&self) -> PathBuf {
        self.dir.path().join("catalog")
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_polyalg")).arg("--catalog").arg(self.catalog()).args(args).output().unwrap()
    }

    fn ok(&self, args: &[&str]) -> String {
        let out = self.run(args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        String::from_utf8(out.stdout).unwrap()
    }

    fn code(&self, args: &[&str]) -> i32 {
        self.run(args).status.code().unwrap()
    }

    fn load(&self, csv: &Path, name: &str, schema: &str, extra: &[&str]) {
        let mut args = vec!["load", csv.to_str().unwrap(), "--as", name, "--schema", schema];
        args.extend_from_slice(extra);
        self.ok(&args);
    }

    fn with_paper_data(self) -> Self {
        let x = self.file("x.csv", "A,B\na,1\nb,2\nc,3\n");
        let y = self.file("y.csv", "B,C\n2,p\n3,q\n4,r\n");
        self.load(&x, "x", "A:str,B:int", &[]);
        self.load(&y, "y", "B:int,C:str", &[]);
        self
    }
}

#[test]
fn join_as_table() {
    let env = Env::new().with_paper_data();
    assert_eq!(env.ok(&["query", "(join x y)"]), "A  B  C  #\nb  2  p  1\nc  3  q  1\n(2 rows)\n");
}

#[test]
fn union_doubles_and_min_aggregates() {
    let env = Env::new().with_paper_data();
    let csv = env.ok(&["query", "(union x x)", "--format", "csv"]);
    assert_eq!(csv, "A,B,#weight\na,1,2\nb,2,2\nc,3,2\n");
    let g = env.file("g.csv", "A,B\np,2\np,3\nq,4\n");
    env.load(&g, "g", "A:str,B:int", &[]);
    assert_eq!(env.ok(&["query", "(agg min [A] B g)", "--format", "csv"]), "A,B,#weight\np,2,1\nq,4,1\n");
}

#[test]
fn exit_codes() {
    let env = Env::new().with_paper_data();
    assert_eq!(env.code(&["query", "(join x y"]), 1);
    assert_eq!(env.code(&["query", "(frobnicate x)"]), 1);
    assert_eq!(env.code(&["query"]), 1);
    assert_eq!(env.code(&["nonsense"]), 1);
    assert_eq!(env.code(&["query", "(join x nope)"]), 2);
    assert_eq!(env.code(&["query", "(project [Z] x)"]), 2);
    assert_eq!(env.code(&["show", "nope"]), 2);
    assert_eq!(env.code(&["--help"]), 0);
    assert_eq!(env.code(&["--version"]), 0);
    let bad = env.file("bad.csv", "A,B\na,one\n");
    let out = env.run(&["load", bad.to_str().unwrap(), "--as", "bad", "--schema", "A:str,B:int"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 2"));
    assert_eq!(env.code(&["load", bad.to_str().unwrap(), "--as", "bad", "--schema", "A:text"]), 1);
}

#[test]
fn names_and_rings_are_fixed() {
    let env = Env::new().with_paper_data();
    let x = env.dir.path().join("x.csv");
    assert_eq!(env.code(&["load", x.to_str().unwrap(), "--as", "x", "--schema", "A:str,B:int"]), 2);
    assert_eq!(env.code(&["load", x.to_str().unwrap(), "--as", "x2", "--schema", "A:str,B:int", "--ring", "gf2"]), 2);
    env.load(&x, "x", "A:str,B:int", &["--replace"]);
}

#[test]
fn gf2_is_set_semantics() {
    let env = Env::new();
    let r = env.file("r.csv", "A\na\na\nb\n");
    env.load(&r, "r", "A:str", &["--ring", "gf2"]);
    assert_eq!(env.ok(&["show", "r", "--format", "csv"]), "A,#weight\nb,1\n");
}

#[test]
fn csv_output_reloads_to_the_same_relation() {
    let env = Env::new().with_paper_data();
    let text = env.ok(&["query", "(outer full x y)", "--format", "csv"]);
    let back = env.file("back.csv", &text);
    env.load(&back, "back", "A:str,B:int,C:str", &[]);
    assert_eq!(env.ok(&["show", "back", "--format", "csv"]), text);
    assert_eq!(env.ok(&["query", "(diff back (outer full x y))", "--format", "csv"]), "A,B,C,#weight\n");
}

#[test]
fn output_is_deterministic() {
    let env = Env::new().with_paper_data();
    for fmt in ["table", "csv", "json"] {
        let q = ["query", "(outer left (union x x) y)", "--format", fmt];
        assert_eq!(env.ok(&q), env.ok(&q));
    }
}

#[test]
fn cofinite_relation_is_flagged() {
    let env = Env::new();
    let r = env.file("r.csv", "A,#weight\n*,1\na,-1\n");
    env.load(&r, "r", "A:str", &[]);
    let v: serde_json::Value = serde_json::from_str(&env.ok(&["show", "r", "--format", "json"])).unwrap();
    assert_eq!(v["has_baseline"], true);
    assert_eq!(v["rows"], serde_json::json!([{"values": [null], "coefficient": 1}, {"values": ["a"], "coefficient": -1}]));
    let table = env.ok(&["show", "r"]);
    assert!(table.starts_with("A  #\n*  1\na  -1\n"), "{table}");
    assert!(table.contains("note:"));
}

#[test]
fn weight_column_deletes() {
    let env = Env::new().with_paper_data();
    let d = env.file("d.csv", "A,B,#weight\nb,2,-1\nd,4,1\n");
    env.load(&d, "d", "A:str,B:int", &[]);
    assert_eq!(env.ok(&["query", "(update x d)", "--format", "csv"]), "A,B,#weight\na,1,1\nc,3,1\nd,4,1\n");
}

#[test]
fn empty_relation_has_no_rows() {
    let env = Env::new().with_paper_data();
    let v: serde_json::Value =
        serde_json::from_str(&env.ok(&["query", "(diff x x)", "--format", "json"])).unwrap();
    assert_eq!(v["rows"], serde_json::json!([]));
    assert_eq!(v["has_baseline"], false);
}

#[test]
fn stats_report_metrics() {
    let env = Env::new().with_paper_data();
    let v: serde_json::Value =
        serde_json::from_str(&env.ok(&["query", "(join x y)", "--format", "json", "--stats"])).unwrap();
    assert!(v["metrics"]["trie_edges"].as_u64().unwrap() > 0);
    assert!(env.ok(&["query", "(join x y)", "--stats"]).contains("trie_edges"));
    let out = env.run(&["query", "(join x y)", "--format", "csv", "--stats"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("trie_edges"));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("trie_edges"));
}

#[test]
fn bench_small_sizes() {
    let env = Env::new();
    let v: serde_json::Value = serde_json::from_str(&env.ok(&[
        "bench", "triangle", "--sizes", "2,3,4", "--repeats", "1", "--with-naive", "--format", "json",
    ]))
    .unwrap();
    let rows: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["output_rows"].as_u64().unwrap()).collect();
    assert_eq!(rows, [8, 27, 64]);
    assert!(v["slope_naive"].as_f64().is_some());
    assert_eq!(env.code(&["bench", "triangle", "--sizes", "4,2"]), 1);
}
