use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use matsys::json::{any_document_from_json, document_to_json, AnyDocument};
use serde_json::{json, Value};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matsys")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn classify_model_case() {
    let o = run(&["classify", "--alpha", "1", "--beta", "1", "--gamma", "1"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("tag = MultipleRoot"), "{out}");
    assert!(out.contains("delta = 2"));
    assert!(out.contains("dis = 0"));
    assert!(out.contains("roots = 0, 0, 1"));
}

#[test]
fn classify_json_and_negative_values() {
    let o = run(&["classify", "--alpha", "0", "--beta", "-2", "--gamma", "1/3", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["beta"], "-2");
    assert_eq!(v["gamma"], "1/3");
    assert_eq!(v["delta"], "3");
    assert_eq!(v["roots"]["numeric"].as_array().unwrap().len(), 3);
    let o = run(&["classify", "--alpha", "0", "--beta", "0", "--gamma", "0", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tag"], "Nilpotent");
}

#[test]
fn malformed_input_exits_with_two() {
    let o = run(&["classify", "--alpha", "x", "--beta", "1", "--gamma", "1"]);
    assert_eq!(code(&o), 2);
    let o = run(&["verify", "--in", "nonexistent.json"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.json");
    std::fs::write(&bad, "{\"kind\": \"triple\"").unwrap();
    assert_eq!(code(&run(&["verify", "--in", s(&bad)])), 2);
    std::fs::write(&bad, r#"{"kind": "pentagon", "matrices": {}}"#).unwrap();
    assert_eq!(code(&run(&["verify", "--in", s(&bad)])), 2);
}

#[test]
fn unknown_flags_are_rejected() {
    assert_eq!(code(&run(&["classify", "--alpha", "1", "--beta", "1", "--gamma", "1", "--bogus"])), 2);
    assert_eq!(code(&run(&["quat", "--v1", "1"])), 2);
    assert_eq!(code(&run(&["construct", "--case", "nope"])), 2);
}

#[test]
fn ncgb_reduces_fifth_power() {
    let dir = TempDir::new().unwrap();
    let a5 = path(&dir, "a5.txt");
    std::fs::write(&a5, "1*a.a.a.a.a\n").unwrap();
    let o = run(&["ncgb", "--system", "s4", "--maxdeg", "6", "--reduce", s(&a5)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("reduces to 0"));

    let a2 = path(&dir, "a2.txt");
    std::fs::write(&a2, "# comment\na.a\n").unwrap();
    let o = run(&["ncgb", "--system", "s4", "--maxdeg", "6", "--reduce", s(&a2), "--json"]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["reductions"][0]["zero"], false);
    assert_eq!(code(&run(&["ncgb", "--system", "s99"])), 2);
}

#[test]
fn ncgb_from_generator_file() {
    let dir = TempDir::new().unwrap();
    let gens = path(&dir, "gens.txt");
    std::fs::write(&gens, "a.a\na.b - b.a\n").unwrap();
    let target = path(&dir, "t.txt");
    std::fs::write(&target, "a.b.a\n").unwrap();
    let o = run(&["ncgb", "--gens", s(&gens), "--maxdeg", "4", "--reduce", s(&target)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

const CASES: [&str; 12] = [
    "generic",
    "t2",
    "t3",
    "nil-n2",
    "nil-n3",
    "nil-n9",
    "real-even",
    "solve-u",
    "sigma-71",
    "sigma-72",
    "sigma-nonnil",
    "tsys",
];

#[test]
fn every_constructed_case_verifies() {
    let dir = TempDir::new().unwrap();
    for case in CASES {
        for extra in [&[][..], &["--conjugate", "--seed", "5"][..]] {
            let file = path(&dir, &format!("{case}.json"));
            let mut args = vec!["construct", "--case", case, "--out", s(&file)];
            args.extend_from_slice(extra);
            let o = run(&args);
            assert_eq!(code(&o), 0, "{case}: {}", String::from_utf8_lossy(&o.stderr));
            let o = run(&["verify", "--in", s(&file)]);
            assert_eq!(code(&o), 0, "{case}: {}", stdout(&o));
            assert!(stdout(&o).trim_end().ends_with("PASS"));
        }
    }
}

#[test]
fn case_flags_are_honoured() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "t2.json");
    let o = run(&[
        "construct",
        "--case",
        "t2",
        "--phi",
        "3",
        "--psi",
        "2",
        "--theta",
        "1",
        "--square-zero",
        "--out",
        s(&file),
        "--json",
    ]);
    assert_eq!(code(&o), 0);
    let summary: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["n"], 6);
    assert_eq!(code(&run(&["verify", "--in", s(&file)])), 0);

    let o = run(&["construct", "--case", "t3", "--sigma", "2", "--m", "2", "--diag", "2"]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["matrices"]["a"]["nrows"], 4);
    assert_eq!(doc["matrices"]["a"]["field"]["kind"], "NF");

    // odd noncommuting block, non-generic parameters
    assert_eq!(code(&run(&["construct", "--case", "t3", "--m", "3"])), 2);
    assert_eq!(code(&run(&["construct", "--case", "generic", "--alpha", "1", "--beta", "1", "--gamma", "1"])), 2);
}

#[test]
fn perturbed_solution_fails_with_one() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "n9.json");
    assert_eq!(code(&run(&["construct", "--case", "nil-n9", "--out", s(&file)])), 0);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    v["matrices"]["b"]["entries"][4][6] = json!("1/7");
    std::fs::write(&file, v.to_string()).unwrap();
    let o = run(&["verify", "--in", s(&file)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("entry (5, 7)"), "{}", stdout(&o));
    let o = run(&["verify", "--in", s(&file), "--json"]);
    assert_eq!(code(&o), 1);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["passed"], false);
    assert!(r["checks"][0]["residual"].is_object());
}

#[test]
fn relation_sets_and_context() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "scalar.json");
    // roots 1, 2, -3: squares sum to 14, cubes to -18
    let o = run(&[
        "construct",
        "--case",
        "generic",
        "--alpha",
        "0",
        "--beta",
        "14",
        "--gamma",
        "-18",
        "--n",
        "1",
        "--out",
        s(&file),
    ]);
    assert_eq!(code(&o), 0);
    let scalar = |x: &str| json!({"field": {"kind": "Q"}, "nrows": 1, "ncols": 1, "entries": [[x]]});
    let ctx = path(&dir, "ctx.json");
    std::fs::write(&ctx, json!({"u_squared": scalar("14"), "v_cubed": scalar("-18"), "first_case": true}).to_string())
        .unwrap();
    assert_eq!(code(&run(&["verify", "--in", s(&file), "--relations", "R21", "--context", s(&ctx)])), 0);
    std::fs::write(&ctx, json!({"u_squared": scalar("14"), "v_cubed": scalar("-17")}).to_string()).unwrap();
    assert_eq!(code(&run(&["verify", "--in", s(&file), "--relations", "r21", "--context", s(&ctx)])), 1);
    // missing context, unknown set, set for another kind
    assert_eq!(code(&run(&["verify", "--in", s(&file), "--relations", "R21"])), 2);
    assert_eq!(code(&run(&["verify", "--in", s(&file), "--relations", "R99"])), 2);
    assert_eq!(code(&run(&["verify", "--in", s(&file), "--relations", "SIGMA"])), 2);

    let n3 = path(&dir, "n3.json");
    assert_eq!(code(&run(&["construct", "--case", "nil-n3", "--x", "2", "--y", "-1", "--out", s(&n3)])), 0);
    for set in ["R51", "THM4_DEG4", "THM4_DEG5"] {
        assert_eq!(code(&run(&["verify", "--in", s(&n3), "--relations", set])), 0, "{set}");
    }
    let q = path(&dir, "q.json");
    assert_eq!(code(&run(&["construct", "--case", "sigma-72", "--out", s(&q)])), 0);
    assert_eq!(code(&run(&["verify", "--in", s(&q), "--relations", "PATTERN_721"])), 0);
    let j2 = path(&dir, "j2.json");
    std::fs::write(&j2, json!({"unity": ["-1", "-1"]}).to_string()).unwrap();
    assert_eq!(code(&run(&["verify", "--in", s(&q), "--relations", "PATTERN_721", "--context", s(&j2)])), 1);
}

#[test]
fn json_output_round_trips() {
    for case in CASES {
        let o = run(&["construct", "--case", case, "--conjugate"]);
        assert_eq!(code(&o), 0, "{case}");
        let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
        let again = match any_document_from_json(&doc).unwrap() {
            AnyDocument::Q(d) => document_to_json(&d),
            AnyDocument::Nf(d, _) => document_to_json(&d),
            AnyDocument::R(d) => document_to_json(&d),
            AnyDocument::C(d) => document_to_json(&d),
            AnyDocument::U(u) => matsys::json::u_solution_to_json(&u),
        };
        assert_eq!(again, doc, "{case}");
    }
}

#[test]
fn flag_on_nine_by_nine() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "n9.json");
    assert_eq!(code(&run(&["construct", "--case", "nil-n9", "--out", s(&file)])), 0);
    let o = run(&["flag", "--in", s(&file)]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("signature: [1, 2, 3, 2, 1]"));
    assert!(out.contains("V2: e1, e2, e6"));
    assert!(out.contains("triangularizing basis: e1, e2, e6, e3, e7, e9, e4, e8, e5"));
    assert!(out.contains("algebra dimension 8"));
    assert!(out.contains("center dimension 5"));
    assert!(out.contains("varpi = 0"));
    let v: Value = serde_json::from_str(&stdout(&run(&["flag", "--in", s(&file), "--json"]))).unwrap();
    assert_eq!(v["dimensions"], json!([0, 1, 3, 6, 8, 9]));
    assert_eq!(v["varpi"], "0");

    let g = path(&dir, "g.json");
    assert_eq!(code(&run(&["construct", "--case", "generic", "--out", s(&g)])), 0);
    assert_eq!(code(&run(&["flag", "--in", s(&g)])), 2);
}

#[test]
fn quat_verdicts_and_search() {
    let o = run(&["quat", "--v1", "-4", "--v2", "4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("noncommuting solutions exist"));
    let o = run(&["quat", "--v1", "-4", "--v2", "4", "--solve", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let sols = v["solutions"].as_array().unwrap();
    assert!(!sols.is_empty());
    assert!(sols.iter().all(|s| s["residual"].as_f64().unwrap() <= 1e-9));
    assert_eq!(sols[0]["orbit"].as_array().unwrap().len(), 4);

    let o = run(&["quat", "--v1", "-4", "--v2", "2", "--solve"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("found 0 solution classes"));
    // the region test claims solutions here but none exist
    let o = run(&["quat", "--v1", "1", "--v2", "1", "--solve"]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&run(&["quat", "--v1", "1", "--v2", "0"])), 2);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["quat", "--v1", "-4", "--v2", "4", "--solve", "--attempts", "80", "--seed", "7", "--json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["construct", "--case", "nil-n9", "--conjugate", "--seed", "9"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn roots_command() {
    let o = run(&["roots", "--coeffs=-2,1,1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("rational roots: -2, 1"));
    let o = run(&["roots", "--coeffs", "-6,0,0,1", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["exact"].as_array().unwrap().is_empty());
    let real = v["numeric"][2][0].as_f64().unwrap();
    assert!((real.powi(3) - 6.0).abs() < 1e-9);
    assert_eq!(code(&run(&["roots", "--coeffs", "5"])), 2);
}
