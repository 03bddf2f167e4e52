use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use sft_escape::cli::{dispatch, Outcome};

fn run(args: &[&str]) -> Outcome {
    let mut v = vec!["sft-escape"];
    v.extend_from_slice(args);
    dispatch(v)
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap();
    let s: Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

fn check_json(name: &str, args: &[&str], code: i32) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert_eq!(o.code, code, "{args:?}: {}", o.stderr);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    let val = schema(name);
    let errors: Vec<String> = val.iter_errors(&v).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{name} {args:?}: {errors:#?}");
    v
}

#[test]
fn outputs_match_schemas() {
    check_json("corr", &["corr", "aba", "aca"], 0);
    check_json("period", &["period", "aab,abab"], 0);
    check_json("rfunc", &["rfunc", "aaa,abb", "--q", "2"], 0);
    check_json("entropy", &["entropy", "--q", "3", "--forbidden", "aa"], 0);
    check_json("escape", &["escape", "--q", "3", "--hole", "aa,bb"], 0);
    check_json("escape", &["escape", "--q", "4", "--hole", "ab", "--base", "aa"], 0);
    check_json("compare", &["compare", "--q", "2", "--hole1", "aaa,bbb", "--hole2", "aba,bab"], 0);
    check_json("series", &["series", "--q", "2", "--hole", "aa", "--n", "12"], 0);
    check_json("count", &["count", "--q", "3", "--hole", "ab", "--n", "6", "--brute"], 0);
    check_json("parry", &["parry", "--q", "3", "--forbidden", "aa", "--cylinder", "ab"], 0);
    check_json("threshold", &["threshold", "--t", "2", "--p", "3", "--q", "5"], 0);
    check_json("threshold", &["threshold", "--t", "2", "--p", "3", "--variant", "mixed", "--p2", "4"], 0);
    check_json("report", &["verify", "counterexamples"], 0);
    check_json("report", &["--timings", "verify", "p2-theorem", "--q-max", "4"], 0);
    check_json("table", &["table", "1"], 0);
    check_json("table", &["table", "3"], 1);
    check_json("error", &["escape", "--q", "2", "--hole", "aa,bb,cc"], 1);
}

#[test]
fn experiments_config() {
    let dir = std::env::temp_dir().join(format!("sft-escape-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    let csv = dir.join("out.csv");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"suites": [{{"suite": "tables", "ids": [1, 2]}}, {{"suite": "bracket", "samples": 20, "seed": 3}}],
                "output_csv": {:?}}}"#,
            csv.to_str().unwrap()
        ),
    )
    .unwrap();
    let v = check_json("experiments", &["verify", "config", "--config", cfg.to_str().unwrap()], 0);
    assert_eq!(v["reports"].as_array().unwrap().len(), 1);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("theorem,"));
    assert!(text.contains("table,row,q,collection"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_is_byte_identical() {
    let args = ["--format", "json", "verify", "r-order", "--p", "3", "--t", "2", "--q", "30", "--samples", "20", "--seed", "9"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["--jobs", "1", "--format", "json", "table", "2"]);
    let d = run(&["--jobs", "3", "--format", "json", "table", "2"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn table1_csv() {
    let o = run(&["table", "1", "--format", "csv"]);
    assert_eq!(o.code, 0);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines[0], "table,row,q,collection,expected,computed,abs_error,status");
    let rows = &lines[1..];
    assert_eq!(rows.iter().filter(|l| l.ends_with(",PASS")).count(), 33);
    assert_eq!(rows.iter().filter(|l| l.ends_with(",IMPOSSIBLE")).count(), 3);
    assert_eq!(rows.len(), 36);
}

#[test]
fn usage_errors_name_the_flag() {
    let o = run(&["escape", "--q", "1", "--hole", "aa"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("--q"), "{}", o.stderr);
    let o = run(&["table", "1", "--tolerance", "0"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("--tolerance"));
    let o = run(&["entropy", "--forbidden", "aa"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("--q"));
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["verify", "min-period", "--q", "5"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn domain_errors_carry_the_error_name() {
    let o = run(&["escape", "--q", "3", "--hole", "aa", "--base", "a"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.starts_with("error: "), "{}", o.stderr);
    let o = run(&["--digits", "escape", "--q", "2", "--hole", "02"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("InvalidSymbol") || o.stderr.contains("Alphabet"), "{}", o.stderr);
    let o = run(&["parry", "--q", "2", "--forbidden", "ab,ba"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("NotIrreducible"), "{}", o.stderr);
    assert_eq!(run(&["table", "9"]).code, 1);
}

#[test]
fn text_examples() {
    assert!(run(&["escape", "--q", "3", "--hole", "aa,bb"]).stdout.starts_with("rho=0.2172"));
    assert_eq!(run(&["corr", "aba", "aca"]).stdout, "1\n");
    assert_eq!(run(&["--digits", "corr", "0101", "0101"]).stdout, "z^3+z\n");
    let o = run(&["count", "--q", "2", "--hole", "aa", "--n", "10", "--brute"]);
    assert_eq!(o.stdout, "f(10)=144\nbrute=144\n");
    let o = run(&["compare", "--q", "2", "--hole1", "aaa,bbb", "--hole2", "aab,bba"]);
    assert_eq!(o.code, 0);
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_sft-escape"))
        .args(["escape", "--q", "3", "--hole", "aa,bb"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("rho=0.2172"));
    let out = Command::new(env!("CARGO_BIN_EXE_sft-escape"))
        .args(["escape", "--q", "0", "--hole", "aa"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
