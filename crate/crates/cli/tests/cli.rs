use std::path::PathBuf;
use std::process::{Command, Output};

use okmult::ideal_arith::enumerate_ideals;
use okmult::QuadField;
use serde_json::Value;

fn okmult(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_okmult")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = okmult(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    reader.records().map(|r| r.unwrap().iter().map(str::to_string).collect()).collect()
}

fn column(report: &Value, name: &str) -> usize {
    report["columns"].as_array().unwrap().iter().position(|c| c == name).unwrap()
}

fn coloring_file(name: &str, rule: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, rule).unwrap();
    path
}

#[test]
fn class_group_of_five() {
    let r = json(&["class-group", "--d", "5"]);
    assert_eq!(r["h"], 2);
    assert_eq!(r["orders"], serde_json::json!([2]));
    assert_eq!(r["generators"].as_array().unwrap().len(), 1);
    assert_eq!(r["generators"][0]["order"], 2);
}

#[test]
fn ideals_match_enumeration() {
    let text = stdout(&["ideals", "--d", "1", "--max-norm", "5", "--format", "csv"]);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 5);
    assert!(text.starts_with("norm,a,b,c,principal,generator\n"));
    let field = QuadField::new(1).unwrap();
    for (row, ideal) in rows.iter().zip(enumerate_ideals(&field, 5)) {
        assert_eq!(row[0], ideal.norm().to_string());
        assert_eq!(row[1..4], [ideal.a().to_string(), ideal.b().to_string(), ideal.c().to_string()]);
    }
}

#[test]
fn halasz_constant_function() {
    let r = json(&["halasz", "--d", "1", "--fn", "one", "--tau", "0", "--x", "100000"]);
    let row = &r["rows"][0];
    let r1 = row[column(&r, "r1")].as_f64().unwrap();
    let prediction = row[column(&r, "prediction_re")].as_f64().unwrap();
    let gap = row[column(&r, "relative_gap")].as_f64().unwrap();
    assert!((prediction - r1).abs() < 1e-9 * r1);
    assert!(gap < 1e-3, "relative gap {gap}");
}

#[test]
fn json_reparses_to_the_same_report() {
    for args in [
        &["class-group", "--d", "23"][..],
        &["average", "--fn", r#"{"kind":"angular","k":1}"#, "--N", "2000", "--checkpoints", "100,1000"],
        &["factor", "--d", "6", "--element", "30,0"],
    ] {
        let text = stdout(args);
        let parsed: Value = serde_json::from_str(&text).unwrap();
        let again: Value = serde_json::from_str(&serde_json::to_string(&parsed).unwrap()).unwrap();
        assert_eq!(again, parsed);
        assert_eq!(parsed["command"], args[0]);
    }
}

#[test]
fn identical_runs_give_identical_bytes() {
    let args = [
        "scan-aperiodic",
        "--d",
        "3",
        "--fn",
        r#"{"kind":"archimedean","tau":0.4}"#,
        "--N",
        "3000",
        "--format",
        "csv",
    ];
    assert_eq!(stdout(&args), stdout(&args));
    let tk = ["tk", "--Q", "2,2", "--a", "1,0", "--M", "2", "--N", "1500", "--seed", "9"];
    assert_eq!(stdout(&tk), stdout(&tk));
}

#[test]
fn floats_have_at_most_twelve_digits() {
    let text = stdout(&["prime-sums", "--d", "2", "--N", "5000", "--format", "csv"]);
    for cell in csv_rows(&text).concat() {
        let mantissa = cell.split(['e', 'E']).next().unwrap();
        let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
        let significant = digits.trim_start_matches('0').trim_end_matches('0');
        assert!(significant.len() <= 12, "{cell}");
    }
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = okmult(&["ideals", "--bogus"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(okmult(&["no-such-command"]).status.code(), Some(64));
    assert_eq!(okmult(&["tk", "--Q", "1"]).status.code(), Some(64));
    assert_eq!(okmult(&[]).status.code(), Some(64));
}

#[test]
fn help_lists_columns() {
    let out = okmult(&["average", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("CSV columns: N,re,im,abs"));
}

#[test]
fn preconditions_exit_two_with_clause() {
    let cases: [(&[&str], &str); 5] = [
        (&["folner", "--M", "1"], "M >= 2"),
        (&["field-info", "--d", "4"], "squarefree"),
        (&["weights", "--delta", "0.7"], "0 < delta < 1/2"),
        (&["tk", "--Q", "2,0", "--a", "2,0", "--N", "100"], "coprime"),
        (&["weights", "--form", "1,1,0,0,0,0"], "degenerate"),
    ];
    for (args, clause) in cases {
        let out = okmult(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(clause), "{args:?}: {err}");
    }
}

#[test]
fn missing_coloring_file() {
    let out = okmult(&["search", "--coloring", "/nonexistent/rule.json"]);
    assert_eq!(out.status.code(), Some(66));
}

#[test]
fn search_reports_monochromatic_triples() {
    let rule = coloring_file("norm_mod3.json", r#"{"kind":"norm_mod","modulus":3}"#);
    let r = json(&["search", "--coloring", rule.to_str().unwrap(), "--bound", "2", "--limit", "4"]);
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(r["found"], 4);
    let bad = coloring_file("bad.json", r#"{"kind":"norm_mod","modulus":0}"#);
    assert_eq!(okmult(&["search", "--coloring", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn characters_are_orthogonal() {
    let r = json(&["characters", "--d", "1", "--modulus", "3,0"]);
    assert_eq!(r["group_order"], 8);
    for (idx, row) in r["rows"].as_array().unwrap().iter().enumerate() {
        let sum = row[column(&r, "sum_re")].as_f64().unwrap();
        let expected = if idx == 0 { 8.0 } else { 0.0 };
        assert!((sum - expected).abs() < 1e-10);
    }
}

#[test]
fn concentration_of_a_character_is_exact() {
    let chi = r#"{"kind":"character","modulus":[2,0],"label":[1],"modified":true}"#;
    let r = json(&["concentrate", "--fn", chi, "--chi", chi, "--Q", "2,2", "--a", "0,1", "--M", "2", "--N", "3000"]);
    assert_eq!(r["rows"][0][column(&r, "empirical")], 0.0);
    let out = okmult(&["concentrate", "--Q", "3,0", "--M", "2", "--N", "100"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Folner"));
}

#[test]
fn every_subcommand_runs() {
    let rule = coloring_file("hash.json", r#"{"kind":"hash","seed":3,"colors":2}"#);
    let runs: Vec<Vec<&str>> = vec![
        vec!["field-info", "--d", "7"],
        vec!["ideals", "--d", "5", "--max-norm", "30"],
        vec!["factor", "--d", "5", "--ideal", "3,1,1"],
        vec!["class-group", "--d", "1"],
        vec!["characters", "--d", "3", "--modulus", "2,1"],
        vec!["extensions", "--d", "23", "--fn", r#"{"kind":"archimedean","tau":0.7}"#],
        vec!["distance", "--fn", "split_sign", "--N", "3000"],
        vec!["average", "--domain", "ideals", "--fn", "dead_factor", "--N", "3000"],
        vec!["scan-aperiodic", "--N", "500", "--coeff-bound", "2"],
        vec!["halasz", "--fn", "split_sign", "--x", "3000", "--r1", "0.785398163397"],
        vec!["tk", "--h", "big-omega", "--N", "500"],
        vec!["concentrate", "--Q", "2,2", "--M", "2", "--N", "500"],
        vec!["folner", "--d", "2", "--M", "3"],
        vec!["density", "--M", "3", "--divisor", "1,1"],
        vec!["weights", "--N", "40", "--checkpoints", "20"],
        vec!["adelta", "--fn", r#"{"kind":"angular","k":1}"#, "--N", "30", "--Q", "1,1"],
        vec!["search", "--coloring", rule.to_str().unwrap(), "--bound", "2", "--limit", "2"],
        vec!["prime-sums", "--N", "1000"],
    ];
    for args in runs {
        for format in ["csv", "json"] {
            let mut full = args.clone();
            full.extend(["--format", format]);
            let text = stdout(&full);
            if format == "json" {
                let r: Value = serde_json::from_str(&text).unwrap();
                let width = r["columns"].as_array().unwrap().len();
                assert!(r["rows"].as_array().unwrap().iter().all(|row| row.as_array().unwrap().len() == width));
            } else {
                assert!(!text.is_empty());
            }
        }
    }
}
