use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(name)
}

fn mutdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mutdiff")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn check_mult(extra: &[&str]) -> (Output, Value) {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let mult = corpus("mult.mlang");
    let mut args = vec!["check", mult.to_str().unwrap(), "--domain", "0:15", "--json", json.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = mutdiff(&args);
    let report = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    (out, report)
}

#[test]
fn check_prints_table_and_json() {
    let (out, v) = check_mult(&["--no-timing"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("Class"));
    assert!(text.lines().nth(1).unwrap().starts_with("mult"));

    let r = &v["reports"][0];
    let n = |k: &str| r[k].as_u64().unwrap();
    assert!(n("no_mut") > 0);
    assert_eq!(n("no_mut"), n("det_eqmut") + n("not_eq") + n("unknown"));
    for m in r["mutants"].as_array().unwrap() {
        assert_eq!(m["verdict"] == "not_equivalent", m.get("witness").is_some(), "{m}");
        assert!(m.get("wall_ms").is_none());
    }
    let s = &r["score_with_witnesses"];
    let (k, t, e) = (s["killed"].as_f64().unwrap(), s["total"].as_f64().unwrap(), s["equivalent"].as_f64().unwrap());
    assert_eq!(s["score"].as_f64().unwrap(), k / (t - e));
}

#[test]
fn timing_is_reported_by_default() {
    let (_, v) = check_mult(&[]);
    assert!(v["reports"][0]["mutants"][0]["wall_ms"].is_u64());
}

#[test]
fn reports_are_deterministic() {
    let (_, a) = check_mult(&["--no-timing"]);
    let (_, b) = check_mult(&["--no-timing"]);
    assert_eq!(a.to_string(), b.to_string());
}

#[test]
fn suite_scores() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite.json");
    fs::write(&suite, r#"[{"input": {"a": 2, "b": 3}, "expected": {"res": 6}}]"#).unwrap();
    let (out, v) = check_mult(&["--suite", suite.to_str().unwrap()]);
    assert!(out.status.success());
    let s = &v["reports"][0]["score"];
    assert!(s["killed"].as_u64().unwrap() > 0);
    assert!(stdout(&out).lines().nth(1).unwrap().split_whitespace().nth(7).unwrap() != "-");
}

#[test]
fn syntax_error_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mlang");
    fs::write(&bad, "program p(output int r) {\n  r = ;\n}\n").unwrap();
    let out = mutdiff(&["check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.mlang"));

    // Good files are still reported next to a bad one.
    let out = mutdiff(&[
        "check",
        bad.to_str().unwrap(),
        corpus("rect_perimeter.mlang").to_str().unwrap(),
        "--domain",
        "0:15",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("rect_perimeter"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(mutdiff(&["check", "x.mlang", "--domain", "5:1"]).status.code(), Some(1));
    assert_eq!(mutdiff(&["check", "x.mlang", "--ops", "XYZ"]).status.code(), Some(1));
    assert_eq!(mutdiff(&["check", corpus("mult.mlang").to_str().unwrap(), "--nd", "6"]).status.code(), Some(1));
    assert_eq!(mutdiff(&["check", "/nonexistent.mlang"]).status.code(), Some(1));
}

#[test]
fn emit_smt_writes_every_attempted_system() {
    let dir = tempfile::tempdir().unwrap();
    let smt = dir.path().join("smt");
    let (out, v) = check_mult(&["--emit-smt", smt.to_str().unwrap()]);
    assert!(out.status.success());
    let expected: u64 =
        v["reports"][0]["mutants"].as_array().unwrap().iter().map(|m| m["nd_reached"].as_u64().unwrap() - 2 + 1).sum();
    let files: Vec<_> = fs::read_dir(&smt).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert_eq!(files.len() as u64, expected);
    assert!(files.contains(&"mult-001.nd2.smt2".to_string()));
    let text = fs::read_to_string(smt.join("mult-001.nd2.smt2")).unwrap();
    assert!(text.contains("(set-logic QF_NIA)") && text.trim_end().ends_with("(check-sat)"));
}

#[test]
fn ops_selects_classes() {
    let (_, v) = check_mult(&["--ops", "ror"]);
    let r = &v["reports"][0];
    assert_eq!(r["no_mut"], 5);
    assert!(r["mutants"].as_array().unwrap().iter().all(|m| m["operator_class"] == "ROR"));
}

#[test]
fn mutants_subcommand() {
    let out = mutdiff(&["mutants", corpus("mult.mlang").to_str().unwrap(), "--ops", "ROR"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().next().unwrap().starts_with("mult-001"));

    let out = mutdiff(&["mutants", corpus("mult.mlang").to_str().unwrap(), "--json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.as_array().unwrap().len() > 5);
}

#[test]
fn convert_subcommand() {
    let mult = corpus("mult.mlang");
    let ssa = stdout(&mutdiff(&["convert", mult.to_str().unwrap(), "--stage", "ssa"]));
    assert_eq!(ssa.lines().count(), 9);
    assert!(ssa.contains("res_3 = Phi((i_1 < a_0), res_2, res_1);"));

    let unrolled = stdout(&mutdiff(&["convert", mult.to_str().unwrap(), "--stage", "unrolled", "--nd", "2"]));
    assert!(unrolled.contains("loop_4 = true;"));

    let cons = stdout(&mutdiff(&["convert", mult.to_str().unwrap()]));
    assert_eq!(cons.lines().count(), 9);

    let json = stdout(&mutdiff(&["convert", mult.to_str().unwrap(), "--stage", "json"]));
    assert!(serde_json::from_str::<Value>(&json).is_ok());

    let smt = stdout(&mutdiff(&["convert", mult.to_str().unwrap(), "--stage", "smt"]));
    assert!(smt.contains("(check-sat)"));
}
