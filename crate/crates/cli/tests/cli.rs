use std::process::Command;

use serde_json::{json, Value};

fn dax(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dax")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn payload(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = dax(args);
    assert!(out.lines().count() == 1, "one line of output expected, got {out:?} / {err}");
    (code, serde_json::from_str(&out).unwrap())
}

fn zero() -> Value {
    json!({"int_part": [], "mod2_part": []})
}

#[test]
fn reduce_examples() {
    assert_eq!(payload(&["reduce", r#"[[1,"g"],[1,"g^-1"]]"#]), (0, zero()));
    assert_eq!(payload(&["reduce", r#"[[1,"1"]]"#]), (0, zero()));
    let (code, v) = payload(&["reduce", r#"[[3,"g"],[-2,"g^-1"]]"#]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"int_part": [[5, "g"]], "mod2_part": []}));
    let (_, out, _) = dax(&["reduce", "--pretty", r#"[[1,"g"],[1,"g^-1"]]"#]);
    assert_eq!(out.trim(), "0");
}

#[test]
fn whitney_examples() {
    let (code, v) = payload(&["whitney", r#"{"core":"1","points":[[1,"g","1/5"],[-1,"g","4/5"]]}"#]);
    assert_eq!(code, 0);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 1);
    assert_eq!(v["cusps"], json!([]));
    let (code, v) = payload(&["whitney", r#"[[1,"g","1/2"]]"#]);
    assert_eq!(code, 1);
    assert_eq!(v["obstruction"], json!({"int_part": [[1, "g"]], "mod2_part": []}));
}

#[test]
fn mu3_and_realize_round_trip() {
    let (code, track) = payload(&["realize", r#"[[2,"g"],[-1,"h"]]"#]);
    assert_eq!(code, 0);
    assert_eq!(track["core"], "1");
    let (_, a) = payload(&["mu3", &track.to_string()]);
    let (_, b) = payload(&["reduce", r#"[[2,"g"],[-1,"h"]]"#]);
    assert_eq!(a, b);
}

#[test]
fn free_decisions_on_finger_move() {
    let sc = "--scenario=builtin:finger_move";
    let (code, v) = payload(&[sc, "fq", "--free", "[]", r#"[[1,"g","1/3"],[-1,"h g h^-1","2/3"]]"#]);
    assert_eq!((code, v["decision"].as_str()), (0, Some("YES")));
    assert_eq!(v["witness"]["s"], "h");
    let (code, v) = payload(&[sc, "fq", "--free", "[]", r#"[[1,"g","1/2"]]"#]);
    assert_eq!((code, v["decision"].as_str()), (1, Some("NO")));
    let (_, out, _) = dax(&[sc, "--pretty", "fq", "--free", "[]", r#"[[1,"g","1/2"]]"#]);
    assert_eq!(out.trim(), "NO");
}

#[test]
fn based_decisions() {
    for name in ["simply_connected", "algebraic_dual"] {
        let sc = format!("--scenario=builtin:{name}");
        let (code, v) = payload(&[&sc, "fq", "--based", "[]", r#"[[1,"1","1/2"]]"#]);
        assert_eq!((code, v["decision"].as_str()), (0, Some("YES")), "{name}");
    }
    let (code, v) = payload(&["--scenario=builtin:s3_null", "fq", r#"[[1,"r","1/2"]]"#]);
    assert_eq!(code, 0);
    assert_eq!(v["representative"]["int_part"], json!([[1, "r"]]));
    let (code, _, err) = dax(&["--scenario=builtin:s3_null", "fq", r#"{"core":"r","points":[]}"#]);
    assert_eq!(code, 2);
    assert!(err.contains("core"), "{err}");
}

#[test]
fn free_requires_a_stabilizer() {
    let dir = std::env::temp_dir().join(format!("dax-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("nostab.json");
    std::fs::write(
        &path,
        r#"{"group": {"kind": "free", "symbols": ["g"]}, "pi3": {"generators": [], "complete": true},
            "closure": {"mode": "explicit", "elements": ["1"]}}"#,
    )
    .unwrap();
    let sc = format!("--scenario={}", path.display());
    let (code, _, err) = dax(&[&sc, "fq", "--free", "[]", "[]"]);
    assert_eq!(code, 2);
    assert!(err.contains("stabilizer"), "{err}");
    let (code, v) = payload(&[&sc, "validate"]);
    assert_eq!((code, v["consistent"].as_bool()), (0, Some(true)));
}

#[test]
fn validate_and_orbit() {
    let (code, v) = payload(&["--scenario=builtin:finger_move", "validate"]);
    assert_eq!((code, v["consistent"].as_bool()), (0, Some(true)));
    let (code, v) = payload(&["--scenario=builtin:algebraic_dual", "validate", r#"[[1,"a","1/2"]]"#]);
    assert_eq!((code, v["self_homotopy"].as_str()), (0, Some("YES")));
    let (_, a) = payload(&["--scenario=builtin:s3_null", "orbit", r#"[[1,"r"]]"#]);
    let (_, b) = payload(&["--scenario=builtin:s3_null", "orbit", r#"[[1,"r^2"]]"#]);
    assert_eq!(a["canonical"], b["canonical"]);
}

#[test]
fn examples_list_and_print() {
    let (code, v) = payload(&["examples"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"finger_move") && names.contains(&"simply_connected"));
    let (code, v) = payload(&["examples", "finger_move"]);
    assert_eq!((code, v["stabilizer"]["mode"].as_str()), (0, Some("generated")));
}

#[test]
fn diagnostics_are_line_anchored() {
    let (code, _, err) = dax(&["reduce", "[[1,\"g\"],\n [2,"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("<inline>:2:"), "{err}");
    let (code, _, err) =
        dax(&["--group", r#"{"kind":"free","symbols":["g"]}"#, "reduce", "[[1, \"g\"],\n [1, \"k\"]]"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("<inline>:2:7:") && err.contains("`k`"), "{err}");
    let (code, _, err) = dax(&[
        "--scenario",
        r#"{"group": {"kind": "presentation"}, "pi3": {"generators": [], "complete": true}, "closure": {"mode": "all"}}"#,
        "validate",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("presentation"), "{err}");
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let args = ["realize", r#"[[3,"g h"],[-2,"h^-1"],[1,"1"]]"#];
    let (_, first, _) = dax(&args);
    let (_, second, _) = dax(&args);
    assert_eq!(first, second);
    let (_, again) = payload(&["whitney", first.trim()]);
    let (_, plan, _) = dax(&["whitney", first.trim()]);
    assert_eq!(serde_json::from_str::<Value>(&plan).unwrap(), again);
    let (_, class) = payload(&["reduce", r#"[[3,"g h"],[-2,"h^-1"]]"#]);
    let (_, reparsed) = payload(&["reduce", &class["int_part"].to_string()]);
    assert_eq!(class, reparsed);
}

#[test]
fn selftest_passes() {
    let (code, v) = payload(&["selftest", "--seed", "11", "--cases", "50"]);
    assert_eq!(code, 0);
    assert_eq!(v["failures"], json!([]));
    assert_eq!(v["seed"], 11);
}
