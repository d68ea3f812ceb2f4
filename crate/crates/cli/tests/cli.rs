use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mersexp"))
        .args(args)
        .env_remove("MERSEXP_MAX_N")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, String, i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let text = stdout(&out);
    let v = serde_json::from_str(&text).unwrap_or(Value::Null);
    (v, text, out.status.code().unwrap())
}

fn quiet(args: &[&str]) -> String {
    let mut full = vec!["--quiet"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out).trim_end().to_string()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn inverse_examples() {
    assert_eq!(quiet(&["inverse", "kasami", "--r", "3", "--n", "7"]), "78");
    assert_eq!(quiet(&["inverse", "raw", "--l", "1", "--n", "5"]), "1");
    assert_eq!(quiet(&["inverse", "gold", "--r", "3", "--n", "7"]), "113");
    assert_eq!(quiet(&["inverse", "bl", "--r", "3"]), "2917");
    assert_eq!(quiet(&["inverse", "raw", "--l", "57", "--n", "7"]), "78");

    let (v, _, c) = json(&["inverse", "kasami", "--r", "3", "--n", "7"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["inverse"]["value"], "78");
    assert_eq!(v["result"]["inverse"]["bits"], "0b1001110");
    assert_eq!(v["result"]["weight"], 4);
    assert_eq!(v["case_label"], "KASAMI_GCD1_E6K5");
    assert_eq!(
        v["result"]["r_matrix"],
        serde_json::json!([[0, 0, 1, 0, 1, 1, 1]])
    );
}

#[test]
fn text_rendering_shows_matrix_rows() {
    let out = stdout(&run(&["inverse", "kasami", "--r", "2", "--n", "8"]));
    assert!(out.contains("inverse:  157"), "{out}");
    assert!(out.contains("case:     KASAMI_NDEVEN_6K4"), "{out}");
    assert!(out.contains("  1 0 1 1\n  0 1 0 1\n"), "{out}");
}

#[test]
fn numeric_bases() {
    assert_eq!(
        quiet(&["inverse", "kasami", "--r", "0x3", "--n", "0b111"]),
        "78"
    );
    assert_eq!(quiet(&["inverse", "raw", "--l", "0x39", "--n", "7"]), "78");
}

#[test]
fn carry_examples() {
    assert_eq!(
        quiet(&["carry", "gold3", "--a", "113", "--s", "1", "--n", "7"]),
        "1 1 1 1 1 1 1"
    );
    assert_eq!(
        quiet(&["carry", "raw1", "--a", "5", "--s", "5", "--n", "4"]),
        "0 0 0 0"
    );
    let (v, _, c) = json(&["carry", "kasami3", "--a", "78", "--s", "1", "--n", "7"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["weight"], 3);
    assert_eq!(v["result"]["solutions"], 1);
    assert_eq!(v["result"]["checks"]["pairwise_bound"], true);
    assert_eq!(v["result"]["checks"]["weight_identity"], true);
    // the explicit form gives the same carries
    let (w, _, _) = json(&[
        "carry",
        "2^6-2^3+2^0",
        "--a",
        "78",
        "--s",
        "1",
        "--n",
        "7",
        "--r",
        "3",
    ]);
    assert_eq!(v["result"]["carries"], w["result"]["carries"]);
}

#[test]
fn audit_examples() {
    let (v, _, c) = json(&["audit", "--n-min", "4", "--n-max", "20"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["failed"], 0);
    assert!(v["result"]["checked"].as_u64().unwrap() > 200);
    let (v, _, c) = json(&["audit", "--n-min", "3", "--n-max", "3"]);
    assert_eq!(
        (c, v["result"]["by_family"]["kasami"].as_u64()),
        (0, Some(0))
    );
    let (v, _, c) = json(&["audit", "--n-min", "2", "--n-max", "2"]);
    assert_eq!((c, v["result"]["checked"].as_u64()), (0, Some(0)));
}

#[test]
fn analyze_examples() {
    let (v, _, c) = json(&["analyze", "--l", "57", "--n", "7"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["uniformity"], 2);
    assert_eq!(v["result"]["apn"], true);
    assert_eq!(v["result"]["degree"], 4);
    assert_eq!(v["result"]["canonical"]["value"], "23");
    let (v, _, _) = json(&["analyze", "--l", "1", "--n", "4"]);
    assert_eq!(
        (
            v["result"]["uniformity"].as_u64(),
            v["result"]["degree"].as_u64()
        ),
        (Some(16), Some(1))
    );
    let (v, _, _) = json(&["analyze", "--l", "78", "--n", "7"]);
    assert_eq!(
        (
            v["result"]["uniformity"].as_u64(),
            v["result"]["degree"].as_u64()
        ),
        (Some(2), Some(4))
    );
    let (v, _, _) = json(&["analyze", "--l", "13", "--n", "6", "--poly", "0x49"]);
    assert_eq!(v["result"]["polynomial"], "0x49");
}

#[test]
fn analysis_cap_and_override() {
    assert_eq!(code(&["analyze", "--l", "3", "--n", "25"]), 3);
    assert_eq!(code(&["analyze", "--l", "0", "--n", "5"]), 3);
    assert_eq!(code(&["analyze", "--l", "32", "--n", "5"]), 3);
    let lowered = Command::new(env!("CARGO_BIN_EXE_mersexp"))
        .args(["analyze", "--l", "3", "--n", "6"])
        .env("MERSEXP_MAX_N", "5")
        .output()
        .unwrap();
    assert_eq!(lowered.status.code(), Some(3));
    let bad = Command::new(env!("CARGO_BIN_EXE_mersexp"))
        .args(["analyze", "--l", "3", "--n", "5"])
        .env("MERSEXP_MAX_N", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn catalog_examples() {
    let (v, _, c) = json(&["catalog", "--n", "7"]);
    assert_eq!(c, 0);
    let entries = v["result"]["entries"].as_array().unwrap();
    let families: Vec<&str> = entries
        .iter()
        .map(|e| e["family"].as_str().unwrap())
        .collect();
    for f in ["gold", "kasami", "welch", "niho", "inverse"] {
        assert!(families.contains(&f), "{f}");
    }
    let kasami3 = entries
        .iter()
        .find(|e| e["family"] == "kasami" && e["parameter"] == 3)
        .unwrap();
    assert_eq!(kasami3["inverse"]["value"], "78");

    let (v, _, _) = json(&["catalog", "--n", "12"]);
    let bl = v["result"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["family"] == "bracken-leander")
        .unwrap();
    assert_eq!(bl["exponent"]["value"], "73");
    assert_eq!(bl["claimed_uniformity"], 4);

    let (v, _, c) = json(&["catalog", "--n", "2"]);
    assert_eq!(c, 0);
    assert!(v["result"]["entries"].as_array().unwrap().is_empty());
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["inverse", "kasami", "--r", "1", "--n", "4"]), 2);
    assert_eq!(code(&["inverse", "gold", "--r", "1", "--n", "2"]), 2);
    assert_eq!(code(&["inverse", "raw", "--l", "3", "--n", "4"]), 2);
    assert_eq!(code(&["inverse", "kasami", "--n", "4"]), 3);
    assert_eq!(code(&["inverse", "kasami", "--r", "2", "--n", "3"]), 3);
    assert_eq!(code(&["inverse", "bl", "--r", "2"]), 3);
    assert_eq!(code(&["inverse", "bl", "--r", "3", "--n", "11"]), 3);
    assert_eq!(code(&["inverse", "gold", "--r", "7", "--n", "7"]), 3);
    assert_eq!(code(&["inverse", "gold", "--r", "x", "--n", "7"]), 3);
    assert_eq!(code(&["frobnicate"]), 3);
    assert_eq!(
        code(&["carry", "kasami3", "--a", "78", "--s", "2", "--n", "7"]),
        4
    );
    assert_eq!(
        code(&["carry", "kasami3", "--a", "127", "--s", "1", "--n", "7"]),
        3
    );
    assert_eq!(
        code(&["carry", "nonsense", "--a", "1", "--s", "1", "--n", "7"]),
        3
    );
    assert_eq!(code(&["audit", "--n-min", "9", "--n-max", "4"]), 3);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn errors_go_to_stderr() {
    let out = run(&["inverse", "kasami", "--r", "1", "--n", "4"]);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not invertible"));
    let reduced = run(&["inverse", "gold", "--r", "10", "--n", "7"]);
    assert!(String::from_utf8_lossy(&reduced.stderr).contains("reduced modulo"));
    let (v, _, _) = json(&["inverse", "gold", "--r", "10", "--n", "7"]);
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn json_round_trips_and_is_deterministic() {
    let cases: [&[&str]; 6] = [
        &["inverse", "kasami", "--r", "5", "--n", "17"],
        &["inverse", "raw", "--l", "0x39", "--n", "7", "--r", "3"],
        &["carry", "bl1", "--a", "13", "--s", "1", "--n", "4"],
        &["audit", "--n-min", "2", "--n-max", "14"],
        &["analyze", "--l", "9", "--n", "7"],
        &["catalog", "--n", "10"],
    ];
    for args in cases {
        let (v, text, c) = json(args);
        assert_eq!(c, 0, "{args:?}");
        let mut again = serde_json::to_string_pretty(&v).unwrap();
        again.push('\n');
        assert_eq!(again, text, "{args:?}");
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(
            keys,
            ["command", "inputs", "result", "case_label", "warnings"]
        );
        assert_eq!(json(args).1, text, "{args:?} not deterministic");
    }
}
