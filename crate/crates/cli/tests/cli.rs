use std::path::PathBuf;
use std::process::Command;

use monogen_cli::{run, EXIT_FAILED, EXIT_INVALID, EXIT_OK};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn call(args: &[&str]) -> Output {
    let argv = std::iter::once("monogen").chain(args.iter().copied()).map(String::from);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    Output { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn json_lines(s: &str) -> Vec<Value> {
    s.lines().map(|l| serde_json::from_str(l).expect("each line is JSON")).collect()
}

#[test]
fn dirac_of_the_witness_is_zero() {
    let o = call(&["fn", "dirac", "--op", "D", "--signature", "2,1", "x1*e1 - x2*e2"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(o.stdout, "0\n");
}

#[test]
fn all_plus_operator_also_kills_the_witness() {
    let o = call(&["fn", "dirac", "--op", "Dstar", "--signature", "2,1", "x1*e1 - x2*e2", "--out", "json"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(json_lines(&o.stdout)[0]["zero"], true);
}

#[test]
fn translation_passes_all_six_criteria() {
    for m in ["translate:e1+2*e2", r#"{"translate": "e1+2*e2"}"#] {
        let o = call(&["vahlen", "check", "--signature", "2,1", m, "--out", "json"]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
        let r = &json_lines(&o.stdout)[0];
        for key in [
            "norms_scalar",
            "column_products_vector",
            "row_sandwich_scalar",
            "cross_sandwich_vector",
            "reversal_symmetric",
            "pseudo_det_nonzero_scalar",
            "verdict",
        ] {
            assert_eq!(r[key], true, "{key}");
        }
    }
}

#[test]
fn corrupted_matrix_fails_the_check() {
    let o = call(&["vahlen", "check", "--signature", "2,1", r#"{"a":"1","b":"e12","c":"0","d":"1"}"#, "--out", "json"]);
    assert_eq!(o.code, EXIT_FAILED);
    assert_eq!(json_lines(&o.stdout)[0]["verdict"], false);
}

#[test]
fn appendix_in_the_split_signature() {
    let o = call(&["verify", "appendix", "--signature", "2,1", "--out", "json"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let lines = json_lines(&o.stdout);
    assert!(lines.iter().all(|s| s["signature"] == "2,1"));
    let hyperbolic = &lines[0]["checks"];
    let find = |name: &str| hyperbolic.as_array().unwrap().iter().find(|c| c["name"] == name).unwrap()["observed"].clone();
    assert_eq!(find("D residual vanishes"), true);
    assert_eq!(find("D* residual vanishes"), false);
}

#[test]
fn appendix_without_a_matching_scenario_is_invalid() {
    let o = call(&["verify", "appendix", "--signature", "3,0"]);
    assert_eq!(o.code, EXIT_INVALID);
    assert!(o.stderr.contains("no appendix scenario"));
}

#[test]
fn algebra_commands() {
    // (e1 e2)^2 = -e1^2 e2^2
    assert_eq!(call(&["algebra", "mul", "--signature", "2,0", "e1", "e2", "e12"]).stdout, "-1\n");
    assert_eq!(call(&["algebra", "inv", "--signature", "1,1", "e1"]).stdout, "-e1\n");
    let o = call(&["algebra", "involution", "--signature", "2,1", "1 + e1 + e12", "--kind", "reversal"]);
    assert_eq!(o.stdout, "1 + e1 - e12\n");
    assert_eq!(call(&["algebra", "inv", "--signature", "1,1", "e1 + e2"]).code, EXIT_INVALID);
}

#[test]
fn inversion_in_the_split_plane() {
    let o = call(&["vahlen", "apply", "--signature", "1,1", "invert", "--point", "1,2"]);
    assert_eq!(o.stdout, "1/3*e1 + 2/3*e2\n");
    let o = call(&["vahlen", "omega", "--signature", "1,1", "invert", "--point", "e1 + 2*e2", "--out", "json"]);
    let r = &json_lines(&o.stdout)[0];
    assert_eq!(r["conformal_factor"], "-1/3");
    let o = call(&["vahlen", "omega", "--signature", "1,1", "invert", "--point", "1,2", "--out", "json", "--mode", "float"]);
    assert!((json_lines(&o.stdout)[0]["rho"].as_f64().unwrap() - 3.0).abs() < 1e-12);
}

#[test]
fn composed_shorthand_matches_the_json_literal() {
    let inline = call(&["vahlen", "apply", "--signature", "2,1", "invert;translate:e1;invert", "--point", "1,1,0"]);
    let literal = call(&[
        "vahlen",
        "apply",
        "--signature",
        "2,1",
        r#"{"compose": [{"invert": true}, {"translate": "e1"}, {"invert": true}]}"#,
        "--point",
        "1,1,0",
    ]);
    assert_eq!(inline.code, EXIT_OK, "{}", inline.stderr);
    assert_eq!(inline.stdout, literal.stdout);
}

#[test]
fn classification_reports_class_witness_and_representative() {
    let o = call(&["conformal", "classify", "--signature", "1,1", "1", "e1 + e2", "--out", "json"]);
    let r = &json_lines(&o.stdout)[0];
    assert_eq!(r["class"], "inversion_of_null");
    assert_eq!(r["witness"], "e1 + e2");
    assert_eq!(r["representative"]["y"], "e1 + e2");
}

#[test]
fn zero_test_needs_a_chamber_for_powers() {
    let f = "abs_pow(x1*x1 - x2*x2, 1/2)*abs_pow(x1*x1 - x2*x2, 1/2) - x1*x1 + x2*x2";
    assert_eq!(call(&["fn", "is-zero", "--signature", "1,1", f]).code, EXIT_INVALID);
    let o = call(&["fn", "is-zero", "--signature", "1,1", f, "--sign", "x1*x1 - x2*x2=+1"]);
    assert_eq!(o.stdout, "true (canonical)\n");
    let o = call(&["fn", "is-zero", "--signature", "1,1", f, "--at", "1,2"]);
    assert_eq!(o.stdout, "false (canonical)\n");
}

#[test]
fn exact_and_float_evaluation() {
    let f = "abs_pow(x1*x1 - x3*x3, -1/2)*e1";
    assert_eq!(call(&["fn", "eval", "--signature", "2,1", f, "--point", "2,0,1"]).code, EXIT_INVALID);
    let o = call(&["fn", "eval", "--signature", "2,1", f, "--point", "5,0,3"]);
    assert_eq!(o.stdout, "1/4*e1\n");
    let o = call(&["fn", "eval", "--signature", "2,1", f, "--point", "5,0,3", "--mode", "float"]);
    assert_eq!(o.stdout, "0.25*e1\n");
}

#[test]
fn main_theorem_for_one_matrix_and_a_negative_control() {
    let ok = call(&["verify", "main", "--signature", "2,1", "--matrix", "invert", "--out", "json"]);
    assert_eq!(ok.code, EXIT_OK, "{}", ok.stderr);
    for r in json_lines(&ok.stdout) {
        for key in ["signature", "word", "function", "operator", "stage", "pass"] {
            assert!(r.get(key).is_some(), "{key}");
        }
    }
    let boost = r#"{"orthogonal": "1 + 1/3*e2*e3"}"#;
    let bad = call(&["verify", "main", "--signature", "2,1", "--matrix", boost, "--function", "x1*e1 - x2*e2", "--op", "Dstar"]);
    assert_eq!(bad.code, EXIT_FAILED);
    assert!(bad.stdout.starts_with("[FAIL]"));
}

#[test]
fn short_word_sweep_passes() {
    let o = call(&["verify", "main", "--signature", "1,1", "--max-len", "1", "--out", "json"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    // the identity word plus seven generators, ten catalog checks each
    assert_eq!(o.stdout.lines().count(), 8 * 10);
}

#[test]
fn cocycle_for_a_pair() {
    let o = call(&["verify", "cocycle", "--signature", "2,1", "invert", "translate:e1", "--point", "1,1,3", "--out", "json"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(json_lines(&o.stdout)[0]["holds"], true);
    assert_eq!(call(&["verify", "cocycle", "--signature", "2,1", "invert"]).code, EXIT_INVALID);
}

#[test]
fn verify_all_reports_selected_criteria_in_order() {
    let o = call(&["verify", "all", "--criteria", "8,1", "--out", "json"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let ids: Vec<u64> = json_lines(&o.stdout).iter().map(|r| r["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, vec![1, 8]);
    assert!(json_lines(&o.stdout).iter().all(|r| r.get("seconds").is_none()));
    assert_eq!(call(&["verify", "all", "--criteria", "11"]).code, EXIT_INVALID);
}

#[test]
fn validation_errors_exit_with_two() {
    for args in [
        vec!["algebra", "inv", "1"],
        vec!["algebra", "inv", "--signature", "9,9", "1"],
        vec!["algebra", "inv", "--signature", "2,1", "1 +* e1"],
        vec!["vahlen", "check", "--signature", "2,1", "rotate:e1"],
        vec!["vahlen", "apply", "--signature", "2,1", r#"{"a":"1","b":"e12","c":"0","d":"1"}"#, "--point", "1,0,0"],
        vec!["fn", "dirac", "--signature", "2,1", "--op", "Q", "X"],
        vec!["no-such-command"],
    ] {
        let o = call(&args);
        assert_eq!(o.code, EXIT_INVALID, "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn scene_signature_conflict_is_rejected() {
    let scene = data("scene.json");
    let o = call(&["algebra", "inv", "--scene", scene.to_str().unwrap(), "--signature", "1,1", "e1"]);
    assert_eq!(o.code, EXIT_INVALID);
    assert!(o.stderr.contains("signature mismatch"));
}

#[test]
fn scene_names_resolve_in_direct_commands() {
    let scene = data("scene.json");
    let s = scene.to_str().unwrap();
    let o = call(&["fn", "dirac", "--scene", s, "witness"]);
    assert_eq!(o.stdout, "0\n");
    let o = call(&["vahlen", "check", "--scene", s, "mixed", "--out", "json"]);
    assert_eq!(json_lines(&o.stdout)[0]["verdict"], true);
}

#[test]
fn scene_run_matches_the_golden_file() {
    let scene = data("scene.json");
    let golden = std::fs::read_to_string(data("scene.golden.jsonl")).unwrap();
    for exec in ["parallel", "sequential"] {
        let o = call(&["run", "--scene", scene.to_str().unwrap(), "--out", "json", "--exec", exec]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
        assert_eq!(o.stdout, golden, "{exec}");
    }
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_monogen");
    let ok = Command::new(bin).args(["fn", "dirac", "--op", "D", "--signature", "2,1", "x1*e1 - x2*e2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "0\n");
    let failed = Command::new(bin)
        .args(["vahlen", "check", "--signature", "2,1", r#"{"a":"1","b":"e12","c":"0","d":"1"}"#])
        .output()
        .unwrap();
    assert_eq!(failed.status.code(), Some(EXIT_FAILED));
    let invalid = Command::new(bin).args(["algebra", "inv", "--signature", "2,1", "(("]).output().unwrap();
    assert_eq!(invalid.status.code(), Some(EXIT_INVALID));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(EXIT_OK));
}

#[test]
fn verify_all_passes_every_criterion() {
    let o = call(&["verify", "all"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stdout);
    assert_eq!(o.stdout.lines().filter(|l| l.starts_with("[PASS]")).count(), 10);
}
