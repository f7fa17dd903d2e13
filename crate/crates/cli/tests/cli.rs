use std::process::{Command, Output};

use serde_json::Value;

fn cm_forms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cm-forms")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = cm_forms(&all);
    let v: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout)));
    assert_eq!(v["schema"], "cm-forms/1");
    let code = out.status.code().unwrap();
    assert_eq!(code == 0, v["status"] == "ok", "{args:?}: exit code and status disagree");
    (code, v)
}

#[test]
fn so3_invariants_of_bidegree_2_2() {
    let (code, v) = json(&["invariants", "--group", "so3", "--bidegree", "2", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "invariants");
    assert_eq!(v["payload"]["dimension"], 2);
    assert_eq!(v["payload"]["basis"].as_array().unwrap().len(), 2);
    assert_eq!(v["payload"]["counting_formula"], 2);
}

#[test]
fn classify_scans() {
    let (code, v) = json(&["classify-scan", "--dim-formula", "n2-2n+1", "--n-max", "50"]);
    assert_eq!(code, 0);
    assert!(v["payload"]["hits"].as_array().unwrap().is_empty());

    let (_, v) = json(&["classify-scan", "--dim-formula", "n2-2n", "--n-max", "50"]);
    let hits = v["payload"]["hits"].as_array().unwrap();
    assert_eq!(hits.len(), 48);
    assert!(hits.iter().all(|h| h["algebra"].as_str().unwrap().starts_with("sl_")));
    let kept = v["payload"]["after_rep_filter"].as_array().unwrap();
    assert_eq!(kept.len(), 1);
    assert_eq!(kept[0]["algebra"], "sl_2");
    assert_eq!(kept[0]["n"], 3);
}

#[test]
fn a1_constraints_contain_the_trace_equation() {
    let (code, v) = json(&["nf-constraints", "--form", "a1", "--max-weight", "6", "--u-cap", "0"]);
    assert_eq!(code, 0);
    let eqs = v["payload"]["equations"].as_array().unwrap();
    assert!(eqs.iter().any(|e| e["lhs"] == "8*C[0,2] + 4*C[1,0]" && e["identity"] == "tr F22"));
    assert_eq!(v["payload"]["consistent"], true);
}

#[test]
fn prior_forms() {
    let (_, v) = json(&["nf-constraints", "--form", "prior-un", "--n", "3", "--max-weight", "12", "--u-cap", "1"]);
    assert!(v["payload"]["equations"].as_array().unwrap().is_empty());
    let (_, v) = json(&["nf-constraints", "--form", "prior-u1xu", "--n", "3", "--max-weight", "6"]);
    assert!(v["payload"]["solution_dimension"].as_u64().unwrap() > 0);
}

#[test]
fn invariance_check_exit_codes() {
    let (code, v) = json(&["invariance-check", "--group", "so3", "--poly", "z1^2 + z2^2 + z3^2"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["invariant"], true);
    let (code, v) = json(&["invariance-check", "--group", "circle-so3", "--poly", "z1^2 + z2^2 + z3^2"]);
    assert_eq!(code, 1);
    assert_eq!(v["payload"]["invariant"], false);
    let out = cm_forms(&["invariance-check", "--group", "un:2", "--poly", "z1*zb1 + z2*zb2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn nf_check_reports_residuals() {
    let (code, v) = json(&["nf-check", "--poly", "z1*z2*zb1*zb2", "--n", "2", "--max-weight", "4"]);
    assert_eq!(code, 1);
    let checks = v["payload"]["checks"].as_array().unwrap();
    let tr22 = checks.iter().find(|c| c["identity"] == "tr F22").unwrap();
    assert_eq!(tr22["residual"], "z1*zb1 + z2*zb2");
    assert_eq!(tr22["passed"], false);
}

#[test]
fn emitted_surface_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b3.json");
    let path = path.to_str().unwrap();
    // (z·z)(z̄·z̄) − ½|z|⁴ satisfies tr F22 = 0 at n = 3
    let out = cm_forms(&[
        "emit-form", "--form", "b3", "--max-weight", "4", "--coeff", "1,1,0=1", "--coeff", "0,0,2=-1/2", "--out", path,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc["n"], 3);
    assert!(doc["terms"].as_array().unwrap().iter().all(|t| t["coeff"]["re"].is_string()));

    let (code, v) = json(&["nf-check", "--in", path]);
    assert_eq!(code, 0, "{v}");
    let (code, _) = json(&["invariance-check", "--group", "so3", "--in", path]);
    assert_eq!(code, 0);
    let (code, _) = json(&["invariance-check", "--group", "u1cubed", "--in", path]);
    assert_eq!(code, 1);
}

#[test]
fn fresh_unknowns_survive_the_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a2.json");
    let path = path.to_str().unwrap();
    let out = cm_forms(&["emit-form", "--form", "a2", "--n", "3", "--max-weight", "6", "--out", path]);
    assert_eq!(out.status.code(), Some(0));
    let (_, direct) = json(&["nf-constraints", "--form", "a2", "--n", "3", "--max-weight", "6"]);
    let (_, loaded) = json(&["nf-constraints", "--in", path]);
    assert_eq!(direct["payload"], loaded["payload"]);
    let (code, _) = json(&["nf-check", "--in", path]);
    assert_eq!(code, 2);
}

#[test]
fn classification_commands() {
    let (_, v) = json(&["weyl-dim", "--root-system", "A2", "--weight", "1,1"]);
    assert_eq!(v["payload"]["dimension"], 8);
    let (_, v) = json(&["irrep-dims", "--root-system", "A2", "--bound", "7"]);
    assert_eq!(v["payload"]["dims"], serde_json::json!([1, 3, 6]));
    let (_, v) = json(&["blocks", "--n", "3", "--dim", "4"]);
    assert_eq!(v["payload"]["partitions"], serde_json::json!([[3], [2, 1]]));
    let (code, v) = json(&["factor-lemma", "--n-max", "200"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["holds"], true);
    assert!(v["payload"]["tight"].as_array().unwrap().contains(&serde_json::json!([4, [2, 2]])));
}

#[test]
fn usage_and_parse_errors_exit_with_2() {
    assert_eq!(cm_forms(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cm_forms(&["invariants", "--group", "so4", "--bidegree", "1", "1"]).status.code(), Some(2));
    assert_eq!(cm_forms(&["invariants", "--group", "so3", "--bidegree", "1"]).status.code(), Some(2));
    assert_eq!(cm_forms(&["invariance-check", "--group", "so3", "--poly", "z4"]).status.code(), Some(2));
    assert_eq!(cm_forms(&["invariance-check", "--group", "so3", "--poly", "z1 +"]).status.code(), Some(2));
    assert_eq!(cm_forms(&["emit-form", "--form", "a3:2,4"]).status.code(), Some(2));
    assert_eq!(cm_forms(&["emit-form", "--form", "b1", "--coeff", "1,1,0"]).status.code(), Some(2));
    assert_eq!(cm_forms(&["emit-form", "--form", "a3:1,2", "--coeff", "1,0,0,1=1"]).status.code(), Some(2));
    let (code, v) = json(&["weyl-dim", "--root-system", "A2", "--weight", "1,-1"]);
    assert_eq!(code, 2);
    assert!(v["payload"]["error"].as_str().unwrap().contains("dominant"));
}

#[test]
fn degree_cap_is_reported() {
    let out = Command::new(env!("CARGO_BIN_EXE_cm-forms"))
        .args(["invariants", "--group", "so3", "--bidegree", "2", "2", "--json"])
        .env("CM_FORMS_DEGREE_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "fail");
    assert!(String::from_utf8_lossy(&out.stderr).contains("CM_FORMS_DEGREE_CAP"));
}

#[test]
fn output_is_deterministic() {
    let args = ["invariants", "--group", "h:1,2:2", "--bidegree", "4", "2"];
    assert_eq!(cm_forms(&args).stdout, cm_forms(&args).stdout);
}

#[test]
fn out_flag_writes_the_rendering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("blocks.txt");
    let out = cm_forms(&["blocks", "--n", "3", "--dim", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(path).unwrap(), "[3]\n[2, 1]\n[1, 1, 1]\n");
}
