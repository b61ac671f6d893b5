use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

const ENTRIES: [&str; 6] = ["sl2-1", "sl3-1", "sl4-2", "sp4-siegel", "heisenberg-negative", "weighted-plane"];

fn eqbundle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqbundle"))
        .args(args)
        .output()
        .expect("run eqbundle")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

/// Compares with `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing {}; run with UPDATE_GOLDEN=1", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

fn export(dir: &tempfile::TempDir, id: &str) -> PathBuf {
    let o = eqbundle(&["export-catalog", "--out", dir.path().to_str().unwrap(), "--entry", id]);
    assert!(o.status.success(), "{}", stderr(&o));
    dir.path().join(format!("{id}.json"))
}

#[test]
fn validate_matches_golden() {
    for id in ENTRIES {
        let o = eqbundle(&["validate", &format!("catalog:{id}")]);
        let want = if id == "heisenberg-negative" { 2 } else { 0 };
        assert_eq!(o.status.code(), Some(want), "{id}: {}", stderr(&o));
        golden(&format!("validate-{id}.json"), &stdout(&o));
    }
}

#[test]
fn classify_matches_golden() {
    for id in ENTRIES {
        let o = eqbundle(&["classify", &format!("catalog:{id}")]);
        let want = if id == "heisenberg-negative" { 2 } else { 0 };
        assert_eq!(o.status.code(), Some(want), "{id}: {}", stderr(&o));
        golden(&format!("classify-{id}.json"), &stdout(&o));
    }
}

#[test]
fn classify_float_mode_matches_golden() {
    let o = eqbundle(&["classify", "catalog:sl3-1", "--mode", "float"]);
    assert_eq!(o.status.code(), Some(0));
    golden("classify-sl3-1-float.json", &stdout(&o));
}

#[test]
fn beta_range_matches_golden() {
    let o = eqbundle(&["classify", "catalog:sl2-1", "--beta-range", "-2..2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    golden("classify-sl2-1-range.json", &stdout(&o));
    let v = json_of(&o);
    let dims: Vec<(String, i64, u64)> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["target"].as_str().unwrap().to_string(),
                r["character"].as_i64().unwrap(),
                r["invariantDim"].as_u64().unwrap(),
            )
        })
        .collect();
    for (t, c, d) in dims {
        let want = if t == "su2" && c.abs() == 1 { 2 } else { 0 };
        assert_eq!(d, want, "{t} character {c}");
    }
    let colon = eqbundle(&["classify", "catalog:sl2-1", "--beta-range", "-2:2"]);
    assert_eq!(stdout(&colon), stdout(&o));
}

#[test]
fn classify_is_deterministic() {
    let a = eqbundle(&["classify", "catalog:sp4-siegel", "--seed", "7"]);
    let b = eqbundle(&["classify", "catalog:sp4-siegel", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_reports_agreement() {
    let o = eqbundle(&["verify", "catalog:sl2-1", "--grid", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json_of(&o);
    assert_eq!(v["status"], "pass");
    assert!(v["tautologicalFlatness"]["passed"].as_bool().unwrap());
    for p in v["pairs"].as_array().unwrap() {
        assert_eq!(p["verdict"], "holomorphic");
        assert_eq!(p["agreement"], true);
    }
}

#[test]
fn verify_gates_heisenberg() {
    let o = eqbundle(&["verify", "catalog:heisenberg-negative", "--grid", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json_of(&o);
    assert!(v["pairs"].as_array().unwrap().iter().all(|p| p["verdict"] == "gated"));
}

#[test]
fn verify_single_pair() {
    let o = eqbundle(&["verify", "catalog:weighted-plane", "--grid", "2", "--pair", "phi-nonzero"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json_of(&o);
    let pairs = v["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 1);
    assert_eq!(pairs[0]["verdict"], "not-holomorphic");
    assert_eq!(pairs[0]["c0"], false);
    assert_eq!(pairs[0]["agreement"], true);
}

#[test]
fn verify_pair_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec: Value = serde_json::from_str(&fs::read_to_string(export(&dir, "weighted-plane")).unwrap()).unwrap();
    let beta = &spec["targets"][0]["betas"][0];
    let pair = json!({
        "id": "from-file",
        "target": "su3",
        "beta": {
            "dbeta": beta["dbeta"],
            "zGenerator": beta["zGenerator"],
            "zWeightOnN": beta["zWeightOnN"],
        },
        "omega": spec["pairs"][0]["omega"],
    });
    let path = dir.path().join("pair.json");
    fs::write(&path, pair.to_string()).unwrap();
    let entry = dir.path().join("weighted-plane.json");
    let o = eqbundle(&[
        "verify",
        entry.to_str().unwrap(),
        "--grid",
        "2",
        "--pair-file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json_of(&o);
    let pairs = v["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 1);
    assert_eq!(pairs[0]["pairId"], "from-file");
    assert_eq!(pairs[0]["verdict"], "not-holomorphic");
}

#[test]
fn exported_files_give_the_same_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = eqbundle(&["export-catalog", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    for id in ENTRIES {
        let path = dir.path().join(format!("{id}.json"));
        let from_file = eqbundle(&["classify", path.to_str().unwrap()]);
        let built_in = eqbundle(&["classify", &format!("catalog:{id}")]);
        assert_eq!(from_file.status.code(), built_in.status.code(), "{id}");
        assert_eq!(stdout(&from_file), stdout(&built_in), "{id}");
    }
}

#[test]
fn expected_fact_mismatch_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = export(&dir, "sl2-1");
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    v["expected"]["facts"][0]["invariantDim"] = json!(3);
    fs::write(&path, v.to_string()).unwrap();
    let o = eqbundle(&["classify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json_of(&o)["status"], "mismatch");
}

#[test]
fn malformed_input_exits_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{\n  \"id\": \"x\",\n  ]\n}").unwrap();
    let o = eqbundle(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let o = eqbundle(&["validate", "catalog:nope"]);
    assert_eq!(o.status.code(), Some(2));
    let o = eqbundle(&["validate", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_structure_constants_fail_validation() {
    let dir = tempfile::tempdir().unwrap();
    let path = export(&dir, "sl3-1");
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let brackets = v["targets"][0]["algebra"]["brackets"].as_array_mut().unwrap();
    brackets[0][3] = json!("5");
    fs::write(&path, v.to_string()).unwrap();
    let o = eqbundle(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn out_flag_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = eqbundle(&["validate", "catalog:sl2-1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let direct = eqbundle(&["validate", "catalog:sl2-1"]);
    assert_eq!(fs::read_to_string(out).unwrap(), stdout(&direct));
}
