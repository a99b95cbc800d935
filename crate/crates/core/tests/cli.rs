//! End-to-end runs of the `posmap-lab` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_posmap-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// JSON object that follows the human-readable table.
fn trailing_json(text: &str) -> serde_json::Value {
    serde_json::from_str(&text[text.find('{').expect("json present")..]).expect("valid json")
}

fn status(v: &serde_json::Value, key: &str) -> String {
    v[key]["status"].as_str().unwrap().to_string()
}

#[test]
fn classify_identity_channel() {
    let o = lab(&["classify", &data("identity_d2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = trailing_json(&stdout(&o));
    assert_eq!(status(&v, "cp"), "certified_yes");
    assert_eq!(status(&v, "ccp"), "certified_no");
    assert_eq!(status(&v, "ppt"), "certified_no");
    assert_eq!(status(&v, "entanglement_breaking"), "certified_no");
}

#[test]
fn classify_conjugate_pair_and_depolarizing() {
    let v = trailing_json(&stdout(&lab(&["classify", &data("conjugate_pair_d2.json")])));
    assert_eq!(status(&v, "ppt"), "certified_yes");
    assert_eq!(status(&v, "entanglement_breaking"), "certified_yes");
    for file in ["depolarizing_d2.json", "depolarizing_d3.json"] {
        let v = trailing_json(&stdout(&lab(&["classify", &data(file)])));
        for key in ["positive", "cp", "ccp", "ppt", "decomposable", "entanglement_breaking"] {
            assert!(status(&v, key).ends_with("_yes"), "{file} {key}");
        }
    }
}

#[test]
fn classify_csv_and_choi_map() {
    let o = lab(&["classify", &data("choi_map_d3.json"), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("property,status,residual,certificate"));
    assert!(text.lines().any(|l| l.starts_with("decomposable,certified_no,") && l.ends_with("cone_witness")));
}

#[test]
fn choi_compose_separable_decomposable() {
    let o = lab(&["choi", &data("transpose_d2.json")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dim"], 2);
    assert_eq!(v["choi"].as_array().unwrap().len(), 16);

    let o = lab(&["compose", &data("transpose_d2.json"), &data("transpose_d2.json")]);
    let composed: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let identity: serde_json::Value =
        serde_json::from_slice(&lab(&["choi", &data("identity_d2.json")]).stdout).unwrap();
    assert_eq!(composed, identity);

    let o = lab(&["compose", &data("identity_d2.json"), &data("depolarizing_d2.json")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kraus"].as_array().unwrap().len(), 4);

    let v = trailing_json(&stdout(&lab(&["separable", &data("bell_state.json")])));
    assert_eq!(v["status"], "certified_no");
    let v = trailing_json(&stdout(&lab(&["separable", &data("isotropic_separable.json")])));
    assert_eq!(v["status"], "certified_yes");
    let v = trailing_json(&stdout(&lab(&["decomposable", &data("transpose_d2.json")])));
    assert_eq!(v["status"], "certified_yes");
}

#[test]
fn experiment_reports_and_out_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fuzz.json");
    let o = lab(&["fuzz-ppt2", "--dim", "2", "--trials", "20", "--seed", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["config"]["n_trials"], 20);
    assert_eq!(v["summary"]["conjecture"]["certified_yes"], v["summary"]["completed"]);
    assert_eq!(v["records"].as_array().unwrap().len(), v["summary"]["completed"].as_u64().unwrap() as usize);

    let o = lab(&["duality", "--dim", "2", "--trials", "20", "--tol", "pairing=1e-9", "--mode", "identity"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["tolerances"]["pairing"], 1e-9);
    assert_eq!(v["summary"]["images"]["certified_yes"], 20);

    let o = lab(&["image-exp", "--dim", "2", "--trials", "10", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 11);

    for example in ["ex3.1", "ex4.4", "ex4.7"] {
        let o = lab(&["repro", example, "--trials", "30"]);
        assert_eq!(o.status.code(), Some(0), "{example}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["summary"]["passed"], true, "{example}");
    }
    let o = lab(&["repro", "ex3.1", "--v", "0.7071067811865476,0,0,0.7071067811865476"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["summary"]["unital_scale"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    assert_eq!(lab(&[]).status.code(), Some(1));
    assert_eq!(lab(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(lab(&["--version"]).status.code(), Some(0));
    assert_eq!(lab(&["fuzz-ppt2", "--dim", "5"]).status.code(), Some(1));
    assert_eq!(lab(&["fuzz-ppt2", "--trials", "0"]).status.code(), Some(1));
    assert_eq!(lab(&["fuzz-ppt2", "--tol", "psd=-1"]).status.code(), Some(1));
    assert_eq!(lab(&["fuzz-ppt2", "--mode", "sideways"]).status.code(), Some(1));
    assert_eq!(lab(&["choi", &data("identity_d2.json"), "--format", "csv"]).status.code(), Some(1));
    let o = lab(&["classify", &data("bell_state.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    let o = lab(&["repro", "ex3.1", "--v", "1,0,2,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("real"));
    let o = lab(&["repro", "ex4.4", "--tol", "commutator=1e3"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["passed"], false);
}
