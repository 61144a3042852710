use std::path::PathBuf;
use std::process::{Command, Output};

fn superinfo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superinfo"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env_remove("CT_TOL")
        .output()
        .expect("spawn superinfo")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("superinfo-cli-{}-{name}", std::process::id()))
}

#[test]
fn every_fixture_meets_its_expectations() {
    for name in ["qubit", "qutrit", "classical_bit", "traffic_light", "degenerate"] {
        let path = format!("examples/{name}.json");
        let o = superinfo(&["check-model", &path]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn check_model_reports_tasks_and_pairs() {
    let o = superinfo(&["check-model", "examples/classical_bit.json"]);
    let out = stdout(&o);
    assert!(out.starts_with("model: classical"));
    assert!(out.contains("task not: possible\n"));
    assert!(out.lines().any(|l| l.starts_with("task erase: impossible")));
    assert!(out.ends_with("superinformation: false\n"));
}

#[test]
fn predict_certifies_superposition() {
    let o = superinfo(&["predict", "examples/qubit.json", "--observable", "X", "--state", "y+"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("cloning: impossible\n"));
    assert!(out.contains("predictor: impossible\n"));
    assert!(out.ends_with("unpredictable: true\n"));
}

#[test]
fn unknown_names_are_input_errors() {
    let o = superinfo(&["predict", "examples/qubit.json", "--observable", "X", "--state", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope"));
}

#[test]
fn converge_writes_csv_and_checks_bound() {
    let csv = scratch("sweep.csv");
    let o = superinfo(&[
        "converge",
        "--amplitudes",
        "sqrt(1/2),sqrt(1/2)",
        "--N-sweep",
        "10,20",
        "--epsilon",
        "0.02",
        "--bound",
        "0.3",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let expected = "N,epsilon,deviant_weight_exact,deviant_weight_float\n\
                    10,0.02,352/1024,0.34375\n\
                    20,0.02,275960/1048576,0.26317596435546875\n";
    assert_eq!(stdout(&o), expected);
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), expected);
    let _ = std::fs::remove_file(csv);

    let tight = superinfo(&["converge", "--amplitudes", "0.6,0.8", "--N-sweep", "10", "--epsilon", "0.02", "--bound", "0.01"]);
    assert_eq!(tight.status.code(), Some(1));
}

#[test]
fn value_and_derive_agree() {
    let v = superinfo(&["value", "--weights", "1/3,2/3", "--payoffs", "10,-2"]);
    assert_eq!(stdout(&v), "2\n");
    let d = superinfo(&["derive", "--m", "1", "--n", "3", "--payoffs", "10,-2"]);
    assert_eq!(d.status.code(), Some(0));
    let out = stdout(&d);
    assert!(out.ends_with("value: 2\n"));
    assert!(out.lines().filter(|l| l.starts_with("step ")).all(|l| l.ends_with("check=pass")));
}

#[test]
fn value_rejects_bad_weights() {
    for weights in ["1/2,1/3", "-1/2,3/2", "1/2"] {
        let o = superinfo(&["value", "--weights", weights, "--payoffs", "1,2"]);
        assert_eq!(o.status.code(), Some(2), "weights {weights}");
    }
}

#[test]
fn decision_support_exit_codes() {
    let ok = superinfo(&["decision-support", "examples/qubit.json"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("decision-supporting: true"));
    let classical = superinfo(&["decision-support", "examples/classical_bit.json"]);
    assert_eq!(classical.status.code(), Some(1));
    assert!(stdout(&classical).contains("no complementary observables"));
}

#[test]
fn report_file_records_the_run() {
    let path = scratch("report.json");
    let o = superinfo(&["--report", path.to_str().unwrap(), "value", "--weights", "1/4,3/4", "--payoffs", "4,0"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let _ = std::fs::remove_file(&path);
    assert_eq!(report["command"], "value");
    assert_eq!(report["exit_code"], 0);
    assert_eq!(report["inputs_digest"].as_str().unwrap().len(), 64);
    assert!(report["verdicts"].as_array().unwrap().iter().all(|v| v["pass"] == true));
}

#[test]
fn invalid_tolerance_override_is_rejected() {
    let o = Command::new(env!("CARGO_BIN_EXE_superinfo"))
        .args(["value", "--weights", "1/2,1/2", "--payoffs", "1,2"])
        .env("CT_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_and_invalid_documents() {
    let bad_json = scratch("bad.json");
    std::fs::write(&bad_json, "{ not json").unwrap();
    let o = superinfo(&["check-model", bad_json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let unknown_field = scratch("unknown.json");
    std::fs::write(&unknown_field, r#"{"kind": "classical", "labels": ["a"], "colour": 1}"#).unwrap();
    let o = superinfo(&["check-model", unknown_field.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let _ = std::fs::remove_file(bad_json);
    let _ = std::fs::remove_file(unknown_field);
}
