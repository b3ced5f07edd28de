use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use entropic_core::metrics::{metric_expression, MetricName};
use entropic_core::EntropyExpression;
use serde_json::Value;

fn entropic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entropic"))
        .args(args)
        .output()
        .unwrap()
}

fn entropic_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_entropic"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.display().to_string()
}

fn metric_json(m: MetricName, n: usize) -> String {
    serde_json::to_string(&metric_expression(m, n).unwrap().to_json()).unwrap()
}

const XOR: &str = "x1,x2,x3,p\n0,0,0,0.25\n0,1,1,0.25\n1,0,1,0.25\n1,1,0,0.25\n";

#[test]
fn xor_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "xor.csv", XOR);
    let v = json(&entropic(&["metrics", "--dist", &path]));
    let m = &v["metrics"];
    let close = |k: &str, want: f64| {
        assert!(
            (m[k].as_f64().unwrap() - want).abs() < 1e-12,
            "{k}: {}",
            m[k]
        )
    };
    close("oinfo", -1.0);
    close("sinfo", 3.0);
    close("tc", 1.0);
    close("dtc", 2.0);
    assert_eq!(v["u"].as_array().unwrap().len(), 2);
}

#[test]
fn selected_metrics_in_nats() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "xor.csv", XOR);
    let v = json(&entropic(&[
        "--log-base",
        "e",
        "metrics",
        "--dist",
        &path,
        "--metric",
        "tc,dtc",
    ]));
    let m = v["metrics"].as_object().unwrap();
    assert_eq!(m.len(), 2);
    assert!((m["tc"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn samples_file_uses_frequencies() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "obs.csv", "x1,x2\n0,0\n1,1\n0,0\n1,1\n");
    let v = json(&entropic(&[
        "metrics",
        "--dist",
        &path,
        "--samples",
        "--metric",
        "tc",
    ]));
    assert!((v["metrics"]["tc"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn missing_file_is_an_input_error() {
    let o = entropic(&["metrics", "--dist", "/nonexistent/dist.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/dist.csv"));
}

#[test]
fn malformed_row_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.csv", "x1,x2,p\n0,0,0.5\n1,oops,0.5\n");
    let o = entropic(&["metrics", "--dist", &path]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn unnormalized_table_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "mass.csv", "x1,x2,p\n0,0,0.5\n1,1,0.4\n");
    assert_eq!(
        entropic(&["metrics", "--dist", &path]).status.code(),
        Some(2)
    );
    assert!(
        entropic(&["--tolerance", "0.2", "metrics", "--dist", &path])
            .status
            .success()
    );
}

#[test]
fn conjugate_of_o_information_is_its_negation() {
    let o = entropic_stdin(&["conjugate", "-"], &metric_json(MetricName::OInfo, 3));
    let parsed: entropic_core::algebra::ExpressionJson = serde_json::from_str(&stdout(&o)).unwrap();
    let got = EntropyExpression::from_json(&parsed).unwrap();
    assert_eq!(got, -metric_expression(MetricName::OInfo, 3).unwrap());
}

#[test]
fn basis_and_classify() {
    let dir = tempfile::tempdir().unwrap();
    let tse = write(dir.path(), "tse.json", &metric_json(MetricName::Tse, 5));
    assert_eq!(stdout(&entropic(&["basis", &tse])).trim(), "2,3,3,2");
    let ii = write(dir.path(), "ii.json", &metric_json(MetricName::Ii, 5));
    assert_eq!(
        stdout(&entropic(&["classify", &ii])).trim(),
        "skew-symmetric"
    );
    let tc = write(dir.path(), "tc.json", &metric_json(MetricName::Tc, 4));
    assert_eq!(stdout(&entropic(&["classify", &tc])).trim(), "neither");
}

#[test]
fn expression_outside_span_is_a_domain_error() {
    let o = entropic_stdin(
        &["basis", "-"],
        r#"{"n":3,"terms":[{"subset":[1,2,3],"coeff":"1/1"}]}"#,
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("residual"));
}

#[test]
fn malformed_expression_json_is_an_input_error() {
    assert_eq!(
        entropic_stdin(&["classify", "-"], "{\"n\":3,")
            .status
            .code(),
        Some(2)
    );
    let lopsided = r#"{"n":3,"terms":[{"subset":[1],"coeff":"1/1"}]}"#;
    assert_eq!(
        entropic_stdin(&["classify", "-"], lopsided).status.code(),
        Some(3)
    );
}

#[test]
fn pid_list_atoms() {
    let v = json(&entropic(&["pid", "list-atoms", "--n", "2"]));
    assert_eq!(v.as_array().unwrap().len(), 4);
    let v = json(&entropic(&["pid", "list-atoms", "--n", "3"]));
    assert_eq!(v.as_array().unwrap().len(), 18);
}

#[test]
fn pid_dual_example() {
    let v = json(&entropic(&[
        "pid",
        "dual",
        "--n",
        "3",
        "--antichain",
        "[[1,2],[1,3]]",
    ]));
    assert_eq!(v["antichain"], serde_json::json!([[1], [2, 3]]));
}

#[test]
fn pid_cmi_set_and_theorem_check() {
    let v = json(&entropic(&["pid", "cmi-set", "--n", "2", "--a", "[1]"]));
    assert_eq!(v.as_array().unwrap().len(), 2);
    let v = json(&entropic(&["pid", "verify-theorem1", "--n", "3"]));
    assert_eq!(v["holds"], true);
    assert_eq!(v["pairs_checked"], 19);
    assert_eq!(
        entropic(&["pid", "cmi-set", "--n", "2", "--a", "[1]", "--b", "[1]"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn pid_decompose_xor_is_pure_synergy() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "xor.csv", XOR);
    let v = json(&entropic(&["pid", "decompose", "--dist", &path]));
    for atom in v.as_array().unwrap() {
        let want = if atom["antichain"] == serde_json::json!([[1, 2]]) {
            1.0
        } else {
            0.0
        };
        assert!(
            (atom["value"].as_f64().unwrap() - want).abs() < 1e-12,
            "{atom}"
        );
    }
}

#[test]
fn spinlab_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let out_s = out.display().to_string();
    let v = json(&entropic(&[
        "spinlab", "--n", "5", "--count", "3", "--seed", "7", "--out", &out_s,
    ]));
    assert_eq!(v["files"].as_array().unwrap().len(), 4);
    for f in [
        "u_profiles.csv",
        "loadings.csv",
        "scores.csv",
        "manifest.json",
    ] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 7);
}
