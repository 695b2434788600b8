//! End-to-end runs of the `upsilon` binary.

use std::io::Write;
use std::process::{Command, Stdio};

fn upsilon(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_upsilon"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn family(args: &[&str]) -> String {
    let mut full = vec!["family"];
    full.extend_from_slice(args);
    let (code, out, err) = upsilon(&full, "");
    assert_eq!(code, 0, "{err}");
    out
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).expect("valid json")
}

#[test]
fn bipartite_pipeline() {
    let doc = family(&["complete-bipartite", "3", "2"]);
    let (code, out, _) = upsilon(&["upsilon"], &doc);
    assert_eq!(code, 0);
    assert!(out.starts_with("free rank 3; factors [3]\n"), "{out}");
    assert!(out.contains("Z^3 + Z/3"));
}

#[test]
fn wheel_critical_group() {
    let (code, out, _) = upsilon(&["crit"], &family(&["wheel", "5"]));
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("[11, 11]"));
}

#[test]
fn closed_form_suite_passes() {
    let (code, out, _) = upsilon(&["verify", "--suite", "paper"], "");
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("FAIL"));
    assert!(out.trim_end().ends_with("9/9 passed"), "{out}");
}

#[test]
fn every_command_reports_format_one() {
    let wheel = family(&["wheel", "4", "--hub-boundary"]);
    let square = family(&["torsion-square"]);
    let example = family(&["algorithm-example"]);
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["upsilon"], &square),
        (vec!["crit"], &square),
        (vec!["u0", "--mod", "2"], &square),
        (vec!["u0", "--qz"], &example),
        (vec!["layerable", "--filtration"], &square),
        (vec!["flower"], &square),
        (vec!["reduce"], &square),
        (vec!["u0-matrix", "--interiorize", "3,4"], &example),
        (vec!["dual"], &wheel),
        (vec!["charpoly"], &square),
        (vec!["eigmult", "--lambda", "2"], &square),
        (vec!["export-dot"], &square),
        (vec!["family", "clf", "3", "1"], ""),
    ];
    for (mut args, input) in cases {
        args.push("--json");
        let (code, out, err) = upsilon(&args, input);
        assert_eq!(code, 0, "{args:?}: {err}");
        let v = json(&out);
        assert_eq!(v["format"], 1, "{args:?}");
        assert_eq!(v["command"], args[0]);
    }
}

#[test]
fn exit_codes() {
    let (code, _, err) = upsilon(&["upsilon"], "{\"vertices\": [");
    assert_eq!(code, 2);
    assert!(err.contains("line"), "{err}");
    let dup = r#"{"vertices":[{"id":1,"boundary":true},{"id":1,"boundary":false}],"edges":[]}"#;
    assert_eq!(upsilon(&["upsilon"], dup).0, 2);
    let extra = r#"{"vertices":[],"edges":[],"extra":0}"#;
    assert_eq!(upsilon(&["upsilon"], extra).0, 2);
    let (code, _, err) = upsilon(&["dual"], &family(&["torsion-square"]));
    assert_eq!(code, 1);
    assert!(err.contains("embedding"));
    assert_eq!(upsilon(&["family", "clf", "1", "1"], "").0, 1);
    assert_eq!(upsilon(&["family", "clf", "x"], "").0, 2);
    assert_eq!(upsilon(&["no-such-command"], "").0, 2);
    let (code, out, _) = upsilon(&["--json", "crit"], dup);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["exit_code"], 2);
}

#[test]
fn rational_weights() {
    let k2 = r#"{"vertices":[{"id":0,"boundary":false},{"id":1,"boundary":false}],"edges":[{"id":0,"tail":0,"head":1,"w":"1/2"}]}"#;
    // L = [[1/2, -1/2], [-1/2, 1/2]] has eigenvalues 0 and 1.
    assert_eq!(upsilon(&["eigmult", "--lambda", "1"], k2).1, "1\n");
    assert_eq!(upsilon(&["eigmult", "--lambda", "1/2"], k2).1, "0\n");
    let (code, _, err) = upsilon(&["upsilon"], k2);
    assert_eq!(code, 1);
    assert!(err.contains("integer"));
}

#[test]
fn dual_and_conjugate() {
    let wheel = family(&["wheel", "5", "--hub-boundary"]);
    let (code, dual_doc, _) = upsilon(&["dual"], &wheel);
    assert_eq!(code, 0);
    let (_, up, _) = upsilon(&["upsilon"], &dual_doc);
    assert!(up.starts_with("free rank 1; factors [11, 11]"), "{up}");
    // A harmonic function on W_3 with the hub on the boundary: the hub is
    // the only boundary vertex, so constants are the harmonic functions.
    let w3 = family(&["wheel", "3", "--hub-boundary"]);
    let path = std::env::temp_dir().join(format!("upsilon-values-{}.json", std::process::id()));
    std::fs::write(&path, "[2, 2, 2, 2]").unwrap();
    let (code, out, err) = upsilon(&["conjugate", "--values", path.to_str().unwrap()], &w3);
    assert_eq!(code, 0, "{err}");
    assert!(out.lines().all(|l| l.ends_with(": 0")), "{out}");
    std::fs::write(&path, "[1, 0, 0, 0]").unwrap();
    assert_eq!(upsilon(&["conjugate", "--values", path.to_str().unwrap()], &w3).0, 1);
    let _ = std::fs::remove_file(path);
}

#[test]
fn layering_commands() {
    let (_, out, _) = upsilon(&["layerable"], &family(&["flower"]));
    assert_eq!(out, "not layerable\n");
    let (_, out, _) = upsilon(&["layerable", "--filtration"], &family(&["layerable-extension"]));
    assert!(out.starts_with("layerable\nfiltration"), "{out}");
    let (_, out, _) = upsilon(&["--json", "flower"], &family(&["flower"]));
    assert_eq!(json(&out)["vertices"].as_array().unwrap().len(), 8);
    let (_, out, _) = upsilon(&["reduce"], &family(&["completely-reducible"]));
    assert!(out.starts_with("completely reducible\n"), "{out}");
    assert!(out.contains("split"), "{out}");
    let (_, out, _) = upsilon(&["--json", "reduce"], &family(&["complete-bipartite", "3", "3"]));
    assert_eq!(json(&out)["completely_reducible"], false);
}

#[test]
fn worked_example_matrix() {
    let (code, out, _) = upsilon(&["u0-matrix", "--interiorize", "3,4"], &family(&["algorithm-example"]));
    assert_eq!(code, 0);
    assert!(out.contains("Smith diagonal [3, 15]"));
    assert!(out.contains("U0 = Z/3 + Z/15"));
}

#[test]
fn input_file_and_dot() {
    let path = std::env::temp_dir().join(format!("upsilon-doc-{}.json", std::process::id()));
    std::fs::write(&path, family(&["cycle", "4", "2"])).unwrap();
    let (code, out, _) = upsilon(&["export-dot", "--input", path.to_str().unwrap()], "");
    assert_eq!(code, 0);
    assert_eq!(out.matches("fillcolor=black").count(), 2);
    assert_eq!(out.matches(" -- ").count(), 4);
    let (_, poly, _) = upsilon(&["charpoly", "-i", path.to_str().unwrap()], "");
    assert_eq!(poly, "z^4 - 8z^3 + 20z^2 - 16z\n");
    let _ = std::fs::remove_file(path);
}
