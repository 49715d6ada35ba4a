use std::process::{Command, Output};

use subdiv_cli::ReportJson;

fn subdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subdiv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report(args: &[&str]) -> ReportJson {
    let o = subdiv(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn analyze_sqrt3_approx() {
    let r = report(&["analyze", "--builtin", "sqrt3-approx", "--json"]);
    assert_eq!(r.m, 3);
    assert_eq!(r.k_z, 2);
    assert_eq!(r.tau, Some(vec!["0".into(), "0".into()]));
    assert_eq!(r.k_r, Some(1));
}

#[test]
fn analyze_tile_convolution() {
    let r = report(&["analyze", "--builtin", "tile-2120-conv2", "--json"]);
    assert_eq!(r.k_z, 2);
    assert_eq!(r.tau, Some(vec!["2".into(), "1".into()]));
    assert_eq!(r.e, vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 1]]);
    let w = &r.witnesses[0];
    assert_eq!(w.j, vec![0, 2]);
    assert_eq!(r.xi[w.epsilon_index], vec!["0".to_string(), "1/2".to_string()]);

    let text = stdout(&subdiv(&["analyze", "--builtin", "tile-2120-conv2"]));
    assert!(text.contains("(1,2) ~ (0,0)"));
}

#[test]
fn json_report_round_trips_and_is_deterministic() {
    let a = subdiv(&["analyze", "--builtin", "sqrt3-interp", "--json"]);
    let b = subdiv(&["analyze", "--builtin", "sqrt3-interp", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let r: ReportJson = serde_json::from_str(&stdout(&a)).unwrap();
    let again = serde_json::to_string_pretty(&r).unwrap() + "\n";
    assert_eq!(again, stdout(&a));
}

#[test]
fn missing_file_and_unknown_builtin_exit_2() {
    assert_eq!(subdiv(&["analyze", "missing.json"]).status.code(), Some(2));
    assert_eq!(subdiv(&["analyze", "--builtin", "nope"]).status.code(), Some(2));
    assert_eq!(subdiv(&["analyze"]).status.code(), Some(2));
}

#[test]
fn mask_file_round_trip_and_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mask.json");
    let o = subdiv(&["mask", "--builtin", "sqrt3-approx"]);
    std::fs::write(&path, &o.stdout).unwrap();
    let p = path.to_str().unwrap();
    let from_file = report(&["analyze", p, "--json"]);
    assert_eq!(from_file, report(&["analyze", "--builtin", "sqrt3-approx", "--json"]));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dim":2,"dilation":[[2,0],[0,1]],"coefficients":[{"index":[0,0],"value":"2"}]}"#).unwrap();
    let b = bad.to_str().unwrap();
    assert_eq!(subdiv(&["analyze", b]).status.code(), Some(3));
    assert_eq!(subdiv(&["analyze", b, "--force"]).status.code(), Some(0));

    std::fs::write(&bad, r#"{"dim":1,"dilation":[[2]],"coefficients":[{"index":[0],"value":"x"}]}"#).unwrap();
    assert_eq!(subdiv(&["analyze", b]).status.code(), Some(2));
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(subdiv(&["analyze", b]).status.code(), Some(2));
}

#[test]
fn oracle_pass_and_fail() {
    let pass = subdiv(&["subdivide", "--builtin", "sqrt3-approx", "--poly", "x1", "--steps", "3", "--box", "8", "--oracle"]);
    assert_eq!(pass.status.code(), Some(0));
    assert!(stdout(&pass).starts_with("PASS"));

    let fail = subdiv(&["subdivide", "--builtin", "sqrt3-approx", "--poly", "x1*x1", "--steps", "3", "--box", "8", "--oracle"]);
    assert_eq!(fail.status.code(), Some(1));
    let text = stdout(&fail);
    assert!(text.starts_with("FAIL level 1"), "{text}");
    assert!(text.contains("expected") && text.contains("got"));
}

#[test]
fn tiny_box_is_too_small() {
    let o = subdiv(&["subdivide", "--builtin", "box-330", "--poly", "1", "--steps", "3", "--box", "0", "--oracle"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn export_writes_every_level() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let o = subdiv(&[
        "subdivide", "--builtin", "box-221", "--poly", "x1 + x2", "--steps", "2", "--box", "4", "--export",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("level,t1,t2,value"));
    let levels: std::collections::BTreeSet<String> =
        lines.map(|l| l.split(',').next().unwrap().to_string()).collect();
    assert_eq!(levels.into_iter().collect::<Vec<_>>(), vec!["0", "1", "2"]);
}

#[test]
fn combine_box_splines() {
    let feasible = subdiv(&["combine", "box-221", "box-212", "box-122", "box-330", "--k", "2", "--tau", "1,1", "--json"]);
    assert_eq!(feasible.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&feasible)).unwrap();
    assert_eq!(v["basepoint"], serde_json::json!(["5", "-1", "-1", "-2"]));
    assert_eq!(v["basepointKR"], serde_json::json!(2));

    let single = subdiv(&["combine", "box-221", "--k", "1", "--tau", "3/2,3/2"]);
    assert_eq!(single.status.code(), Some(0));
    assert!(stdout(&single).contains("basepoint lambda = (1)"));

    let infeasible = subdiv(&["combine", "box-330", "--k", "3", "--tau", "1,1"]);
    assert_eq!(infeasible.status.code(), Some(5));

    let mixed = subdiv(&["combine", "box-221", "sqrt3-approx", "--k", "1", "--free-tau"]);
    assert_eq!(mixed.status.code(), Some(3));
}

#[test]
fn combine_free_tau_reports_residuals() {
    let o = subdiv(&["combine", "box-221", "box-212", "box-122", "box-330", "--k", "2", "--free-tau"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("free directions: 3"));
    assert!(text.contains("j = (2,0): 3 + 2*t1 - t1^2"), "{text}");
}
