use std::path::PathBuf;
use std::process::{Command, Output};

use gbfkit::io::{RootsDoc, WassersteinDoc};
use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbfkit")).args(args).env_remove("GBFKIT_LOG").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gbfkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn roots_of_four_bumps_match_committed_oracle() {
    let o = run(&["roots", &fixture("four_bumps.json")]);
    assert_eq!(o.status.code(), Some(0));
    let doc: RootsDoc = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.schema, "gbfkit/1");
    let oracle: Value = serde_json::from_str(&std::fs::read_to_string(fixture("four_bumps_roots.json")).unwrap()).unwrap();
    let want: Vec<f64> = oracle["roots"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let got = doc.report.xs();
    assert_eq!(got.len(), want.len());
    assert!(got.iter().zip(&want).all(|(g, w)| (g - w).abs() < 1e-6));
}

#[test]
fn out_file_matches_stdout_and_round_trips() {
    let path = temp("f2.json");
    let o = run(&["roots", &fixture("pgm_pair_alpha2.json"), "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(&path).unwrap();
    let doc: RootsDoc = serde_json::from_str(&written).unwrap();
    assert_eq!(doc.report.roots.len(), 4);
    let again = serde_json::to_string_pretty(&doc).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&again).unwrap(), serde_json::from_str::<Value>(&written).unwrap());
    let direct = run(&["roots", &fixture("pgm_pair_alpha2.json")]);
    assert_eq!(serde_json::from_str::<Value>(&stdout(&direct)).unwrap(), serde_json::from_str::<Value>(&written).unwrap());
}

#[test]
fn certify_reports_verdicts() {
    let v: Value = serde_json::from_str(&stdout(&run(&["certify", &fixture("standard_normal.json")]))).unwrap();
    assert_eq!(v["schema"], "gbfkit/1");
    assert_eq!(v["verdict"]["verdict"], "valid_pdf");
    let v: Value = serde_json::from_str(&stdout(&run(&["certify", &fixture("pgm_pair_alpha05.json")]))).unwrap();
    assert_ne!(v["verdict"]["verdict"], "sign_changing");
}

#[test]
fn wasserstein_both_families() {
    let o = run(&["wasserstein", "--a", &fixture("standard_normal.json"), "--b", &fixture("shifted_normal.json")]);
    assert_eq!(o.status.code(), Some(0));
    let doc: WassersteinDoc = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((doc.w1 - 1.0).abs() < 1e-6);
    assert!(doc.p.is_some() && doc.half_width.is_some());
    let o = run(&["wasserstein", "--a", &fixture("exponential_1.json"), "--b", &fixture("exponential_2.json")]);
    let doc: WassersteinDoc = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((doc.w1 - 0.5).abs() < 1e-9);
    assert_eq!(doc.tail_bound, 0.0);
}

#[test]
fn validation_errors_exit_2() {
    let bad = temp("bad.json");
    std::fs::write(&bad, r#"{"type":"gaussian","components":[{"gamma":1,"mu":"x","sigma2":1}]}"#).unwrap();
    let o = run(&["roots", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("components[0].mu"));
    assert_eq!(run(&["roots", "/nonexistent/spec.json"]).status.code(), Some(2));
    let mixed = run(&["wasserstein", "--a", &fixture("standard_normal.json"), "--b", &fixture("exponential_1.json")]);
    assert_eq!(mixed.status.code(), Some(2));
    // Weights that do not integrate to one are not a distribution.
    let o = run(&["wasserstein", "--a", &fixture("four_bumps.json"), "--b", &fixture("standard_normal.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_3() {
    let osc = temp("osc.json");
    std::fs::write(&osc, r#"{"type":"ept","A":[[-0.1,1],[-1,-0.1]],"b":[0,1],"c":[1,0]}"#).unwrap();
    assert_eq!(run(&["roots", osc.to_str().unwrap()]).status.code(), Some(3));
    let o = run(&["roots", osc.to_str().unwrap(), "--scan-end", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: RootsDoc = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.report.roots.len(), 3);
}

#[test]
fn plot_data_blocks_and_sign_changes() {
    let o = run(&["plot-data", &fixture("pgm_pair_alpha2.json"), "--lo", "-5", "--hi", "5", "--step", "0.01"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert_eq!(gbfkit::plot::sign_changes(&csv, "psi_0"), 4);
    let o = run(&["plot-data", &fixture("four_bumps.json")]);
    let csv = stdout(&o);
    let mut labels: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    labels.dedup();
    assert_eq!(labels, ["psi_3", "psi_2", "psi_1", "psi_0"]);
}

#[test]
fn bench_smoke_is_reproducible() {
    let (r1, r2) = (temp("rec1.json"), temp("rec2.json"));
    let args = |r: &PathBuf| {
        vec!["bench".to_string(), "--n-max".into(), "3".into(), "--nsim".into(), "3".into(), "--seed".into(), "7".into(), "--jobs".into(), "2".into(), "--records".into(), r.to_str().unwrap().into()]
    };
    let a: Vec<String> = args(&r1);
    let o = run(&a.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], gbfkit::bench::CSV_HEADER);
    assert_eq!(lines.len(), 3);
    assert!(lines[1..].iter().all(|l| l.ends_with(",0")));
    let b: Vec<String> = args(&r2);
    run(&b.iter().map(String::as_str).collect::<Vec<_>>());
    let strip = |p: &PathBuf| -> Vec<Value> {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        v["sims"].as_array().unwrap().iter().map(|s| serde_json::json!([s["n"], s["index"], s["components"], s["roots"]])).collect()
    };
    assert_eq!(strip(&r1), strip(&r2));
}

#[test]
fn log_level_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_gbfkit"))
        .args(["roots", &fixture("four_bumps.json")])
        .env("GBFKIT_LOG", "debug")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(!o.stderr.is_empty());
    assert!(run(&["roots", &fixture("four_bumps.json")]).stderr.is_empty());
}
