/*
Copyright 2026 The nodeloc Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

use std::process::{Command, Output};

fn nodeloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nodeloc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exp1_csv_to_stdout() {
    let text = stdout(&nodeloc(&["exp1", "--m", "6,9", "--trials", "2"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "experiment_id,method,m,trial,ia,mre,msp,msd,madr,converged_fraction,seed");
    // 3 methods x 2 m values x (2 trials + mean)
    assert_eq!(lines.len(), 1 + 3 * 2 * 3);
    assert!(lines.iter().any(|l| l.starts_with("exp1,ours,9,mean,1,")));
}

#[test]
fn json_output_file_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let p = path.to_str().unwrap();
    stdout(&nodeloc(&["exp2", "--m", "9", "--trials", "1", "--seed", "42", "--format", "json", "--out", p]));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["config"]["experiment_id"], "exp2");
    assert_eq!(report["config"]["base_seed"], 42);
    assert_eq!(report["rows"][0]["seed"], 42);
}

#[test]
fn config_file_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"m_values":[12],"trials":1,"methods":["naive"]}"#).unwrap();
    let text = stdout(&nodeloc(&["exp1", "--config", cfg.to_str().unwrap(), "--alpha", "2"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[2].starts_with("exp1,naive,12,mean,"));
}

#[test]
fn compare_and_design() {
    let text = stdout(&nodeloc(&["compare", "--m", "9", "--trials", "1"]));
    assert!(text.lines().nth(1).unwrap().starts_with("baseline_compare,ours,9,0,,"));
    let text = stdout(&nodeloc(&["design", "--m", "9", "--trials", "2"]));
    assert!(text.starts_with("m,dim,trial,seed,mu_designed"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn identify_and_estimate() {
    let out: serde_json::Value =
        serde_json::from_str(&stdout(&nodeloc(&["identify", "--m", "12", "--seed", "3"]))).unwrap();
    assert_eq!(out["ia"], 1.0);
    assert_eq!(out["identified"].as_array().unwrap().len(), 4);

    let out: serde_json::Value = serde_json::from_str(&stdout(&nodeloc(&[
        "estimate", "--m", "15", "--seed", "3", "--alpha", "2", "--k", "2",
    ])))
    .unwrap();
    assert_eq!(out["estimates"].as_array().unwrap().len(), 2);
    assert!(out["mre"].as_f64().unwrap() < 1e-8);
}

#[test]
fn scenario_replay_matches_generation() {
    let generated = stdout(&nodeloc(&["identify", "--m", "9", "--seed", "7"]));
    let scenario = nodeloc::scenario::generate_scenario::<f64>(&Default::default(), 9, 7).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    std::fs::write(&path, serde_json::to_string(&scenario).unwrap()).unwrap();
    let replayed = stdout(&nodeloc(&["identify", "--scenario", path.to_str().unwrap()]));
    assert_eq!(generated, replayed);
}

#[test]
fn bad_input_exits_nonzero() {
    assert!(!nodeloc(&["exp1", "--trials", "0"]).status.success());
    assert!(!nodeloc(&["compare", "--alpha", "3"]).status.success());
    assert!(!nodeloc(&["exp1", "--config", "/nonexistent.json"]).status.success());
    assert!(!nodeloc(&["identify", "--m", "3"]).status.success());
    assert!(!nodeloc(&["exp1", "--out", "/nonexistent-dir/x.csv", "--m", "6", "--trials", "1"]).status.success());
}
