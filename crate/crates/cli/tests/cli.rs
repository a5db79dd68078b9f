// Copyright 2026 The qsm-toolkit Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

use std::process::{Command, Output};

fn qsm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const FIG: [&str; 4] = ["--data", "00110000", "--pattern", "11"];

fn with(extra: &[&'static str]) -> Vec<&'static str> {
    let mut v = FIG.to_vec();
    v.extend_from_slice(extra);
    v
}

#[test]
fn build_writes_circuit_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let p = path.to_str().unwrap();
    let mut args = vec!["build"];
    args.extend(with(&["--variant", "rp", "--iterations", "2", "--out"]));
    args.push(p);
    let o = qsm(&args);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).starts_with("width 13,"), "{}", stdout(&o));

    let text = std::fs::read_to_string(&path).unwrap();
    let c = qsm_core::Circuit::from_json(&text).unwrap();
    assert_eq!(c.width(), 13);
}

#[test]
fn zero_iterations_build_only_a() {
    let a = qsm(&[&["build"][..], &with(&["--iterations", "0"])].concat());
    let b = qsm(&[&["build"][..], &with(&["--iterations", "1"])].concat());
    assert!(a.status.success() && b.status.success());
    let ca = qsm_core::Circuit::from_json(&stdout(&a)).unwrap();
    let cb = qsm_core::Circuit::from_json(&stdout(&b)).unwrap();
    assert!(ca.len() < cb.len());
    assert_eq!(&cb.gates()[..ca.len()], ca.gates());
}

#[test]
fn invalid_input_exits_two() {
    let o = qsm(&["build", "--data", "0012", "--pattern", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`2` at position 3"));

    let o = qsm(&["count", "--data", "0110", "--pattern", "11111"]);
    assert_eq!(o.status.code(), Some(2));

    let o = qsm(&["build", "--data", "011", "--pattern", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn count_reports_formula_and_is_deterministic() {
    let args = [
        "count",
        "--data",
        "0110",
        "--pattern",
        "11",
        "--optimize",
        "--format",
        "csv",
    ];
    let a = qsm(&args);
    let b = qsm(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let row = rdr.records().next().unwrap().unwrap();
    let col = headers.iter().position(|h| h == "f_t_count").unwrap();
    assert_eq!(&row[col], "77");
}

#[test]
fn count_compare_ratio() {
    let o = qsm(&[
        "count",
        "--data",
        "0011000010100000",
        "--pattern",
        "11",
        "--compare",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ratio = v["t_count_ratio"].as_f64().unwrap();
    assert!(ratio < 0.62, "{ratio}");
    assert_eq!(v["reports"].as_array().unwrap().len(), 2);
}

#[test]
fn sweep_peaks_at_two() {
    let o = qsm(&[&["sweep"][..], &with(&["--r-max", "9"])].concat());
    assert!(o.status.success());
    let out = stdout(&o);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let probs: Vec<f64> = rdr
        .records()
        .map(|r| r.unwrap()[1].parse().unwrap())
        .collect();
    assert_eq!(probs.len(), 10);
    let best = (0..10)
        .max_by(|&a, &b| probs[a].total_cmp(&probs[b]))
        .unwrap();
    // r = 6 comes within 4e-4 of certainty; the first peak is at r = 2.
    assert!(probs[2] > probs[1] && probs[2] > probs[3]);
    assert!(best == 2 || best == 6, "{probs:?}");
}

#[test]
fn sweep_single_row_and_seeded_noise() {
    let o = qsm(&[&["sweep"][..], &with(&["--r-max", "0"])].concat());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    let p: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((p - 0.125).abs() < 1e-12);

    let args = [&["sweep"][..], &with(&["--shots", "10000", "--seed", "1"])].concat();
    let a = qsm(&args);
    let b = qsm(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_over_cap_suggests_count() {
    let data = "0".repeat(32);
    let o = qsm(&["sweep", "--data", &data, "--pattern", "11"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("qsm count"));
}

#[test]
fn simulate_finds_the_match() {
    let o = qsm(&[&["simulate"][..], &with(&["--format", "json"])].concat());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["r"], 2);
    assert_eq!(v["best_shift"], 2);
    let p = v["success_probability"].as_f64().unwrap();
    assert!((p - v["theoretical"].as_f64().unwrap()).abs() < 1e-9);
}

#[test]
fn verify_quick_passes() {
    let o = qsm(&["verify", "--level", "quick"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failed"));
}
