mod common;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use spanvol::cli::parse_matrix;

use common::*;

fn spanvol(args: &[&str], input: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spanvol"));
    cmd.args(args);
    if let Some(path) = input {
        cmd.arg("--input").arg(path);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn write_csv(dir: &Path, name: &str, rows: &[Vec<f64>]) -> std::path::PathBuf {
    let path = dir.join(name);
    let text: String = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| format!("{x:e}"))
                .collect::<Vec<_>>()
                .join(",")
                + "\n"
        })
        .collect();
    std::fs::write(&path, text).unwrap();
    path
}

fn gaussian_rows(n: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
    let m = gaussian_matrix(n, d, &mut rng(seed));
    m.row_iter().map(|r| r.iter().cloned().collect()).collect()
}

#[test]
fn spanner_on_gaussian_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_csv(dir.path(), "g.csv", &gaussian_rows(200, 10, 1));
    let doc = json(&spanvol(&["spanner", "--p", "2"], Some(&input)));
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["command"], "spanner");
    assert_eq!(doc["input"]["n"], 200);
    assert_eq!(doc["input"]["effective_rank"], 10);
    let res = &doc["result"];
    assert_eq!(res["subset"].as_array().unwrap().len(), 30);
    assert_eq!(res["norms"].as_array().unwrap().len(), 200);
    assert!(res["c_unselected"].as_f64().unwrap() < 1.0);
    assert!(res["c_achieved"].as_f64().unwrap() <= 1.0 + 1e-9);
    assert_eq!(doc["params"]["r"], 30);
    assert!(doc["trace"]["wall_time_ms"].is_u64());
    assert_eq!(
        doc["trace"]["logdet_trace_len"].as_u64().unwrap(),
        doc["trace"]["iterations"].as_u64().unwrap() + 1
    );
}

#[test]
fn coreset_parameters_for_unit_epsilon() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_csv(dir.path(), "g.csv", &gaussian_rows(60, 2, 2));
    let doc = json(&spanvol(&["coreset", "--epsilon", "1"], Some(&input)));
    assert_eq!(doc["params"]["r"], 10);
    assert!((doc["params"]["delta"].as_f64().unwrap() - 0.05).abs() < 1e-15);
    let v = &doc["result"]["verification"];
    assert_eq!(v["passed"], true);
    assert!(
        v["gap"].as_f64().unwrap()
            <= v["allowed_gap"].as_f64().unwrap() + v["tolerance"].as_f64().unwrap()
    );
    let counts: u64 = doc["result"]["counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_u64().unwrap())
        .sum();
    assert_eq!(counts, 10);
}

#[test]
fn oracle_on_three_points() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("three.txt");
    std::fs::write(&input, "1 0\n0 1\n1 1\n").unwrap();
    let doc = json(&spanvol(&["oracle", "--k", "2"], Some(&input)));
    assert!((doc["result"]["det"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(doc["result"]["subset"], serde_json::json!([0, 1]));
    let cb = &doc["result"]["cauchy_binet"];
    assert!((cb["gram_det"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert!((cb["subset_sum"].as_f64().unwrap() - 3.0).abs() < 1e-12);
}

#[test]
fn mvee_reports_original_rows() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("axes.csv");
    // a zero row and a constant zero coordinate
    std::fs::write(&input, "# axes\n2,0,0\n0,0,0\n0,1,0\n").unwrap();
    let doc = json(&spanvol(&["mvee", "--solver-tol", "1e-10"], Some(&input)));
    assert_eq!(doc["input"]["dropped_zero_rows"], serde_json::json!([1]));
    assert_eq!(doc["input"]["effective_rank"], 2);
    assert_eq!(doc["input"]["d"], 3);
    let res = &doc["result"];
    let lambda: Vec<f64> = res["lambda"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(lambda.len(), 3);
    assert_eq!(lambda[1], 0.0);
    assert!((lambda[0] - 0.5).abs() < 1e-9);
    let h: Vec<Vec<f64>> = serde_json::from_value(res["h"].clone()).unwrap();
    // {x : xᵀHx ≤ 2} through (2,0,0) and (0,1,0): H = diag(1/2, 2, 0) in ambient coordinates
    let expected = [[0.5, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 0.0]];
    for a in 0..3 {
        for b in 0..3 {
            assert!((h[a][b] - expected[a][b]).abs() < 1e-8, "h = {h:?}");
        }
    }
    assert_eq!(res["certified"], true);
}

#[test]
fn lowerbound_ensemble_without_input() {
    let out = spanvol(
        &["lowerbound", "--n", "200", "--d", "30", "--seed", "5"],
        None,
    );
    let doc = json(&out);
    let res = &doc["result"];
    assert_eq!(res["n"], 200);
    assert_eq!(res["seed"], 5);
    assert_eq!(res["l1_certificates"].as_array().unwrap().len(), 200);
    assert!(res["max_norm_error"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn floats_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_csv(dir.path(), "g.csv", &gaussian_rows(40, 3, 3));
    let out = spanvol(&["mvee"], Some(&input));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let doc = json(&out);
    // every float carries 17 significant digits
    let neg = doc["result"]["neg_logdet"].as_f64().unwrap();
    assert!(text.contains(&format!("\"neg_logdet\":{neg:.16e}")));
}

#[test]
fn input_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let ragged = dir.path().join("ragged.csv");
    std::fs::write(&ragged, "1,0\n0\n").unwrap();
    let out = spanvol(&["spanner"], Some(&ragged));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let zeros = dir.path().join("zeros.csv");
    std::fs::write(&zeros, "0 0\n0 0\n").unwrap();
    assert_eq!(spanvol(&["mvee"], Some(&zeros)).status.code(), Some(1));

    let ok = write_csv(dir.path(), "ok.csv", &gaussian_rows(10, 2, 4));
    assert_eq!(
        spanvol(&["spanner", "--mode", "r"], Some(&ok))
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        spanvol(&["coreset", "--epsilon", "0"], Some(&ok))
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        spanvol(&["spanner"], Some(&dir.path().join("missing.csv")))
            .status
            .code(),
        Some(1)
    );
    assert_eq!(spanvol(&["spanner"], None).status.code(), Some(1));
}

#[test]
fn unconverged_solver_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_csv(dir.path(), "g.csv", &gaussian_rows(300, 6, 6));
    let out = spanvol(
        &["mvee", "--max-iter", "1", "--solver-tol", "1e-12"],
        Some(&input),
    );
    assert_eq!(out.status.code(), Some(2));
    // the best iterate is still written
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["result"]["certified"], false);
}

#[test]
fn output_file_and_thread_flag() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_csv(dir.path(), "g.csv", &gaussian_rows(80, 4, 7));
    let target = dir.path().join("out.json");
    let out = spanvol(
        &[
            "spanner",
            "--p",
            "1.5",
            "--threads",
            "2",
            "--output",
            target.to_str().unwrap(),
        ],
        Some(&input),
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(doc["params"]["r"], 27);
    assert_eq!(doc["params"]["p"].as_f64(), Some(1.5));
}

#[test]
fn parse_matrix_reads_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.txt");
    std::fs::write(&path, "# header\n1.5\t2\n\n-3, 4e2\n").unwrap();
    let m = parse_matrix(&path).unwrap();
    assert_eq!(m.shape(), (2, 2));
    assert_eq!(m[(1, 1)], 400.0);
    assert!(parse_matrix(&dir.path().join("none")).is_err());
}
