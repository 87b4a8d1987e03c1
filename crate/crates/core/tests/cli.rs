use std::process::Command;

use potts_credit::experiment::{cli, read_json, SweepResult, CSV_HEADER};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("potts-credit").chain(args.iter().copied());
    let code = cli(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn run_prints_json_to_stdout() {
    let (code, out, err) = run(&[
        "run",
        "--n",
        "100",
        "--k",
        "10",
        "--j0",
        "0",
        "--sigma-j",
        "0",
        "--seed",
        "1",
    ]);
    assert_eq!(code, 0, "{err}");
    let r: SweepResult = serde_json::from_str(&out).unwrap();
    assert_eq!(r.points.len(), 1);
    let stats = r.points[0].stats.as_ref().unwrap();
    assert_eq!(stats.nd_values.len(), 10);
    assert_eq!(stats.histogram.values().sum::<usize>(), 10);
    assert!(err.contains("done in"));
}

#[test]
fn oracle_prints_paramagnetic_level() {
    let (code, out, _) = run(&["oracle", "--p", "0.3333333", "--q", "0.3333333"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let oracle = v["oracle"].as_f64().unwrap();
    assert!((oracle - 0.202).abs() < 1e-3, "{out}");
    assert!((v["polynomial"].as_f64().unwrap() - 0.202).abs() < 5e-3);
}

#[test]
fn oracle_grid_csv() {
    let (code, out, err) = run(&["oracle", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 67);
    assert!(out.starts_with("p_up,q_down,oracle,polynomial,deviation"));
    assert!(err.contains("max |polynomial - oracle|"));
}

#[test]
fn inverted_range_is_config_error() {
    let (code, _, err) = run(&[
        "sweep", "--j0-min", "0", "--j0-max", "-1", "--n", "10", "--k", "2",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("--j0-max"), "{err}");
}

#[test]
fn unknown_flag_names_flag() {
    let (code, _, err) = run(&["run", "--bogus", "3"]);
    assert_eq!(code, 1);
    assert!(err.contains("--bogus"), "{err}");
}

#[test]
fn f_weights_need_constant_table() {
    let (code, _, err) = run(&["run", "--n", "5", "--k", "2", "--f-up", "0.5"]);
    assert_eq!(code, 1);
    assert!(err.contains("--f-up"), "{err}");
}

#[test]
fn mixed_sweep_axes_rejected() {
    let (code, _, _) = run(&[
        "sweep",
        "--n",
        "5",
        "--k",
        "2",
        "--j0-max",
        "0.1",
        "--sigma-j-max",
        "0.1",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn sweep_csv_has_one_row_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let (code, _, err) = run(&[
        "sweep",
        "--n",
        "30",
        "--k",
        "4",
        "--j0-min",
        "0",
        "--j0-max",
        "0.2",
        "--j0-points",
        "5",
        "--f-mode",
        "constant_table",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
    assert_eq!(lines.count(), 5);
}

#[test]
fn sigma_sweep_and_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let (code, _, err) = run(&[
        "sweep",
        "--n",
        "20",
        "--k",
        "3",
        "--j0",
        "0.01",
        "--sigma-j-min",
        "0",
        "--sigma-j-max",
        "0.5",
        "--sigma-j-points",
        "3",
        "--threads",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let r = read_json(&path).unwrap();
    assert_eq!(
        r.points.iter().map(|p| p.sigma_j).collect::<Vec<_>>(),
        vec![0.0, 0.25, 0.5]
    );
    assert!(r.points.iter().all(|p| p.j0 == 0.01));
}

#[test]
fn meanfield_reports_transition() {
    let (code, out, _) = run(&[
        "meanfield",
        "--n",
        "1000",
        "--j0-min",
        "0",
        "--j0-max",
        "0.01",
        "--j0-points",
        "11",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    let first = rows[0]["predicted_nd_frac"].as_f64().unwrap();
    let last = rows[10]["predicted_nd_frac"].as_f64().unwrap();
    assert!((first - 0.2019).abs() < 1e-3);
    assert!((last - 1.0 / 3.0).abs() < 0.01);
}

#[test]
fn meanfield_bare_scaling_never_orders() {
    let (code, out, _) = run(&["meanfield", "--beta-scaling", "bare", "--format", "csv"]);
    assert_eq!(code, 0);
    // 21 rows, one symmetric fixed point each
    assert_eq!(out.lines().count(), 22);
}

#[test]
fn reproduce_desk_scale() {
    let (code, out, err) = run(&["reproduce", "fig1", "--n", "50", "--k", "5", "--format", "csv"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().count(), 2);
    assert!(out.lines().nth(1).unwrap().contains(",paramagnetic,5,50,8,1"));
    let (code, _, _) = run(&["reproduce", "fig7"]);
    assert_eq!(code, 1);
}

#[test]
fn unwritable_output_is_runtime_error() {
    let (code, _, err) = run(&["run", "--n", "5", "--k", "2", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(code, 2);
    assert!(err.contains("/nonexistent-dir/x.json"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_potts-credit");
    let ok = Command::new(bin)
        .args(["oracle", "--p", "0.5", "--q", "0.2"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin)
        .args(["sweep", "--j0-min", "0", "--j0-max", "-1"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
