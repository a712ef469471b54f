use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sbm-phase"));
    c.env_remove("SBM_PHASE_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn two_cliques(dir: &Path) -> (String, String) {
    let mut edges = String::from("# two disjoint 4-cliques\n");
    for block in [["a", "b", "c", "d"], ["w", "x", "y", "z"]] {
        for i in 0..4 {
            for j in i + 1..4 {
                edges.push_str(&format!("{} {}\n", block[i], block[j]));
            }
        }
    }
    let labels = "a left\nb left\nc left\nd left\nw right\nx right\ny right\nz right\n";
    let e = dir.join("edges.txt");
    let l = dir.join("labels.txt");
    fs::write(&e, edges).unwrap();
    fs::write(&l, labels).unwrap();
    (
        e.to_str().unwrap().to_owned(),
        l.to_str().unwrap().to_owned(),
    )
}

#[test]
fn sweep_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let man = dir.path().join("s.json");
    let out = run(&[
        "sweep",
        "--n1",
        "60",
        "--n2",
        "40",
        "--p1",
        "0.4",
        "--p2",
        "0.3",
        "--p-min",
        "0.05",
        "--p-max",
        "0.25",
        "--p-step",
        "0.1",
        "--trials",
        "3",
        "--seed",
        "5",
        "--out",
        csv.to_str().unwrap(),
        "--manifest",
        man.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "p,trials_ok,mean_lambda_over_n,std_lambda_over_n,pred_lambda_over_n,mean_detectability,\
         std_detectability,mean_y1_sum,mean_y2_sum,mean_y1_entry_scaled,mean_y2_entry_scaled"
    );
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0.05,3,"));
    assert!(!text.contains('\r'));
    let m = json(&man);
    assert_eq!(m["tool"], "sbm-phase");
    assert_eq!(m["command"], "sweep");
    assert_eq!(m["master_seed"], 5);
    let p_star = m["params"]["p_star"].as_f64().unwrap();
    assert!((p_star - (0.4f64 * 0.3).sqrt()).abs() < 1e-15);
    assert_eq!(m["results"].as_array().unwrap().len(), 3);
}

#[test]
fn sweep_output_is_independent_of_thread_count() {
    let args = [
        "sweep", "--n1", "80", "--n2", "120", "--p1", "0.5", "--p2", "0.25", "--p-min", "0.1",
        "--p-max", "0.5", "--p-step", "0.2", "--trials", "4", "--seed", "9",
    ];
    let one = bin().args(args).args(["--threads", "1"]).output().unwrap();
    let three = bin()
        .args(args)
        .env("SBM_PHASE_THREADS", "3")
        .output()
        .unwrap();
    assert!(one.status.success() && three.status.success());
    assert_eq!(one.stdout, three.stdout);
}

#[test]
fn fig1_desk_preset_brackets_the_threshold() {
    let out = run(&["sweep", "--preset", "fig1-desk", "--seed", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[5].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 9);
    let first_below = rows.iter().find(|(_, d)| *d < 0.75).unwrap().0;
    assert!((0.2..=0.3).contains(&first_below), "{rows:?}");
}

#[test]
fn invalid_grids_are_usage_errors() {
    let base = [
        "sweep", "--n1", "10", "--n2", "10", "--p1", "0.5", "--p2", "0.5", "--trials", "1",
    ];
    let zero_step = bin()
        .args(base)
        .args(["--p-min", "0.1", "--p-max", "0.2", "--p-step", "0"])
        .output()
        .unwrap();
    assert_eq!(zero_step.status.code(), Some(1));
    let reversed = bin()
        .args(base)
        .args(["--p-min", "0.3", "--p-max", "0.2", "--p-step", "0.1"])
        .output()
        .unwrap();
    assert_eq!(reversed.status.code(), Some(1));
    assert_eq!(run(&["sweep", "--n1", "10"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn detect_two_cliques() {
    let dir = tempfile::tempdir().unwrap();
    let (edges, labels) = two_cliques(dir.path());
    let report = dir.path().join("r.json");
    let part = dir.path().join("p.txt");
    let out = run(&[
        "detect",
        "--edges",
        &edges,
        "--labels",
        &labels,
        "--out",
        report.to_str().unwrap(),
        "--partition-out",
        part.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(&report);
    assert_eq!(r["results"]["detectability"], 1.0);
    assert_eq!(r["results"]["community_sizes"], serde_json::json!([4, 4]));
    assert_eq!(r["results"]["nodes"], 8);
    let lambda = r["results"]["lambda_max"].as_f64().unwrap();
    assert!((lambda - 3.0).abs() < 1e-8);
    let lines = fs::read_to_string(part).unwrap();
    assert_eq!(lines.lines().count(), 8);

    let without = run(&["detect", "--edges", &edges]);
    assert!(without.status.success());
    let v: Value = serde_json::from_slice(&without.stdout).unwrap();
    assert!(v["results"].get("detectability").is_none());
}

#[test]
fn detect_reports_parse_errors_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("bad.txt");
    fs::write(&e, "a b\nlonely\n").unwrap();
    let out = run(&["detect", "--edges", e.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2:"));
    let missing = run(&[
        "detect",
        "--edges",
        dir.path().join("none.txt").to_str().unwrap(),
    ]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn detect_reports_non_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let (edges, _) = two_cliques(dir.path());
    let out = run(&[
        "detect",
        "--edges",
        &edges,
        "--max-iter",
        "1",
        "--tol",
        "1e-15",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn estimate_from_labels_and_from_detection() {
    let dir = tempfile::tempdir().unwrap();
    let (edges, labels) = two_cliques(dir.path());
    let a = run(&["estimate", "--edges", &edges, "--labels", &labels]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let a: Value = serde_json::from_slice(&a.stdout).unwrap();
    let r = &a["results"];
    assert_eq!(r["p_hat"], 0.0);
    assert_eq!(r["p1_hat"], 6.0 / 16.0);
    assert_eq!(r["reliable"], true);
    assert_eq!(r["counting"], "once");

    let b = run(&[
        "estimate",
        "--edges",
        &edges,
        "--from-detection",
        "--edge-count",
        "twice",
    ]);
    assert!(b.status.success());
    let b: Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(b["results"]["p1_hat"], 12.0 / 16.0);
    assert_eq!(b["results"]["counting"], "twice");

    assert_eq!(run(&["estimate", "--edges", &edges]).status.code(), Some(1));
}

#[test]
fn estimate_rejects_a_single_community() {
    let dir = tempfile::tempdir().unwrap();
    let (edges, _) = two_cliques(dir.path());
    let l = dir.path().join("one.txt");
    let text: String = ["a", "b", "c", "d", "w", "x", "y", "z"]
        .iter()
        .map(|id| format!("{id} same\n"))
        .collect();
    fs::write(&l, text).unwrap();
    let out = run(&[
        "estimate",
        "--edges",
        &edges,
        "--labels",
        l.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_concentration_extremes() {
    for (p, want) in [("0", 0.0), ("1", 1.0)] {
        let out = run(&[
            "validate-concentration",
            "--n1",
            "30",
            "--n2",
            "50",
            "--p",
            p,
            "--trials",
            "2",
        ]);
        assert!(out.status.success());
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        for t in v["results"]["trials"].as_array().unwrap() {
            assert_eq!(t["sigma_hat"].as_f64().unwrap(), want);
        }
    }
    let out = run(&[
        "validate-concentration",
        "--n1",
        "1000",
        "--n2",
        "1000",
        "--p",
        "0.3",
        "--trials",
        "10",
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["results"]["max_deviation"].as_f64().unwrap() <= 0.02);
    assert_eq!(
        run(&[
            "validate-concentration",
            "--n1",
            "0",
            "--n2",
            "5",
            "--p",
            "0.5"
        ])
        .status
        .code(),
        Some(1)
    );
}
