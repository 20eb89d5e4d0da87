use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_eigenbound"));
    c.env_remove("EIGENBOUND_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn without_timestamp(mut v: Value) -> Value {
    v["manifest"]["timestamp"] = Value::Null;
    v
}

#[test]
fn verify_passes() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 20);
    assert!(!text.lines().any(|l| l.starts_with("FAIL")));
}

#[test]
fn verify_json_contract() {
    let o = run(&["verify", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 20);
    for c in checks {
        for key in [
            "name",
            "paper_anchor",
            "lhs",
            "rhs",
            "abs_discrepancy",
            "tolerance",
            "pass",
        ] {
            assert!(c.get(key).is_some(), "missing {key} in {c}");
        }
    }
    let m = &v["manifest"];
    assert_eq!(m["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(m["config_digest"].as_str().unwrap().len(), 64);
    assert!(m["timestamp"].as_str().unwrap().ends_with('Z'));
}

#[test]
fn forced_failure() {
    let o = run(&["verify", "--tol", "xi_mean=1e-30", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let failing: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["xi_mean"]);
}

#[test]
fn malformed_overrides_are_usage_errors() {
    assert_eq!(run(&["verify", "--tol", "xi_mean"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--tol", "no_such_check=1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "--tol", "xi_mean=abc"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let o = bin()
        .arg("verify")
        .env("EIGENBOUND_SEED", "x")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_is_deterministic() {
    let a = without_timestamp(json(&run(&["verify", "--json", "--seed", "7"])));
    let b = without_timestamp(json(&run(&["verify", "--json", "--seed", "7"])));
    assert_eq!(a, b);
    let env = bin()
        .args(["verify", "--json"])
        .env("EIGENBOUND_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(without_timestamp(json(&env)), a);
    assert_eq!(a["manifest"]["seed"], 7);
}

#[test]
fn bound_csv() {
    let o = run(&[
        "bound",
        "--n",
        "10",
        "--k",
        "1",
        "--dtilde",
        "3.14159265",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let headers: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        headers,
        ["n", "K", "d_tilde", "reilly", "ling", "refined", "implicit", "best", "ratio"]
    );
    let row = r.records().next().unwrap().unwrap();
    let num = |i: usize| row[i].parse::<f64>().unwrap();
    assert!((num(4) - 5.5).abs() < 1e-8);
    assert!((num(5) - 5.665338).abs() < 1e-6);
    assert_eq!(num(2), "3.14159265".parse::<f64>().unwrap());
}

#[test]
fn bound_validation_and_degenerate_case() {
    let o = run(&["bound", "--n", "1", "--k", "1", "--dtilde", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n must be at least 2"));
    assert_eq!(
        run(&["bound", "--n", "3", "--k", "-1", "--dtilde", "1"])
            .status
            .code(),
        Some(2)
    );

    let o = run(&[
        "bound",
        "--n",
        "2",
        "--k",
        "0",
        "--dtilde",
        "3.14159265",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let row = r.records().next().unwrap().unwrap();
    assert_eq!(&row[3], "");
    for i in 4..=6 {
        assert!((row[i].parse::<f64>().unwrap() - 1.0).abs() < 1e-8);
    }
    let v = json(&run(&[
        "--json", "bound", "--n", "2", "--k", "0", "--dtilde", "2",
    ]));
    assert!(v["report"]["reilly"].is_null());
}

#[test]
fn oracle_outputs() {
    let o = run(&["oracle", "--n", "10", "--k", "1", "--r", "1.5707963"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("lambda"));

    let o = run(&["oracle", "--n", "2", "--k", "1", "--r", "2.0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("mean curvature"));

    let v = json(&run(&[
        "oracle", "--n", "2", "--k", "1", "--r", "0.785398", "--format", "json",
    ]));
    for key in ["lambda", "residual", "bisection_iterations", "ode_steps"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!(v["lambda"].as_f64().unwrap() > 9.0);
}

#[test]
fn sweep_writes_sound_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let o = run(&[
        "sweep",
        "--n",
        "2..10",
        "--k",
        "1",
        "--r",
        "0.3..1.5707963",
        "--steps",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let mut r = csv::Reader::from_path(&path).unwrap();
    let headers: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        &headers[..12],
        [
            "n",
            "K",
            "R",
            "d_tilde",
            "lambda_true",
            "reilly",
            "ling",
            "refined",
            "implicit",
            "best",
            "gap_best",
            "ratio"
        ]
    );
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 45);
    for row in &rows {
        let lam: f64 = row[4].parse().unwrap();
        let gap: f64 = row[10].parse().unwrap();
        assert!(gap >= -1e-8 * lam);
        assert_eq!(&row[12], "");
        let n: f64 = row[0].parse().unwrap();
        if &row[2] == "1.5707963000000000e0" {
            assert!((gap - (lam - n)).abs() < 1e-12 && gap.abs() < 1e-5);
        }
    }
    // Ordered by grid index.
    assert_eq!(&rows[0][0], "2");
    assert_eq!(&rows[44][0], "10");
}

#[test]
fn sweep_csv_round_trips_and_is_deterministic() {
    let a = run(&[
        "sweep", "--n", "3", "--k", "1", "--r", "0.4..1.2", "--steps", "3", "--format", "csv",
    ]);
    let b = run(&[
        "sweep", "--n", "3", "--k", "1", "--r", "0.4..1.2", "--steps", "3", "--format", "csv",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let mut r = csv::Reader::from_reader(a.stdout.as_slice());
    for row in r.records() {
        let row = row.unwrap();
        for cell in row.iter().take(12).skip(1) {
            let x: f64 = cell.parse().unwrap();
            assert_eq!(format!("{x:.16e}"), cell);
        }
    }
}

#[test]
fn single_point_sweep_matches_bound_and_oracle() {
    let sweep = json(&run(&[
        "sweep", "--n", "4", "--k", "1", "--r", "0.7", "--json",
    ]));
    let row = &sweep["rows"][0];
    let bound = json(&run(&[
        "bound", "--n", "4", "--k", "1", "--dtilde", "1.4", "--json",
    ]));
    let oracle = json(&run(&[
        "oracle", "--n", "4", "--k", "1", "--r", "0.7", "--json",
    ]));
    for key in ["reilly", "ling", "refined", "implicit", "best"] {
        assert_eq!(row[key], bound["report"][key], "{key}");
    }
    assert_eq!(row["lambda_true"], oracle["lambda"]);
}

#[test]
fn sweep_errors() {
    let o = run(&[
        "sweep",
        "--n",
        "2",
        "--k",
        "1",
        "--r",
        "0.5",
        "--out",
        "/nonexistent/dir/s.csv",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(
        run(&["sweep", "--n", "2", "--k", "1", "--r", "0.5..3.0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["sweep", "--n", "5..2", "--k", "1", "--r", "0.5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn in_process_entry_point() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = eigenbound::cli::run(
        [
            "eigenbound",
            "bound",
            "--n",
            "3",
            "--k",
            "1",
            "--dtilde",
            "2",
        ],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    assert!(String::from_utf8(out).unwrap().contains("refined"));
    let code = eigenbound::cli::run(["eigenbound", "--help"], &mut Vec::new(), &mut Vec::new());
    assert_eq!(code, 0);
}
