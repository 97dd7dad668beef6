//! End-to-end runs of the `tangent` binary: output, files and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn tangent(out_dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tangent"))
        .args(args)
        .env("TANGENT_OUT_DIR", out_dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn quintic_fixture() -> String {
    format!("{}/fixtures/quintic_p4.json", env!("CARGO_MANIFEST_DIR"))
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn dims_prints_the_bookkeeping() {
    let dir = tempfile::tempdir().unwrap();
    let o = tangent(dir.path(), &["dims", "--n", "4", "--d", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n=4 d=5 q=1 a=3 b=1 dom=45 codom=21 diff=24\n");
    let o = tangent(dir.path(), &["dims", "--n", "2", "--d", "3"]);
    assert!(stdout(&o).ends_with("diff=8\n"));
    let o = tangent(dir.path(), &["dims", "--n", "2", "--d", "7", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dims"]["codomain_dim"], 2 * 9 + 10 - 9);
}

#[test]
fn out_of_scope_and_usage_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = tangent(dir.path(), &["dims", "--n", "3", "--d", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("out of scope"));
    assert_eq!(tangent(dir.path(), &["dims", "--n", "4", "--d", "2"]).status.code(), Some(3));
    assert_eq!(tangent(dir.path(), &["frobnicate"]).status.code(), Some(3));
    assert_eq!(tangent(dir.path(), &["certify", "--n", "x", "--d", "5"]).status.code(), Some(3));
    assert_eq!(tangent(dir.path(), &["reproduce", "--thm", "11"]).status.code(), Some(3));
    assert_eq!(tangent(dir.path(), &["relations", "--n", "2"]).status.code(), Some(3));
    assert_eq!(tangent(dir.path(), &["certify", "--n", "2", "--d", "3", "--field", "fp", "--prime", "15"]).status.code(), Some(3));
    assert_eq!(tangent(dir.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(tangent(dir.path(), &["--version"]).status.code(), Some(0));
}

#[test]
fn example_dumps_the_quintic_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let o = tangent(dir.path(), &["example", &quintic_fixture()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("F_1 = 4*s^4"), "{text}");
    assert!(text.contains("H_1 = 16*s^3*t^2 + 8*s^4*t"));
    let o = tangent(dir.path(), &["example", &quintic_fixture(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["f"][2], "4*t^4");
    assert_eq!(v["g"].as_array().unwrap().len(), 5);
}

#[test]
fn example_input_errors_are_distinct_from_math_failures() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(tangent(dir.path(), &["example", bad.to_str().unwrap()]).status.code(), Some(3));

    let zero = dir.path().join("zero.json");
    let mut v = read_json(Path::new(&quintic_fixture()));
    for block in ["l", "p"] {
        for row in v[block].as_array_mut().unwrap() {
            for entry in row.as_array_mut().unwrap() {
                for x in entry.as_array_mut().unwrap() {
                    *x = 0.into();
                }
            }
        }
    }
    std::fs::write(&zero, v.to_string()).unwrap();
    let o = tangent(dir.path(), &["example", zero.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate"));

    v["d"] = 6.into();
    std::fs::write(&zero, v.to_string()).unwrap();
    assert_eq!(tangent(dir.path(), &["example", zero.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn certify_writes_certificates_and_signals_rank_deficit() {
    let dir = tempfile::tempdir().unwrap();
    let o = tangent(dir.path(), &["certify", "--n", "2", "--d", "3", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rank 7/7 dominant-certified"));
    let cert = read_json(&dir.path().join("certify_n2_d3_Q_seed42.json"));
    assert_eq!(cert["verdict"], "dominant-certified");
    assert_eq!(cert["param_names"][0], "l100");
    assert_eq!(cert["identity_battery"]["checks"].as_array().unwrap().len(), 4);

    let out = dir.path().join("sub/deficit.json");
    let o = tangent(dir.path(), &["certify", "--n", "4", "--d", "5", "--trials", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let cert = read_json(&out);
    assert_eq!(cert["ranks"], serde_json::json!([20, 20, 20]));
    assert_eq!(cert["verdict"], "not-full-rank-at-point");

    let o = tangent(dir.path(), &["certify", "--n", "3", "--d", "7", "--field", "fp", "--prime", "1000003"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("field=F_1000003"));
}

#[test]
fn relations_report_ranks_and_symbolic_outcome() {
    let dir = tempfile::tempdir().unwrap();
    let o = tangent(dir.path(), &["relations", "--n", "3", "--trials", "4", "--rational-trials", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let report = read_json(&dir.path().join("relations_n3_seed1.json"));
    assert_eq!(report["certificates"].as_array().unwrap().len(), 3);
    assert_eq!(report["certificates"][2]["ranks"], serde_json::json!([2, 2]));

    let out = dir.path().join("r4.json");
    let o = tangent(dir.path(), &["relations", "--n", "4", "--field", "q", "--symbolic", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let cert = read_json(&out);
    assert_eq!(cert["observed_rank"], 3);
    assert_eq!(cert["symbolic"]["status"], "nonzero-minor");
}

#[test]
fn compare_accepts_both_naming_schemes() {
    let dir = tempfile::tempdir().unwrap();
    let o = tangent(dir.path(), &["compare", "--example", "quintic"]);
    assert_eq!(o.status.code(), Some(0));
    let a = tangent(dir.path(), &["compare", "--example", "4.2", "--points", "3", "--format", "json"]);
    let b = tangent(dir.path(), &["compare", "--example", "plane-cubic", "--points", "3", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["verdicts"].as_array().unwrap().len(), 115);
}

#[test]
fn reproduce_honors_config_and_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{ "seed": 9, "prime_trials": 2, "rational_trials": 1, "symbolic_max_n": 0 }"#).unwrap();
    let out = dir.path().join("thm13");
    let o = tangent(dir.path(), &["reproduce", "--thm", "13", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["cell_count"], 5);
    assert_eq!(report["config"]["seed"], 9);
    let csv = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);

    std::fs::write(&cfg, r#"{ "seeds": 9 }"#).unwrap();
    let o = tangent(dir.path(), &["reproduce", "--thm", "13", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}
