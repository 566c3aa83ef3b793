use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn resample(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resample"))
        .args(args)
        .env_remove("RESAMPLE_SEED")
        .env_remove("RESAMPLE_THREADS")
        .output()
        .expect("spawn resample")
}

fn json_stdout(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error_of(out: &Output) -> Value {
    let doc: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    doc["error"].clone()
}

fn fixture(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn jack_mean_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture(dir.path(), "x.csv", "value\n1\n2\n3\n4\n10\n");
    let doc = json_stdout(&resample(&["jack", "--input", &input, "--stat", "mean"]));
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["command"], "jack");
    assert_eq!(doc["config"]["n"], 5);
    let report = &doc["report"];
    assert_eq!(report["theta_hat"].as_f64().unwrap(), 4.0);
    // S^2 = 50 / 4, so se = sqrt(12.5 / 5).
    let se = report["se"].as_f64().unwrap();
    assert!((se - 2.5f64.sqrt()).abs() < 1e-12, "{se}");
    assert_eq!(report["replicates"].as_array().unwrap().len(), 5);
}

#[test]
fn jack_interval_and_delete_d() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture(dir.path(), "x.csv", "3\n1\n4\n1\n5\n9\n2\n6\n");
    let doc = json_stdout(&resample(&["jack", "--input", &input, "--stat", "mean", "--level", "0.95"]));
    let interval = doc["report"]["inference"]["interval"].as_array().unwrap();
    let (lo, hi) = (interval[0].as_f64().unwrap(), interval[1].as_f64().unwrap());
    assert!(lo < 3.875 && 3.875 < hi);

    let doc = json_stdout(&resample(&["jack", "--input", &input, "--stat", "median", "--d", "auto"]));
    assert_eq!(doc["config"]["d"], 3);
    assert_eq!(doc["report"]["subsets"], 56);
}

#[test]
fn unknown_statistic_lists_valid_names() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture(dir.path(), "x.csv", "1\n2\n3\n");
    let out = resample(&["jack", "--input", &input, "--stat", "nosuch"]);
    assert_eq!(out.status.code(), Some(2));
    let err = error_of(&out);
    assert_eq!(err["kind"], "validation");
    let message = err["message"].as_str().unwrap();
    for name in ["mean", "plugin_variance", "unbiased_variance", "sample_max", "median", "pearson_r"] {
        assert!(message.contains(name), "{message}");
    }
}

#[test]
fn exit_codes_by_error_kind() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.csv");
    let out = resample(&["jack", "--input", missing.to_str().unwrap(), "--stat", "mean"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_of(&out)["kind"], "io");

    let bad = fixture(dir.path(), "bad.csv", "x\n1\nabc\n");
    let out = resample(&["jack", "--input", &bad, "--stat", "mean"]);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(error_of(&out)["kind"], "data");

    let out = resample(&["enumerate", "--n", "14"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(error_of(&out)["kind"], "enumeration_cap");

    let out = resample(&["enrich", "--population", "10", "--category-size", "3", "--list-size", "4", "--overlap", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumerate_emits_every_composition() {
    let out = resample(&["enumerate", "--n", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "c1,c2,c3,probability");
    // C(5, 3) = 10 compositions, starting at (3, 0, 0).
    assert_eq!(lines.len(), 11);
    assert!(lines[1].starts_with("3,0,0,"));
    let ones = lines.iter().find(|l| l.starts_with("1,1,1,")).unwrap();
    let p: f64 = ones.rsplit(',').next().unwrap().parse().unwrap();
    assert_eq!(p, 6.0 / 27.0);
}

#[test]
fn perm_exact_on_identical_columns() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture(dir.path(), "xy.csv", "x,y\n1,1\n2,2\n3,3\n");
    let doc = json_stdout(&resample(&["perm", "--input", &input]));
    let report = &doc["report"];
    assert_eq!(report["draws"], 6);
    assert_eq!(report["extreme"], 2);
    assert_eq!(report["p_value"].as_f64().unwrap(), 1.0 / 3.0);

    let out = resample(&["perm", "--input", &input, "--stat", "mean"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn boot_is_reproducible_and_seed_sensitive() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture(dir.path(), "x.csv", "2\n4\n4\n5\n7\n9\n");
    let args = ["boot", "--input", &input, "--stat", "mean", "--B", "500"];
    let a = resample(&args);
    let b = resample(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = resample(&[&args[..], &["--seed", "2"]].concat());
    assert_ne!(json_stdout(&a)["report"]["se"], json_stdout(&c)["report"]["se"]);
    assert_eq!(json_stdout(&a)["config"]["seed"], 1949);
}

#[test]
fn enrich_ranks_category_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cats = dir.path().join("cats");
    fs::create_dir(&cats).unwrap();
    fixture(&cats, "dense.txt", "a\nb\nc\nd\n");
    fixture(&cats, "single.txt", "e\n");
    fixture(&cats, "none.txt", "x\ny\n");
    let list = fixture(dir.path(), "list.txt", "a\nb\nc\ne\n");
    let doc = json_stdout(&resample(&[
        "enrich",
        "--population",
        "50",
        "--category-dir",
        cats.to_str().unwrap(),
        "--list-file",
        &list,
    ]));
    let results = doc["report"]["results"].as_array().unwrap();
    let names: Vec<&str> = results.iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["dense", "single", "none"]);
    assert_eq!(results[1]["ease"].as_f64().unwrap(), 1.0);
    assert_eq!(results[2]["table"]["overlap"], 0);
}
