use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn blockset(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockset"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn construct_then_verify_blocking_and_matching() {
    let dir = TempDir::new().unwrap();
    let out = blockset(
        dir.path(),
        &[
            "construct",
            "E",
            "-k",
            "3",
            "-n",
            "12",
            "-b",
            "2",
            "-o",
            "e.fam",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("e.fam")).unwrap();
    assert!(text.starts_with("12 3\n1 3 4\n"));
    assert_eq!(text.lines().count(), 139);

    let out = blockset(
        dir.path(),
        &["verify", "--min-blocking", "3", "e.fam", "--json"],
    );
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["verdict"], "holds");
    assert_eq!(r["data"]["min"], 2);
    assert_eq!(r["data"]["witness"], serde_json::json!([1, 2]));

    let out = blockset(
        dir.path(),
        &["verify", "--perfect-matching", "e.fam", "--json"],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["data"]["perfect_matching"], Value::Null);

    let out = blockset(dir.path(), &["verify", "--maximal", "e.fam"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("missing_sets: 82"));
}

#[test]
fn failing_properties_exit_one_with_a_witness() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("c4.fam"), "4 2\n1 2\n1 4\n2 3\n3 4\n").unwrap();
    let out = blockset(
        dir.path(),
        &["verify", "--perfect-matching", "c4.fam", "--json"],
    );
    assert_eq!(code(&out), 1);
    let r = json(&out);
    assert_eq!(r["verdict"], "fails");
    assert_eq!(r["witnesses"][0], serde_json::json!([[1, 2], [3, 4]]));

    let out = blockset(
        dir.path(),
        &[
            "construct",
            "E",
            "-k",
            "2",
            "-n",
            "10",
            "-b",
            "3",
            "-o",
            "e.fam",
        ],
    );
    assert_eq!(code(&out), 0);
    let out = blockset(dir.path(), &["verify", "--maximal", "e.fam", "--json"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["witnesses"][0], serde_json::json!([1, 5]));

    let out = blockset(dir.path(), &["hall", "c4.fam", "--target", "1,3", "--json"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn hall_reports_a_deficient_set() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("star.fam"), "4 2\n1 4\n2 4\n3 4\n").unwrap();
    let out = blockset(
        dir.path(),
        &["hall", "star.fam", "--target", "1,2,3", "--json"],
    );
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["data"]["set"], serde_json::json!([1, 2]));
    assert_eq!(r["data"]["neighborhood"], serde_json::json!([1, 2, 4]));
}

#[test]
fn exhaust_small_case() {
    let dir = TempDir::new().unwrap();
    let out = blockset(
        dir.path(),
        &[
            "prop",
            "exhaust",
            "-b",
            "2",
            "-k",
            "4",
            "--exterior",
            "1",
            "--json",
        ],
    );
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["data"]["equality_classes"], 1);
    assert_eq!(r["data"]["labels"], serde_json::json!(["fig1"]));
    assert!(r["data"]["max_edges"].as_u64().unwrap() <= r["data"]["edge_bound"].as_u64().unwrap());

    let out = blockset(
        dir.path(),
        &["prop", "exhaust", "-b", "3", "-k", "2", "--json"],
    );
    assert_eq!(code(&out), 1);
    assert!(!json(&out)["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn figures_round_trip_through_check() {
    let dir = TempDir::new().unwrap();
    for args in [
        vec!["prop", "build-fig1", "-b", "3", "-k", "4", "-o", "f.inst"],
        vec!["prop", "build-fig2", "-b", "4", "-o", "f.inst"],
    ] {
        assert_eq!(code(&blockset(dir.path(), &args)), 0);
        let out = blockset(dir.path(), &["prop", "check", "f.inst", "--json"]);
        assert_eq!(code(&out), 0);
        let r = json(&out);
        assert_eq!(r["data"]["covering"], Value::Null);
        assert_eq!(r["data"]["edges"], r["data"]["edge_bound"]);
    }
}

#[test]
fn shift_and_search() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("f.fam"), "4 2\n1 2\n2 3\n2 4\n").unwrap();
    let out = blockset(
        dir.path(),
        &["shift", "f.fam", "--x", "2", "--y", "1", "--json"],
    );
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["data"]["meaningful"], false);

    let out = blockset(
        dir.path(),
        &["shift", "f.fam", "--closure", "-b", "1", "-o", "g.fam"],
    );
    assert_eq!(code(&out), 0);
    assert!(dir.path().join("g.fam").exists());

    let out = blockset(
        dir.path(),
        &[
            "search",
            "--extremal",
            "-k",
            "2",
            "-n",
            "6",
            "-b",
            "1",
            "--json",
        ],
    );
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["data"]["max_size"], 10);
    assert_eq!(r["data"]["exact"], true);

    let out = blockset(
        dir.path(),
        &[
            "search",
            "--extremal",
            "-k",
            "2",
            "-n",
            "10",
            "-b",
            "3",
            "--mode",
            "randomized",
            "--seed",
            "9",
            "--json",
        ],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["verdict"], "indeterminate");
}

#[test]
fn errors_exit_two() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("bad.fam"), "4 2\n2 1\n").unwrap();
    for args in [
        vec!["verify", "--perfect-matching", "bad.fam"],
        vec!["verify", "--perfect-matching", "missing.fam"],
        vec!["verify", "bad.fam"],
        vec!["construct", "E", "-k", "3", "-n", "5", "-b", "2"],
        vec!["prop", "exhaust", "-b", "9", "-k", "3"],
        vec!["search", "--extremal", "-k", "2", "-n", "20", "-b", "1"],
        vec!["frobnicate"],
    ] {
        let out = blockset(dir.path(), &args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec![
            "construct",
            "eprime3",
            "-k",
            "3",
            "-n",
            "12",
            "-b",
            "3",
            "--json",
        ],
        vec![
            "prop",
            "exhaust",
            "-b",
            "3",
            "-k",
            "3",
            "--exterior",
            "1",
            "--workers",
            "3",
            "--json",
        ],
        vec![
            "prop",
            "exhaust",
            "-b",
            "4",
            "-k",
            "4",
            "--exterior",
            "1",
            "--samples",
            "50",
            "--seed",
            "3",
        ],
        vec![
            "search",
            "--extremal",
            "-k",
            "2",
            "-n",
            "10",
            "-b",
            "3",
            "--mode",
            "randomized",
            "--seed",
            "4",
        ],
    ];
    for args in runs {
        let a = blockset(dir.path(), &args);
        let b = blockset(dir.path(), &args);
        assert_eq!(code(&a), code(&b));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
