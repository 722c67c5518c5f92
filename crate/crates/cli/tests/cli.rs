use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn msopt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msopt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn corpus_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus"))
}

#[test]
fn solve_known_good_file() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("pcst.json");
    let report = dir.path().join("report.json");
    let out = msopt(&["gen", "--problem", "pcst", "--n", "4", "--horizon", "2", "--seed", "3", "--out", inst.to_str().unwrap()]);
    assert!(out.status.success());
    let out = msopt(&[
        "solve", "--problem", "pcst", "--mode", "derandomized", "--in", inst.to_str().unwrap(),
        "--out", report.to_str().unwrap(), "--with-oracle",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["mode"], "derandomized");
    assert_eq!(r["bound"], 3.53);
    let cost = r["cost"].as_f64().unwrap();
    let parts = &r["breakdown"];
    let sum: f64 = ["step", "penalty", "transition"].iter().map(|k| parts[k].as_f64().unwrap()).sum();
    assert!((cost - sum).abs() < 1e-9);
    assert!(r["ratio_vs_lp"].as_f64().unwrap() <= 3.53 + 1e-6);
    assert!(r["ratio_vs_oracle"].as_f64().unwrap() >= 1.0 - 1e-9);
}

#[test]
fn oracle_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("mc.json");
    msopt(&["gen", "--problem", "mincut", "--n", "5", "--seed", "9", "--out", inst.to_str().unwrap()]);
    let solved = msopt(&["solve", "--in", inst.to_str().unwrap()]);
    let exact = msopt(&["oracle", "--in", inst.to_str().unwrap()]);
    assert!(solved.status.success() && exact.status.success());
    let a: serde_json::Value = serde_json::from_slice(&solved.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&exact.stdout).unwrap();
    assert_eq!(a["cost"], b["cost"]);
    assert_eq!(b["algorithm"], "brute_force");
}

#[test]
fn malformed_file_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ \"id\": \"x\", \"problem\": \"mincut\", ").unwrap();
    let out = msopt(&["solve", "--in", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema error"));

    let invalid = dir.path().join("invalid.json");
    fs::write(
        &invalid,
        r#"{"id": "x", "problem": "vertexcover", "horizon": 1,
            "data": {"vertices": 2, "steps": [{"edges": [[0, 1]], "weights": [1.0]}], "transition": []}}"#,
    )
    .unwrap();
    let out = msopt(&["solve", "--in", invalid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("data.steps[0].weights"));

    let out = msopt(&["solve", "--problem", "pctsp", "--in", corpus_dir().join("pcst-00.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_oracle_request_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("big.json");
    msopt(&["gen", "--problem", "vertexcover", "--n", "9", "--out", inst.to_str().unwrap()]);
    let out = msopt(&["oracle", "--in", inst.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shipped_corpus_matches_the_generator() {
    let dir = tempfile::tempdir().unwrap();
    let out = msopt(&["gen", "--corpus", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let mut names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 50);
    for name in names {
        let fresh = fs::read_to_string(dir.path().join(&name)).unwrap();
        let shipped = fs::read_to_string(corpus_dir().join(&name)).unwrap();
        assert_eq!(fresh, shipped, "{name:?}");
    }
}

#[test]
fn bench_writes_one_row_per_run() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let out = msopt(&["bench", "--corpus", corpus_dir().to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let within = headers.iter().position(|h| h == "within_bound").unwrap();
    let rows: Vec<_> = rdr.records().map(|r| r.unwrap()).collect();
    // pcst and pctsp run in both modes
    assert_eq!(rows.len(), 30 + 2 * 20);
    assert!(rows.iter().all(|r| &r[within] == "true"));
}
