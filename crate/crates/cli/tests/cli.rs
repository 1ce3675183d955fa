use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qboost(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qboost"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn analyze_regions_prints_fourteen() {
    let dir = tempfile::tempdir().unwrap();
    let o = qboost(&["analyze-regions", "--dim", "3", "--all-hyperplanes", "--out", "r.csv"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "14");
    let table = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert_eq!(table, "dim,hyperplanes,regions,bound\n3,4,14,15\n");
    assert!(dir.path().join("r.csv.provenance.json").exists());
}

#[test]
fn analyze_regions_from_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("h.csv"), "1,1\n-1,-1\n1,-1\n").unwrap();
    let o = qboost(&["analyze-regions", "--dim", "2", "--hyperplanes", "h.csv"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "4");
}

#[test]
fn analyze_bits_prints_four() {
    let dir = tempfile::tempdir().unwrap();
    let o = qboost(&["analyze-bits", "--samples", "480", "--classifiers", "60"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "4");
    let o = qboost(&["analyze-bits", "--samples", "60", "--classifiers", "60"], dir.path());
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qboost(&["train", "--bogus"], dir.path()).status.code(), Some(2));
    assert_eq!(qboost(&["frobnicate"], dir.path()).status.code(), Some(2));
    // --seed is required for train
    let o = qboost(&["train", "--data", "x.csv", "--method", "qp", "--out", "m.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = qboost(&["train", "--data", "missing.csv", "--method", "qp", "--seed", "1", "--out", "m.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.csv"));
    let o = qboost(&["train", "--data", "x.csv", "--method", "nope", "--seed", "1", "--out", "m.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.csv"), "a,b,y\n1,2,0\n").unwrap();
    let o = qboost(&["export-qubo", "--data", "bad.csv", "--lambda", "0.1", "--out", "q.txt"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 2"));
}

#[test]
fn gen_train_eval_round_trip_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let o = qboost(&["gen-data", "--dimension", "4", "--num-samples", "150", "--out", "d.csv"], p);
    assert!(o.status.success());
    let config = fs::read_to_string(p.join("d.csv.config.json")).unwrap();
    assert!(config.contains("\"seed\": 0"));
    let train = |out: &str| {
        let o = qboost(
            &[
                "train", "--data", "d.csv", "--method", "qp", "--order", "1", "--bits", "1", "--seed", "7",
                "--cv-folds", "4", "--tabu-starts", "4", "--out", out,
            ],
            p,
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read(p.join(out)).unwrap()
    };
    assert_eq!(train("a.json"), train("b.json"));
    let prov = fs::read_to_string(p.join("a.json.provenance.json")).unwrap();
    assert!(prov.contains("\"seed\": 7") && prov.contains("\"cv_folds\": 4") && prov.contains("\"version\""));

    let o = qboost(&["eval", "--model", "a.json", "--data", "d.csv", "--out", "e.json"], p);
    assert!(o.status.success());
    let e: serde_json::Value = serde_json::from_slice(&fs::read(p.join("e.json")).unwrap()).unwrap();
    assert_eq!(e["total"], 150);
    let rate = e["error_rate"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&rate));
}

#[test]
fn cv_and_export_qubo() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(qboost(&["gen-data", "--dimension", "3", "--num-samples", "60", "--seed", "4", "--out", "d.csv"], p)
        .status
        .success());
    let o = qboost(
        &["cv", "--data", "d.csv", "--method", "zero_one", "--seed", "2", "--cv-folds", "3", "--lambda-grid", "0,1,2", "--out", "cv.json"],
        p,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let cv: serde_json::Value = serde_json::from_slice(&fs::read(p.join("cv.json")).unwrap()).unwrap();
    assert_eq!(cv["scores"].as_array().unwrap().len(), 3);
    assert_eq!(cv["folds"], 3);

    let o = qboost(&["export-qubo", "--data", "d.csv", "--bits", "2", "--lambda", "0.5", "--out", "q.txt"], p);
    assert!(o.status.success());
    let text = fs::read_to_string(p.join("q.txt")).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split_whitespace().collect();
    // 6 stumps, 2 bits each plus 6 auxiliary bits
    assert_eq!(header[0], "18");
    assert_eq!(header[1].parse::<usize>().unwrap(), text.lines().count() - 1);
}

#[test]
fn bench_writes_long_format_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let o = qboost(
        &[
            "bench", "--dimension", "2", "--overlaps", "0.9,1.0", "--f-values", "1,2", "--seed", "3", "--num-seeds", "1",
            "--test-size", "50", "--cv-folds", "3", "--tabu-starts", "2", "--tabu-iters-per-var", "10",
            "--anneal-t-initial", "5", "--anneal-sweeps", "2", "--anneal-t-final", "0.1", "--out", "b.csv",
        ],
        p,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(p.join("b.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "method,order,bits,f,overlap,seed,test_error,active_count");
    // 2 overlaps x 2 f x 1 seed x 3 methods
    assert_eq!(lines.len(), 13);
    assert!(lines[1].starts_with("qp,1,1,1.0,0.9,3,"));
    assert!(text.contains(",2.0,1.0,3,"));
}
