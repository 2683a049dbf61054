use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dgsp(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgsp")).args(args).current_dir(cwd).output().unwrap()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {:?}", o))
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

#[test]
fn diagonalize_path_adds_wraparound() {
    let t = tempfile::tempdir().unwrap();
    write(t.path(), "in.edges", "4 3\n0 1\n1 2\n2 3\n");
    let o = dgsp(&["diagonalize", "--mode", "adjacency", "--pre", "destroy-zeros", "in.edges", "out"], t.path());
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let v = json_out(&o);
    assert_eq!(v["report"]["added_edges"], serde_json::json!([[3, 0]]));
    assert_eq!(v["report"]["total_iterations"], 1);
    let g = fs::read_to_string(t.path().join("out/graph.edges")).unwrap();
    assert_eq!(g.lines().next(), Some("4 4"));
    assert!(g.contains("3 0"));
    let rep: Value = serde_json::from_str(&fs::read_to_string(t.path().join("out/report.json")).unwrap()).unwrap();
    assert_eq!(rep["total_iterations"], 1);

    let a = dgsp(&["analyze", "out/graph.edges", "an"], t.path());
    assert_eq!(a.status.code(), Some(0));
    let v = json_out(&a);
    assert!(v["sigma_min"].as_f64().unwrap() >= 1e-6);
    assert_eq!(v["full_rank"], true);
    assert!(v["kappa"].is_number() && v["min_angle_deg"].is_number());
    let csv = fs::read_to_string(t.path().join("an/angles.csv")).unwrap();
    assert!(csv.starts_with("bin_lo_deg,bin_hi_deg,count\n"));
}

#[test]
fn outputs_are_reproducible() {
    let t = tempfile::tempdir().unwrap();
    write(
        t.path(),
        "g.edges",
        "7 12\n0 1\n0 3\n0 4\n1 2\n1 5\n1 6\n2 0\n2 4\n2 5\n2 6\n3 6\n4 5\n",
    );
    for out in ["a", "b"] {
        assert!(dgsp(&["diagonalize", "--pre", "none", "g.edges", out], t.path()).status.success());
        assert!(dgsp(&["gft", &format!("{out}/graph.edges"), out], t.path()).status.success());
    }
    for f in ["graph.edges", "report.json", "spectrum.csv", "basis.csv"] {
        let a = fs::read(t.path().join("a").join(f)).unwrap();
        let b = fs::read(t.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
    let rep = fs::read_to_string(t.path().join("a/report.json")).unwrap();
    assert!(rep.contains("[\n      5,\n      0\n    ]"), "{rep}");
    assert!(!rep.contains("runtime_ms"));
}

#[test]
fn oracle_charpoly_of_triangle() {
    let t = tempfile::tempdir().unwrap();
    write(t.path(), "c3.edges", "3 3\n0 1\n1 2\n2 0\n");
    let o = dgsp(&["oracle", "charpoly", "c3.edges"], t.path());
    assert!(o.status.success());
    assert_eq!(json_out(&o)["charpoly"], serde_json::json!([-1, 0, 0, 1]));
    let o = dgsp(&["oracle", "jordan", "--lambda", "0", "c3.edges"], t.path());
    assert_eq!(o.status.code(), Some(1));
    write(t.path(), "p3.edges", "3 2\n0 1\n1 2\n");
    let o = dgsp(&["oracle", "jordan", "p3.edges"], t.path());
    assert_eq!(json_out(&o)["blocks"], serde_json::json!([3]));
}

#[test]
fn exit_codes() {
    let t = tempfile::tempdir().unwrap();
    write(t.path(), "p.edges", "4 3\n0 1\n1 2\n2 3\n");
    assert_eq!(dgsp(&["diagonalize", "--bogus", "p.edges", "o"], t.path()).status.code(), Some(1));
    assert_eq!(dgsp(&["diagonalize", "missing.edges", "o"], t.path()).status.code(), Some(1));
    assert_eq!(dgsp(&["--help"], t.path()).status.code(), Some(0));

    let o = dgsp(&["diagonalize", "--pre", "none", "--max-iter", "0", "p.edges", "o"], t.path());
    assert_eq!(o.status.code(), Some(2));
    let v = json_out(&o);
    assert_eq!(v["exit_code"], 2);
    assert_eq!(v["partial"]["partial_report"]["iterations"], 0);
    assert!(t.path().join("o/report.json").exists());

    let o = dgsp(&["gft", "p.edges", "g"], t.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(json_out(&o)["error"].as_str().unwrap().contains("destroy_jordan_blocks"));
}

#[test]
fn gen_and_pipeline() {
    let t = tempfile::tempdir().unwrap();
    let o = dgsp(&["gen", "--model", "ws", "--n", "30", "--k", "4", "--beta", "0.1", "--seed", "3", "g"], t.path());
    assert!(o.status.success(), "{o:?}");
    let v = json_out(&o);
    assert_eq!(v["edges"], 120);
    let params: Value = serde_json::from_str(&fs::read_to_string(t.path().join("g/params.json")).unwrap()).unwrap();
    assert_eq!(params["model"], "watts_strogatz");
    assert_eq!(params["seed"], 3);

    for mode in ["adjacency", "laplacian-in", "laplacian-out"] {
        let o = dgsp(&["diagonalize", "--mode", mode, "--format", "mtx", "g/graph.edges", mode], t.path());
        assert!(o.status.success(), "{mode}: {o:?}");
        let path = format!("{mode}/graph.mtx");
        let a = dgsp(&["analyze", "--mode", mode, &path], t.path());
        assert_eq!(json_out(&a)["full_rank"], true, "{mode}");
    }

    let o = dgsp(&["wiener", "--trials", "2", "--max-order", "4", "--sigma", "0.05", "adjacency/graph.mtx", "w"], t.path());
    assert!(o.status.success(), "{o:?}");
    let csv = fs::read_to_string(t.path().join("w/wiener.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("order,mean_relative_error,std"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn gft_with_signal_file() {
    let t = tempfile::tempdir().unwrap();
    write(t.path(), "c4.edges", "4 4\n0 1\n1 2\n2 3\n3 0\n");
    write(t.path(), "s.txt", "1\n1\n1\n1\n");
    let o = dgsp(&["gft", "--signal", "s.txt", "c4.edges", "o"], t.path());
    assert!(o.status.success());
    let spec = fs::read_to_string(t.path().join("o/spectrum.csv")).unwrap();
    let first: Vec<&str> = spec.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first[0], "0");
    assert!((first[1].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    write(t.path(), "bad.txt", "1\n2\n");
    assert_eq!(dgsp(&["gft", "--signal", "bad.txt", "c4.edges", "o"], t.path()).status.code(), Some(1));
}
