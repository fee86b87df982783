use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparsestream"))
        .args(args)
        .env("SPARSESTREAM_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sparsestream-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON report")
}

fn p2_forest() -> PathBuf {
    let p = scratch("p2.txt");
    let mut text = String::from("# n=10 model=edge\n");
    for k in 0..5 {
        text.push_str(&format!("+ {} {}\n", 2 * k + 1, 2 * k + 2));
    }
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn gen_rejects_tiny_tree() {
    assert_eq!(bin(&["gen", "--shape", "random-tree", "--n", "0"]).status.code(), Some(1));
}

#[test]
fn gen_writes_stream_and_truth() {
    let p = scratch("tree.txt");
    let out = bin(&["gen", "--shape", "random-tree", "--n", "50", "--seed", "9", "--out", p.to_str().unwrap()]);
    assert!(out.status.success());
    let truth: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(format!("{}.truth.json", p.display())).unwrap()).unwrap();
    assert_eq!(truth["n"], 50);
    assert_eq!(truth["m"], 49);

    let exact = bin(&["exact", "--stream", p.to_str().unwrap()]);
    assert!(exact.status.success());
    assert_eq!(report(&exact), truth);
}

#[test]
fn phi_one_pass_on_matching() {
    let p = p2_forest();
    let out = bin(&["estimate", "--alg", "phi-1p", "--stream", p.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["point"], 5.0);
    assert_eq!(r["parameter"], "phi");
}

#[test]
fn exact_on_matching() {
    let p = p2_forest();
    let r = report(&bin(&["exact", "--stream", p.to_str().unwrap()]));
    assert_eq!(r["beta"], 5);
    assert_eq!(r["gamma"], 5);
    assert_eq!(r["phi"], 5);
    assert_eq!(r["deg1"], 10);
}

#[test]
fn vertex_estimator_rejects_edge_stream() {
    let p = p2_forest();
    let out = bin(&["estimate", "--alg", "cw-vertex", "--stream", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("IncompatibleStreamModel"));
}

#[test]
fn vertex_estimator_on_vertex_stream() {
    let p = scratch("vgraph.txt");
    let g = bin(&[
        "gen", "--shape", "graph", "--n", "400", "--avg-degree", "2", "--model", "vertex", "--order", "random",
        "--out", p.to_str().unwrap(),
    ]);
    assert!(g.status.success(), "{}", String::from_utf8_lossy(&g.stderr));
    let out = bin(&["estimate", "--alg", "cw-vertex", "--stream", p.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let flags = report(&out)["flags"].to_string();
    assert!(flags.contains("order_assumption_unverified"));
}

#[test]
fn bad_epsilon_is_input_error() {
    let p = p2_forest();
    let out = bin(&["estimate", "--alg", "beta-1p", "--eps", "1.5", "--stream", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_stream_is_input_error() {
    let out = bin(&["estimate", "--alg", "beta-1p", "--stream", "/nonexistent/stream.txt"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exact_counts_needs_forest_estimator() {
    let p = p2_forest();
    let out = bin(&["estimate", "--alg", "cw-base", "--exact-counts", "--stream", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

fn summary(csv: &str) -> Vec<String> {
    csv.lines().last().unwrap().split(',').map(String::from).collect()
}

#[test]
fn beta_two_pass_over_all_trees() {
    let out = bin(&["eval", "--alg", "beta-2p", "--shape", "all-trees", "--n", "8", "--exact-counts"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("# sparsestream-eval v1"));
    let s = summary(&csv);
    assert_eq!(s[1], "1");
    let max_ratio: f64 = s[3].parse().unwrap();
    assert!(max_ratio <= 4.0 / 3.0 + 1e-12, "max ratio {max_ratio}");
    assert_eq!(csv.lines().count(), 2 + 262_144 + 2);
}

#[test]
fn eval_is_deterministic() {
    let args = [
        "eval", "--alg", "gamma-2p", "--shape", "random-tree", "--n", "300", "--trials", "12", "--seed", "5",
    ];
    let a = bin(&args);
    let b = bin(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let one = Command::new(env!("CARGO_BIN_EXE_sparsestream"))
        .args(args)
        .env("SPARSESTREAM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, one.stdout);
}

#[test]
fn eval_rows_and_columns() {
    let out = bin(&["eval", "--alg", "cw-base", "--shape", "graph", "--n", "300", "--avg-degree", "2", "--trials", "5"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[1], "trial,seed,n,truth,point,lower,upper,ratio,success,flags,space_bytes,wall_ms");
    assert_eq!(lines.len(), 2 + 5 + 2);
    for (i, row) in lines[2..7].iter().enumerate() {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 12);
        assert_eq!(cols[0], i.to_string());
        assert_eq!(cols[11], "");
    }
    assert!(String::from_utf8_lossy(&out.stderr).contains("too few"));
}

#[test]
fn eval_zero_trials_fails() {
    let out = bin(&["eval", "--alg", "phi-1p", "--shape", "random-tree", "--n", "30", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn forest_estimator_needs_forest_instances() {
    let out = bin(&["eval", "--alg", "beta-1p", "--shape", "graph", "--n", "100", "--avg-degree", "3", "--trials", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn timing_fills_wall_ms() {
    let p = p2_forest();
    let r = report(&bin(&["estimate", "--alg", "beta-2p", "--timing", "--stream", p.to_str().unwrap()]));
    assert!(r["wall_ms"].as_f64().is_some());
}
