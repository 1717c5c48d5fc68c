use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_lcqaoa"));
    c.env_remove("LCQAOA_OUT_DIR");
    c
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lcqaoa-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(cmd: &mut Command) -> Output {
    let out = cmd.output().unwrap();
    if !out.status.success() {
        eprintln!("{}", String::from_utf8_lossy(&out.stderr));
    }
    out
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gen_chain_metrics() {
    let dir = scratch("gen");
    let g = dir.join("g.json");
    let out = run(bin().args(["gen", "--n", "12", "--d", "3", "--seed", "4", "-o"]).arg(&g));
    assert!(out.status.success());
    let graph = read_json(&g);
    assert_eq!(graph["n"], 12);
    assert_eq!(graph["edges"].as_array().unwrap().len(), 18);

    let out = run(bin().args(["chain", "--graph"]).arg(&g));
    assert!(out.status.success());
    let chain: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(chain["length"], 12);

    let out = run(bin().args(["metrics", "--ansatz", "lc", "--p", "2", "--graph"]).arg(&g));
    let m: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(m["metrics"]["two_qubit_count"], 22);
    assert_eq!(m["metrics"]["depth"], 7);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn config_file_and_flags_agree() {
    let dir = scratch("config");
    let cfg = dir.join("run.toml");
    std::fs::write(
        &cfg,
        "ansatz = \"lc\"\np = 1\n\n[instance]\nn = 10\nd = 3\nseed = 3\n\n[chain]\nfraction = 0.5\n",
    )
    .unwrap();
    let a = run(bin()
        .args(["solve", "--name", "file", "--config"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(&dir));
    assert!(a.status.success());
    let b = run(bin()
        .args(["solve", "--name", "flags", "--ansatz", "lc", "--n", "10", "--d", "3", "--seed", "3"])
        .args(["--fraction", "0.5", "--out-dir"])
        .arg(&dir));
    assert!(b.status.success());
    let mut x = read_json(&dir.join("file.json"));
    let mut y = read_json(&dir.join("flags.json"));
    for r in [&mut x, &mut y] {
        r["wall_time_s"] = serde_json::json!(0);
    }
    assert_eq!(x, y);

    // Flags override the file.
    let c = run(bin()
        .args(["solve", "--name", "override", "--p", "2", "--config"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(&dir));
    assert!(c.status.success());
    assert_eq!(read_json(&dir.join("override.json"))["config"]["p"], 2);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    let dir = scratch("exit");
    let bad = run(bin().args(["solve", "--ansatz", "original", "--n", "7", "--d", "3"]));
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("instance.d"));

    let chain_on_original = run(bin().args(["solve", "--ansatz", "original", "--n", "8", "--d", "3", "--fraction", "0.5"]));
    assert_eq!(chain_on_original.status.code(), Some(2));

    let unknown = dir.join("bad.toml");
    std::fs::write(&unknown, "ansatz = \"lc\"\nbogus = 1\n[instance]\nn = 8\nd = 3\n").unwrap();
    assert_eq!(run(bin().args(["solve", "--config"]).arg(&unknown)).status.code(), Some(2));

    let usage = run(bin().args(["solve", "--no-such-flag"]));
    assert_eq!(usage.status.code(), Some(2));

    let missing = run(bin().args(["solve", "--ansatz", "lc", "--graph"]).arg(dir.join("absent.json")));
    assert_eq!(missing.status.code(), Some(3));

    let garbage = dir.join("garbage.json");
    std::fs::write(&garbage, "{\"n\": 2, \"edges\": [[0, 0, 1.0]]}").unwrap();
    let invalid = run(bin().args(["chain", "--graph"]).arg(&garbage));
    assert_eq!(invalid.status.code(), Some(3));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn env_var_sets_default_output_dir() {
    let dir = scratch("env");
    let out = run(bin()
        .env("LCQAOA_OUT_DIR", &dir)
        .args(["sweep", "--ansatz", "lc", "--n", "8", "--d", "3"])
        .args(["--vary", "n", "--values", "8,10,12", "--repeats", "3", "--metrics-only"]));
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 3 + 2 * 3);
    for line in csv.lines().filter(|l| l.starts_with("row,")) {
        let cols: Vec<&str> = line.split(',').collect();
        let n: usize = cols[2].parse().unwrap();
        assert_eq!(cols[11], (n - 1).to_string());
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn solve_then_postprocess() {
    let dir = scratch("pp");
    let g = dir.join("g.json");
    assert!(run(bin().args(["gen", "--n", "10", "--d", "3", "--seed", "2", "-o"]).arg(&g)).status.success());
    assert!(run(bin()
        .args(["solve", "--ansatz", "lc", "--no-post-process", "--format", "json", "--graph"])
        .arg(&g)
        .arg("--out-dir")
        .arg(&dir))
    .status
    .success());
    let report = read_json(&dir.join("report.json"));
    let mut csv = String::from("bitstring,count\n");
    for (k, v) in report["counts"].as_object().unwrap() {
        csv.push_str(&format!("{k},{v}\n"));
    }
    let samples = dir.join("samples.csv");
    std::fs::write(&samples, csv).unwrap();
    let out = run(bin()
        .args(["postprocess", "--graph"])
        .arg(&g)
        .arg("--samples")
        .arg(&samples)
        .arg("--out-dir")
        .arg(&dir));
    assert!(out.status.success());
    let summary = read_json(&dir.join("postprocessed_summary.json"));
    let before = summary["summary"]["mean_ar_before"].as_f64().unwrap();
    let after = summary["summary"]["mean_ar_after"].as_f64().unwrap();
    assert!((before - report["ar"]["mean_ar"].as_f64().unwrap()).abs() < 1e-12);
    assert!(after >= before);
    std::fs::remove_dir_all(dir).unwrap();
}
