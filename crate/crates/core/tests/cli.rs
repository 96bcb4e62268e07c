use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expander-codes")).current_dir(dir).args(args).output().expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["sim", "--bogus-flag"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &[]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["sim", "--code", "missing.json", "--out", "x.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));
    let out = run(dir.path(), &["graph", "--kind", "random-regular", "--n", "5", "--d", "3", "--out", "g.txt"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn example_43_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(dir.path(), &["code", "--example", "4.3", "--out", "c.json", "--meta", "meta.json", "--alist", "c.alist"]);
    assert!(stdout.contains("38/75 = 0.50667"), "{stdout}");
    let meta = json(&dir.path().join("meta.json"));
    assert_eq!(meta["n_bits"], 1800);
    assert_eq!(meta["design_rate"], "38/75");
    assert!((meta["design_rate_value"].as_f64().unwrap() - 0.50667).abs() < 5e-6);
    let manifest = json(&dir.path().join("c.json.manifest.json"));
    assert_eq!(manifest["command"], "code");
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 3);
    let alist = std::fs::read_to_string(dir.path().join("c.alist")).unwrap();
    assert!(alist.starts_with("1800 "), "alist header: {}", alist.lines().next().unwrap());
}

#[test]
fn config_file_supplies_flags_and_command_line_wins() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("cfg.json"), r#"{"kind": "random-regular", "n": 12, "d": 3, "seed": 4, "multigraph": true}"#)
        .unwrap();
    ok(dir.path(), &["graph", "--config", "cfg.json", "--out", "a.txt"]);
    ok(dir.path(), &["graph", "--kind", "random-regular", "--n", "12", "--d", "3", "--seed", "4", "--multigraph", "--out", "b.txt"]);
    ok(dir.path(), &["graph", "--config", "cfg.json", "--seed", "5", "--out", "c.txt"]);
    let read = |f: &str| std::fs::read_to_string(dir.path().join(f)).unwrap();
    assert_eq!(read("a.txt"), read("b.txt"));
    assert_ne!(read("a.txt"), read("c.txt"));
    let manifest = json(&dir.path().join("c.txt.manifest.json"));
    assert_eq!(manifest["seeds"]["seed"], 5);
}

#[test]
fn spectral_and_product_reports() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["graph", "--kind", "cycle", "--n", "12", "--out", "c12.json", "--dot", "c12.dot"]);
    ok(dir.path(), &["spectral", "--graph", "c12.json", "--method", "dense", "--out", "r.json"]);
    let r = json(&dir.path().join("r.json"));
    assert!((r["lambda2"].as_f64().unwrap() - (std::f64::consts::PI / 6.0).cos()).abs() < 1e-9);
    ok(dir.path(), &["product", "--kind", "zz", "--random", "2", "--out", "p.json", "--certificate", "cert.json"]);
    let cert = json(&dir.path().join("cert.json"));
    assert_eq!(cert["bound_ok"], true);
    ok(dir.path(), &["repro", "p.json.manifest.json"]);
}

#[test]
fn iterate_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["iterate", "--family", "zz", "--levels", "3", "--budget", "2^12", "--out", "t.json"]);
    let t = json(&dir.path().join("t.json"));
    let levels = t["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 3);
    assert_eq!(levels[0]["num_left"], 256);
    assert_eq!(levels[1]["constructed"], false);
}

/// cayley(shift, p=5, k=5) → code with [20,15] subcodes → sim at one SNR →
/// repro of every manifest.
#[test]
fn end_to_end_pipeline_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    let start = std::time::Instant::now();
    ok(dir.path(), &["cayley", "--family", "shift", "--p", "5", "--k", "5", "--full-degree", "--out", "g.json", "--info", "info.json"]);
    assert_eq!(json(&dir.path().join("info.json"))["degree"], 20);
    ok(dir.path(), &["code", "--graph", "g.json", "--subcode", "[20,15,4]", "--out", "code.json", "--meta", "meta.json"]);
    assert_eq!(json(&dir.path().join("meta.json"))["n_bits"], 1600);
    ok(
        dir.path(),
        &["sim", "--code", "code.json", "--snr", "2.5", "--max-frames", "300", "--max-errors", "50", "--out", "ber.csv"],
    );
    let csv = std::fs::read_to_string(dir.path().join("ber.csv")).unwrap();
    assert!(csv.starts_with("snr_db,frames,bit_errors,frame_errors,ber,fer,avg_iterations\n"));
    for m in ["g.json", "code.json", "ber.csv"] {
        let stdout = ok(dir.path(), &["repro", &format!("{m}.manifest.json")]);
        assert!(!stdout.contains("DIFFERS"), "{stdout}");
    }
    assert!(start.elapsed().as_secs() < 300);
}

#[test]
fn repro_detects_changed_output() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["graph", "--kind", "random-regular", "--n", "10", "--d", "4", "--out", "g.txt"]);
    std::fs::write(dir.path().join("g.txt"), "tampered\n").unwrap();
    let manifest = dir.path().join("g.txt.manifest.json");
    let mut m = json(&manifest);
    m["outputs"][0]["sha256"] = serde_json::Value::String("0".repeat(64));
    std::fs::write(&manifest, m.to_string()).unwrap();
    let out = run(dir.path(), &["repro", "g.txt.manifest.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("DIFFERS"));
}
