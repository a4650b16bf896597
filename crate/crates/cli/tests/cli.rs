//! End-to-end checks of the binary: spec examples, JSON round-trips, exit
//! codes, and cache determinism (cold vs warm runs print identical bytes).

use std::path::Path;
use std::process::{Command, Output};

fn perilab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perilab"))
        .args(args)
        .env_remove("PERILAB_CACHE")
        .output()
        .expect("binary runs")
}

fn perilab_cached(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perilab"))
        .args(args)
        .env("PERILAB_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}\nstdout: {}",
        String::from_utf8_lossy(&out.stderr),
        String::from_utf8_lossy(&out.stdout)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn weights_examples() {
    let v = stdout_json(&perilab(&["weights", "size", "--weight", "[-2,-1]"]));
    assert_eq!(v["size"], 3);
    let v = stdout_json(&perilab(&["weights", "dual", "--weight", "[-2]"]));
    assert_eq!(v["dual"], serde_json::json!([-1, -1]));
    let v = stdout_json(&perilab(&["weights", "admissible", "--weight", "[-2]", "--k", "1"]));
    assert_eq!(v["admissible"], false);
    let v = stdout_json(&perilab(&["weights", "truncate", "--weight", "[-1]", "--n", "3"]));
    assert_eq!(v["weight"], serde_json::json!([-1, 0, 0]));
}

#[test]
fn weights_diagram_round_trip() {
    let v = stdout_json(&perilab(&["weights", "diagram", "--weight", "[-2,-1]"]));
    let balls = serde_json::to_string(&v["balls"]).unwrap();
    let tail = v["tail"].as_i64().unwrap().to_string();
    let back = stdout_json(&perilab(&[
        "weights",
        "from-diagram",
        "--balls",
        &balls,
        "--tail",
        &tail,
    ]));
    assert_eq!(back["entries"], serde_json::json!([-2, -1]));
}

#[test]
fn lr_examples() {
    let v = stdout_json(&perilab(&[
        "lr", "coeff", "--gamma", "[2]", "--beta", "[1]", "--zeta", "[2,1]",
    ]));
    assert_eq!(v["coeff"], 1);
    let v = stdout_json(&perilab(&["lr", "socle", "--zeta", "[3]", "--beta", "[1]", "--k", "2"]));
    assert_eq!(v["multiplicity"], 1);
    let v = stdout_json(&perilab(&["lr", "witness", "--beta", "[2]"]));
    assert_eq!(v["zeta"], serde_json::json!([5, 3]));
    assert_eq!(v["k"], 6);
    let v = stdout_json(&perilab(&["lr", "qsym", "--gamma", "[3,1]"]));
    assert_eq!(v["qsym"], true);
}

#[test]
fn tl_examples() {
    let v = stdout_json(&perilab(&["tl", "equal", "--left", "[0,1,0]", "--right", "[0]"]));
    assert_eq!(v["equal"], true);
    let v = stdout_json(&perilab(&["tl", "eval", "--word", "[0,0]"]));
    assert_eq!(v["zero"], true);
    let v = stdout_json(&perilab(&["tl", "reduced", "--word", "[0,1,0]"]));
    assert_eq!(v["reduced"], false);
    assert_eq!(v["zero_valued"], false);
    let v = stdout_json(&perilab(&["tl", "staircase", "--s", "2"]));
    assert_eq!(v["word"], serde_json::json!([1, 0, -1, 2, 1, 0]));
    let v = stdout_json(&perilab(&["tl", "sqrt", "--s", "1"]));
    assert_eq!(v["j"], serde_json::json!([0]));
    assert_eq!(v["jprime"], serde_json::json!([1]));
}

#[test]
fn tl_eval_output_feeds_equal() {
    // the staircase word prints as a JSON array usable as input again
    let v = stdout_json(&perilab(&["tl", "staircase", "--s", "1"]));
    let word = serde_json::to_string(&v["word"]).unwrap();
    let eq = stdout_json(&perilab(&["tl", "equal", "--left", &word, "--right", "[1,0]"]));
    assert_eq!(eq["equal"], true);
}

#[test]
fn brauer_round_trip() {
    let basis = stdout_json(&perilab(&["brauer", "basis", "--r", "2", "--s", "2"]));
    let diagrams = basis["diagrams"].as_array().unwrap();
    assert_eq!(diagrams.len(), 3);
    // wrap one diagram as a hom and square it through compose
    let d = &diagrams[0];
    let hom = serde_json::json!({
        "r": 2, "s": 2, "parity": d["parity"], "terms": [d]
    })
    .to_string();
    let sq = stdout_json(&perilab(&["brauer", "compose", "--g", &hom, "--f", &hom]));
    assert_eq!(sq["r"], 2);
    assert_eq!(sq["s"], 2);
    // and realize the identity at n = 2
    let id = serde_json::json!({
        "r": 1, "s": 1, "parity": 0,
        "terms": [{"r":1, "s":1, "pairs": [[["b",0],["t",0]]], "coeff": 1, "parity": 0}]
    })
    .to_string();
    let m = stdout_json(&perilab(&["brauer", "realize", "--hom", &id, "--n", "2"]));
    assert_eq!(m["rows"], 4);
    assert_eq!(m["entries"].as_array().unwrap().len(), 4);
}

#[test]
fn super_examples() {
    let v = stdout_json(&perilab(&["super", "homdim", "--n", "3", "--k", "4"]));
    assert_eq!(v["dim"], 3);
    let v = stdout_json(&perilab(&["super", "homdim", "--n", "2", "--k", "3"]));
    assert_eq!(v["dim"], 0);
    let v = stdout_json(&perilab(&["super", "ds", "--n", "3", "--module", "natural"]));
    assert_eq!(v["even"], 1);
    assert_eq!(v["odd"], 1);
    let v = stdout_json(&perilab(&["super", "delta", "--n", "3", "--weight", "[-1]"]));
    assert_eq!(v["even"], 3);
    assert_eq!(v["odd"], 3);
    let v = stdout_json(&perilab(&["super", "spectrum", "--n", "2", "--module", "trivial"]));
    assert_eq!(v["spectrum"], serde_json::json!([[0, 4]]));
    let v = stdout_json(&perilab(&["super", "basis", "--n", "1"]));
    assert_eq!(v["elements"].as_array().unwrap().len(), 2);
}

#[test]
fn groth_tensorv() {
    let v = stdout_json(&perilab(&["groth", "tensorv", "--weight", "[-1]", "--level", "2"]));
    assert_eq!(v["level"], 3);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 3);
}

#[test]
fn exit_codes() {
    // domain error: rank-n weight with positive entries has no dual
    let out = perilab(&["weights", "dual", "--weight", "[1]"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["error"].is_string());
    // malformed input
    let out = perilab(&["weights", "size", "--weight", "not json"]);
    assert_eq!(out.status.code(), Some(2));
    // unknown flag (clap)
    let out = perilab(&["weights", "size", "--bogus", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn calibration_cache_is_deterministic() {
    let dir = std::env::temp_dir().join(format!("perilab-cache-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let args = ["groth", "calibrate", "--n", "5", "--max-size", "1"];
    let cold = perilab_cached(&args, &dir);
    assert!(cold.status.success());
    let cache_file = dir.join("theta_n5_m1.json");
    assert!(cache_file.exists(), "calibration must write its cache file");
    let warm = perilab_cached(&args, &dir);
    // cold and warm runs print byte-identical results
    assert_eq!(cold.stdout, warm.stdout);

    // a consumer of the cache prints byte-identical output cold vs warm
    let theta = [
        "groth", "theta", "--j", "0", "--weight", "[]", "--level", "1", "--n", "5",
        "--max-size", "1",
    ];
    let first = perilab_cached(&theta, &dir);
    let second = perilab_cached(&theta, &dir);
    assert_eq!(first.stdout, second.stdout);
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["terms"][0]["weight"], serde_json::json!([-1]));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn lr_cache_round_trip() {
    let dir = std::env::temp_dir().join(format!("perilab-lr-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let args = [
        "lr", "coeff", "--gamma", "[2,1]", "--beta", "[2,1]", "--zeta", "[3,2,1]",
    ];
    let cold = perilab_cached(&args, &dir);
    let warm = perilab_cached(&args, &dir);
    assert_eq!(cold.stdout, warm.stdout);
    let v: serde_json::Value = serde_json::from_slice(&warm.stdout).unwrap();
    assert_eq!(v["coeff"], 2);
    assert!(dir.join("lr.json").exists());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn stdin_payload() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_perilab"))
        .args(["weights", "size", "--weight", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(b"[-2,-1]")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["size"], 3);
}
