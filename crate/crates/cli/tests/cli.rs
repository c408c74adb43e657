//! End-to-end CLI checks against the shipped fixture files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf()
}

fn qoracle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qoracle"))
        .args(args)
        .current_dir(workspace_root())
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn search_finds_eve_at_index_four() {
    let out = qoracle(&["search", "--input", "fixtures/names.json", "--query", "Eve"]);
    let report = stdout_json(&out);
    assert_eq!(report["iterations"], 2);
    assert_eq!(report["estimated_M"], 1);
    assert_eq!(report["top"][0]["index"], 4);
    let p = report["top"][0]["p"].as_f64().unwrap();
    assert!((p - 0.9453125).abs() < 1e-6);
}

#[test]
fn search_reports_bob_grace_collision_as_two_tops() {
    let out = qoracle(&[
        "search",
        "--input",
        "fixtures/names.json",
        "--query",
        "Bob",
        "--iterations",
        "1",
    ]);
    let report = stdout_json(&out);
    let tops: Vec<u64> = report["top"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["index"].as_u64().unwrap())
        .collect();
    assert_eq!(tops, vec![1, 6]);
}

#[test]
fn search_for_absent_query_warns_about_uniform_distribution() {
    // Hash-labeled integer database; the query is not a member.
    let dir = std::env::temp_dir().join("qoracle-cli-absent");
    std::fs::create_dir_all(&dir).unwrap();
    let db = dir.join("ints.json");
    std::fs::write(&db, "[1, 2, 3, 4, 5, 6, 7, 8]").unwrap();
    let out = qoracle(&[
        "search",
        "--input",
        db.to_str().unwrap(),
        "--query",
        "4095",
        "--k",
        "6",
    ]);
    let report = stdout_json(&out);
    let stderr = String::from_utf8_lossy(&out.stderr);
    let max = report["probabilities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p.as_f64().unwrap())
        .fold(0.0, f64::max);
    assert!(
        max < 0.2,
        "distribution should stay near uniform, max {max}"
    );
    assert!(stderr.contains("no winner"), "stderr: {stderr}");
}

#[test]
fn similarity_ranks_the_fixture_as_documented() {
    let out = qoracle(&[
        "similarity",
        "--input",
        "fixtures/similarity16.json",
        "--query",
        "item-06",
        "--iterations",
        "1",
    ]);
    let report = stdout_json(&out);
    let probs: Vec<f64> = report["probabilities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p.as_f64().unwrap())
        .collect();
    assert!(probs[6] > probs[10] && probs[6] > probs[12]);
    for (i, &p) in probs.iter().enumerate() {
        if ![6, 10, 12].contains(&i) {
            assert!(probs[10] > p && probs[12] > p, "index {i}");
        }
    }
}

#[test]
fn dice_with_default_contrast_beats_identity_contrast_on_top_hit() {
    let run = |contrast: &str| -> f64 {
        let out = qoracle(&[
            "similarity",
            "--input",
            "fixtures/similarity16.json",
            "--query",
            "item-06",
            "--tag",
            "dice",
            "--contrast",
            contrast,
            "--iterations",
            "1",
        ]);
        let report = stdout_json(&out);
        report["probabilities"][6].as_f64().unwrap()
    };
    let with_contrast = run("default");
    let without = run("none");
    assert!(
        with_contrast > without,
        "contrast should sharpen the top hit: {with_contrast} vs {without}"
    );
}

#[test]
fn encode_then_simulate_round_trips() {
    let dir = std::env::temp_dir().join("qoracle-cli-encode");
    std::fs::create_dir_all(&dir).unwrap();
    let circuit = dir.join("ud.json");
    let qasm = dir.join("ud.qasm");
    let out = qoracle(&[
        "encode",
        "--input",
        "fixtures/names.json",
        "--method",
        "gray",
        "--out",
        circuit.to_str().unwrap(),
        "--qasm",
        qasm.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let qasm_text = std::fs::read_to_string(&qasm).unwrap();
    assert!(qasm_text.starts_with("OPENQASM 2.0;"));
    assert!(qasm_text.contains("qreg idx[3];"));

    // Simulating U_D from |i=1> must land on index 1 with Bob's label 1010.
    let out = qoracle(&[
        "simulate",
        "--input",
        circuit.to_str().unwrap(),
        "--initial",
        "1",
        "--format",
        "json",
    ]);
    let dump = stdout_json(&out);
    let items = dump.as_array().unwrap();
    let hit = items
        .iter()
        .max_by(|a, b| {
            a["probability"]
                .as_f64()
                .unwrap()
                .total_cmp(&b["probability"].as_f64().unwrap())
        })
        .unwrap();
    assert!(hit["probability"].as_f64().unwrap() > 1.0 - 1e-9);
    // Little-endian: idx register low 3 bits = 001, label 1010 above it.
    assert_eq!(hit["bitstring"].as_str().unwrap(), "1010001");
}

#[test]
fn bench_csv_matches_the_n_log_n_column_and_is_reproducible() {
    let run = || {
        let out = qoracle(&[
            "bench",
            "--sizes",
            "4..16",
            "--methods",
            "phase-tolerant",
            "--trials",
            "2",
            "--seed",
            "7",
        ]);
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    let a = run();
    for line in a.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let size: u64 = cols[0].parse().unwrap();
        let cnot: u64 = cols[3].parse().unwrap();
        assert_eq!(cnot, size * size.trailing_zeros() as u64);
    }
    let strip_ms = |text: &str| -> Vec<String> {
        text.lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect()
    };
    assert_eq!(strip_ms(&a), strip_ms(&run()));
}

#[test]
fn missing_input_exits_nonzero_with_message() {
    let out = qoracle(&["search", "--input", "/nonexistent.json", "--query", "x"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    assert!(out.stdout.is_empty(), "no machine output on failure");
}

#[test]
fn env_var_caps_qubits() {
    let out = Command::new(env!("CARGO_BIN_EXE_qoracle"))
        .args(["search", "--input", "fixtures/names.json", "--query", "Eve"])
        .env("QORACLE_MAX_QUBITS", "3")
        .current_dir(workspace_root())
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn bench_config_file_selects_everything_including_output_path() {
    let dir = std::env::temp_dir().join("qoracle-cli-benchcfg");
    std::fs::create_dir_all(&dir).unwrap();
    let report = dir.join("report.csv");
    let config = dir.join("config.json");
    std::fs::write(
        &config,
        serde_json::json!({
            "sizes": [4, 8],
            "methods": ["phase-tolerant"],
            "trials": 1,
            "base_seed": 3,
            "verify_qubit_cap": 16,
            "verify": true,
            "format": "csv",
            "out": report,
        })
        .to_string(),
    )
    .unwrap();
    let out = qoracle(&["bench", "--config", config.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.starts_with("size,method,seed,cnot,u,tm,t_order,qubits,ms"));
    assert_eq!(text.lines().count(), 3, "header plus one row per size");
}
