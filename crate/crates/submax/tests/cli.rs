//! End-to-end checks of the `submax` binary: gen -> run -> sweep, the CSV
//! column contract, and exit codes.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_submax"))
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("submax-cli-{}-{name}", std::process::id()));
    p
}

#[test]
fn gen_run_sweep_round_trip() {
    let inst_path = tmp("inst.json");
    let out = bin()
        .args([
            "gen",
            "random-coverage",
            "--n",
            "12",
            "--universe",
            "18",
            "--density",
            "0.25",
        ])
        .args(["--seed", "3", "--out", inst_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "gen failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    // the instance file is reproducible byte for byte
    let again = tmp("inst2.json");
    bin()
        .args([
            "gen",
            "random-coverage",
            "--n",
            "12",
            "--universe",
            "18",
            "--density",
            "0.25",
        ])
        .args(["--seed", "3", "--out", again.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(
        std::fs::read(&inst_path).unwrap(),
        std::fs::read(&again).unwrap()
    );

    // splice the instance into a full experiment config
    let inst: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&inst_path).unwrap()).unwrap();
    let config = serde_json::json!({
        "matroid": inst["matroid"],
        "function": inst["function"],
        "algorithm": "block_greedy",
        "eps": 0.2,
        "seed": 9,
        "reps": 3,
        "estimator": { "sample_override": 128, "c_grid": 1.0 },
    });
    let cfg_path = tmp("config.json");
    std::fs::write(&cfg_path, serde_json::to_string_pretty(&config).unwrap()).unwrap();

    let report_path = tmp("report.json");
    let csv_path = tmp("report.csv");
    let out = bin()
        .args(["run", cfg_path.to_str().unwrap()])
        .args(["--out", report_path.to_str().unwrap()])
        .args(["--csv", csv_path.to_str().unwrap()])
        .args(["--workers", "2", "--opt", "auto"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "run failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.trim().lines().collect();
    assert_eq!(
        lines[0],
        "instance,algorithm,eps,seed,value,rounds,f_calls,matroid_calls,opt,ratio"
    );
    assert_eq!(lines.len(), 4);
    for line in &lines[1..] {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 10);
        assert_eq!(cols[1], "block_greedy");
        assert!(!cols[8].is_empty(), "opt column should be filled at n=12");
    }

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["format_version"], 1);
    assert!(report["opt"].is_number());

    // identical rerun, identical bytes
    let csv2_path = tmp("report2.csv");
    bin()
        .args(["run", cfg_path.to_str().unwrap()])
        .args(["--csv", csv2_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(csv, std::fs::read_to_string(&csv2_path).unwrap());

    // sweep over eps, one combined table
    let sweep_path = tmp("sweep.csv");
    let out = bin()
        .args(["sweep", cfg_path.to_str().unwrap()])
        .args(["--param", "eps", "--values", "0.05,0.1,0.2"])
        .args(["--csv", sweep_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "sweep failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let sweep = std::fs::read_to_string(&sweep_path).unwrap();
    assert_eq!(sweep.trim().lines().count(), 1 + 3 * 3);

    for p in [
        inst_path,
        again,
        cfg_path,
        report_path,
        csv_path,
        csv2_path,
        sweep_path,
    ] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn exit_codes() {
    // 2: config errors
    let out = bin()
        .args(["run", "/nonexistent/config.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let bad = tmp("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let out = bin().args(["run", bad.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // 3: incompatible algorithm/function pairing
    let config = serde_json::json!({
        "matroid": { "kind": "uniform", "n": 3, "k": 2 },
        "function": { "kind": "cut", "vertices": 3, "edges": [[0, 1, 1.0], [1, 2, 1.0]] },
        "algorithm": "amplify_monotone",
        "eps": 0.2,
        "seed": 1,
        "reps": 1,
    });
    let cfg_path = tmp("incompatible.json");
    std::fs::write(&cfg_path, serde_json::to_string(&config).unwrap()).unwrap();
    let out = bin()
        .args(["run", cfg_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // 0: success
    let config = serde_json::json!({
        "matroid": { "kind": "uniform", "n": 3, "k": 2 },
        "function": { "kind": "modular", "weights": [1.0, 2.0, 3.0] },
        "algorithm": "sequential",
        "eps": 0.2,
        "seed": 1,
        "reps": 1,
    });
    std::fs::write(&cfg_path, serde_json::to_string(&config).unwrap()).unwrap();
    let out = bin()
        .args(["run", cfg_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let _ = std::fs::remove_file(bad);
    let _ = std::fs::remove_file(cfg_path);
}

#[test]
fn gen_requires_kind_parameters() {
    let out = bin()
        .args(["gen", "fat-path", "--seed", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("--legs"), "unhelpful message: {msg}");
}
