use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ou_levy::config::ExperimentConfig;
use ou_levy::report::strip_timestamp;
use serde_json::Value;

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
}

fn ou_levy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ou-levy"))
        .args(args)
        .env_remove("OU_LEVY_THREADS")
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn criterion<'a>(bundle: &'a Value, name: &str) -> &'a Value {
    bundle["result"]["criteria"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["criterion"] == name)
        .unwrap_or_else(|| panic!("no criterion {name}"))
}

#[test]
fn shipped_configs_round_trip() {
    for name in [
        "m1.toml",
        "m1_pure_jump.toml",
        "one_sided.toml",
        "no_l2.toml",
        "null.toml",
        "zero_noise.toml",
    ] {
        let c = ExperimentConfig::load(&example(name)).unwrap();
        assert_eq!(
            ExperimentConfig::from_toml(&c.to_toml()).unwrap(),
            c,
            "{name}"
        );
    }
}

#[test]
fn check_m1_all_finite() {
    let dir = tempfile::tempdir().unwrap();
    let out = ou_levy(&[
        "check",
        "--config",
        example("m1.toml").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--self-check",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let b = json(&dir.path().join("check.json"));
    assert_eq!(b["schema_version"], 1);
    assert_eq!(b["master_seed"], 2024);
    assert_eq!(b["result"]["all_finite"], true);
    for c in b["result"]["criteria"].as_array().unwrap() {
        assert!(c["value"].is_number(), "{c}");
    }
}

#[test]
fn check_one_sided_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let out = ou_levy(&[
        "check",
        "--config",
        example("one_sided.toml").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--self-check",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let b = json(&dir.path().join("check.json"));
    assert_eq!(criterion(&b, "cm_l2_norm A->Atilde")["converged"], true);
    let back = criterion(&b, "cm_l2_norm Atilde->A");
    assert_eq!(back["converged"], false);
    assert_eq!(back["value"], "inf");
    assert!(back["witness"]["index"].as_u64().is_some());
}

#[test]
fn check_null_model_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let out = ou_levy(&[
        "check",
        "--config",
        example("null.toml").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let b = json(&dir.path().join("check.json"));
    for c in b["result"]["criteria"].as_array().unwrap() {
        let v = c["value"].as_f64().unwrap();
        assert!(v == 0.0 || v == 1.0, "{c}");
    }
}

#[test]
fn zero_noise_paths_are_zero_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let cfg = example("zero_noise.toml");
    assert!(
        ou_levy(&["simulate", "--config", cfg.to_str().unwrap(), "--out", d])
            .status
            .success()
    );
    let csv = std::fs::read_to_string(dir.path().join("paths/replica_000000.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "time,mode_1,mode_2,mode_3,mode_4");
    for line in lines {
        assert!(line.split(',').skip(1).all(|v| v == "0.0"), "{line}");
    }
    let first = json(&dir.path().join("manifest.json"));
    let bytes: Vec<Vec<u8>> = first["result"]["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| std::fs::read(dir.path().join(f["path"].as_str().unwrap())).unwrap())
        .collect();
    assert!(
        ou_levy(&["simulate", "--config", cfg.to_str().unwrap(), "--out", d])
            .status
            .success()
    );
    let second = json(&dir.path().join("manifest.json"));
    assert_eq!(first["result"], second["result"]);
    for (f, b) in second["result"]["files"]
        .as_array()
        .unwrap()
        .iter()
        .zip(&bytes)
    {
        assert_eq!(
            &std::fs::read(dir.path().join(f["path"].as_str().unwrap())).unwrap(),
            b
        );
    }
}

#[test]
fn simulate_stats_match_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = ou_levy(&[
        "simulate",
        "--config",
        example("m1.toml").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--replicas",
        "4000",
        "--format",
        "csv",
        "--self-check",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let stats = json(&dir.path().join("stats.json"));
    assert_eq!(stats["result"]["passed"], true);
    assert_eq!(stats["result"]["modes"].as_array().unwrap().len(), 8);
}

#[test]
fn girsanov_null_model_unit_weights() {
    let dir = tempfile::tempdir().unwrap();
    let out = ou_levy(&[
        "girsanov",
        "--config",
        example("null.toml").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--replicas",
        "500",
        "--format",
        "json,csv",
        "--self-check",
    ]);
    assert!(out.status.success());
    let r = json(&dir.path().join("girsanov.json"));
    for rep in r["result"]["reports"].as_array().unwrap() {
        assert_eq!(rep["mean_weight"], 1.0);
        assert_eq!(rep["weight_se"], 0.0);
        assert!(rep["z_score"].as_f64().unwrap().abs() < 3.0);
    }
    let weights = std::fs::read_to_string(dir.path().join("weights.csv")).unwrap();
    assert_eq!(weights.lines().count(), 501);
}

#[test]
fn girsanov_refuses_no_l2_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = ou_levy(&[
        "girsanov",
        "--config",
        example("no_l2.toml").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("witness"));
    let r = json(&dir.path().join("girsanov.json"));
    assert_eq!(r["result"]["status"], "refused");
    assert!(r["result"]["verdict"]["divergence_witness"]["index"]
        .as_u64()
        .is_some());
}

#[test]
fn rigidity_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = ou_levy(&[
        "rigidity",
        "--config",
        example("m1_pure_jump.toml").to_str().unwrap(),
        "--out",
        d,
        "--self-check",
    ]);
    assert!(out.status.success());
    let r = json(&dir.path().join("rigidity.json"));
    assert_eq!(r["result"]["all_discriminated"], true);
    assert_eq!(r["result"]["paths_equal"], false);
    let csv = std::fs::read_to_string(dir.path().join("residuals.csv")).unwrap();
    assert_eq!(csv.lines().count(), 101);
}

#[test]
fn rigidity_without_jumps_is_vacuous() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("zero_rate.toml");
    let text = std::fs::read_to_string(example("m1_pure_jump.toml"))
        .unwrap()
        .replace("rate = 1.0", "rate = 0.0");
    std::fs::write(&cfg, text).unwrap();
    let out = ou_levy(&[
        "rigidity",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--replicas",
        "10",
    ]);
    assert!(out.status.success());
    let r = json(&dir.path().join("rigidity.json"));
    assert_eq!(r["result"]["vacuous"], true);
    assert_eq!(r["result"]["paths_equal"], true);
}

#[test]
fn rigidity_rejects_gaussian_noise() {
    let dir = tempfile::tempdir().unwrap();
    let out = ou_levy(&[
        "rigidity",
        "--config",
        example("m1.toml").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reproduce_writes_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let out = ou_levy(&[
        "reproduce",
        "--out",
        dir.path().to_str().unwrap(),
        "--self-check",
    ]);
    assert!(out.status.success());
    for id in ["no-l2", "one-sided", "novikov-fails", "no-factorisation"] {
        let r = json(&dir.path().join(format!("reproduce_{id}.json")));
        assert_eq!(r["result"]["reproduced"], true, "{id}");
    }
    // re-run one example from its own report
    let report = dir.path().join("reproduce_one-sided.json");
    let again = tempfile::tempdir().unwrap();
    let out = ou_levy(&[
        "reproduce",
        "--config",
        report.to_str().unwrap(),
        "--out",
        again.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let a = strip_timestamp(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let b = std::fs::read_to_string(again.path().join("reproduce_one-sided.json")).unwrap();
    let b = strip_timestamp(&b)
        .unwrap()
        .replace(again.path().to_str().unwrap(), dir.path().to_str().unwrap());
    assert_eq!(
        serde_json::from_str::<Value>(&a).unwrap()["result"],
        serde_json::from_str::<Value>(&b).unwrap()["result"]
    );
    assert_eq!(std::fs::read_dir(again.path()).unwrap().count(), 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(
        &bad,
        "[model]\nn_max = 2\na = \"n\"\na_tilde = \"n\"\nq = \"1\"\nextra = 1\n",
    )
    .unwrap();
    let out = ou_levy(&["check", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 6") && err.contains("extra"), "{err}");
    assert_eq!(
        ou_levy(&["check", "--config", "/does/not/exist.toml"])
            .status
            .code(),
        Some(2)
    );
    // one replica cannot pass the moment check
    let out = ou_levy(&[
        "simulate",
        "--config",
        example("m1.toml").to_str().unwrap(),
        "--out",
        d,
        "--replicas",
        "1",
        "--self-check",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let out = Command::new(env!("CARGO_BIN_EXE_ou-levy"))
        .args([
            "check",
            "--config",
            example("m1.toml").to_str().unwrap(),
            "--out",
            d,
        ])
        .env("OU_LEVY_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
