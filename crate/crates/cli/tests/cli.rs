use std::path::Path;
use std::process::{Command, Output};

fn densemem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_densemem"))
        .args(args)
        .env_remove("DENSEMEM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).filter(|rest| rest.starts_with(' ')).map(str::trim))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
}

fn write_config(dir: &Path, json: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn theory_at_zero_corruption_prints_half_log_two() {
    let o = densemem(&["theory", "--rho", "0.0"]);
    assert!(o.status.success());
    let v: f64 = field(&stdout(&o), "alpha_star").parse().unwrap();
    assert_eq!(v, std::f64::consts::LN_2 / 2.0);

    let o = densemem(&["theory", "--rho", "0.0", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["alpha_star"].as_f64().unwrap(), std::f64::consts::LN_2 / 2.0);
}

#[test]
fn theory_degree_two_constant() {
    let o = densemem(&["theory", "--n", "2"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "c_n"), "2");
    let o = densemem(&["theory", "--n", "4", "--neurons", "60", "--format", "csv"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    let header: Vec<&str> = lines[0].split(',').collect();
    let values: Vec<&str> = lines[1].split(',').collect();
    let c = header.iter().position(|&h| h == "c_n").unwrap();
    assert_eq!(values[c], "30");
}

#[test]
fn theory_curve_is_monotone() {
    let o = densemem(&["theory", "--curve", "rho", "--points", "11", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (r, a) = l.split_once(',').unwrap();
            (r.parse().unwrap(), a.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 11);
    assert!(rows.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 < w[0].1));
}

#[test]
fn invalid_arguments_exit_with_two() {
    for args in [
        &["theory", "--rho", "0.5"][..],
        &["theory", "--n", "1"],
        &["theory", "--bogus"],
        &["recover", "--neurons", "4", "--patterns", "1", "--flips", "5"],
        &["recover", "--neurons", "4", "--patterns", "0"],
        &["recover", "--neurons", "4", "--patterns", "2", "--model", "polynomial", "--n", "1"],
    ] {
        assert_eq!(densemem(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn recover_trivial_case() {
    let o = densemem(&["recover", "--neurons", "16", "--patterns", "1", "--flips", "0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(field(&text, "result"), "success");
    assert_eq!(field(&text, "residual_bits"), "0/16");
}

#[test]
fn recover_is_deterministic() {
    let args = ["recover", "--neurons", "30", "--patterns", "500", "--flips", "6", "--seed", "9"];
    assert_eq!(densemem(&args).stdout, densemem(&args).stdout);
    let env_run = Command::new(env!("CARGO_BIN_EXE_densemem"))
        .args(&args[..args.len() - 2])
        .env("DENSEMEM_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(env_run.stdout, densemem(&args).stdout);
}

#[test]
fn recover_pilot_seeds_succeed() {
    // Pilot run over seeds 0..40 at N = 40, M = 3, 10 flips: only seed 3 fails.
    let pilot: Vec<u64> = (0..40).filter(|&s| s != 3).collect();
    for seed in pilot {
        let s = seed.to_string();
        let o = densemem(&["recover", "--neurons", "40", "--patterns", "3", "--flips", "10", "--seed", &s]);
        assert_eq!(field(&stdout(&o), "result"), "success", "seed {seed}");
    }
}

#[test]
fn recover_failure_is_not_an_error() {
    // Far above capacity, a one-step recovery from 15 flips fails.
    let o = densemem(&["recover", "--neurons", "30", "--patterns", "20000", "--flips", "14", "--seed", "2"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "result"), "failure");
}

#[test]
fn minimal_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"trials": 5, "points": [{"model": {"kind": "exponential"}, "n_neurons": 20, "n_patterns": 50, "n_flips": 3}]}"#,
    );
    let out = dir.path().join("out.csv");
    let o = densemem(&["sweep", "--config", &config, "--output", out.to_str().unwrap(), "--seed", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(
        lines[0],
        "model,n,N,M,alpha,rho,n_flips,scheduler,trials,successes,wilson_low,wilson_high,mean_residual_fraction,alpha_star,seed"
    );
    let cols: Vec<&str> = lines[1].split(',').collect();
    assert!(cols[9].parse::<u64>().unwrap() <= 5);
    assert_eq!(cols[14], "4");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["master_seed"], 4);
    assert_eq!(manifest["version"], "0.1.0");
}

#[test]
fn alpha_column_inverts_pattern_count() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"trials": 2, "grid": {"models": [{"kind": "exponential"}], "n_neurons": [20, 30], "alpha": [0.05, 0.1, 0.2], "rho": [0.1]}}"#,
    );
    let o = densemem(&["sweep", "--config", &config]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    for r in rows {
        let n: f64 = r[2].parse().unwrap();
        let m: f64 = r[3].parse().unwrap();
        let alpha: f64 = r[4].parse().unwrap();
        assert!((alpha - (m - 1.0).ln() / n).abs() < 1e-12);
    }
}

#[test]
fn sweep_output_is_independent_of_parallelism() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"trials": 40, "master_seed": 11, "grid": {"models": [{"kind": "exponential"}, {"kind": "polynomial", "degree": 3}], "n_neurons": [30], "n_patterns": [10, 300], "rho": [0.1]}}"#,
    );
    let one = densemem(&["sweep", "--config", &config, "--parallelism", "1"]);
    let eight = densemem(&["sweep", "--config", &config, "--parallelism", "8"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, eight.stdout);
    let json1 = densemem(&["sweep", "--config", &config, "--parallelism", "1", "--format", "json"]);
    let json8 = densemem(&["sweep", "--config", &config, "--parallelism", "8", "--format", "json"]);
    assert_eq!(json1.stdout, json8.stdout);
}

#[test]
fn malformed_configs_exit_with_two_and_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), r#"{"trails": 5}"#);
    let o = densemem(&["sweep", "--config", &config]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("trails"));
    let config = write_config(dir.path(), "{not json");
    assert_eq!(densemem(&["sweep", "--config", &config]).status.code(), Some(2));
    assert_eq!(densemem(&["sweep", "--config", "/nonexistent/config.json"]).status.code(), Some(2));
}

#[test]
fn bench_reports_both_timings() {
    let o = densemem(&["bench", "--neurons", "20", "--patterns", "50", "--trials", "10", "--parallelism", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(field(&text, "sequential_s").parse::<f64>().is_ok());
    assert_eq!(field(&text, "threads"), "2");
}
