use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use floquet_shard::experiment::{HeatingConfig, ObservableSeries, Record};
use floquet_shard::io::{
    emit_series, fit_command, parse_config, read_manifest, Command as Cmd, PartialConfig, RunConfig, CSV_HEADER,
};
use floquet_shard::model::build_ensemble;

fn floquet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_floquet"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn heat_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    // T = 1, t_max = 2: records at n = 0, 1, 2.
    let omega = std::f64::consts::TAU.to_string();
    let out = floquet(&[
        "heat",
        "--L",
        "6",
        "--Ng",
        "1",
        "--omega",
        &omega,
        "--t_max",
        "2",
        "--output",
        path_str(dir.path()),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = dir.path().join(format!("heat_L6_Ng1_w{omega}_seed0_single.csv"));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], CSV_HEADER);

    let manifest = read_manifest(&csv.with_extension("manifest.json")).unwrap();
    assert_eq!(manifest.records, 3);
    assert_eq!(manifest.ensemble, build_ensemble(0, 39).unwrap().manifest());
    let echoed = manifest.config.unwrap();
    assert_eq!(echoed.num_global, 1);
    assert_eq!(echoed.t_max, 2.0);

    // Rerunning without --force must not clobber the result.
    let again = floquet(&[
        "heat",
        "--L",
        "6",
        "--Ng",
        "1",
        "--omega",
        &omega,
        "--t_max",
        "2",
        "--output",
        path_str(dir.path()),
    ]);
    assert_eq!(again.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&again.stderr).contains("--force"));
    let forced = floquet(&[
        "heat",
        "--L",
        "6",
        "--Ng",
        "1",
        "--omega",
        &omega,
        "--t_max",
        "2",
        "--output",
        path_str(dir.path()),
        "--force",
    ]);
    assert!(forced.status.success());
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), text);
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = floquet(&[
            "heat",
            "--L",
            "8",
            "--Ng",
            "2",
            "--omega",
            "4",
            "--t_max",
            "30",
            "--output",
            path_str(dir.path()),
        ]);
        assert!(out.status.success());
    }
    let name = "heat_L8_Ng2_w4_seed0_single.csv";
    let x = std::fs::read(a.path().join(name)).unwrap();
    let y = std::fs::read(b.path().join(name)).unwrap();
    assert!(!x.is_empty());
    assert_eq!(x, y);
}

#[test]
fn validation_errors_exit_with_one() {
    let out = floquet(&["echo", "--L", "4", "--Ng", "5", "--omega", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`Ng`"));

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("run.toml");
    std::fs::write(&file, "L = 6\nomgea = 4\n").unwrap();
    let out = floquet(&["heat", "--config", path_str(&file)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("omgea"));
}

#[test]
fn config_file_defaults_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("run.toml");
    std::fs::write(&file, "").unwrap();
    let flags = PartialConfig {
        num_qubits: Some(10),
        omega: Some("4".parse().unwrap()),
        ..Default::default()
    };
    let c = parse_config(Cmd::Echo, Some(&file), flags).unwrap();
    assert_eq!((c.num_global, c.stride, c.fusion, c.t_dense), (0, 10, 2, 100.0));

    std::fs::write(&file, "L = 12\nomega = \"5:8:0.5\"\nt_max = 100\nseed = 3\n").unwrap();
    let flags = PartialConfig {
        seed: Some(4),
        ..Default::default()
    };
    let c = parse_config(Cmd::Heat, Some(&file), flags).unwrap();
    assert_eq!(c.seed, 4);
    assert_eq!(c.heating_configs().len(), 7);
}

#[test]
fn manifest_echo_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let flags = PartialConfig {
        num_qubits: Some(6),
        omega: Some("3".parse().unwrap()),
        t_max: Some(3.0),
        output: Some(dir.path().to_path_buf()),
        ..Default::default()
    };
    let config = RunConfig::resolve(Cmd::Heat, flags).unwrap();
    let outcome = floquet_shard::io::run_command(&config).unwrap();
    let manifest = read_manifest(&outcome.files[1]).unwrap();
    assert_eq!(manifest.config.as_ref(), Some(&config));
    // The flat TOML form parses back to the same config.
    let toml_path = dir.path().join("echo.toml");
    std::fs::write(&toml_path, config.to_toml()).unwrap();
    assert_eq!(
        parse_config(Cmd::Heat, Some(&toml_path), PartialConfig::default()).unwrap(),
        config
    );
}

/// Writes a run whose energy decays as `E(0) e^{-γ t}` with `t1 = 1/γ`
/// and `t2 = 2/γ` falling exactly on samples.
fn synthetic_run(dir: &Path, omega: f64, gamma: f64, floor: f64) -> PathBuf {
    let dt = 1.0 / (50.0 * gamma);
    let records = (0..=150u64)
        .map(|i| {
            let t = i as f64 * dt;
            Record {
                period: i,
                time: t,
                energy: -3.0 * (floor + (1.0 - floor) * (-gamma * t).exp()),
                sigma_energy: 1.0,
                norm: 1.0,
                gates: 0,
            }
        })
        .collect();
    let series = ObservableSeries {
        config: HeatingConfig::new(10, omega, 150.0 * dt),
        ensemble: build_ensemble(0, 9).unwrap().manifest(),
        records,
    };
    emit_series(&series, dir, None, 0.0, false).unwrap().csv
}

#[test]
fn fit_recovers_exact_exponential_law() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b): (f64, f64) = (-2.0, 5.0);
    let inputs: Vec<PathBuf> = [5.0, 5.5, 6.0, 6.5, 7.0]
        .iter()
        .map(|&w| synthetic_run(dir.path(), w, (a * w + b).exp(), 0.0))
        .collect();
    let outcome = fit_command(&inputs, &[], dir.path(), false).unwrap();
    assert!(outcome.all_thermalized());
    let fit = outcome.fit.unwrap();
    assert!((fit.slope - a).abs() <= 1e-10, "{}", fit.slope);
    assert!((fit.intercept - b).abs() <= 1e-10, "{}", fit.intercept);
    let table = std::fs::read_to_string(dir.path().join("rates.dat")).unwrap();
    assert_eq!(table.lines().filter(|l| !l.starts_with('#')).count(), 5);
}

#[test]
fn one_stuck_series_gives_four_point_fit_and_failure_exit() {
    let dir = tempfile::tempdir().unwrap();
    let mut inputs: Vec<PathBuf> = [5.0, 5.5, 6.0, 6.5]
        .iter()
        .map(|&w| synthetic_run(dir.path(), w, (-2.0 * w + 5.0f64).exp(), 0.0))
        .collect();
    inputs.push(synthetic_run(dir.path(), 7.0, 0.01, 0.5));
    let list = inputs.iter().map(|p| path_str(p)).collect::<Vec<_>>().join(",");
    let out_dir = dir.path().join("fit");
    let out = floquet(&["fit", "--inputs", &list, "--exclude", "--output", path_str(&out_dir)]);
    assert_eq!(out.status.code(), Some(2));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAILED"), "{stdout}");
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("fit.json")).unwrap()).unwrap();
    assert_eq!(summary["fit"]["used"].as_array().unwrap().len(), 4);
    assert!((summary["fit"]["slope"].as_f64().unwrap() + 2.0).abs() < 1e-10);
    let table = std::fs::read_to_string(out_dir.join("rates.dat")).unwrap();
    assert!(table.contains("# failed:"));
}

#[test]
fn echo_and_bench_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = floquet(&[
        "echo",
        "--L",
        "6",
        "--omega",
        "8",
        "--echo_periods",
        "0,5",
        "--output",
        path_str(dir.path()),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("echo_L6_Ng0_seed0_single.json")).unwrap())
            .unwrap();
    assert_eq!(report["echoes"][0]["report"]["overlap_error"].as_f64(), Some(0.0));
    assert!(report["echoes"][1]["direct_error"].as_f64().is_some());

    let out = floquet(&[
        "bench",
        "--sizes",
        "6,8",
        "--repetitions",
        "10",
        "--output",
        path_str(dir.path()),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let bench: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("bench_Ng0_q2_single.json")).unwrap()).unwrap();
    assert_eq!(bench["reports"].as_array().unwrap().len(), 2);
    assert!(bench["scaling"]["coefficient"].as_f64().unwrap() > 0.0);
}
