//! End-to-end tests driving the compiled binary: exit codes, seed
//! precedence, output determinism and the JSON/CSV shapes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gedsense::{
    generate_trial, plan_subbands, write_sample_file, BandConfig, ChannelKind, ChannelModel,
    Hypothesis, NoiseModel, SampleBuffer, SignalModel, TrialConfig,
};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gedsense"));
    cmd.env_remove("GEDSENSE_SEED");
    cmd
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

const REFERENCE_CONFIG: &str = r#"{
  "band": {"total_bandwidth_hz": 12000000.0, "target_bandwidth_hz": 6000000.0, "white_bandwidth_hz": 6000000.0},
  "frame_duration_s": 2.0,
  "sensing_time_s": 0.0002,
  "trials": 120,
  "seed": 11
}"#;

/// Small band so one window is 400 samples.
const FAST_CONFIG: &str = r#"{
  "band": {"total_bandwidth_hz": 2000000.0, "target_bandwidth_hz": 1000000.0, "white_bandwidth_hz": 1000000.0},
  "sensing_time_s": 0.0002,
  "target_pf": 0.1,
  "trials": 120,
  "seed": 11
}"#;

fn fast_trial_config() -> TrialConfig {
    let band = BandConfig::new(2.0e6, 1.0e6, 1.0e6).unwrap();
    TrialConfig {
        signal: SignalModel::FreqDomainGaussianized,
        channel: ChannelModel {
            kind: ChannelKind::Awgn,
            signal_power_mw: 1.0,
        },
        noise: NoiseModel {
            nominal_variance_mw: 1.0,
            uncertainty_db: 0.0,
        },
        plan: plan_subbands(&band, 2.0e-4).unwrap(),
    }
}

#[test]
fn optimize_reports_the_published_optima() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "desk.json", REFERENCE_CONFIG);
    let curve = dir.path().join("curve.csv");

    let out = run(bin()
        .args(["optimize", "--config"])
        .arg(&config)
        .arg("--output")
        .arg(&curve));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = stdout_json(&out);
    let topt = summary["optimal_sensing_time_s"].as_f64().unwrap();
    assert!((topt * 1e3 - 50.6).abs() <= 1.0, "GED optimum {topt}");
    assert_eq!(summary["detector"], "ged");

    let first_line = fs::read_to_string(&curve).unwrap();
    assert!(
        first_line.starts_with("sensing_time_s,threshold,normalized_throughput\n"),
        "curve header names columns and units"
    );

    let out = run(bin()
        .args(["optimize", "--ced", "--config"])
        .arg(&config)
        .arg("--output")
        .arg(dir.path().join("curve_ced.csv")));
    assert_eq!(out.status.code(), Some(0));
    let summary = stdout_json(&out);
    let topt = summary["optimal_sensing_time_s"].as_f64().unwrap();
    assert!((topt * 1e3 - 28.5).abs() <= 1.0, "CED optimum {topt}");

    // Same config, same bytes.
    let rerun = dir.path().join("curve_again.csv");
    run(bin()
        .args(["optimize", "--config"])
        .arg(&config)
        .arg("--output")
        .arg(&rerun));
    assert_eq!(fs::read(&curve).unwrap(), fs::read(&rerun).unwrap());
}

#[test]
fn optimize_json_format_emits_the_curve_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "desk.json", REFERENCE_CONFIG);
    let curve = dir.path().join("curve.json");
    let out = run(bin()
        .args(["optimize", "--format", "json", "--config"])
        .arg(&config)
        .arg("--output")
        .arg(&curve));
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&fs::read_to_string(&curve).unwrap()).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 200);
    assert!(rows[0]["sensing_time_s"].is_f64());
}

#[test]
fn roc_runs_are_byte_identical_and_seed_precedence_holds() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "fast.json", FAST_CONFIG);
    let table = |name: &str| dir.path().join(name);

    let flag_nine = table("flag_nine.csv");
    run(bin()
        .args(["roc", "--seed", "9", "--config"])
        .arg(&config)
        .arg("--output")
        .arg(&flag_nine));

    // Flag beats the environment variable.
    let env_four_flag_nine = table("env4_flag9.csv");
    run(bin()
        .env("GEDSENSE_SEED", "4")
        .args(["roc", "--seed", "9", "--config"])
        .arg(&config)
        .arg("--output")
        .arg(&env_four_flag_nine));
    assert_eq!(
        fs::read(&flag_nine).unwrap(),
        fs::read(&env_four_flag_nine).unwrap()
    );

    // Environment beats the config seed, and equals the same seed by flag.
    let env_four = table("env4.csv");
    run(bin()
        .env("GEDSENSE_SEED", "4")
        .args(["roc", "--config"])
        .arg(&config)
        .arg("--output")
        .arg(&env_four));
    let flag_four = table("flag4.csv");
    run(bin()
        .args(["roc", "--seed", "4", "--config"])
        .arg(&config)
        .arg("--output")
        .arg(&flag_four));
    assert_eq!(fs::read(&env_four).unwrap(), fs::read(&flag_four).unwrap());
    assert_ne!(fs::read(&env_four).unwrap(), fs::read(&flag_nine).unwrap());

    // Worker count does not change the table.
    let jobs_three = table("jobs3.csv");
    run(bin()
        .args(["roc", "--seed", "9", "--jobs", "3", "--config"])
        .arg(&config)
        .arg("--output")
        .arg(&jobs_three));
    assert_eq!(fs::read(&flag_nine).unwrap(), fs::read(&jobs_three).unwrap());

    let text = fs::read_to_string(&flag_nine).unwrap();
    assert!(text.starts_with(
        "target_pf,threshold,theory_pf,theory_pd,empirical_pf,pf_std_err,\
         pf_ci95_lo,pf_ci95_hi,empirical_pd,pd_std_err,pd_ci95_lo,pd_ci95_hi\n"
    ));
    assert_eq!(text.lines().count(), 6, "header plus the default five points");
}

#[test]
fn roc_rejects_bad_trials_and_bad_env_seed() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "fast.json", FAST_CONFIG);

    let out = run(bin()
        .args(["roc", "--trials", "0", "--config"])
        .arg(&config));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trial"));

    let out = run(bin()
        .env("GEDSENSE_SEED", "not-a-number")
        .args(["roc", "--config"])
        .arg(&config));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("GEDSENSE_SEED"));
}

#[test]
fn config_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();

    // Negative bandwidth.
    let bad_band = write_config(
        dir.path(),
        "bad_band.json",
        r#"{"band": {"total_bandwidth_hz": -1.0, "target_bandwidth_hz": 1.0, "white_bandwidth_hz": 1.0}}"#,
    );
    let out = run(bin().args(["optimize", "--config"]).arg(&bad_band));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("total"));

    // Unknown key is rejected rather than silently ignored.
    let typo = write_config(
        dir.path(),
        "typo.json",
        r#"{"band": {"total_bandwidth_hz": 2.0e6, "target_bandwidth_hz": 1.0e6, "white_bandwidth_hz": 1.0e6}, "sensing_tme_s": 1.0e-4}"#,
    );
    let out = run(bin().args(["optimize", "--config"]).arg(&typo));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sensing_tme_s"));

    // A command that needs the window length says which field is missing.
    let no_window = write_config(
        dir.path(),
        "no_window.json",
        r#"{"band": {"total_bandwidth_hz": 2.0e6, "target_bandwidth_hz": 1.0e6, "white_bandwidth_hz": 1.0e6}}"#,
    );
    let out = run(bin().args(["roc", "--config"]).arg(&no_window));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sensing_time_s"));
}

#[test]
fn sense_labels_files_and_exits_by_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "fast.json", FAST_CONFIG);
    let trial = fast_trial_config();

    // Noise-only window at the 0.1 false-alarm threshold.
    let noise = dir.path().join("noise.bin");
    write_sample_file(&noise, &generate_trial(&trial, Hypothesis::H0, 3, 0).unwrap()).unwrap();
    let out = run(bin().arg("sense").arg(&noise).args(["--config"]).arg(&config));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let verdict = stdout_json(&out);
    assert_eq!(verdict["label"], "white");
    assert!(verdict["statistic"].is_f64());
    assert!((verdict["threshold"].as_f64().unwrap() - 1.2815515655446004).abs() < 1e-12);

    // 0 dB signal in the target sub-band.
    let loud = dir.path().join("loud.bin");
    write_sample_file(&loud, &generate_trial(&trial, Hypothesis::H1, 3, 0).unwrap()).unwrap();
    let out = run(bin().arg("sense").arg(&loud).args(["--config"]).arg(&config));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["label"], "non_white");

    // Noise-only windows stay mostly white across seeds.
    let mut white = 0;
    for seed in 0..20 {
        let path = dir.path().join(format!("noise_{seed}.bin"));
        write_sample_file(&path, &generate_trial(&trial, Hypothesis::H0, seed, 0).unwrap()).unwrap();
        let out = run(bin().arg("sense").arg(&path).args(["--config"]).arg(&config));
        if out.status.code() == Some(0) {
            white += 1;
        }
    }
    assert!(white >= 14, "{white}/20 white at a 0.1 false-alarm target");
}

#[test]
fn sense_rejects_bad_files_with_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "fast.json", FAST_CONFIG);
    let trial = fast_trial_config();

    let noise = dir.path().join("noise.bin");
    write_sample_file(&noise, &generate_trial(&trial, Hypothesis::H0, 3, 0).unwrap()).unwrap();

    // Truncated payload.
    let payload = fs::read(&noise).unwrap();
    let cut = dir.path().join("cut.bin");
    fs::write(&cut, &payload[..payload.len() / 2]).unwrap();
    fs::copy(
        noise.with_extension("bin.json"),
        cut.with_extension("bin.json"),
    )
    .unwrap();
    let out = run(bin().arg("sense").arg(&cut).args(["--config"]).arg(&config));
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed"));

    // Missing file.
    let out = run(bin()
        .arg("sense")
        .arg(dir.path().join("absent.bin"))
        .args(["--config"])
        .arg(&config));
    assert_eq!(out.status.code(), Some(3));

    // Rate mismatch is a configuration problem, not a file problem.
    let wrong_rate = dir.path().join("wrong_rate.bin");
    let buffer = generate_trial(&trial, Hypothesis::H0, 3, 0).unwrap();
    write_sample_file(
        &wrong_rate,
        &SampleBuffer::new(buffer.samples, 3.0e6).unwrap(),
    )
    .unwrap();
    let out = run(bin().arg("sense").arg(&wrong_rate).args(["--config"]).arg(&config));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sample rate"));

    // A window shorter than the plan is also a configuration problem.
    let short = dir.path().join("short.bin");
    let buffer = generate_trial(&trial, Hypothesis::H0, 3, 0).unwrap();
    write_sample_file(
        &short,
        &SampleBuffer::new(buffer.samples[..100].to_vec(), 2.0e6).unwrap(),
    )
    .unwrap();
    let out = run(bin().arg("sense").arg(&short).args(["--config"]).arg(&config));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("400"));
}

#[test]
fn figures_closed_form_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a");
    let second = dir.path().join("b");
    for target in [&first, &second] {
        let out = run(bin()
            .args(["figures", "--only", "2,3,4", "--output"])
            .arg(target));
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in ["fig2.csv", "fig3.csv", "fig4.csv"] {
        let a = fs::read(first.join(name)).unwrap();
        let b = fs::read(second.join(name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{name} differs between identical runs");
    }
    let fig2 = fs::read_to_string(first.join("fig2.csv")).unwrap();
    assert!(fig2.starts_with("frame_duration_s,sensing_time_s,threshold,normalized_throughput\n"));
    assert_eq!(fig2.lines().count(), 1 + 5 * 200);

    let out = run(bin().args(["figures", "--only", "9", "--output"]).arg(&first));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn figures_monte_carlo_files_have_the_declared_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(bin()
        .args(["figures", "--only", "5,6", "--trials", "100", "--seed", "1", "--output"])
        .arg(dir.path()));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = stdout_json(&out);
    assert_eq!(summary["files"].as_array().unwrap().len(), 2);

    let fig5 = fs::read_to_string(dir.path().join("fig5.csv")).unwrap();
    assert_eq!(fig5.lines().count(), 1 + 10);
    let fig6 = fs::read_to_string(dir.path().join("fig6.csv")).unwrap();
    assert!(fig6.starts_with("bin_ratio_beta,channel,"));
    assert_eq!(fig6.lines().count(), 1 + 3 * 9);
    // Empirical columns are probabilities.
    for line in fig5.lines().skip(1) {
        let fields: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert!(fields.iter().all(|v| v.is_finite()));
        let empirical_pf = fields[4];
        assert!((0.0..=1.0).contains(&empirical_pf));
    }
}
