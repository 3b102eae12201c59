//! End-to-end checks across trial generation, spectral analysis, detection
//! and sensing-time optimization, exercised through the public API only.

use gedsense::{
    monte_carlo, pd_theory, pf_theory, plan_subbands, read_sample_file, run_frame,
    simulate_statistics, subband_energies, threshold_for_pf, unitary_dft, write_sample_file,
    BandConfig, ChannelKind, ChannelModel, DetectorKind, GedStatistic, Hypothesis, Label,
    NoiseModel, SignalModel, SubbandPlan, ThroughputConfig, Tolerance, TrialConfig,
};

fn theory_exact_config(plan: SubbandPlan, signal_mw: f64, noise_mw: f64, unc_db: f64) -> TrialConfig {
    TrialConfig {
        signal: SignalModel::FreqDomainGaussianized,
        channel: ChannelModel {
            kind: ChannelKind::Awgn,
            signal_power_mw: signal_mw,
        },
        noise: NoiseModel {
            nominal_variance_mw: noise_mw,
            uncertainty_db: unc_db,
        },
        plan,
    }
}

fn half_band_plan(n: usize) -> SubbandPlan {
    let band = BandConfig::new(n as f64, n as f64 / 2.0, n as f64 / 2.0).unwrap();
    plan_subbands(&band, 1.0).unwrap()
}

#[test]
fn h0_statistic_is_standard_normal() {
    let trials = 2000;
    let cfg = theory_exact_config(half_band_plan(4096), 1.0, 1.0, 0.0);
    let stats = simulate_statistics(&cfg, DetectorKind::Ged, Hypothesis::H0, trials, 101).unwrap();

    let n = trials as f64;
    let mean = stats.values.iter().sum::<f64>() / n;
    let var = stats.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!(mean.abs() < 4.0 / n.sqrt(), "mean {mean}");
    assert!((var - 1.0).abs() < 4.0 * (2.0 / n).sqrt(), "variance {var}");

    // Tail calibration at a moderate threshold.
    let pf_hat = stats.exceedance(1.2815515655446004);
    assert!((pf_hat - 0.1).abs() < 4.0 * (0.09 / n).sqrt(), "pf {pf_hat}");
}

#[test]
fn noise_uncertainty_leaves_ratio_detector_pf_alone() {
    let trials = 800;
    let threshold = threshold_for_pf(0.1).unwrap();
    let exact = theory_exact_config(half_band_plan(4096), 1.0, 1.0, 0.0);
    let drifting = theory_exact_config(half_band_plan(4096), 1.0, 1.0, 2.0);

    let pf_exact = simulate_statistics(&exact, DetectorKind::Ged, Hypothesis::H0, trials, 202)
        .unwrap()
        .exceedance(threshold);
    let pf_drift = simulate_statistics(&drifting, DetectorKind::Ged, Hypothesis::H0, trials, 202)
        .unwrap()
        .exceedance(threshold);
    let se = (2.0 * 0.1 * 0.9 / trials as f64).sqrt();
    assert!(
        (pf_exact - pf_drift).abs() < 3.0 * se,
        "ratio detector moved: {pf_exact} vs {pf_drift}"
    );

    // The known-variance statistic believes the nominal variance, so the
    // same drift pushes its false-alarm rate far off target.
    let pf_ced = simulate_statistics(&drifting, DetectorKind::Ced, Hypothesis::H0, trials, 202)
        .unwrap()
        .exceedance(threshold);
    let se_one = (0.1 * 0.9 / trials as f64).sqrt();
    assert!(
        (pf_ced - 0.1).abs() > 3.0 * se_one,
        "known-variance detector unexpectedly held its rate: {pf_ced}"
    );
}

#[test]
fn doubling_the_window_raises_detection() {
    let trials = 800;
    let threshold = threshold_for_pf(0.1).unwrap();
    let short = theory_exact_config(half_band_plan(4096), 0.04, 1.0, 0.0);
    let long = theory_exact_config(half_band_plan(8192), 0.04, 1.0, 0.0);

    let pd_short = simulate_statistics(&short, DetectorKind::Ged, Hypothesis::H1, trials, 303)
        .unwrap()
        .exceedance(threshold);
    let pd_long = simulate_statistics(&long, DetectorKind::Ged, Hypothesis::H1, trials, 303)
        .unwrap()
        .exceedance(threshold);
    let combined = ((pd_short * (1.0 - pd_short) + pd_long * (1.0 - pd_long)) / trials as f64)
        .sqrt();
    assert!(
        pd_long - pd_short > 3.0 * combined,
        "pd {pd_short} -> {pd_long} not a credible increase"
    );
}

#[test]
fn results_are_independent_of_worker_count() {
    let cfg = theory_exact_config(half_band_plan(1024), 1.0, 1.0, 2.0);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            simulate_statistics(&cfg, DetectorKind::Ged, Hypothesis::H1, 300, 404).unwrap()
        })
    };
    let serial = run(1);
    let parallel = run(4);
    assert_eq!(serial.values, parallel.values);
}

#[test]
fn report_is_reproducible_bit_for_bit() {
    let cfg = theory_exact_config(half_band_plan(512), 0.5, 1.0, 1.0);
    let threshold = threshold_for_pf(0.05).unwrap();
    let a = monte_carlo(&cfg, DetectorKind::Ged, threshold, 200, 505).unwrap();
    let b = monte_carlo(&cfg, DetectorKind::Ged, threshold, 200, 505).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sample_files_round_trip_through_detection() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("window.iq");
    let plan = half_band_plan(2048);
    let cfg = theory_exact_config(plan.clone(), 1.0, 1.0, 0.0);
    let buffer = gedsense::generate_trial(&cfg, Hypothesis::H1, 606, 0).unwrap();

    write_sample_file(&path, &buffer).unwrap();
    let loaded = read_sample_file(&path).unwrap();
    assert_eq!(loaded.samples, buffer.samples);
    assert_eq!(loaded.sample_rate_hz, buffer.sample_rate_hz);

    let direct = gedsense::ged_statistic(
        &subband_energies(&unitary_dft(&buffer).unwrap(), &plan).unwrap(),
        &plan,
    )
    .unwrap();
    let via_file: GedStatistic = gedsense::ged_statistic(
        &subband_energies(&unitary_dft(&loaded).unwrap(), &plan).unwrap(),
        &plan,
    )
    .unwrap();
    assert_eq!(direct.value, via_file.value);
}

#[test]
fn frame_execution_hits_its_designed_operating_point() {
    let band = BandConfig::new(2.0e6, 1.0e6, 1.0e6).unwrap();
    let cfg = ThroughputConfig::new(2.0e-3, band, 0.1, 100.0, 0.8, 0.9).unwrap();
    let tol = Tolerance::default();

    // Windows longer than any optimized sensing time, drawn by the trial
    // generator at the frame's sample rate.
    let window_plan = plan_subbands(&band, 4096.0 / 2.0e6).unwrap();
    let h0_trials = theory_exact_config(window_plan.clone(), 0.1, 1.0, 0.0);

    let frames = 500;
    let mut white_h0 = 0;
    let mut nonwhite_h1 = 0;
    let mut threshold = f64::NAN;
    for t in 0..frames {
        let idle = gedsense::generate_trial(&h0_trials, Hypothesis::H0, 707, t).unwrap();
        let (decision, result) = run_frame(&cfg, &idle, tol).unwrap();
        threshold = result.optimal_threshold;
        if decision.label == Label::White {
            white_h0 += 1;
        }
        let busy = gedsense::generate_trial(&h0_trials, Hypothesis::H1, 707, t).unwrap();
        let (decision, _) = run_frame(&cfg, &busy, tol).unwrap();
        if decision.label == Label::NonWhite {
            nonwhite_h1 += 1;
        }
    }

    let pf = pf_theory(threshold);
    let pf_hat = 1.0 - white_h0 as f64 / frames as f64;
    let se_pf = (pf * (1.0 - pf) / frames as f64).sqrt();
    assert!(
        (pf_hat - pf).abs() < 3.0 * se_pf + 0.01,
        "false-alarm rate {pf_hat} vs designed {pf}"
    );

    // The threshold schedule is built to hold the target detection
    // probability at the optimized window.
    let pd_hat = nonwhite_h1 as f64 / frames as f64;
    let se_pd = (0.9 * 0.1 / frames as f64).sqrt();
    assert!(
        (pd_hat - 0.9).abs() < 3.0 * se_pd + 0.01,
        "detection rate {pd_hat} vs designed 0.9"
    );
}

#[test]
fn theory_matches_simulation_for_detection_probability() {
    let plan = half_band_plan(4096);
    let gamma = 0.05;
    let cfg = theory_exact_config(plan.clone(), gamma, 1.0, 0.0);
    let trials = 1000;
    let threshold = threshold_for_pf(0.1).unwrap();
    let h1 = gedsense::H1Theory::from_plan(&plan, gamma).unwrap();
    let pd = pd_theory(threshold, &h1);

    let pd_hat = simulate_statistics(&cfg, DetectorKind::Ged, Hypothesis::H1, trials, 808)
        .unwrap()
        .exceedance(threshold);
    let se = (pd * (1.0 - pd) / trials as f64).sqrt();
    assert!((pd_hat - pd).abs() < 3.0 * se, "pd {pd_hat} vs theory {pd}");
}
