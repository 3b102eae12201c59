//! Benchmarks for the hot paths: the unitary transform, the sub-band ratio
//! statistic, trial synthesis and the closed-form throughput optimizer.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gedsense::{
    decide, erfc_inv, ged_statistic, generate_trial, optimize_sensing_time, subband_energies,
    threshold_for_pf, unitary_dft, BandConfig, ChannelKind, ChannelModel,
    DetectorKind, Hypothesis, NoiseModel, SampleBuffer, SignalModel, SubbandPlan,
    ThroughputConfig, Tolerance, TrialConfig,
};

fn noise_window(n_samples: usize, sample_rate_hz: f64, seed: u64) -> SampleBuffer {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Complex64> = (0..n_samples)
        .map(|_| {
            Complex64::new(
                rng.sample::<f64, _>(rand_distr::StandardNormal),
                rng.sample::<f64, _>(rand_distr::StandardNormal),
            )
        })
        .collect();
    SampleBuffer::new(samples, sample_rate_hz).unwrap()
}

/// 7.2 MHz band split 6/1.2 MHz, 4.55 ms window: 32760 samples.
fn shaped_pulse_plan() -> SubbandPlan {
    let band = BandConfig::new(7.2e6, 6.0e6, 1.2e6).unwrap();
    SubbandPlan::centered(&band, 4.55e-3).unwrap()
}

fn bench_unitary_dft(c: &mut Criterion) {
    let mut group = c.benchmark_group("unitary_dft");
    for n in [4096_usize, 32760] {
        let buf = noise_window(n, n as f64, 0x0BE0);
        group.bench_function(format!("n{n}"), |b| {
            b.iter(|| unitary_dft(black_box(&buf)).unwrap())
        });
    }
    group.finish();
}

fn bench_statistic(c: &mut Criterion) {
    let plan = shaped_pulse_plan();
    let buf = noise_window(plan.n_samples, plan.sample_rate_hz, 0x0BE1);
    let bins = unitary_dft(&buf).unwrap();
    c.bench_function("subband_energies_plus_statistic", |b| {
        b.iter(|| {
            let energies = subband_energies(black_box(&bins), &plan).unwrap();
            ged_statistic(&energies, &plan).unwrap().value
        })
    });
}

fn bench_sense_pipeline(c: &mut Criterion) {
    let plan = shaped_pulse_plan();
    let buf = noise_window(plan.n_samples, plan.sample_rate_hz, 0x0BE2);
    let threshold = threshold_for_pf(0.1).unwrap();
    c.bench_function("sense_window_32760", |b| {
        b.iter(|| {
            let bins = unitary_dft(black_box(&buf)).unwrap();
            let energies = subband_energies(&bins, &plan).unwrap();
            let statistic = ged_statistic(&energies, &plan).unwrap();
            decide(statistic, threshold).label
        })
    });
}

fn bench_generate_trial(c: &mut Criterion) {
    let cfg = TrialConfig {
        signal: SignalModel::FreqDomainGaussianized,
        channel: ChannelModel {
            kind: ChannelKind::Awgn,
            signal_power_mw: 0.01,
        },
        noise: NoiseModel {
            nominal_variance_mw: 1.0,
            uncertainty_db: 0.0,
        },
        plan: shaped_pulse_plan(),
    };
    let mut trial = 0_u64;
    c.bench_function("generate_trial_freq_domain_32760", |b| {
        b.iter(|| {
            trial += 1;
            generate_trial(&cfg, Hypothesis::H1, 0x0BE3, black_box(trial)).unwrap()
        })
    });
}

fn bench_optimizer(c: &mut Criterion) {
    let band = BandConfig::new(12.0e6, 6.0e6, 6.0e6).unwrap();
    let cfg = ThroughputConfig::new(2.0, band, 0.01, 100.0, 0.8, 0.9).unwrap();
    c.bench_function("optimize_sensing_time", |b| {
        b.iter(|| optimize_sensing_time(black_box(&cfg), Tolerance::default()).unwrap())
    });
    c.bench_function("optimize_sensing_time_ced", |b| {
        let ced = cfg.with_detector(DetectorKind::Ced);
        b.iter(|| optimize_sensing_time(black_box(&ced), Tolerance::default()).unwrap())
    });
}

fn bench_erfc_inv(c: &mut Criterion) {
    c.bench_function("erfc_inv", |b| b.iter(|| erfc_inv(black_box(0.2)).unwrap()));
}

criterion_group!(
    transforms,
    bench_unitary_dft,
    bench_statistic,
    bench_sense_pipeline
);
criterion_group!(simulation, bench_generate_trial);
criterion_group!(optimizer, bench_optimizer, bench_erfc_inv);
criterion_main!(transforms, simulation, optimizer);
