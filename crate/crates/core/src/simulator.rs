//! Monte Carlo trial generation and empirical operating-point estimation.
//!
//! A trial draws, in this order: the true noise variance, the block-fading
//! channel gain, the signal (only when a primary is present), and the noise.
//! Each trial owns a deterministic RNG stream derived from `(seed,
//! trial_index, hypothesis)`, so runs are bitwise reproducible and trial
//! populations can be shared across thresholds or compared across configs
//! with common random numbers.
//!
//! Signal power is quoted as the in-band level per DFT bin. The design SNR
//! is therefore `signal_power_mw / nominal_variance_mw` regardless of how
//! the band is split, matching the statistic's mean model directly.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detector::{
    ced_statistic, ged_statistic, pd_theory, pf_theory, threshold_for_pf, DetectorKind, H1Theory,
};
use crate::error::{Error, Result};
use crate::spectral::{subband_energies, unitary_dft, unitary_idft, SampleBuffer, SubbandPlan};

/// Which occupancy state a trial is drawn under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    /// Target sub-band idle; samples are noise only.
    H0,
    /// Target sub-band carries a primary signal.
    H1,
}

/// Noise with a bounded calibration error on its variance.
///
/// Every trial draws its true variance uniformly (in linear scale) from
/// `[sigma2/eps, sigma2 * eps]` with `eps = 10^(uncertainty_db/10)`. Zero
/// uncertainty reproduces the nominal variance exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Nominal per-sample variance in mW.
    pub nominal_variance_mw: f64,
    /// Half-width of the variance uncertainty interval in dB, >= 0.
    pub uncertainty_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    /// Unit gain every trial.
    Awgn,
    /// One complex Gaussian gain per trial with unit mean square.
    RayleighBlock,
}

/// Propagation model between the primary transmitter and the sensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    pub kind: ChannelKind,
    /// Received in-band signal level per DFT bin, in mW, before fading.
    pub signal_power_mw: f64,
}

/// How the primary signal inside the target sub-band is synthesized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignalModel {
    /// Independent complex Gaussian target bins drawn directly in the
    /// frequency domain. Matches the statistic's distribution model
    /// exactly, so empirical results can be held to theory at Monte Carlo
    /// resolution.
    FreqDomainGaussianized,
    /// QPSK symbols at one symbol per target-band sample, confined to the
    /// target sub-band by frequency masking. In-band energy is exactly
    /// `n_target_bins * signal_power_mw` each trial.
    QpskTimeDomain,
    /// Square-root-raised-cosine shaped QPSK synthesized in the time
    /// domain with a random symbol-clock offset per trial. Occupies
    /// `(1+rolloff)/symbol_period_s` Hz, which must equal the target
    /// sub-band width. Spectral leakage into the white sub-band is
    /// measured at calibration time and must sit at least 20 dB below the
    /// nominal noise floor.
    QpskSrrcf {
        /// Excess-bandwidth fraction in [0, 1].
        rolloff: f64,
        /// Symbol period in seconds.
        symbol_period_s: f64,
    },
}

/// Everything a single trial needs: signal synthesis, channel, noise and
/// the bin geometry of the sensing window.
#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub signal: SignalModel,
    pub channel: ChannelModel,
    pub noise: NoiseModel,
    pub plan: SubbandPlan,
}

impl TrialConfig {
    /// Checks power and uncertainty ranges, and for shaped QPSK verifies
    /// the occupied bandwidth against the plan and runs the leakage
    /// calibration.
    ///
    /// # Errors
    ///
    /// Returns a config error naming the offending field, including the
    /// case where shaped-pulse leakage into the white sub-band exceeds one
    /// hundredth of the nominal noise variance.
    pub fn validate(&self) -> Result<()> {
        let s2 = self.noise.nominal_variance_mw;
        if !(s2.is_finite() && s2 > 0.0) {
            return Err(Error::Config(format!(
                "nominal noise variance must be finite and > 0 mW, got {s2}"
            )));
        }
        if !(self.noise.uncertainty_db.is_finite() && self.noise.uncertainty_db >= 0.0) {
            return Err(Error::Config(format!(
                "noise uncertainty must be finite and >= 0 dB, got {}",
                self.noise.uncertainty_db
            )));
        }
        if !(self.channel.signal_power_mw.is_finite() && self.channel.signal_power_mw >= 0.0) {
            return Err(Error::Config(format!(
                "signal power must be finite and >= 0 mW, got {}",
                self.channel.signal_power_mw
            )));
        }
        if let SignalModel::QpskSrrcf {
            rolloff,
            symbol_period_s,
        } = self.signal
        {
            if !((0.0..=1.0).contains(&rolloff) && rolloff.is_finite()) {
                return Err(Error::Config(format!(
                    "rolloff must lie in [0, 1], got {rolloff}"
                )));
            }
            if !(symbol_period_s.is_finite() && symbol_period_s > 0.0) {
                return Err(Error::Config(format!(
                    "symbol period must be finite and > 0 s, got {symbol_period_s}"
                )));
            }
            let occupied_hz = (1.0 + rolloff) / symbol_period_s;
            let target_hz = self.plan.n_target_bins as f64 / self.plan.n_samples as f64
                * self.plan.sample_rate_hz;
            if (occupied_hz - target_hz).abs() > 1e-6 * target_hz {
                return Err(Error::Config(format!(
                    "shaped pulse occupies {occupied_hz} Hz but the target sub-band spans \
                     {target_hz} Hz"
                )));
            }
            let cal = srrc_calibration(rolloff, symbol_period_s, &self.plan);
            let leakage_mw =
                self.channel.signal_power_mw * cal.white_bin_energy / cal.target_bin_energy;
            if leakage_mw > s2 / 100.0 {
                return Err(Error::Config(format!(
                    "shaped-pulse leakage of {leakage_mw} mW per white bin is less than 20 dB \
                     below the noise floor of {s2} mW; check that the white sub-band sits \
                     outside the occupied band, or lower the signal power"
                )));
            }
        }
        Ok(())
    }
}

/// One simulated statistic population under a single hypothesis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatisticSamples {
    pub hypothesis: Hypothesis,
    /// Statistic values in trial order.
    pub values: Vec<f64>,
    pub seed: u64,
}

impl StatisticSamples {
    /// Fraction of trials at or above a threshold.
    pub fn exceedance(&self, threshold: f64) -> f64 {
        let hits = self.values.iter().filter(|&&v| v >= threshold).count();
        hits as f64 / self.values.len() as f64
    }
}

/// Empirical and model operating point at one threshold.
///
/// The model columns assume the nominal noise variance and unit channel
/// gain; fading or variance drift shows up as the gap between the pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub trials: usize,
    pub threshold: f64,
    pub empirical_pf: f64,
    /// Binomial standard error of `empirical_pf`.
    pub pf_std_err: f64,
    pub empirical_pd: f64,
    /// Binomial standard error of `empirical_pd`.
    pub pd_std_err: f64,
    pub theory_pf: f64,
    pub theory_pd: f64,
    pub seed: u64,
}

/// One receiver-operating-characteristic sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    /// False-alarm probability the threshold was set for.
    pub target_pf: f64,
    pub threshold: f64,
    pub empirical_pf: f64,
    pub pf_std_err: f64,
    pub empirical_pd: f64,
    pub pd_std_err: f64,
    /// Detection probability of the nominal model at this threshold.
    pub theory_pd: f64,
}

fn stream_index(hypothesis: Hypothesis) -> u64 {
    match hypothesis {
        Hypothesis::H0 => 0,
        Hypothesis::H1 => 1,
    }
}

/// Draws the true per-trial noise variance. Uniform in linear scale over
/// the uncertainty interval; zero uncertainty yields the nominal value
/// exactly while still consuming one draw, keeping streams aligned across
/// uncertainty settings.
pub(crate) fn noise_variance_for_trial(noise: &NoiseModel, rng: &mut ChaCha8Rng) -> f64 {
    let eps = 10.0_f64.powf(noise.uncertainty_db / 10.0);
    rng.gen_range(noise.nominal_variance_mw / eps..=noise.nominal_variance_mw * eps)
}

/// Draws the block channel gain for one trial.
pub(crate) fn channel_gain_for_trial(channel: &ChannelModel, rng: &mut ChaCha8Rng) -> Complex64 {
    match channel.kind {
        ChannelKind::Awgn => Complex64::new(1.0, 0.0),
        ChannelKind::RayleighBlock => {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        }
    }
}

fn complex_normal(rng: &mut ChaCha8Rng, variance: f64) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * (variance / 2.0).sqrt()
}

/// Synthesizes the sensing window of one trial.
///
/// The per-trial RNG is `ChaCha8` seeded with `seed` on stream
/// `2 * trial_index + hypothesis`, and the draw order is fixed: noise
/// variance, channel gain, signal (with its clock offset first, when
/// shaped), then noise. Identical arguments therefore reproduce the buffer
/// bit for bit.
///
/// # Errors
///
/// Returns a config error when the trial config is invalid.
pub fn generate_trial(
    cfg: &TrialConfig,
    hypothesis: Hypothesis,
    seed: u64,
    trial_index: u64,
) -> Result<SampleBuffer> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 * trial_index + stream_index(hypothesis));

    let sigma_t2 = noise_variance_for_trial(&cfg.noise, &mut rng);
    let gain = channel_gain_for_trial(&cfg.channel, &mut rng);
    let n = cfg.plan.n_samples;

    let samples = match cfg.signal {
        SignalModel::FreqDomainGaussianized => {
            let mut bins = vec![Complex64::new(0.0, 0.0); n];
            if hypothesis == Hypothesis::H1 {
                for (idx, bin) in bins.iter_mut().enumerate() {
                    if !cfg.plan.is_white_bin(idx) {
                        *bin = gain * complex_normal(&mut rng, cfg.channel.signal_power_mw);
                    }
                }
            }
            for bin in bins.iter_mut() {
                *bin += complex_normal(&mut rng, sigma_t2);
            }
            unitary_idft(&bins)?
        }
        SignalModel::QpskTimeDomain => {
            let mut samples = if hypothesis == Hypothesis::H1 {
                let symbols: Vec<Complex64> = (0..cfg.plan.n_target_bins)
                    .map(|_| qpsk_symbol(&mut rng))
                    .collect();
                let spectrum = unitary_dft(&SampleBuffer::new(symbols, 1.0)?)?;
                let scale = gain * cfg.channel.signal_power_mw.sqrt();
                let mut bins = vec![Complex64::new(0.0, 0.0); n];
                let mut j = 0;
                for (idx, bin) in bins.iter_mut().enumerate() {
                    if !cfg.plan.is_white_bin(idx) {
                        *bin = scale * spectrum[j];
                        j += 1;
                    }
                }
                unitary_idft(&bins)?
            } else {
                vec![Complex64::new(0.0, 0.0); n]
            };
            for s in samples.iter_mut() {
                *s += complex_normal(&mut rng, sigma_t2);
            }
            samples
        }
        SignalModel::QpskSrrcf {
            rolloff,
            symbol_period_s,
        } => {
            let mut samples = if hypothesis == Hypothesis::H1 {
                let cal = srrc_calibration(rolloff, symbol_period_s, &cfg.plan);
                let offset_s = rng.gen_range(0.0..symbol_period_s);
                let scale = gain * (cfg.channel.signal_power_mw / cal.target_bin_energy).sqrt();
                let mut x = synthesize_srrc(
                    &cal.pulse_table,
                    symbol_period_s,
                    offset_s,
                    &cfg.plan,
                    &mut rng,
                );
                for s in x.iter_mut() {
                    *s *= scale;
                }
                x
            } else {
                vec![Complex64::new(0.0, 0.0); n]
            };
            for s in samples.iter_mut() {
                *s += complex_normal(&mut rng, sigma_t2);
            }
            samples
        }
    };
    SampleBuffer::new(samples, cfg.plan.sample_rate_hz)
}

fn qpsk_symbol(rng: &mut ChaCha8Rng) -> Complex64 {
    let bits: u8 = rng.gen_range(0..4);
    let re = if bits & 1 == 0 { 1.0 } else { -1.0 };
    let im = if bits & 2 == 0 { 1.0 } else { -1.0 };
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Samples of the square-root-raised-cosine pulse per symbol period in the
/// lookup table.
const PULSE_TABLE_RESOLUTION: usize = 4096;
/// Pulse support, in symbol periods, on each side of its peak.
const PULSE_HALF_SPAN: usize = 8;
/// Realizations averaged when calibrating in-band level and leakage.
const CALIBRATION_RUNS: usize = 64;
/// Seed of the calibration RNG; independent of any trial seed.
const CALIBRATION_SEED: u64 = 0x5CA1_AB1E;

/// Unit-amplitude pulse shape and the spectral levels it produces on a
/// given plan, measured once and shared.
pub(crate) struct SrrcCalibration {
    /// `pulse_table[i]` is the pulse at `i / PULSE_TABLE_RESOLUTION`
    /// symbol periods from the peak.
    pulse_table: Vec<f64>,
    /// Mean per-target-bin energy of a unit-amplitude realization.
    pub(crate) target_bin_energy: f64,
    /// Mean per-white-bin energy of a unit-amplitude realization.
    pub(crate) white_bin_energy: f64,
}

type CalibrationKey = (u64, u64, u64, usize, Vec<(usize, usize)>);

static SRRC_CACHE: OnceLock<Mutex<HashMap<CalibrationKey, Arc<SrrcCalibration>>>> =
    OnceLock::new();

/// Square-root-raised-cosine pulse at `u` symbol periods from the peak,
/// unnormalized; calibration absorbs the overall amplitude.
fn srrc_pulse(u: f64, rolloff: f64) -> f64 {
    let a = rolloff;
    if u.abs() < 1e-10 {
        return 1.0 - a + 4.0 * a / std::f64::consts::PI;
    }
    let four_au = 4.0 * a * u;
    let denom_core = 1.0 - four_au * four_au;
    if denom_core.abs() < 1e-9 {
        // Removable singularity at |u| = 1/(4a).
        let x = std::f64::consts::PI / (4.0 * a);
        return a / std::f64::consts::SQRT_2
            * ((1.0 + 2.0 / std::f64::consts::PI) * x.sin()
                + (1.0 - 2.0 / std::f64::consts::PI) * x.cos());
    }
    let pi_u = std::f64::consts::PI * u;
    ((pi_u * (1.0 - a)).sin() + four_au * (pi_u * (1.0 + a)).cos()) / (pi_u * denom_core)
}

fn build_pulse_table(rolloff: f64) -> Vec<f64> {
    let len = PULSE_HALF_SPAN * PULSE_TABLE_RESOLUTION + 1;
    (0..len)
        .map(|i| srrc_pulse(i as f64 / PULSE_TABLE_RESOLUTION as f64, rolloff))
        .collect()
}

/// Pulse value at `u` symbol periods from the peak, by symmetric linear
/// interpolation of the table. Zero outside the truncated support.
fn pulse_at(table: &[f64], u: f64) -> f64 {
    let x = u.abs() * PULSE_TABLE_RESOLUTION as f64;
    let i = x as usize;
    if i + 1 >= table.len() {
        return 0.0;
    }
    let frac = x - i as f64;
    table[i] * (1.0 - frac) + table[i + 1] * frac
}

/// Synthesizes one unit-amplitude shaped-QPSK realization across the whole
/// sensing window. The symbol range is fixed by the window alone, so the
/// number of RNG draws never depends on the clock offset.
fn synthesize_srrc(
    table: &[f64],
    symbol_period_s: f64,
    offset_s: f64,
    plan: &SubbandPlan,
    rng: &mut ChaCha8Rng,
) -> Vec<Complex64> {
    let dt = 1.0 / plan.sample_rate_hz;
    let duration_s = plan.n_samples as f64 * dt;
    let m_min = -(PULSE_HALF_SPAN as i64) - 1;
    let m_max = (duration_s / symbol_period_s).ceil() as i64 + PULSE_HALF_SPAN as i64 + 1;
    let symbols: Vec<Complex64> = (m_min..=m_max).map(|_| qpsk_symbol(rng)).collect();

    let span = PULSE_HALF_SPAN as f64;
    (0..plan.n_samples)
        .map(|n| {
            let u_n = (n as f64 * dt - offset_s) / symbol_period_s;
            let lo = ((u_n - span).ceil() as i64).max(m_min);
            let hi = ((u_n + span).floor() as i64).min(m_max);
            let mut acc = Complex64::new(0.0, 0.0);
            for m in lo..=hi {
                acc += symbols[(m - m_min) as usize] * pulse_at(table, u_n - m as f64);
            }
            acc
        })
        .collect()
}

/// Returns the cached pulse table and spectral levels for a shaped-QPSK
/// setup, measuring them on first use from fixed-seed realizations.
pub(crate) fn srrc_calibration(
    rolloff: f64,
    symbol_period_s: f64,
    plan: &SubbandPlan,
) -> Arc<SrrcCalibration> {
    let key: CalibrationKey = (
        rolloff.to_bits(),
        symbol_period_s.to_bits(),
        plan.sample_rate_hz.to_bits(),
        plan.n_samples,
        plan.white_ranges().to_vec(),
    );
    let cache = SRRC_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(cal) = cache.lock().unwrap().get(&key) {
        return Arc::clone(cal);
    }

    let table = build_pulse_table(rolloff);
    let mut target_sum = 0.0;
    let mut white_sum = 0.0;
    for run in 0..CALIBRATION_RUNS {
        let mut rng = ChaCha8Rng::seed_from_u64(CALIBRATION_SEED);
        rng.set_stream(run as u64);
        let offset_s = rng.gen_range(0.0..symbol_period_s);
        let x = synthesize_srrc(&table, symbol_period_s, offset_s, plan, &mut rng);
        let buffer = SampleBuffer::new(x, plan.sample_rate_hz).expect("non-empty window");
        let bins = unitary_dft(&buffer).expect("non-empty window");
        for (idx, bin) in bins.iter().enumerate() {
            if plan.is_white_bin(idx) {
                white_sum += bin.norm_sqr();
            } else {
                target_sum += bin.norm_sqr();
            }
        }
    }
    let runs = CALIBRATION_RUNS as f64;
    let cal = Arc::new(SrrcCalibration {
        pulse_table: table,
        target_bin_energy: target_sum / (runs * plan.n_target_bins as f64),
        white_bin_energy: white_sum / (runs * plan.n_white_bins as f64),
    });
    cache.lock().unwrap().insert(key, Arc::clone(&cal));
    cal
}

fn trial_statistic(
    cfg: &TrialConfig,
    detector: DetectorKind,
    hypothesis: Hypothesis,
    seed: u64,
    trial_index: u64,
) -> Result<f64> {
    let buffer = generate_trial(cfg, hypothesis, seed, trial_index)?;
    let energies = subband_energies(&unitary_dft(&buffer)?, &cfg.plan)?;
    match detector {
        DetectorKind::Ged => Ok(ged_statistic(&energies, &cfg.plan)?.value),
        // The known-variance statistic is fed the nominal variance; the
        // per-trial drift is exactly what it cannot see.
        DetectorKind::Ced => ced_statistic(&energies, cfg.noise.nominal_variance_mw, &cfg.plan),
    }
}

/// Simulates one statistic population under a hypothesis, in trial order.
///
/// Trials run in parallel across the active thread pool; results are
/// independent of the pool size because each trial owns its RNG stream.
///
/// # Errors
///
/// Returns a config error for an invalid trial config or `trials == 0`.
pub fn simulate_statistics(
    cfg: &TrialConfig,
    detector: DetectorKind,
    hypothesis: Hypothesis,
    trials: usize,
    seed: u64,
) -> Result<StatisticSamples> {
    if trials == 0 {
        return Err(Error::Config("at least one trial is required".into()));
    }
    cfg.validate()?;
    let values = (0..trials as u64)
        .into_par_iter()
        .map(|t| trial_statistic(cfg, detector, hypothesis, seed, t))
        .collect::<Result<Vec<f64>>>()?;
    Ok(StatisticSamples {
        hypothesis,
        values,
        seed,
    })
}

fn binomial_std_err(p: f64, trials: usize) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Nominal-model distribution of the statistic under a present signal:
/// unit channel gain and nominal noise variance.
fn nominal_h1_theory(cfg: &TrialConfig, detector: DetectorKind) -> Result<H1Theory> {
    let snr = cfg.channel.signal_power_mw / cfg.noise.nominal_variance_mw;
    match detector {
        DetectorKind::Ged => H1Theory::from_plan(&cfg.plan, snr),
        DetectorKind::Ced => H1Theory::ced_limit(cfg.plan.n_target_bins, snr),
    }
}

/// Estimates both error probabilities at one threshold from fresh
/// populations of at least 100 trials per hypothesis.
///
/// # Errors
///
/// Returns a config error for an invalid trial config, fewer than 100
/// trials, or a non-finite threshold.
pub fn monte_carlo(
    cfg: &TrialConfig,
    detector: DetectorKind,
    threshold: f64,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloReport> {
    if trials < 100 {
        return Err(Error::Config(format!(
            "at least 100 trials are required for a report, got {trials}"
        )));
    }
    if !threshold.is_finite() {
        return Err(Error::Config(format!("threshold must be finite, got {threshold}")));
    }
    let h0 = simulate_statistics(cfg, detector, Hypothesis::H0, trials, seed)?;
    let h1 = simulate_statistics(cfg, detector, Hypothesis::H1, trials, seed)?;
    let empirical_pf = h0.exceedance(threshold);
    let empirical_pd = h1.exceedance(threshold);
    Ok(MonteCarloReport {
        trials,
        threshold,
        empirical_pf,
        pf_std_err: binomial_std_err(empirical_pf, trials),
        empirical_pd,
        pd_std_err: binomial_std_err(empirical_pd, trials),
        theory_pf: pf_theory(threshold),
        theory_pd: pd_theory(threshold, &nominal_h1_theory(cfg, detector)?),
        seed,
    })
}

/// Sweeps thresholds set for each target false-alarm probability over one
/// shared pair of trial populations.
///
/// Sharing the populations makes the curve monotone by construction and
/// costs one simulation regardless of how many points are requested.
///
/// # Errors
///
/// Returns a config error for an invalid trial config or fewer than 100
/// trials, and a domain error for a target probability outside (0, 1).
pub fn roc_sweep(
    cfg: &TrialConfig,
    detector: DetectorKind,
    target_pfs: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<RocPoint>> {
    if trials < 100 {
        return Err(Error::Config(format!(
            "at least 100 trials are required for a curve, got {trials}"
        )));
    }
    let thresholds: Vec<f64> = target_pfs
        .iter()
        .map(|&pf| threshold_for_pf(pf))
        .collect::<Result<_>>()?;
    let h0 = simulate_statistics(cfg, detector, Hypothesis::H0, trials, seed)?;
    let h1 = simulate_statistics(cfg, detector, Hypothesis::H1, trials, seed)?;
    let theory = nominal_h1_theory(cfg, detector)?;
    Ok(target_pfs
        .iter()
        .zip(thresholds)
        .map(|(&target_pf, threshold)| {
            let empirical_pf = h0.exceedance(threshold);
            let empirical_pd = h1.exceedance(threshold);
            RocPoint {
                target_pf,
                threshold,
                empirical_pf,
                pf_std_err: binomial_std_err(empirical_pf, trials),
                empirical_pd,
                pd_std_err: binomial_std_err(empirical_pd, trials),
                theory_pd: pd_theory(threshold, &theory),
            }
        })
        .collect())
}

/// Tests whether fading hurt detection: true iff the unit-gain channel's
/// report shows higher detection probability than the block-fading one by
/// more than three combined standard errors.
///
/// Caller guarantees the two reports differ only in channel kind.
pub fn rayleigh_vs_awgn_ordering(
    report_awgn: &MonteCarloReport,
    report_rayleigh: &MonteCarloReport,
) -> bool {
    let combined =
        (report_awgn.pd_std_err.powi(2) + report_rayleigh.pd_std_err.powi(2)).sqrt();
    report_awgn.empirical_pd - report_rayleigh.empirical_pd > 3.0 * combined
}
