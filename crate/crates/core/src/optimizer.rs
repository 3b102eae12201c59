//! Sensing-time optimization for a periodic sensing/transmission frame.
//!
//! Each frame of duration `T_f` spends `T_o` seconds sensing and the rest
//! transmitting. Longer sensing raises the detection probability that
//! protects the primary user but shrinks the secondary user's air time. With
//! the threshold pinned to the target detection probability, the normalized
//! throughput collapses to a closed-form unimodal function of `T_o` alone,
//! which a coarse scan plus golden-section search maximizes.
//!
//! Inside the optimizer the bin count follows the continuous relaxation
//! `N_dk = T_o * B_k`; flooring to integer bins happens only when a frame is
//! actually executed against samples.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::detector::{decide, ged_statistic, Decision, DetectorKind};
use crate::error::{Error, Result};
use crate::numerics::{erf_raw, erfc_inv_raw, maximize_unimodal, Tolerance};
use crate::spectral::{plan_subbands, subband_energies, unitary_dft, BandConfig, SampleBuffer};

/// Frame, prior, SNR and target-detection parameters of the throughput
/// problem.
///
/// SNRs are linear power ratios; dB conversion belongs to the CLI boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThroughputConfig {
    /// Frame duration T_f in seconds.
    pub frame_duration_s: f64,
    /// Prior probability that the target sub-band is idle.
    pub prior_h0: f64,
    /// Prior probability that the target sub-band is occupied.
    pub prior_h1: f64,
    /// SNR of the secondary link when transmitting, linear.
    pub snr_secondary: f64,
    /// SNR of the primary signal received at the secondary transmitter,
    /// linear. Governs the rate penalty when transmitting over an occupied
    /// band.
    pub snr_primary_at_cr: f64,
    /// Target detection probability the threshold schedule must hold.
    pub target_pd: f64,
    /// Band split the sensing window runs under.
    pub band: BandConfig,
    /// Design SNR of the primary signal in the target sub-band, linear.
    pub snr_target: f64,
    /// Statistic the sensing stage is sized for.
    pub detector: DetectorKind,
}

impl ThroughputConfig {
    /// Builds a config with the common defaults: occupied-band SNR at the
    /// secondary transmitter equal to the design SNR, and the ratio
    /// detector.
    ///
    /// # Errors
    ///
    /// Returns a config error when any invariant fails, see [`Self::validate`].
    pub fn new(
        frame_duration_s: f64,
        band: BandConfig,
        snr_target: f64,
        snr_secondary: f64,
        prior_h0: f64,
        target_pd: f64,
    ) -> Result<Self> {
        let cfg = Self {
            frame_duration_s,
            prior_h0,
            prior_h1: 1.0 - prior_h0,
            snr_secondary,
            snr_primary_at_cr: snr_target,
            target_pd,
            band,
            snr_target,
            detector: DetectorKind::Ged,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks every invariant: positive frame duration, priors forming a
    /// probability pair, target detection probability strictly inside
    /// (0, 1), non-negative finite SNRs, and a consistent band split.
    ///
    /// # Errors
    ///
    /// Returns a config error naming the offending field.
    pub fn validate(&self) -> Result<()> {
        if !(self.frame_duration_s.is_finite() && self.frame_duration_s > 0.0) {
            return Err(Error::Config(format!(
                "frame duration must be finite and > 0, got {}",
                self.frame_duration_s
            )));
        }
        for (name, p) in [("prior_h0", self.prior_h0), ("prior_h1", self.prior_h1)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        if ((self.prior_h0 + self.prior_h1) - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "priors must sum to 1, got {} + {}",
                self.prior_h0, self.prior_h1
            )));
        }
        if !(self.target_pd > 0.0 && self.target_pd < 1.0) {
            return Err(Error::Config(format!(
                "target detection probability must lie in (0, 1), got {}",
                self.target_pd
            )));
        }
        for (name, snr) in [
            ("snr_target", self.snr_target),
            ("snr_secondary", self.snr_secondary),
            ("snr_primary_at_cr", self.snr_primary_at_cr),
        ] {
            if !(snr.is_finite() && snr >= 0.0) {
                return Err(Error::Config(format!(
                    "{name} must be finite and >= 0, got {snr}"
                )));
            }
        }
        // Rebuild to re-run the band invariants; the fields are public.
        BandConfig::new(
            self.band.total_bandwidth_hz,
            self.band.target_bandwidth_hz,
            self.band.white_bandwidth_hz,
        )?;
        Ok(())
    }

    /// Same config with a different detector mode.
    pub fn with_detector(mut self, detector: DetectorKind) -> Self {
        self.detector = detector;
        self
    }

    /// Same config with an explicit occupied-band SNR at the secondary
    /// transmitter.
    pub fn with_primary_snr(mut self, snr_primary_at_cr: f64) -> Self {
        self.snr_primary_at_cr = snr_primary_at_cr;
        self
    }
}

/// Precomputed constants of the closed-form throughput objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveCoefficients {
    /// Threshold growth rate in 1/sqrt(seconds):
    /// `sqrt(beta_k B_k/(beta_k+1)) * gamma_k`, with the square-root factor
    /// replaced by `sqrt(B_k)` in the known-variance mode.
    pub a_k: f64,
    /// Threshold offset `sqrt(2) (1+gamma_k) erfc_inv(2 target_pd)`.
    pub b_k: f64,
    /// Idle-band throughput weight `0.5 prior_h0 log2(1+snr_secondary)`.
    pub psi_k: f64,
    /// `psi_k` plus the occupied-band miss contribution
    /// `prior_h1 rate_h1 (1-target_pd)`.
    pub psi_tilde_k: f64,
    /// Rate over an idle band, `log2(1+snr_secondary)` in bits/s/Hz.
    pub rate_h0: f64,
    /// Rate over an occupied band,
    /// `log2(1 + snr_secondary/(1+snr_primary_at_cr))` in bits/s/Hz.
    pub rate_h1: f64,
}

/// Evaluates the coefficient identities for a config.
///
/// # Errors
///
/// Returns a config error when the config is invalid.
pub fn coefficients(cfg: &ThroughputConfig) -> Result<ObjectiveCoefficients> {
    cfg.validate()?;
    let gamma = cfg.snr_target;
    // beta_k B_k/(beta_k+1) with beta_k = B_i/B_k reduces to B_i B_k / B.
    let gain_sq = match cfg.detector {
        DetectorKind::Ged => {
            cfg.band.white_bandwidth_hz * cfg.band.target_bandwidth_hz
                / cfg.band.total_bandwidth_hz
        }
        DetectorKind::Ced => cfg.band.target_bandwidth_hz,
    };
    let rate_h0 = (1.0 + cfg.snr_secondary).log2();
    let rate_h1 = (1.0 + cfg.snr_secondary / (1.0 + cfg.snr_primary_at_cr)).log2();
    let psi_k = 0.5 * cfg.prior_h0 * rate_h0;
    Ok(ObjectiveCoefficients {
        a_k: gain_sq.sqrt() * gamma,
        b_k: std::f64::consts::SQRT_2 * (1.0 + gamma) * erfc_inv_raw(2.0 * cfg.target_pd),
        psi_k,
        psi_tilde_k: psi_k + cfg.prior_h1 * rate_h1 * (1.0 - cfg.target_pd),
        rate_h0,
        rate_h1,
    })
}

/// Threshold holding the target detection probability at sensing time
/// `To`: `a_k sqrt(To) + b_k`.
///
/// Caller guarantees `To > 0`.
pub fn threshold_schedule(coef: &ObjectiveCoefficients, sensing_time_s: f64) -> f64 {
    coef.a_k * sensing_time_s.sqrt() + coef.b_k
}

/// Normalized throughput at sensing time `To` within a frame of `Tf`
/// seconds:
/// `((Tf-To)/Tf) * (psi_k erf((a_k sqrt(To)+b_k)/sqrt(2)) + psi_tilde_k)`.
///
/// # Errors
///
/// Returns a domain error unless `0 < To <= Tf`.
pub fn objective(coef: &ObjectiveCoefficients, sensing_time_s: f64, frame_duration_s: f64) -> Result<f64> {
    if !(sensing_time_s > 0.0 && sensing_time_s <= frame_duration_s) {
        return Err(Error::Domain(format!(
            "sensing time must lie in (0, {frame_duration_s}], got {sensing_time_s}"
        )));
    }
    Ok(objective_raw(coef, sensing_time_s, frame_duration_s))
}

fn objective_raw(coef: &ObjectiveCoefficients, to: f64, tf: f64) -> f64 {
    let lambda = threshold_schedule(coef, to);
    (tf - to) / tf * (coef.psi_k * erf_raw(lambda / std::f64::consts::SQRT_2) + coef.psi_tilde_k)
}

/// Optimal sensing time and the operating point it implies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    /// Maximizing sensing time in seconds, inside (0, T_f].
    pub optimal_sensing_time_s: f64,
    /// Threshold at the optimum, `a_k sqrt(T_o) + b_k`.
    pub optimal_threshold: f64,
    /// Objective value at the optimum in bits/s/Hz.
    pub max_normalized_throughput: f64,
    /// Objective evaluations spent across the scan and the refinement.
    pub iterations: usize,
}

/// Number of points in the unimodality pre-scan.
const SCAN_POINTS: usize = 64;

/// Checks that a scanned profile has a single rise/fall transition.
///
/// Differences within `1e-9` relative of the largest magnitude count as
/// flat. A fall followed by a later rise means a second interior peak.
fn verify_unimodal(scan: &[(f64, f64)]) -> Result<()> {
    let max_abs = scan.iter().map(|&(_, f)| f.abs()).fold(0.0, f64::max);
    let tol = 1e-9 * max_abs.max(f64::MIN_POSITIVE);
    let mut fallen = false;
    for pair in scan.windows(2) {
        let d = pair[1].1 - pair[0].1;
        if d > tol && fallen {
            return Err(Error::NotUnimodal {
                scan: scan.to_vec(),
            });
        }
        if d < -tol {
            fallen = true;
        }
    }
    Ok(())
}

/// Maximizes the throughput objective over sensing times in
/// `(1/B_k, T_f]`.
///
/// A 64-point scan first verifies the profile is unimodal, then
/// golden-section search refines to `tol.abs_tol` seconds.
///
/// # Errors
///
/// Returns a config error for an invalid config or a frame shorter than one
/// target-band sample, a diagnostic error with the scan attached when the
/// profile is not unimodal, and a convergence error if the iteration budget
/// runs out.
pub fn optimize_sensing_time(
    cfg: &ThroughputConfig,
    tol: Tolerance,
) -> Result<OptimizationResult> {
    let coef = coefficients(cfg)?;
    let tf = cfg.frame_duration_s;
    let lo = 1.0 / cfg.band.target_bandwidth_hz;
    if lo >= tf {
        return Err(Error::Config(format!(
            "frame of {tf} s is shorter than one target-band sample ({lo} s)"
        )));
    }

    let evaluations = Cell::new(0usize);
    let f = |to: f64| {
        evaluations.set(evaluations.get() + 1);
        objective_raw(&coef, to, tf)
    };

    let step = (tf - lo) / (SCAN_POINTS - 1) as f64;
    let scan: Vec<(f64, f64)> = (0..SCAN_POINTS)
        .map(|i| {
            let to = lo + step * i as f64;
            (to, f(to))
        })
        .collect();
    verify_unimodal(&scan)?;

    let (to_star, f_star) = maximize_unimodal(f, lo, tf, tol)?;
    Ok(OptimizationResult {
        optimal_sensing_time_s: to_star,
        optimal_threshold: threshold_schedule(&coef, to_star),
        max_normalized_throughput: f_star,
        iterations: evaluations.get(),
    })
}

/// Runs one frame: sizes the sensing window by optimizing the throughput,
/// truncates the supplied window to `floor(T_o* B)` samples, computes the
/// ratio statistic and labels the sub-band against the scheduled threshold.
///
/// The statistic is always the ratio detector; the config's detector mode
/// only shapes the optimizer, since no true noise variance exists at
/// execution time.
///
/// # Errors
///
/// Returns an insufficient-samples error when the window is shorter than
/// the optimized sensing window, a config error when the window's sample
/// rate does not match the band, plus anything the optimizer returns.
pub fn run_frame(
    cfg: &ThroughputConfig,
    window: &SampleBuffer,
    tol: Tolerance,
) -> Result<(Decision, OptimizationResult)> {
    let result = optimize_sensing_time(cfg, tol)?;
    if (window.sample_rate_hz - cfg.band.total_bandwidth_hz).abs()
        > 1e-9 * cfg.band.total_bandwidth_hz
    {
        return Err(Error::Config(format!(
            "window sampled at {} Hz but the band spans {} Hz",
            window.sample_rate_hz, cfg.band.total_bandwidth_hz
        )));
    }
    let plan = plan_subbands(&cfg.band, result.optimal_sensing_time_s)?;
    if window.samples.len() < plan.n_samples {
        return Err(Error::InsufficientSamples {
            needed: plan.n_samples,
            have: window.samples.len(),
        });
    }
    let truncated = SampleBuffer::new(
        window.samples[..plan.n_samples].to_vec(),
        window.sample_rate_hz,
    )?;
    let energies = subband_energies(&unitary_dft(&truncated)?, &plan)?;
    let stat = ged_statistic(&energies, &plan)?;
    Ok((decide(stat, result.optimal_threshold), result))
}
