//! Test statistic, closed-form operating characteristics and the decision
//! rule.
//!
//! The statistic compares the target sub-band's average energy against the
//! white sub-band's, so any common scaling of the input samples cancels.
//! Under noise-only input it is asymptotically standard normal, which gives
//! the false-alarm probability no dependence on the band geometry; under a
//! signal of linear SNR gamma it shifts to mean
//! `sqrt(N_dk * beta/(beta+1)) * gamma` with standard deviation `1 + gamma`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{erfc_inv_raw, erfc_raw};
use crate::spectral::{SubbandEnergies, SubbandPlan};

/// Which statistic a pipeline runs: the ratio detector, or the classical
/// energy detector that trusts a known noise variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectorKind {
    Ged,
    Ced,
}

/// Sub-band label produced by the decision rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    White,
    NonWhite,
}

/// The ratio statistic for one sensing window, with the plan it was
/// computed under.
#[derive(Debug, Clone, PartialEq)]
pub struct GedStatistic {
    /// Statistic value; always above `-sqrt(N_dk * beta/(beta+1))` because
    /// the energy ratio is positive.
    pub value: f64,
    /// Bin geometry the statistic was computed under.
    pub plan: SubbandPlan,
}

/// Normal approximation of the statistic under a present signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H1Theory {
    /// Linear SNR gamma of the signal in the target sub-band.
    pub snr_gamma: f64,
    /// Mean of the statistic.
    pub mean: f64,
    /// Standard deviation of the statistic, equal to `1 + snr_gamma`.
    pub std_dev: f64,
}

impl H1Theory {
    /// Theory for the ratio detector under `plan`:
    /// mean `sqrt(N_dk * beta/(beta+1)) * gamma`.
    ///
    /// # Errors
    ///
    /// Returns a domain error for a negative or non-finite SNR.
    pub fn from_plan(plan: &SubbandPlan, snr_gamma: f64) -> Result<Self> {
        Self::with_mean(statistic_gain(plan) * snr_gamma, snr_gamma)
    }

    /// Theory for the known-noise-variance limit: mean `sqrt(N_dk) * gamma`.
    ///
    /// This is the beta -> infinity limit of [`H1Theory::from_plan`].
    ///
    /// # Errors
    ///
    /// Returns a domain error for a negative or non-finite SNR.
    pub fn ced_limit(n_target_bins: usize, snr_gamma: f64) -> Result<Self> {
        Self::with_mean((n_target_bins as f64).sqrt() * snr_gamma, snr_gamma)
    }

    /// Theory with an explicitly supplied mean.
    ///
    /// # Errors
    ///
    /// Returns a domain error for a negative or non-finite SNR, or a
    /// non-finite mean.
    pub fn with_mean(mean: f64, snr_gamma: f64) -> Result<Self> {
        if !(snr_gamma.is_finite() && snr_gamma >= 0.0) {
            return Err(Error::Domain(format!(
                "SNR must be finite and >= 0, got {snr_gamma}"
            )));
        }
        if !mean.is_finite() {
            return Err(Error::Domain(format!("mean must be finite, got {mean}")));
        }
        Ok(Self {
            snr_gamma,
            mean,
            std_dev: 1.0 + snr_gamma,
        })
    }
}

/// Decision for one sub-band, keeping the evidence it was made from.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub label: Label,
    pub statistic: GedStatistic,
    pub threshold: f64,
}

/// `sqrt(N_dk * beta/(beta+1))`, computed as `sqrt(N_dk * N_z / N_s)` so the
/// intermediate products stay exact integers.
pub(crate) fn statistic_gain(plan: &SubbandPlan) -> f64 {
    ((plan.n_target_bins * plan.n_white_bins) as f64 / plan.n_samples as f64).sqrt()
}

/// Ratio statistic `sqrt(N_dk * beta/(beta+1)) * (M_dk/M_z - 1)`.
///
/// # Errors
///
/// Returns a degenerate-input error unless both energies are finite and the
/// white average is strictly positive.
pub fn ged_statistic(e: &SubbandEnergies, plan: &SubbandPlan) -> Result<GedStatistic> {
    if !(e.white_avg_energy.is_finite() && e.white_avg_energy > 0.0)
        || !e.target_avg_energy.is_finite()
    {
        return Err(Error::DegenerateInput(format!(
            "white sub-band average energy must be finite and > 0, got {} (target {})",
            e.white_avg_energy, e.target_avg_energy
        )));
    }
    Ok(GedStatistic {
        value: statistic_gain(plan) * (e.target_avg_energy / e.white_avg_energy - 1.0),
        plan: plan.clone(),
    })
}

/// Classical statistic `sqrt(N_dk) * (M_dk/sigma^2 - 1)` against a known
/// noise variance.
///
/// # Errors
///
/// Returns a domain error unless the variance is finite and strictly
/// positive.
pub fn ced_statistic(e: &SubbandEnergies, noise_variance: f64, plan: &SubbandPlan) -> Result<f64> {
    if !(noise_variance.is_finite() && noise_variance > 0.0) {
        return Err(Error::Domain(format!(
            "noise variance must be finite and > 0, got {noise_variance}"
        )));
    }
    Ok((plan.n_target_bins as f64).sqrt() * (e.target_avg_energy / noise_variance - 1.0))
}

/// False-alarm probability `0.5 * erfc(lambda / sqrt(2))` of the threshold
/// test on a standard-normal statistic.
///
/// Depends only on the threshold, never on the band geometry.
pub fn pf_theory(threshold_lambda: f64) -> f64 {
    0.5 * erfc_raw(threshold_lambda / std::f64::consts::SQRT_2)
}

/// Detection probability
/// `0.5 * erfc((lambda - mean) / (sqrt(2) * std_dev))` under `h1`.
pub fn pd_theory(threshold_lambda: f64, h1: &H1Theory) -> f64 {
    0.5 * erfc_raw((threshold_lambda - h1.mean) / (std::f64::consts::SQRT_2 * h1.std_dev))
}

/// Threshold achieving a target false-alarm probability:
/// `lambda* = sqrt(2) * erfc_inv(2 * P_f)`.
///
/// # Errors
///
/// Returns a domain error unless `0 < target_pf < 1`.
pub fn threshold_for_pf(target_pf: f64) -> Result<f64> {
    if !(target_pf > 0.0 && target_pf < 1.0) {
        return Err(Error::Domain(format!(
            "target false-alarm probability must lie in (0, 1), got {target_pf}"
        )));
    }
    Ok(std::f64::consts::SQRT_2 * erfc_inv_raw(2.0 * target_pf))
}

/// Detection loss of the ratio detector relative to its known-variance
/// limit at the threshold for `target_pf`:
/// `eta = 1 - Pd(h1) / Pd(ced limit)`.
///
/// `h1` supplies the ratio detector's operating point; the limit is rebuilt
/// from the plan at the same SNR. Zero SNR makes both detection
/// probabilities coincide, so the loss is exactly zero there.
///
/// # Errors
///
/// Returns a domain error unless `0 < target_pf < 1`.
pub fn detection_loss_eta(target_pf: f64, h1: &H1Theory, plan: &SubbandPlan) -> Result<f64> {
    let lambda = threshold_for_pf(target_pf)?;
    let ced = H1Theory::ced_limit(plan.n_target_bins, h1.snr_gamma)?;
    Ok(1.0 - pd_theory(lambda, h1) / pd_theory(lambda, &ced))
}

/// Labels a sub-band white when the statistic falls strictly below the
/// threshold. A statistic exactly at the threshold is non-white.
pub fn decide(stat: GedStatistic, threshold: f64) -> Decision {
    let label = if stat.value < threshold {
        Label::White
    } else {
        Label::NonWhite
    };
    Decision {
        label,
        statistic: stat,
        threshold,
    }
}
