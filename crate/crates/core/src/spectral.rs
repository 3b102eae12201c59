//! Band geometry and the sampled-window frequency pipeline.
//!
//! A sensing window of `N_s` complex baseband samples taken at the total
//! bandwidth `B` is transformed with a unitary DFT, and the bins covering the
//! target sub-band and the known-white sub-band are averaged into the two
//! energies the detector consumes. Bin counts follow floor arithmetic on the
//! bandwidth ratios, so every geometry question is settled once in
//! [`SubbandPlan`] and everything downstream works in bin indices.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bandwidth split of the monitored spectrum, all in Hz.
///
/// The total band `B` is the target sub-band `B_k` plus the sub-band known
/// to be white `B_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandConfig {
    /// Total monitored bandwidth B, also the sampling rate.
    pub total_bandwidth_hz: f64,
    /// Bandwidth B_k of the sub-band under test.
    pub target_bandwidth_hz: f64,
    /// Bandwidth B_i of the sub-band known to be white.
    pub white_bandwidth_hz: f64,
}

impl BandConfig {
    /// Builds a band split, checking positivity and that the parts sum to
    /// the total (to 1e-9 relative).
    ///
    /// # Errors
    ///
    /// Returns a config error when any bandwidth is not strictly positive or
    /// the split does not add up.
    pub fn new(total_hz: f64, target_hz: f64, white_hz: f64) -> Result<Self> {
        for (name, v) in [("total", total_hz), ("target", target_hz), ("white", white_hz)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!(
                    "{name} bandwidth must be finite and > 0, got {v}"
                )));
            }
        }
        if ((target_hz + white_hz) - total_hz).abs() > 1e-9 * total_hz {
            return Err(Error::Config(format!(
                "bandwidth split must satisfy total = target + white, got {total_hz} vs {} + {}",
                target_hz, white_hz
            )));
        }
        Ok(Self {
            total_bandwidth_hz: total_hz,
            target_bandwidth_hz: target_hz,
            white_bandwidth_hz: white_hz,
        })
    }
}

/// Bin geometry of one sensing window.
///
/// `n_target_bins + n_white_bins = n_samples` always; `beta` is the white to
/// target bin-count ratio. The white bins occupy the half-open index ranges
/// in `white_ranges`, every other bin belongs to the target sub-band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubbandPlan {
    /// Window length N_s in samples (and DFT bins).
    pub n_samples: usize,
    /// Number of bins N_dk covering the target sub-band.
    pub n_target_bins: usize,
    /// Number of bins N_z covering the white sub-band.
    pub n_white_bins: usize,
    /// beta_k = N_z / N_dk.
    pub beta: f64,
    /// Sampling rate in Hz, equal to the total bandwidth.
    pub sample_rate_hz: f64,
    white_ranges: Vec<(usize, usize)>,
}

impl SubbandPlan {
    /// Builds a plan directly from explicit white-bin index ranges.
    ///
    /// Ranges are half-open `[lo, hi)`, must be sorted, non-overlapping and
    /// inside `[0, n_samples)`.
    ///
    /// # Errors
    ///
    /// Returns a degenerate-plan error when either sub-band ends up with
    /// zero bins, and a config error for malformed ranges or a non-positive
    /// sample rate.
    pub fn from_white_ranges(
        n_samples: usize,
        white_ranges: Vec<(usize, usize)>,
        sample_rate_hz: f64,
    ) -> Result<Self> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::Config(format!(
                "sample rate must be finite and > 0, got {sample_rate_hz}"
            )));
        }
        let mut prev_hi = 0usize;
        let mut n_white = 0usize;
        for &(lo, hi) in &white_ranges {
            if lo >= hi || hi > n_samples || (prev_hi > 0 && lo < prev_hi) {
                return Err(Error::Config(format!(
                    "white ranges must be sorted, non-overlapping, non-empty and within \
                     0..{n_samples}, got {white_ranges:?}"
                )));
            }
            n_white += hi - lo;
            prev_hi = hi;
        }
        let n_target = n_samples - n_white;
        if n_target == 0 || n_white == 0 {
            return Err(Error::DegeneratePlan(format!(
                "both sub-bands need at least one bin, got target {n_target}, white {n_white}"
            )));
        }
        Ok(Self {
            n_samples,
            n_target_bins: n_target,
            n_white_bins: n_white,
            beta: n_white as f64 / n_target as f64,
            sample_rate_hz,
            white_ranges,
        })
    }

    /// Plans a window whose target sub-band is centered at 0 Hz with the
    /// white sub-band split across both band edges.
    ///
    /// In unshifted DFT index order the white bins then form one contiguous
    /// middle block, which is what this returns.
    ///
    /// # Errors
    ///
    /// Same conditions as [`plan_subbands`].
    pub fn centered(cfg: &BandConfig, sensing_time_s: f64) -> Result<Self> {
        let (n_samples, n_target) = bin_counts(cfg, sensing_time_s)?;
        let n_white = n_samples - n_target;
        let start = n_target.div_ceil(2);
        Self::from_white_ranges(
            n_samples,
            vec![(start, start + n_white)],
            cfg.total_bandwidth_hz,
        )
    }

    /// White-bin index ranges, half-open and sorted.
    pub fn white_ranges(&self) -> &[(usize, usize)] {
        &self.white_ranges
    }

    pub(crate) fn is_white_bin(&self, idx: usize) -> bool {
        self.white_ranges
            .iter()
            .any(|&(lo, hi)| idx >= lo && idx < hi)
    }
}

/// Rounds `x` down to a bin count, absorbing float noise within 1e-9
/// relative of the next integer so that exact products like 0.0303 * 12e6
/// land on the intended count.
fn guarded_floor(x: f64) -> usize {
    let rounded = x.round();
    if (x - rounded).abs() <= 1e-9 * rounded.abs().max(1.0) {
        rounded as usize
    } else {
        x.floor() as usize
    }
}

fn bin_counts(cfg: &BandConfig, sensing_time_s: f64) -> Result<(usize, usize)> {
    if !(sensing_time_s.is_finite() && sensing_time_s > 0.0) {
        return Err(Error::Config(format!(
            "sensing time must be finite and > 0, got {sensing_time_s}"
        )));
    }
    let n_samples = guarded_floor(sensing_time_s * cfg.total_bandwidth_hz);
    let n_target = guarded_floor(
        cfg.target_bandwidth_hz / cfg.total_bandwidth_hz * n_samples as f64,
    );
    if n_target == 0 || n_samples - n_target == 0 {
        return Err(Error::DegeneratePlan(format!(
            "window of {n_samples} samples leaves target {n_target}, white {} bins",
            n_samples - n_target
        )));
    }
    Ok((n_samples, n_target))
}

/// Maps a band split and sensing duration to bin counts.
///
/// `N_s = floor(T_ts * B)` samples, of which the first
/// `N_dk = floor((B_k/B) * N_s)` bins cover the target sub-band and the rest
/// cover the white sub-band.
///
/// # Errors
///
/// Returns a degenerate-plan error when either sub-band maps to zero bins
/// and a config error for a non-positive duration.
pub fn plan_subbands(cfg: &BandConfig, sensing_time_s: f64) -> Result<SubbandPlan> {
    let (n_samples, n_target) = bin_counts(cfg, sensing_time_s)?;
    SubbandPlan::from_white_ranges(
        n_samples,
        vec![(n_target, n_samples)],
        cfg.total_bandwidth_hz,
    )
}

/// One sensing window of complex baseband samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBuffer {
    /// Complex baseband samples r[n].
    pub samples: Vec<Complex64>,
    /// Sampling rate in Hz.
    pub sample_rate_hz: f64,
}

impl SampleBuffer {
    /// Wraps samples taken at `sample_rate_hz`.
    ///
    /// # Errors
    ///
    /// Returns a degenerate-input error for an empty buffer and a config
    /// error for a non-positive rate.
    pub fn new(samples: Vec<Complex64>, sample_rate_hz: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::DegenerateInput("empty sample buffer".into()));
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::Config(format!(
                "sample rate must be finite and > 0, got {sample_rate_hz}"
            )));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
        })
    }
}

/// Average energies of the two sub-bands, in the same power units as the
/// input samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubbandEnergies {
    /// Mean |bin|^2 over the target sub-band bins.
    pub target_avg_energy: f64,
    /// Mean |bin|^2 over the white sub-band bins.
    pub white_avg_energy: f64,
}

static FFT_PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();

fn plan_fft(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = FFT_PLANNER
        .get_or_init(|| Mutex::new(FftPlanner::new()))
        .lock()
        .expect("FFT planner lock poisoned");
    if forward {
        planner.plan_fft_forward(len)
    } else {
        planner.plan_fft_inverse(len)
    }
}

fn transform(data: &[Complex64], forward: bool) -> Vec<Complex64> {
    let mut out = data.to_vec();
    plan_fft(out.len(), forward).process(&mut out);
    let scale = 1.0 / (out.len() as f64).sqrt();
    for v in &mut out {
        *v *= scale;
    }
    out
}

/// Unitary DFT of a sensing window: bin m holds
/// `sum_n r[n] exp(-2*pi*i*m*n/N) / sqrt(N)`.
///
/// Unitarity means total energy is preserved between domains.
///
/// # Errors
///
/// Returns a degenerate-input error for an empty buffer.
pub fn unitary_dft(buf: &SampleBuffer) -> Result<Vec<Complex64>> {
    if buf.samples.is_empty() {
        return Err(Error::DegenerateInput("empty sample buffer".into()));
    }
    Ok(transform(&buf.samples, true))
}

/// Inverse of [`unitary_dft`] on a bin sequence.
///
/// # Errors
///
/// Returns a degenerate-input error for an empty sequence.
pub fn unitary_idft(bins: &[Complex64]) -> Result<Vec<Complex64>> {
    if bins.is_empty() {
        return Err(Error::DegenerateInput("empty bin sequence".into()));
    }
    Ok(transform(bins, false))
}

/// Averages |bin|^2 separately over the target and white sub-bands of a
/// plan.
///
/// # Errors
///
/// Returns a bin-count mismatch when `bins` is not exactly `N_s` long and a
/// degenerate-input error when the white sub-band carries zero energy.
pub fn subband_energies(bins: &[Complex64], plan: &SubbandPlan) -> Result<SubbandEnergies> {
    if bins.len() != plan.n_samples {
        return Err(Error::BinCountMismatch {
            expected: plan.n_samples,
            got: bins.len(),
        });
    }
    let mut white_sum = 0.0;
    for &(lo, hi) in plan.white_ranges() {
        for bin in &bins[lo..hi] {
            white_sum += bin.norm_sqr();
        }
    }
    let total: f64 = bins.iter().map(|b| b.norm_sqr()).sum();
    let target_sum = total - white_sum;
    if white_sum == 0.0 {
        return Err(Error::DegenerateInput(
            "white sub-band carries zero energy".into(),
        ));
    }
    Ok(SubbandEnergies {
        target_avg_energy: target_sum / plan.n_target_bins as f64,
        white_avg_energy: white_sum / plan.n_white_bins as f64,
    })
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    sample_rate_hz: f64,
    length: usize,
}

/// Writes a window as interleaved little-endian f64 real/imag pairs plus a
/// `<path>.json` sidecar holding the sample rate and length.
///
/// # Errors
///
/// Propagates I/O failures.
pub fn write_sample_file(path: &Path, buf: &SampleBuffer) -> Result<()> {
    let mut raw = Vec::with_capacity(buf.samples.len() * 16);
    for s in &buf.samples {
        raw.extend_from_slice(&s.re.to_le_bytes());
        raw.extend_from_slice(&s.im.to_le_bytes());
    }
    let mut file = fs::File::create(path)?;
    file.write_all(&raw)?;
    let sidecar = Sidecar {
        sample_rate_hz: buf.sample_rate_hz,
        length: buf.samples.len(),
    };
    let json = serde_json::to_string_pretty(&sidecar)
        .map_err(|e| Error::MalformedFile(format!("sidecar serialization failed: {e}")))?;
    fs::write(sidecar_path(path), json)?;
    Ok(())
}

/// Reads a window written by [`write_sample_file`], validating the payload
/// length against the sidecar.
///
/// # Errors
///
/// Returns a malformed-file error when the sidecar does not parse or the
/// binary payload does not match its declared length; propagates I/O
/// failures.
pub fn read_sample_file(path: &Path) -> Result<SampleBuffer> {
    let sidecar: Sidecar = serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)
        .map_err(|e| Error::MalformedFile(format!("invalid sidecar: {e}")))?;
    let mut raw = Vec::new();
    fs::File::open(path)?.read_to_end(&mut raw)?;
    if raw.len() != sidecar.length * 16 {
        return Err(Error::MalformedFile(format!(
            "expected {} samples ({} bytes), found {} bytes",
            sidecar.length,
            sidecar.length * 16,
            raw.len()
        )));
    }
    let samples = raw
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[0..8].try_into().expect("chunk is 16 bytes")),
                f64::from_le_bytes(c[8..16].try_into().expect("chunk is 16 bytes")),
            )
        })
        .collect();
    SampleBuffer::new(samples, sidecar.sample_rate_hz)
}

fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut os = path.as_os_str().to_os_string();
    os.push(".json");
    os.into()
}
