//! Command-line front end for the gedsense toolkit.
//!
//! Four subcommands cover the workflow: `optimize` picks the sensing window
//! that maximizes secondary throughput, `roc` sweeps detection performance
//! across false-alarm targets, `sense` labels one captured window, and
//! `figures` writes the bundled study scenarios out as CSV data files.
//!
//! Exit codes are a stable contract: 0 means success (for `sense`, a white
//! verdict), 1 means the target sub-band is occupied, 2 means an invalid
//! configuration, 3 means an unreadable or malformed sample file.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use gedsense::{
    coefficients, decide, ged_statistic, objective, optimize_sensing_time, pf_theory,
    plan_subbands, read_sample_file, roc_sweep, subband_energies, threshold_for_pf,
    threshold_schedule, unitary_dft, BandConfig, ChannelKind, ChannelModel, DetectorKind, Label,
    NoiseModel, RocPoint, SampleBuffer, SignalModel, SubbandPlan, ThroughputConfig, Tolerance,
    TrialConfig,
};

const EXIT_NON_WHITE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_SAMPLE_FILE: u8 = 3;

const DEFAULT_TRIALS: usize = 2000;
const DEFAULT_SEED: u64 = 0;
const CURVE_POINTS: usize = 200;

#[derive(Parser)]
#[command(name = "gedsense", version, about = "Sub-band energy-ratio spectrum sensing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximize secondary throughput over the sensing window length.
    Optimize(OptimizeArgs),
    /// Monte Carlo sweep of detection performance across false-alarm targets.
    Roc(RocArgs),
    /// Label one captured sample window as white or non-white.
    Sense(SenseArgs),
    /// Write the bundled study scenarios to fig2.csv through fig6.csv.
    Figures(FiguresArgs),
}

#[derive(Args)]
struct OptimizeArgs {
    /// Experiment config, one JSON document.
    #[arg(long)]
    config: PathBuf,
    /// Optimize for the known-variance detector instead of the ratio detector.
    #[arg(long)]
    ced: bool,
    /// Curve file path; defaults to optimize.csv or optimize.json.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Args)]
struct RocArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides GEDSENSE_SEED and the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo population size per hypothesis.
    #[arg(long)]
    trials: Option<usize>,
    /// Worker pool size; results do not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
    /// Sweep the known-variance detector fed the nominal noise variance.
    #[arg(long)]
    ced: bool,
    /// Table file path; defaults to roc.csv or roc.json.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Args)]
struct SenseArgs {
    /// Binary sample file with its JSON sidecar next to it.
    file: PathBuf,
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct FiguresArgs {
    /// Directory the CSV files are written into.
    #[arg(long, default_value = ".")]
    output: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo population size for fig5 and fig6.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Figure numbers to write, e.g. --only 2,3,4; all five by default.
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Failure carrying the process exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    fn sample_file(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_SAMPLE_FILE,
            message: message.into(),
        }
    }
}

impl From<gedsense::Error> for Failure {
    fn from(err: gedsense::Error) -> Self {
        Failure::config(err.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Optimize(args) => cmd_optimize(args),
        Command::Roc(args) => cmd_roc(args),
        Command::Sense(args) => cmd_sense(args),
        Command::Figures(args) => cmd_figures(args),
    }
}

/// One JSON document covering every knob a command may need.
///
/// Frequencies are in Hz, durations in seconds, powers in mW and SNRs in dB;
/// dB values are converted to linear ratios internally. Optional sections
/// default to the reference study scenario: a clean channel at -20 dB SNR
/// against a 1 mW noise floor.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentConfig {
    band: BandSection,
    #[serde(default = "default_frame_duration")]
    frame_duration_s: f64,
    /// Window length for `roc` and `sense`; those commands require it.
    sensing_time_s: Option<f64>,
    #[serde(default = "default_snr_target_db")]
    snr_target_db: f64,
    #[serde(default = "default_snr_secondary_db")]
    snr_secondary_db: f64,
    #[serde(default = "default_prior_h0")]
    prior_h0: f64,
    #[serde(default = "default_target_pd")]
    target_pd: f64,
    /// False-alarm target the `sense` threshold is set for.
    #[serde(default = "default_target_pf")]
    target_pf: f64,
    #[serde(default = "default_roc_target_pfs")]
    roc_target_pfs: Vec<f64>,
    /// Splits the white sub-band across both band edges, for signals whose
    /// occupied band is centered at 0 Hz.
    #[serde(default)]
    centered_plan: bool,
    #[serde(default = "default_signal")]
    signal: SignalModel,
    #[serde(default = "default_channel")]
    channel: ChannelModel,
    #[serde(default = "default_noise")]
    noise: NoiseModel,
    trials: Option<usize>,
    seed: Option<u64>,
    output: Option<PathBuf>,
    format: Option<OutputFormat>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BandSection {
    total_bandwidth_hz: f64,
    target_bandwidth_hz: f64,
    white_bandwidth_hz: f64,
}

fn default_frame_duration() -> f64 {
    2.0
}
fn default_snr_target_db() -> f64 {
    -20.0
}
fn default_snr_secondary_db() -> f64 {
    20.0
}
fn default_prior_h0() -> f64 {
    0.8
}
fn default_target_pd() -> f64 {
    0.9
}
fn default_target_pf() -> f64 {
    0.1
}
fn default_roc_target_pfs() -> Vec<f64> {
    vec![0.01, 0.05, 0.1, 0.2, 0.5]
}
fn default_signal() -> SignalModel {
    SignalModel::FreqDomainGaussianized
}
fn default_channel() -> ChannelModel {
    ChannelModel {
        kind: ChannelKind::Awgn,
        signal_power_mw: 0.01,
    }
}
fn default_noise() -> NoiseModel {
    NoiseModel {
        nominal_variance_mw: 1.0,
        uncertainty_db: 0.0,
    }
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

impl ExperimentConfig {
    fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| {
            Failure::config(format!("cannot read config {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::config(format!("config {}: {e}", path.display())))
    }

    fn band(&self) -> CliResult<BandConfig> {
        Ok(BandConfig::new(
            self.band.total_bandwidth_hz,
            self.band.target_bandwidth_hz,
            self.band.white_bandwidth_hz,
        )?)
    }

    fn throughput(&self, detector: DetectorKind) -> CliResult<ThroughputConfig> {
        let cfg = ThroughputConfig::new(
            self.frame_duration_s,
            self.band()?,
            db_to_linear(self.snr_target_db),
            db_to_linear(self.snr_secondary_db),
            self.prior_h0,
            self.target_pd,
        )?
        .with_detector(detector);
        cfg.validate()?;
        Ok(cfg)
    }

    fn plan(&self) -> CliResult<SubbandPlan> {
        let sensing_time = self.sensing_time_s.ok_or_else(|| {
            Failure::config("sensing_time_s is required for this command")
        })?;
        let band = self.band()?;
        Ok(if self.centered_plan {
            SubbandPlan::centered(&band, sensing_time)?
        } else {
            plan_subbands(&band, sensing_time)?
        })
    }

    fn trial(&self) -> CliResult<TrialConfig> {
        let cfg = TrialConfig {
            signal: self.signal.clone(),
            channel: self.channel,
            noise: self.noise,
            plan: self.plan()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Flag beats the GEDSENSE_SEED environment variable, which beats the config.
fn resolve_seed(flag: Option<u64>, config: Option<u64>) -> CliResult<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    if let Ok(raw) = std::env::var("GEDSENSE_SEED") {
        return raw.trim().parse().map_err(|_| {
            Failure::config(format!("GEDSENSE_SEED must be an unsigned 64-bit integer, got {raw:?}"))
        });
    }
    Ok(config.unwrap_or(DEFAULT_SEED))
}

fn resolve_trials(flag: Option<usize>, config: Option<usize>) -> usize {
    flag.or(config).unwrap_or(DEFAULT_TRIALS)
}

/// Runs `body` on a pool of the requested size, or inline on the default one.
fn with_pool<T: Send>(jobs: Option<usize>, body: impl FnOnce() -> T + Send) -> CliResult<T> {
    match jobs {
        None => Ok(body()),
        Some(0) => Err(Failure::config("jobs must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::config(format!("cannot build worker pool: {e}")))?;
            Ok(pool.install(body))
        }
    }
}

fn write_output(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents)
        .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display())))
}

fn emit_rows<T: Serialize>(
    path: &Path,
    format: OutputFormat,
    header: &str,
    csv_row: impl Fn(&T) -> String,
    rows: &[T],
) -> CliResult<()> {
    let contents = match format {
        OutputFormat::Csv => {
            let mut out = String::with_capacity(rows.len() * 64);
            out.push_str(header);
            out.push('\n');
            for row in rows {
                out.push_str(&csv_row(row));
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => {
            let mut out = serde_json::to_string_pretty(rows)
                .map_err(|e| Failure::config(format!("serialization failed: {e}")))?;
            out.push('\n');
            out
        }
    };
    write_output(path, &contents)
}

#[derive(Serialize)]
struct CurveRow {
    sensing_time_s: f64,
    threshold: f64,
    normalized_throughput: f64,
}

const CURVE_HEADER: &str = "sensing_time_s,threshold,normalized_throughput";

fn curve_csv_row(row: &CurveRow) -> String {
    format!(
        "{},{},{}",
        row.sensing_time_s, row.threshold, row.normalized_throughput
    )
}

/// Evaluates the closed-form objective on an even grid over (1/B_k, T_f].
fn throughput_curve(cfg: &ThroughputConfig) -> CliResult<Vec<CurveRow>> {
    let coef = coefficients(cfg)?;
    let lo = 1.0 / cfg.band.target_bandwidth_hz;
    let hi = cfg.frame_duration_s;
    if lo >= hi {
        return Err(Failure::config(format!(
            "frame duration {hi} s leaves no room for a window longer than 1/B_k = {lo} s"
        )));
    }
    let mut rows = Vec::with_capacity(CURVE_POINTS);
    for i in 0..CURVE_POINTS {
        let t = lo + (hi - lo) * i as f64 / (CURVE_POINTS - 1) as f64;
        rows.push(CurveRow {
            sensing_time_s: t,
            threshold: threshold_schedule(&coef, t),
            normalized_throughput: objective(&coef, t, hi)?,
        });
    }
    Ok(rows)
}

fn cmd_optimize(args: OptimizeArgs) -> CliResult<ExitCode> {
    let config = ExperimentConfig::load(&args.config)?;
    let detector = if args.ced { DetectorKind::Ced } else { DetectorKind::Ged };
    let cfg = config.throughput(detector)?;

    let result = optimize_sensing_time(&cfg, Tolerance::default())?;
    let rows = throughput_curve(&cfg)?;

    let format = args.format.or(config.format).unwrap_or(OutputFormat::Csv);
    let path = args
        .output
        .or(config.output)
        .unwrap_or_else(|| PathBuf::from(format!("optimize.{}", format.extension())));
    emit_rows(&path, format, CURVE_HEADER, curve_csv_row, &rows)?;

    let summary = serde_json::json!({
        "detector": detector,
        "frame_duration_s": cfg.frame_duration_s,
        "optimal_sensing_time_s": result.optimal_sensing_time_s,
        "optimal_threshold": result.optimal_threshold,
        "max_normalized_throughput": result.max_normalized_throughput,
        "objective_evaluations": result.iterations,
        "curve_file": path,
    });
    println!("{summary}");
    Ok(ExitCode::SUCCESS)
}

/// Operating point with theory columns and 95% confidence bounds.
#[derive(Serialize)]
struct RocRow {
    target_pf: f64,
    threshold: f64,
    theory_pf: f64,
    theory_pd: f64,
    empirical_pf: f64,
    pf_std_err: f64,
    pf_ci95_lo: f64,
    pf_ci95_hi: f64,
    empirical_pd: f64,
    pd_std_err: f64,
    pd_ci95_lo: f64,
    pd_ci95_hi: f64,
}

const ROC_HEADER: &str = "target_pf,threshold,theory_pf,theory_pd,empirical_pf,pf_std_err,\
                          pf_ci95_lo,pf_ci95_hi,empirical_pd,pd_std_err,pd_ci95_lo,pd_ci95_hi";

fn ci95(p: f64, std_err: f64) -> (f64, f64) {
    ((p - 1.96 * std_err).max(0.0), (p + 1.96 * std_err).min(1.0))
}

impl From<&RocPoint> for RocRow {
    fn from(point: &RocPoint) -> Self {
        let (pf_ci95_lo, pf_ci95_hi) = ci95(point.empirical_pf, point.pf_std_err);
        let (pd_ci95_lo, pd_ci95_hi) = ci95(point.empirical_pd, point.pd_std_err);
        RocRow {
            target_pf: point.target_pf,
            threshold: point.threshold,
            theory_pf: pf_theory(point.threshold),
            theory_pd: point.theory_pd,
            empirical_pf: point.empirical_pf,
            pf_std_err: point.pf_std_err,
            pf_ci95_lo,
            pf_ci95_hi,
            empirical_pd: point.empirical_pd,
            pd_std_err: point.pd_std_err,
            pd_ci95_lo,
            pd_ci95_hi,
        }
    }
}

fn roc_csv_row(row: &RocRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        row.target_pf,
        row.threshold,
        row.theory_pf,
        row.theory_pd,
        row.empirical_pf,
        row.pf_std_err,
        row.pf_ci95_lo,
        row.pf_ci95_hi,
        row.empirical_pd,
        row.pd_std_err,
        row.pd_ci95_lo,
        row.pd_ci95_hi
    )
}

fn cmd_roc(args: RocArgs) -> CliResult<ExitCode> {
    let config = ExperimentConfig::load(&args.config)?;
    let trial = config.trial()?;
    let detector = if args.ced { DetectorKind::Ced } else { DetectorKind::Ged };
    let seed = resolve_seed(args.seed, config.seed)?;
    let trials = resolve_trials(args.trials, config.trials);

    let targets = config.roc_target_pfs.clone();
    let points =
        with_pool(args.jobs, || roc_sweep(&trial, detector, &targets, trials, seed))??;
    let rows: Vec<RocRow> = points.iter().map(RocRow::from).collect();

    let format = args.format.or(config.format).unwrap_or(OutputFormat::Csv);
    let path = args
        .output
        .or(config.output)
        .unwrap_or_else(|| PathBuf::from(format!("roc.{}", format.extension())));
    emit_rows(&path, format, ROC_HEADER, roc_csv_row, &rows)?;

    let summary = serde_json::json!({
        "detector": detector,
        "trials": trials,
        "seed": seed,
        "points": rows.len(),
        "output": path,
    });
    println!("{summary}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_sense(args: SenseArgs) -> CliResult<ExitCode> {
    let config = ExperimentConfig::load(&args.config)?;
    let plan = config.plan()?;
    let threshold = threshold_for_pf(config.target_pf)?;

    let buffer = read_sample_file(&args.file).map_err(|e| match e {
        gedsense::Error::MalformedFile(_) | gedsense::Error::Io(_) => {
            Failure::sample_file(format!("{}: {e}", args.file.display()))
        }
        other => Failure::from(other),
    })?;
    let rate_gap = (buffer.sample_rate_hz - plan.sample_rate_hz).abs();
    if rate_gap > 1e-9 * plan.sample_rate_hz {
        return Err(Failure::config(format!(
            "sample rate {} Hz in {} does not match the configured total bandwidth {} Hz",
            buffer.sample_rate_hz,
            args.file.display(),
            plan.sample_rate_hz
        )));
    }
    if buffer.samples.len() < plan.n_samples {
        return Err(Failure::config(format!(
            "window needs {} samples, file holds {}",
            plan.n_samples,
            buffer.samples.len()
        )));
    }
    let window = SampleBuffer::new(
        buffer.samples[..plan.n_samples].to_vec(),
        buffer.sample_rate_hz,
    )?;

    let bins = unitary_dft(&window)?;
    let energies = subband_energies(&bins, &plan)?;
    let statistic = ged_statistic(&energies, &plan)?;
    let decision = decide(statistic, threshold);

    let report = serde_json::json!({
        "statistic": decision.statistic.value,
        "threshold": decision.threshold,
        "label": decision.label,
    });
    println!("{report}");
    Ok(match decision.label {
        Label::White => ExitCode::SUCCESS,
        Label::NonWhite => ExitCode::from(EXIT_NON_WHITE),
    })
}

/// Reference study scenario: two 6 MHz TV bands, -20 dB design SNR, 20 dB
/// secondary link, idle prior 0.8, detection target 0.9.
fn reference_throughput(frame_duration_s: f64, detector: DetectorKind) -> CliResult<ThroughputConfig> {
    let band = BandConfig::new(12.0e6, 6.0e6, 6.0e6)?;
    Ok(ThroughputConfig::new(frame_duration_s, band, 0.01, 100.0, 0.8, 0.9)?
        .with_detector(detector))
}

fn fig2(dir: &Path) -> CliResult<PathBuf> {
    let mut out = String::from("frame_duration_s,sensing_time_s,threshold,normalized_throughput\n");
    for frame in [0.1, 0.3, 0.6, 1.2, 2.0] {
        let cfg = reference_throughput(frame, DetectorKind::Ged)?;
        for row in throughput_curve(&cfg)? {
            writeln!(
                out,
                "{},{},{},{}",
                frame, row.sensing_time_s, row.threshold, row.normalized_throughput
            )
            .expect("string write");
        }
    }
    let path = dir.join("fig2.csv");
    write_output(&path, &out)?;
    Ok(path)
}

fn fig3(dir: &Path) -> CliResult<PathBuf> {
    let mut out = String::from(
        "target_bandwidth_hz,white_bandwidth_hz,sensing_time_s,threshold,normalized_throughput\n",
    );
    for (target_hz, white_hz) in [(10.0e6, 10.0e6), (10.0e6, 6.0e6)] {
        let band = BandConfig::new(target_hz + white_hz, target_hz, white_hz)?;
        let cfg = ThroughputConfig::new(1.2, band, 0.01, 100.0, 0.8, 0.9)?;
        for row in throughput_curve(&cfg)? {
            writeln!(
                out,
                "{},{},{},{},{}",
                target_hz, white_hz, row.sensing_time_s, row.threshold, row.normalized_throughput
            )
            .expect("string write");
        }
    }
    let path = dir.join("fig3.csv");
    write_output(&path, &out)?;
    Ok(path)
}

fn fig4(dir: &Path) -> CliResult<PathBuf> {
    let mut out = String::from("detector,sensing_time_s,threshold,normalized_throughput\n");
    for detector in [DetectorKind::Ged, DetectorKind::Ced] {
        let cfg = reference_throughput(2.0, detector)?;
        let name = match detector {
            DetectorKind::Ged => "ged",
            DetectorKind::Ced => "ced",
        };
        for row in throughput_curve(&cfg)? {
            writeln!(
                out,
                "{},{},{},{}",
                name, row.sensing_time_s, row.threshold, row.normalized_throughput
            )
            .expect("string write");
        }
    }
    let path = dir.join("fig4.csv");
    write_output(&path, &out)?;
    Ok(path)
}

const FIG5_PF_GRID: [f64; 10] = [0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.5, 0.7, 0.9];

/// Masked QPSK over a clean channel, 6 MHz target and 4.28 MHz white
/// sub-band, 30.3 ms window, -20 dB SNR.
fn fig5(dir: &Path, trials: usize, seed: u64) -> CliResult<PathBuf> {
    let band = BandConfig::new(10.28e6, 6.0e6, 4.28e6)?;
    let trial = TrialConfig {
        signal: SignalModel::QpskTimeDomain,
        channel: ChannelModel {
            kind: ChannelKind::Awgn,
            signal_power_mw: 0.01,
        },
        noise: NoiseModel {
            nominal_variance_mw: 1.0,
            uncertainty_db: 0.0,
        },
        plan: plan_subbands(&band, 30.3e-3)?,
    };
    let points = roc_sweep(&trial, DetectorKind::Ged, &FIG5_PF_GRID, trials, seed)?;
    let rows: Vec<RocRow> = points.iter().map(RocRow::from).collect();

    let mut out = String::from(ROC_HEADER);
    out.push('\n');
    for row in &rows {
        out.push_str(&roc_csv_row(row));
        out.push('\n');
    }
    let path = dir.join("fig5.csv");
    write_output(&path, &out)?;
    Ok(path)
}

const FIG6_PF_GRID: [f64; 9] = [0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9];

/// Ratio detector under a 2 dB noise-variance drift: bin ratios 1 and 0.71
/// on a clean channel, plus block fading at bin ratio 1.
fn fig6(dir: &Path, trials: usize, seed: u64) -> CliResult<PathBuf> {
    let scenarios: [(&str, BandConfig, ChannelKind); 3] = [
        ("awgn", BandConfig::new(12.0e6, 6.0e6, 6.0e6)?, ChannelKind::Awgn),
        ("awgn", BandConfig::new(10.28e6, 6.0e6, 4.28e6)?, ChannelKind::Awgn),
        ("rayleigh_block", BandConfig::new(12.0e6, 6.0e6, 6.0e6)?, ChannelKind::RayleighBlock),
    ];
    let mut out = String::from(
        "bin_ratio_beta,channel,target_pf,threshold,empirical_pf,pf_std_err,\
         empirical_pd,pd_std_err,theory_pd_nominal\n",
    );
    for (channel_name, band, kind) in scenarios {
        let trial = TrialConfig {
            signal: SignalModel::FreqDomainGaussianized,
            channel: ChannelModel {
                kind,
                signal_power_mw: 0.01,
            },
            noise: NoiseModel {
                nominal_variance_mw: 1.0,
                uncertainty_db: 2.0,
            },
            plan: plan_subbands(&band, 30.3e-3)?,
        };
        let beta = trial.plan.beta;
        let points = roc_sweep(&trial, DetectorKind::Ged, &FIG6_PF_GRID, trials, seed)?;
        for p in &points {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                beta,
                channel_name,
                p.target_pf,
                p.threshold,
                p.empirical_pf,
                p.pf_std_err,
                p.empirical_pd,
                p.pd_std_err,
                p.theory_pd
            )
            .expect("string write");
        }
    }
    let path = dir.join("fig6.csv");
    write_output(&path, &out)?;
    Ok(path)
}

fn cmd_figures(args: FiguresArgs) -> CliResult<ExitCode> {
    let selected = |n: u8| args.only.is_empty() || args.only.contains(&n);
    for n in &args.only {
        if !(2..=6).contains(n) {
            return Err(Failure::config(format!("no figure {n}; valid numbers are 2..6")));
        }
    }
    fs::create_dir_all(&args.output).map_err(|e| {
        Failure::config(format!("cannot create {}: {e}", args.output.display()))
    })?;
    let seed = resolve_seed(args.seed, None)?;
    let trials = resolve_trials(args.trials, None);

    let mut files = Vec::new();
    if selected(2) {
        files.push(fig2(&args.output)?);
    }
    if selected(3) {
        files.push(fig3(&args.output)?);
    }
    if selected(4) {
        files.push(fig4(&args.output)?);
    }
    if selected(5) {
        files.push(with_pool(args.jobs, || fig5(&args.output, trials, seed))??);
    }
    if selected(6) {
        files.push(with_pool(args.jobs, || fig6(&args.output, trials, seed))??);
    }

    let summary = serde_json::json!({
        "output_dir": args.output,
        "files": files,
        "trials": trials,
        "seed": seed,
    });
    println!("{summary}");
    Ok(ExitCode::SUCCESS)
}
