mod error;
pub mod detector;
pub mod numerics;
pub mod optimizer;
pub mod simulator;
pub mod spectral;

pub use detector::{
    ced_statistic, decide, detection_loss_eta, ged_statistic, pd_theory, pf_theory,
    threshold_for_pf, Decision, DetectorKind, GedStatistic, H1Theory, Label,
};
pub use error::{Error, Result};
pub use numerics::{erf, erfc, erfc_inv, maximize_unimodal, Tolerance};
pub use optimizer::{
    coefficients, objective, optimize_sensing_time, run_frame, threshold_schedule,
    ObjectiveCoefficients, OptimizationResult, ThroughputConfig,
};
pub use simulator::{
    generate_trial, monte_carlo, rayleigh_vs_awgn_ordering, roc_sweep, simulate_statistics,
    ChannelKind, ChannelModel, Hypothesis, MonteCarloReport, NoiseModel, RocPoint, SignalModel,
    StatisticSamples, TrialConfig,
};
pub use spectral::{
    plan_subbands, read_sample_file, subband_energies, unitary_dft, unitary_idft,
    write_sample_file, BandConfig, SampleBuffer, SubbandEnergies, SubbandPlan,
};
