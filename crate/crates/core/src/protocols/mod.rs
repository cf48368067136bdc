//! The three-step analyzers (QND parity stages, then linear-optical sign
//! readout), the exhaustive completeness verifier, table emitters and the
//! Monte Carlo noise study.

mod montecarlo;
mod pipeline;
mod tables;
mod verify;

pub use crate::optics::decode_signs;
pub use montecarlo::{
    monte_carlo, predicted_misclassification, wilson_interval, MonteCarloReport, RateEstimate,
    StateRate, Z_95,
};
pub use pipeline::{
    hbsa_analyze, hgsa3_analyze, hgsa_n_analyze, probe_ids, qnd_readout, AnalyzerConfig,
    ConfigEcho, ProbeReadout, StageOrder, Transcript, DEFAULT_ALPHA, DEFAULT_THETA,
};
pub use tables::{
    emit_detection_table, emit_signature_table, DetectionGroup, DetectionTable, SignatureRow,
    SignatureTable,
};
pub use verify::{
    explore_branches, verify_complete, verify_state, BranchLeaf, StateVerdict, VerificationReport,
    MAX_VERIFY_PHOTONS,
};
