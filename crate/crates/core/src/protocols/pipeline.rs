use serde::Serialize;

use crate::error::{Error, Result};
use crate::kerrqnd::{homodyne_measure, parity_gadget, HomodyneModel, JointState, ProbeRegister};
use crate::optics::{apply_readout_optics, decode_signs, sample_outcome, DetectorOutcome};
use crate::rng::SeedStreams;
use crate::statecore::{check_photon_count, BitString, Dof, GhzLabel, HyperLabel, PhotonState};

pub const DEFAULT_THETA: f64 = 0.01;
pub const DEFAULT_ALPHA: f64 = 5000.0;

/// Which QND stage runs first. The stages act on different DOFs, so the
/// decoded label must not depend on this.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StageOrder {
    #[default]
    PolarizationFirst,
    SpatialFirst,
}

impl StageOrder {
    pub fn dofs(self) -> [Dof; 2] {
        match self {
            StageOrder::PolarizationFirst => [Dof::Polarization, Dof::Spatial],
            StageOrder::SpatialFirst => [Dof::Spatial, Dof::Polarization],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzerConfig {
    pub theta: f64,
    pub alpha: f64,
    pub model: HomodyneModel,
    pub seed: u64,
    /// Monte Carlo trials used by noisy verification.
    pub trials: u64,
    pub stage_order: StageOrder,
}

impl Default for AnalyzerConfig {
    fn default() -> Self {
        Self {
            theta: DEFAULT_THETA,
            alpha: DEFAULT_ALPHA,
            model: HomodyneModel::Ideal,
            seed: 0,
            trials: 10_000,
            stage_order: StageOrder::default(),
        }
    }
}

impl AnalyzerConfig {
    /// `αθ²`.
    pub fn feasibility(&self) -> f64 {
        self.alpha * self.theta * self.theta
    }

    pub(crate) fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            theta: self.theta,
            alpha: self.alpha,
            model: self.model,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub theta: f64,
    pub alpha: f64,
    pub model: HomodyneModel,
    pub seed: u64,
}

/// One homodyne result: `{"probe":"alpha1","magnitude":1,"p":1.0}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReadout {
    pub probe: String,
    pub magnitude: u32,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transcript {
    pub probe_readouts: Vec<ProbeReadout>,
    #[serde(serialize_with = "serialize_records")]
    pub detector_outcome: DetectorOutcome,
    pub config: ConfigEcho,
}

fn serialize_records<S: serde::Serializer>(
    outcome: &DetectorOutcome,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    outcome.records.serialize(serializer)
}

impl Transcript {
    pub fn magnitudes(&self, dof: Dof) -> Vec<u32> {
        let prefix = probe_prefix(dof);
        self.probe_readouts
            .iter()
            .filter(|r| r.probe.starts_with(prefix))
            .map(|r| r.magnitude)
            .collect()
    }
}

fn probe_prefix(dof: Dof) -> &'static str {
    match dof {
        Dof::Polarization => "alpha",
        Dof::Spatial => "beta",
    }
}

/// `alpha1 … alpha{n-1}` for polarization, `beta1 …` for spatial modes.
pub fn probe_ids(n: usize, dof: Dof) -> Vec<String> {
    (1..n)
        .map(|k| format!("{}{k}", probe_prefix(dof)))
        .collect()
}

pub(crate) fn make_probes(n: usize, cfg: &AnalyzerConfig) -> Result<Vec<ProbeRegister>> {
    Dof::ALL
        .iter()
        .flat_map(|&dof| probe_ids(n, dof))
        .map(|id| ProbeRegister::new(id, cfg.theta, cfg.alpha))
        .collect()
}

/// Couples probe `k` to photons `(A, k)` in `dof`.
pub(crate) fn qnd_stage(joint: &JointState, dof: Dof) -> Result<JointState> {
    let mut out = joint.clone();
    for (k, id) in probe_ids(joint.n_photons(), dof).iter().enumerate() {
        out = parity_gadget(&out, id, 0, k + 1, dof)?;
    }
    Ok(out)
}

/// `(0, m₁, …, m_{n−1})`: photon A is the reference, so a nonzero shift on
/// probe `k` means photon `k` disagrees with A.
pub(crate) fn bits_from_magnitudes(magnitudes: &[u32]) -> Result<BitString> {
    let bits: Vec<u8> = std::iter::once(0)
        .chain(magnitudes.iter().map(|&m| u8::from(m != 0)))
        .collect();
    BitString::from_bits(&bits)
}

pub(crate) fn check_input(n: usize, state: &PhotonState) -> Result<()> {
    check_photon_count(n, 2)?;
    if state.n_photons() != n {
        return Err(Error::arg(format!(
            "expected a {n}-photon state, got {} photons",
            state.n_photons()
        )));
    }
    Ok(())
}

/// Runs the parity-QND stages for `dofs` (in that order) and reads every
/// probe out, returning the readouts and the photons left behind.
pub fn qnd_readout(
    n: usize,
    state: &PhotonState,
    dofs: &[Dof],
    cfg: &AnalyzerConfig,
) -> Result<(Vec<ProbeReadout>, PhotonState)> {
    check_input(n, state)?;
    let streams = SeedStreams::new(cfg.seed);
    let probes = make_probes(n, cfg)?
        .into_iter()
        .filter(|p| dofs.iter().any(|&d| p.id.starts_with(probe_prefix(d))))
        .collect();
    let mut joint = JointState::new(state, probes)?;
    let mut readouts = Vec::with_capacity(dofs.len() * (n - 1));
    for &dof in dofs {
        joint = qnd_stage(&joint, dof)?;
        for id in probe_ids(n, dof) {
            let r = homodyne_measure(&joint, &id, cfg.model, &mut streams.stream(&id))?;
            readouts.push(ProbeReadout {
                probe: id,
                magnitude: r.magnitude,
                p: r.probability,
            });
            joint = r.collapsed;
        }
    }
    Ok((readouts, joint.into_photon_state()?))
}

/// N-photon analysis: `2(n−1)` parity QNDs, then BS+WP and detection.
/// Randomness comes from `cfg.seed`, one named stream per probe plus one for
/// the detectors.
pub fn hgsa_n_analyze(
    n: usize,
    state: &PhotonState,
    cfg: &AnalyzerConfig,
) -> Result<(HyperLabel, Transcript)> {
    let (readouts, photons) = qnd_readout(n, state, &cfg.stage_order.dofs(), cfg)?;
    let photons = apply_readout_optics(&photons)?;
    let outcome = sample_outcome(
        &photons,
        &mut SeedStreams::new(cfg.seed).stream("detection"),
    )?;
    let (p_sign, s_sign) = decode_signs(&outcome);

    let transcript = Transcript {
        probe_readouts: readouts,
        detector_outcome: outcome,
        config: cfg.echo(),
    };
    let p_bits = bits_from_magnitudes(&transcript.magnitudes(Dof::Polarization))?;
    let s_bits = bits_from_magnitudes(&transcript.magnitudes(Dof::Spatial))?;
    let label = HyperLabel::new(GhzLabel::new(p_sign, p_bits), GhzLabel::new(s_sign, s_bits))?;
    Ok((label, transcript))
}

/// Two-photon hyperentangled Bell-state analysis (probes `alpha1`, `beta1`).
pub fn hbsa_analyze(state: &PhotonState, cfg: &AnalyzerConfig) -> Result<(HyperLabel, Transcript)> {
    if state.n_photons() != 2 {
        return Err(Error::arg(format!(
            "Bell-state analysis needs 2 photons, got {}",
            state.n_photons()
        )));
    }
    hgsa_n_analyze(2, state, cfg)
}

/// Three-photon GHZ analysis: `alpha1`↔(A,B), `alpha2`↔(A,C), likewise `beta`.
pub fn hgsa3_analyze(
    state: &PhotonState,
    cfg: &AnalyzerConfig,
) -> Result<(HyperLabel, Transcript)> {
    if state.n_photons() != 3 {
        return Err(Error::arg(format!(
            "three-photon GHZ analysis needs 3 photons, got {}",
            state.n_photons()
        )));
    }
    hgsa_n_analyze(3, state, cfg)
}
