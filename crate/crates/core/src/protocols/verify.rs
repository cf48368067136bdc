use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::montecarlo::{monte_carlo, RateEstimate};
use super::pipeline::{
    bits_from_magnitudes, check_input, make_probes, probe_ids, qnd_stage, AnalyzerConfig,
    StageOrder,
};
use crate::error::{Error, Result};
use crate::kerrqnd::{HomodyneModel, JointState};
use crate::optics::{apply_readout_optics, decode_signs, detection_distribution, DetectorOutcome};
use crate::statecore::{Dof, GhzLabel, HyperLabel, PhotonState};

/// Largest photon count accepted by [`verify_complete`].
pub const MAX_VERIFY_PHOTONS: usize = 10;

/// One fully resolved measurement record: a magnitude for every probe and a
/// detector pattern, with its joint probability and the decoded label.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchLeaf {
    pub probability: f64,
    /// `alpha1 … alpha{n-1}, beta1 … beta{n-1}`, independent of stage order.
    pub magnitudes: Vec<u32>,
    pub outcome: DetectorOutcome,
    pub label: HyperLabel,
}

/// Walks every homodyne magnitude class and every detector outcome of the
/// ideal pipeline, returning all leaves with nonzero probability.
pub fn explore_branches(
    n: usize,
    state: &PhotonState,
    order: StageOrder,
) -> Result<Vec<BranchLeaf>> {
    check_input(n, state)?;
    let cfg = AnalyzerConfig::default();
    let mut frontier = vec![(
        JointState::new(state, make_probes(n, &cfg)?)?,
        1.0,
        vec![0u32; 2 * (n - 1)],
    )];
    for dof in order.dofs() {
        let offset = match dof {
            Dof::Polarization => 0,
            Dof::Spatial => n - 1,
        };
        frontier = frontier
            .into_iter()
            .map(|(j, p, m)| qnd_stage(&j, dof).map(|j| (j, p, m)))
            .collect::<Result<_>>()?;
        for (k, id) in probe_ids(n, dof).iter().enumerate() {
            let mut next = Vec::with_capacity(frontier.len());
            for (joint, p, mags) in frontier {
                for (mag, _) in joint.magnitude_distribution(id)? {
                    if let Some((w, collapsed)) = joint.project_magnitude(id, mag)? {
                        let mut mags = mags.clone();
                        mags[offset + k] = mag;
                        next.push((collapsed, p * w, mags));
                    }
                }
            }
            frontier = next;
        }
    }

    let mut leaves = Vec::new();
    for (joint, p, mags) in frontier {
        let photons = apply_readout_optics(&joint.into_photon_state()?)?;
        let p_bits = bits_from_magnitudes(&mags[..n - 1])?;
        let s_bits = bits_from_magnitudes(&mags[n - 1..])?;
        for outcome in detection_distribution(&photons)? {
            let (ps, ss) = decode_signs(&outcome);
            leaves.push(BranchLeaf {
                probability: p * outcome.probability,
                magnitudes: mags.clone(),
                label: HyperLabel::new(GhzLabel::new(ps, p_bits), GhzLabel::new(ss, s_bits))?,
                outcome,
            });
        }
    }
    Ok(leaves)
}

/// Result of exhaustively checking one input state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVerdict {
    pub label: HyperLabel,
    /// Every branch decodes to `label`.
    pub correct: bool,
    pub branch_count: usize,
    /// Probe magnitudes, when they are the same on every branch.
    pub signature: Option<Vec<u32>>,
    pub total_probability: f64,
}

pub fn verify_state(label: &HyperLabel, order: StageOrder) -> Result<StateVerdict> {
    let leaves = explore_branches(label.n_photons(), &label.state(), order)?;
    let signature = leaves
        .first()
        .map(|l| l.magnitudes.clone())
        .filter(|sig| leaves.iter().all(|l| &l.magnitudes == sig));
    Ok(StateVerdict {
        label: *label,
        correct: !leaves.is_empty() && leaves.iter().all(|l| l.label == *label),
        branch_count: leaves.len(),
        signature,
        total_probability: leaves.iter().map(|l| l.probability).sum(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub total: usize,
    pub correct: usize,
    /// Number of distinct QND signatures (probe magnitude tuples).
    pub groups: usize,
    pub model: HomodyneModel,
    /// Empirical misclassification under the gaussian model.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise: Option<RateEstimate>,
    #[serde(skip)]
    pub states: Vec<StateVerdict>,
    #[serde(skip)]
    pub group_sizes: Vec<usize>,
}

impl VerificationReport {
    pub fn all_correct(&self) -> bool {
        self.correct == self.total
    }
}

/// Runs the pipeline on all `4^n` canonical hyperentangled GHZ products,
/// following every detector branch. Correctness is judged on the ideal
/// readout; a gaussian config additionally gets a Monte Carlo error rate.
pub fn verify_complete(n: usize, cfg: &AnalyzerConfig) -> Result<VerificationReport> {
    if !(2..=MAX_VERIFY_PHOTONS).contains(&n) {
        return Err(Error::OutOfRange {
            n,
            min: 2,
            max: MAX_VERIFY_PHOTONS,
        });
    }
    let labels = HyperLabel::enumerate(n)?;
    let states: Vec<StateVerdict> = labels
        .par_iter()
        .map(|l| verify_state(l, cfg.stage_order))
        .collect::<Result<_>>()?;

    let mut partition: BTreeMap<&[u32], usize> = BTreeMap::new();
    for v in &states {
        if let Some(sig) = &v.signature {
            *partition.entry(sig.as_slice()).or_default() += 1;
        }
    }
    let group_sizes: Vec<usize> = partition.values().copied().collect();

    let noise = match cfg.model {
        HomodyneModel::Ideal => None,
        HomodyneModel::Gaussian => Some(monte_carlo(n, cfg)?.aggregate),
    };
    Ok(VerificationReport {
        n,
        total: labels.len(),
        correct: states.iter().filter(|v| v.correct).count(),
        groups: group_sizes.len(),
        model: cfg.model,
        noise,
        states,
        group_sizes,
    })
}
