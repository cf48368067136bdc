//! Coherent probes, cross-Kerr conditional phases, the two-photon parity
//! gadget and X-quadrature homodyne readout.
//!
//! A probe's phase is tracked as an exact integer multiple of `θ` per branch.
//! Homodyne readout resolves `|multiple|` but not its sign, so a measurement
//! projects onto one magnitude class and keeps the branch amplitudes as they
//! are (ideal feed-forward phase correction).

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use libm::erfc;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::statecore::{BasisKet, Dof, PhotonState, NORM_TOLERANCE, PRUNE_THRESHOLD};

/// A coherent probe `|α⟩` with cross-phase `θ = χt` per coupled photon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRegister {
    pub id: String,
    pub theta: f64,
    pub alpha: f64,
}

impl ProbeRegister {
    pub fn new(id: impl Into<String>, theta: f64, alpha: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::arg(format!("theta must be positive, got {theta}")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::arg(format!("alpha must be positive, got {alpha}")));
        }
        Ok(Self {
            id: id.into(),
            theta,
            alpha,
        })
    }

    /// `αθ²`, which must be large for small shifts to be resolvable.
    pub fn feasibility(&self) -> f64 {
        self.alpha * self.theta * self.theta
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Branch {
    ket: BasisKet,
    multiples: Vec<i32>,
}

/// Photon amplitudes entangled with the phase multiples of a set of probes.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    n_photons: usize,
    probes: Vec<ProbeRegister>,
    amplitudes: BTreeMap<Branch, Complex64>,
}

impl JointState {
    /// `|ψ⟩ ⊗ |α₁⟩ ⊗ …` with every probe unshifted.
    pub fn new(state: &PhotonState, probes: Vec<ProbeRegister>) -> Result<Self> {
        state.require_normalized()?;
        for (i, p) in probes.iter().enumerate() {
            if probes[..i].iter().any(|q| q.id == p.id) {
                return Err(Error::arg(format!("duplicate probe id `{}`", p.id)));
            }
        }
        let zeros = vec![0; probes.len()];
        let amplitudes = state
            .iter()
            .map(|(k, a)| {
                (
                    Branch {
                        ket: *k,
                        multiples: zeros.clone(),
                    },
                    *a,
                )
            })
            .collect();
        Ok(Self {
            n_photons: state.n_photons(),
            probes,
            amplitudes,
        })
    }

    pub fn n_photons(&self) -> usize {
        self.n_photons
    }

    pub fn probes(&self) -> &[ProbeRegister] {
        &self.probes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn probe_index(&self, id: &str) -> Result<usize> {
        self.probes
            .iter()
            .position(|p| p.id == id)
            .ok_or_else(|| Error::arg(format!("unknown probe `{id}`")))
    }

    /// `(ket, multiples, amplitude)` for every branch, in deterministic order.
    pub fn branches(&self) -> impl Iterator<Item = (&BasisKet, &[i32], &Complex64)> {
        self.amplitudes
            .iter()
            .map(|(b, a)| (&b.ket, b.multiples.as_slice(), a))
    }

    /// Phase multiple of `probe` on the branch holding `ket`, if present.
    pub fn multiple(&self, ket: &BasisKet, probe: &str) -> Result<Option<i32>> {
        let idx = self.probe_index(probe)?;
        Ok(self
            .amplitudes
            .keys()
            .find(|b| b.ket == *ket)
            .map(|b| b.multiples[idx]))
    }

    /// Drops the probe register once every probe has been read out.
    pub fn into_photon_state(self) -> Result<PhotonState> {
        if !self.probes.is_empty() {
            return Err(Error::InvalidState(format!(
                "{} probe(s) still entangled with the photons",
                self.probes.len()
            )));
        }
        PhotonState::from_terms(
            self.n_photons,
            self.amplitudes.into_iter().map(|(b, a)| (b.ket, a)),
        )
    }

    fn require_photon(&self, photon: usize) -> Result<()> {
        if photon >= self.n_photons {
            return Err(Error::arg(format!(
                "photon index {photon} out of range for {} photons",
                self.n_photons
            )));
        }
        Ok(())
    }

    /// Probability mass of each `|multiple|` class of `probe`, ascending.
    pub fn magnitude_distribution(&self, probe: &str) -> Result<Vec<(u32, f64)>> {
        let idx = self.probe_index(probe)?;
        let mut classes = BTreeMap::new();
        for (b, a) in &self.amplitudes {
            *classes
                .entry(b.multiples[idx].unsigned_abs())
                .or_insert(0.0) += a.norm_sqr();
        }
        Ok(classes.into_iter().collect())
    }

    /// Projects onto `|multiple| = magnitude` of `probe`, renormalizes, and
    /// removes the probe. Returns `None` if the class has no weight.
    pub fn project_magnitude(
        &self,
        probe: &str,
        magnitude: u32,
    ) -> Result<Option<(f64, JointState)>> {
        let idx = self.probe_index(probe)?;
        let kept: Vec<(Branch, Complex64)> = self
            .amplitudes
            .iter()
            .filter(|(b, _)| b.multiples[idx].unsigned_abs() == magnitude)
            .map(|(b, a)| {
                let mut multiples = b.multiples.clone();
                multiples.remove(idx);
                (
                    Branch {
                        ket: b.ket,
                        multiples,
                    },
                    *a,
                )
            })
            .collect();
        let weight: f64 = kept.iter().map(|(_, a)| a.norm_sqr()).sum();
        if weight <= PRUNE_THRESHOLD * PRUNE_THRESHOLD {
            return Ok(None);
        }
        let scale = 1.0 / weight.sqrt();
        let mut amplitudes = BTreeMap::new();
        for (b, a) in kept {
            *amplitudes.entry(b).or_insert(Complex64::new(0.0, 0.0)) += a * scale;
        }
        amplitudes.retain(|_, a: &mut Complex64| a.norm() >= PRUNE_THRESHOLD);
        let mut probes = self.probes.clone();
        probes.remove(idx);
        Ok(Some((
            weight,
            JointState {
                n_photons: self.n_photons,
                probes,
                amplitudes,
            },
        )))
    }
}

/// Cross-Kerr coupling of one photon's mode to a probe: every branch whose
/// `photon` bit in `dof` equals `active_value` shifts the probe by `sign·θ`.
pub fn kerr_interact(
    joint: &JointState,
    probe: &str,
    photon: usize,
    dof: Dof,
    active_value: u8,
    sign: i32,
) -> Result<JointState> {
    let idx = joint.probe_index(probe)?;
    joint.require_photon(photon)?;
    if sign != 1 && sign != -1 {
        return Err(Error::arg(format!("phase sign must be ±1, got {sign}")));
    }
    let amplitudes = joint
        .amplitudes
        .iter()
        .map(|(b, a)| {
            let mut b = b.clone();
            if b.ket.bit(photon, dof) == active_value {
                b.multiples[idx] += sign;
            }
            (b, *a)
        })
        .collect();
    Ok(JointState {
        amplitudes,
        ..joint.clone()
    })
}

/// Two-photon parity QND. Branches where the photons agree in `dof` leave the
/// probe alone; where they differ the probe picks up `+θ` if `ref_photon`'s
/// bit is 0 and `−θ` if it is 1.
pub fn parity_gadget(
    joint: &JointState,
    probe: &str,
    ref_photon: usize,
    other_photon: usize,
    dof: Dof,
) -> Result<JointState> {
    if ref_photon == other_photon {
        return Err(Error::arg(format!(
            "parity gadget needs two distinct photons, got {ref_photon} twice"
        )));
    }
    let j = kerr_interact(joint, probe, ref_photon, dof, 0, 1)?;
    kerr_interact(&j, probe, other_photon, dof, 0, -1)
}

/// Homodyne readout model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HomodyneModel {
    /// Magnitudes are read without error.
    Ideal,
    /// Adjacent magnitudes 0 ↔ 1 are confused with probability
    /// [`gaussian_error_prob`].
    Gaussian,
}

impl HomodyneModel {
    pub fn name(self) -> &'static str {
        match self {
            HomodyneModel::Ideal => "ideal",
            HomodyneModel::Gaussian => "gaussian",
        }
    }

    /// Probability that the true magnitude is reported as the other one.
    pub fn confusion(self, probe: &ProbeRegister) -> f64 {
        match self {
            HomodyneModel::Ideal => 0.0,
            HomodyneModel::Gaussian => gaussian_error_prob(probe.alpha, probe.theta),
        }
    }
}

impl std::str::FromStr for HomodyneModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ideal" => Ok(HomodyneModel::Ideal),
            "gaussian" => Ok(HomodyneModel::Gaussian),
            other => Err(Error::parse(other, "model must be `ideal` or `gaussian`")),
        }
    }
}

/// X-quadrature overlap error for telling a shift of `0` from `±θ` with unit
/// quadrature variance: `½·erfc(α(1 − cos θ)/√2)`.
pub fn gaussian_error_prob(alpha: f64, theta: f64) -> f64 {
    let one_minus_cos = 2.0 * (0.5 * theta).sin().powi(2);
    0.5 * erfc(alpha * one_minus_cos / SQRT_2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomodyneReadout {
    /// Reported `|phase multiple|`.
    pub magnitude: u32,
    /// Probability of reporting this magnitude under the model.
    pub probability: f64,
    /// Post-measurement state with the probe removed.
    pub collapsed: JointState,
}

/// Reads out `probe`. The true class is drawn by branch weight and the state
/// collapses onto it; under the gaussian model the reported magnitude is then
/// flipped between 0 and 1 with the probe's confusion probability.
pub fn homodyne_measure<R: Rng + ?Sized>(
    joint: &JointState,
    probe: &str,
    model: HomodyneModel,
    rng: &mut R,
) -> Result<HomodyneReadout> {
    let idx = joint.probe_index(probe)?;
    let mut dist = joint.magnitude_distribution(probe)?;
    let total: f64 = dist.iter().map(|(_, w)| w).sum();
    if (total - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::InvalidState(format!(
            "joint state is not normalized (Σ|amp|² = {total})"
        )));
    }
    for (_, w) in &mut dist {
        *w /= total;
    }
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut true_mag = dist.last().expect("normalized state has support").0;
    for &(m, w) in &dist {
        acc += w;
        if u < acc {
            true_mag = m;
            break;
        }
    }
    let (_, collapsed) = joint
        .project_magnitude(probe, true_mag)?
        .expect("sampled class has weight");

    let eps = model.confusion(&joint.probes[idx]);
    let flip = |m: u32| match m {
        0 => 1,
        1 => 0,
        m => m,
    };
    let reported = if eps > 0.0 && true_mag <= 1 && rng.gen::<f64>() < eps {
        flip(true_mag)
    } else {
        true_mag
    };
    let weight_of = |m: u32| dist.iter().find(|(k, _)| *k == m).map_or(0.0, |(_, w)| *w);
    let probability = if reported <= 1 {
        (1.0 - eps) * weight_of(reported) + eps * weight_of(flip(reported))
    } else {
        weight_of(reported)
    };
    Ok(HomodyneReadout {
        magnitude: reported,
        probability,
        collapsed,
    })
}
