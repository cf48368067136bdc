//! Linear-optical elements (HWP, WP, BS, PBS) and single-photon detection in
//! the `{H,V} × {x₁,x₂}` product basis.
//!
//! PBS reflection carries no `i` phase here: it is a real permutation.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::statecore::{apply_gate, photon_name, BasisKet, Dof, Gate2, PhotonState, Sign};

/// Half-wave plate: `|H⟩ ↔ |V⟩`.
pub fn apply_hwp(state: &PhotonState, photon: usize) -> Result<PhotonState> {
    apply_gate(state, photon, Dof::Polarization, &Gate2::pauli_x())
}

/// Wave plate: Hadamard on polarization.
pub fn apply_wp(state: &PhotonState, photon: usize) -> Result<PhotonState> {
    apply_gate(state, photon, Dof::Polarization, &Gate2::hadamard())
}

/// Beam splitter: Hadamard on the two spatial modes.
pub fn apply_bs(state: &PhotonState, photon: usize) -> Result<PhotonState> {
    apply_gate(state, photon, Dof::Spatial, &Gate2::hadamard())
}

/// Polarizing beam splitter: an `H` photon has its path switched, a `V`
/// photon keeps its path.
pub fn apply_pbs(state: &PhotonState, photon: usize) -> Result<PhotonState> {
    state.require_photon(photon)?;
    Ok(state.permute(|k| {
        if k.bit(photon, Dof::Polarization) == 0 {
            k.flipped(photon, Dof::Spatial)
        } else {
            *k
        }
    }))
}

/// BS and WP on every photon: the stage that maps GHZ relative phases onto
/// detector parities.
pub fn apply_readout_optics(state: &PhotonState) -> Result<PhotonState> {
    let mut out = state.clone();
    for photon in 0..state.n_photons() {
        out = apply_bs(&out, photon)?;
        out = apply_wp(&out, photon)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    fn from_bit(b: u8) -> Self {
        if b == 0 {
            Polarization::H
        } else {
            Polarization::V
        }
    }

    /// Detector superscript: `+` for H, `−` for V.
    pub fn detector_symbol(self) -> char {
        match self {
            Polarization::H => '+',
            Polarization::V => '-',
        }
    }
}

/// Which detector fired for one photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DetectorRecord {
    pub photon: usize,
    /// Spatial mode, 1 or 2.
    pub mode: u8,
    pub pol: Polarization,
}

impl fmt::Display for DetectorRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{}",
            photon_name(self.photon),
            self.mode,
            self.pol.detector_symbol()
        )
    }
}

impl Serialize for DetectorRecord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("DetectorRecord", 3)?;
        st.serialize_field("photon", &photon_name(self.photon).to_string())?;
        st.serialize_field("mode", &self.mode)?;
        st.serialize_field(
            "pol",
            match self.pol {
                Polarization::H => "H",
                Polarization::V => "V",
            },
        )?;
        st.end()
    }
}

/// One joint click pattern and its probability.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorOutcome {
    pub records: Vec<DetectorRecord>,
    pub probability: f64,
}

impl DetectorOutcome {
    pub fn from_ket(ket: &BasisKet, probability: f64) -> Self {
        let records = (0..ket.n_photons())
            .map(|photon| DetectorRecord {
                photon,
                mode: ket.bit(photon, Dof::Spatial) + 1,
                pol: Polarization::from_bit(ket.bit(photon, Dof::Polarization)),
            })
            .collect();
        Self {
            records,
            probability,
        }
    }

    /// Number of photons detected with V polarization.
    pub fn v_count(&self) -> u32 {
        self.records
            .iter()
            .filter(|r| r.pol == Polarization::V)
            .count() as u32
    }

    /// Number of photons detected in spatial mode 2.
    pub fn mode2_count(&self) -> u32 {
        self.records.iter().filter(|r| r.mode == 2).count() as u32
    }

    /// Space-separated tokens, e.g. `A1+ B2-`.
    pub fn tokens(&self) -> String {
        self.records
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Ordering on the record sequence alone, ignoring probability.
    pub fn cmp_records(&self, other: &Self) -> Ordering {
        self.records.cmp(&other.records)
    }
}

impl fmt::Display for DetectorOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tokens())
    }
}

/// Full support of the detector measurement with exact probabilities, sorted
/// lexicographically on `(photon, mode, polarization)`.
pub fn detection_distribution(state: &PhotonState) -> Result<Vec<DetectorOutcome>> {
    state.require_normalized()?;
    let mut out: Vec<DetectorOutcome> = state
        .iter()
        .map(|(k, a)| DetectorOutcome::from_ket(k, a.norm_sqr()))
        .collect();
    out.sort_by(DetectorOutcome::cmp_records);
    Ok(out)
}

/// Draws one outcome from [`detection_distribution`].
pub fn sample_outcome<R: Rng + ?Sized>(
    state: &PhotonState,
    rng: &mut R,
) -> Result<DetectorOutcome> {
    let dist = detection_distribution(state)?;
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for outcome in &dist {
        acc += outcome.probability;
        if u < acc {
            return Ok(outcome.clone());
        }
    }
    // u landed in the rounding gap above the cumulative sum
    Ok(dist.last().cloned().expect("normalized state has support"))
}

pub fn sample_outcome_seeded(state: &PhotonState, seed: u64) -> Result<DetectorOutcome> {
    sample_outcome(state, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Sign pair read off a detector pattern: polarization `+` iff the number of
/// V clicks is even, spatial `+` iff the number of mode-2 clicks is even.
pub fn decode_signs(outcome: &DetectorOutcome) -> (Sign, Sign) {
    (
        Sign::from_parity(outcome.v_count()),
        Sign::from_parity(outcome.mode2_count()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statecore::{bell_state, BellKind, HyperLabel};
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn ket(pol: &str, spa: &str) -> BasisKet {
        BasisKet::new(pol.parse().unwrap(), spa.parse().unwrap()).unwrap()
    }

    fn basis(pol: &str, spa: &str) -> PhotonState {
        PhotonState::basis(ket(pol, spa))
    }

    #[test]
    fn hwp_flips_and_is_involution() {
        let s = basis("0", "0");
        let once = apply_hwp(&s, 0).unwrap();
        assert_eq!(once, basis("1", "0"));
        assert_eq!(apply_hwp(&once, 0).unwrap(), s);
        let plus = apply_wp(&s, 0).unwrap();
        assert!(apply_hwp(&plus, 0).unwrap().max_abs_diff(&plus) < 1e-15);
        assert!(apply_hwp(&s, 1).is_err());
    }

    #[test]
    fn wp_hadamard() {
        let h = apply_wp(&basis("0", "0"), 0).unwrap();
        assert!((h.amplitude(&ket("0", "0")).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((h.amplitude(&ket("1", "0")).re - FRAC_1_SQRT_2).abs() < 1e-15);
        let v = apply_wp(&basis("1", "0"), 0).unwrap();
        assert!((v.amplitude(&ket("0", "0")).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((v.amplitude(&ket("1", "0")).re + FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(apply_wp(&h, 0).unwrap().max_abs_diff(&basis("0", "0")) < 1e-15);
    }

    #[test]
    fn bs_hadamard_on_modes() {
        let s = apply_bs(&basis("0", "0"), 0).unwrap();
        assert!((s.amplitude(&ket("0", "0")).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.amplitude(&ket("0", "1")).re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn bs_on_spatial_bell_states() {
        // (H⊗H)|φ+⟩ = |φ+⟩ and (H⊗H)|ψ−⟩ = −|ψ−⟩, expanded by hand
        let both = |s: &PhotonState| apply_bs(&apply_bs(s, 0).unwrap(), 1).unwrap();
        let phi = bell_state(BellKind::PhiPlus, Dof::Spatial);
        assert!(both(&phi).max_abs_diff(&phi) < 1e-12);
        let psi = bell_state(BellKind::PsiMinus, Dof::Spatial);
        let out = both(&psi);
        assert!(out.max_abs_diff(&psi.scaled(Complex64::new(-1.0, 0.0))) < 1e-12);
    }

    #[test]
    fn pbs_switches_h_paths_only() {
        assert_eq!(apply_pbs(&basis("0", "0"), 0).unwrap(), basis("0", "1"));
        assert_eq!(apply_pbs(&basis("1", "0"), 0).unwrap(), basis("1", "0"));
        let s = apply_wp(&basis("0", "1"), 0).unwrap();
        assert_eq!(apply_pbs(&apply_pbs(&s, 0).unwrap(), 0).unwrap(), s);
        assert!(apply_pbs(&s, 3).is_err());
    }

    #[test]
    fn table2_first_row_support() {
        let s = HyperLabel::bell(BellKind::PhiPlus, BellKind::PhiPlus).state();
        let dist = detection_distribution(&apply_readout_optics(&s).unwrap()).unwrap();
        let tokens: Vec<String> = dist.iter().map(|o| o.tokens()).collect();
        assert_eq!(tokens, ["A1+ B1+", "A1- B1-", "A2+ B2+", "A2- B2-"]);
        for o in &dist {
            assert!((o.probability - 0.25).abs() < 1e-10);
        }
    }

    #[test]
    fn basis_state_has_single_outcome() {
        let dist = detection_distribution(&basis("10", "01")).unwrap();
        assert_eq!(dist.len(), 1);
        assert_eq!(dist[0].tokens(), "A1- B2+");
        assert_eq!(dist[0].probability, 1.0);
        assert_eq!(
            sample_outcome_seeded(&basis("10", "01"), 9)
                .unwrap()
                .tokens(),
            "A1- B2+"
        );
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let s = PhotonState::from_terms(1, [(ket("0", "0"), Complex64::new(0.5, 0.0))]).unwrap();
        assert!(detection_distribution(&s).is_err());
    }

    #[test]
    fn sign_decoding() {
        let o = |pol: &str, spa: &str| DetectorOutcome::from_ket(&ket(pol, spa), 1.0);
        assert_eq!(decode_signs(&o("00", "00")), (Sign::Plus, Sign::Plus));
        // A1+ B2-
        assert_eq!(decode_signs(&o("01", "01")), (Sign::Minus, Sign::Minus));
        assert_eq!(decode_signs(&o("11", "01")), (Sign::Plus, Sign::Minus));
    }

    #[test]
    fn record_json_shape() {
        let o = DetectorOutcome::from_ket(&ket("01", "10"), 1.0);
        let json = serde_json::to_string(&o.records).unwrap();
        assert_eq!(
            json,
            r#"[{"photon":"A","mode":2,"pol":"H"},{"photon":"B","mode":1,"pol":"V"}]"#
        );
    }
}
