use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::ket::{BasisKet, Dof};
use crate::error::{Error, Result};

/// Amplitudes with magnitude below this are dropped after every update.
pub const PRUNE_THRESHOLD: f64 = 1e-12;

/// Tolerance on `Σ|amp|² = 1` for operations that require a normalized state.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Sparse pure state of N photons in the polarization ⊗ spatial-mode basis.
///
/// Iteration follows [`BasisKet`] order, so everything derived from a state
/// (distributions, renderings) is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonState {
    n_photons: usize,
    amplitudes: BTreeMap<BasisKet, Complex64>,
}

impl PhotonState {
    /// Builds a state by summing the given terms. Duplicate kets accumulate;
    /// negligible amplitudes are pruned. No normalization is applied.
    pub fn from_terms<I>(n_photons: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisKet, Complex64)>,
    {
        let mut amplitudes = BTreeMap::new();
        for (ket, amp) in terms {
            if ket.n_photons() != n_photons {
                return Err(Error::arg(format!(
                    "ket {ket} has {} photons, expected {n_photons}",
                    ket.n_photons()
                )));
            }
            *amplitudes.entry(ket).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        let mut state = Self {
            n_photons,
            amplitudes,
        };
        state.prune();
        Ok(state)
    }

    pub fn basis(ket: BasisKet) -> Self {
        Self {
            n_photons: ket.n_photons(),
            amplitudes: BTreeMap::from([(ket, Complex64::new(1.0, 0.0))]),
        }
    }

    fn prune(&mut self) {
        self.amplitudes.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
    }

    pub fn n_photons(&self) -> usize {
        self.n_photons
    }

    /// Number of stored (non-negligible) amplitudes.
    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitude(&self, ket: &BasisKet) -> Complex64 {
        self.amplitudes
            .get(ket)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisKet, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::InvalidState(format!(
                "state is not normalized (Σ|amp|² = {})",
                self.norm_sqr()
            )))
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm < PRUNE_THRESHOLD {
            return Err(Error::InvalidState(
                "cannot normalize the zero vector".into(),
            ));
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = Self {
            n_photons: self.n_photons,
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(k, a)| (*k, a * factor))
                .collect(),
        };
        out.prune();
        out
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PhotonState) -> Result<Complex64> {
        self.require_same_size(other)?;
        Ok(self
            .amplitudes
            .iter()
            .filter_map(|(k, a)| other.amplitudes.get(k).map(|b| a.conj() * b))
            .sum())
    }

    /// Largest per-ket amplitude difference; a strict comparison for tests.
    pub fn max_abs_diff(&self, other: &PhotonState) -> f64 {
        self.amplitudes
            .keys()
            .chain(other.amplitudes.keys())
            .map(|k| (self.amplitude(k) - other.amplitude(k)).norm())
            .fold(0.0, f64::max)
    }

    fn require_same_size(&self, other: &PhotonState) -> Result<()> {
        if self.n_photons != other.n_photons {
            return Err(Error::arg(format!(
                "photon counts differ: {} vs {}",
                self.n_photons, other.n_photons
            )));
        }
        Ok(())
    }

    pub(crate) fn require_photon(&self, photon: usize) -> Result<()> {
        if photon >= self.n_photons {
            return Err(Error::arg(format!(
                "photon index {photon} out of range for {} photons",
                self.n_photons
            )));
        }
        Ok(())
    }

    /// Applies a basis permutation `ket ↦ f(ket)`. `f` must be a bijection.
    pub(crate) fn permute(&self, f: impl Fn(&BasisKet) -> BasisKet) -> Self {
        Self {
            n_photons: self.n_photons,
            amplitudes: self.amplitudes.iter().map(|(k, a)| (f(k), *a)).collect(),
        }
    }
}

impl fmt::Display for PhotonState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.amplitudes.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, a)) in self.amplitudes.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i){k}", a.re, a.im)?;
        }
        Ok(())
    }
}

/// A single-photon, single-DOF 2×2 gate, `matrix[row][col]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate2(pub [[Complex64; 2]; 2]);

impl Gate2 {
    pub fn real(m: [[f64; 2]; 2]) -> Self {
        let c = |x: f64| Complex64::new(x, 0.0);
        Gate2([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]])
    }

    pub fn identity() -> Self {
        Self::real([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn pauli_x() -> Self {
        Self::real([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn pauli_z() -> Self {
        Self::real([[1.0, 0.0], [0.0, -1.0]])
    }

    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::real([[h, h], [h, -h]])
    }

    pub fn dagger(&self) -> Self {
        let m = &self.0;
        Gate2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn mul(&self, rhs: &Gate2) -> Gate2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Gate2(out)
    }

    /// `‖G†G − I‖_max ≤ tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let p = self.dagger().mul(self);
        let id = Gate2::identity();
        (0..2).all(|r| (0..2).all(|c| (p.0[r][c] - id.0[r][c]).norm() <= tol))
    }
}

/// Applies `gate` to one photon's bit in one DOF.
pub fn apply_gate(
    state: &PhotonState,
    photon: usize,
    dof: Dof,
    gate: &Gate2,
) -> Result<PhotonState> {
    state.require_photon(photon)?;
    if !gate.is_unitary(1e-10) {
        return Err(Error::arg("gate is not unitary within 1e-10"));
    }
    let terms = state.iter().flat_map(|(ket, amp)| {
        let col = ket.bit(photon, dof) as usize;
        [0u8, 1u8].map(|row| {
            (
                ket.with_bit(photon, dof, row),
                gate.0[row as usize][col] * amp,
            )
        })
    });
    PhotonState::from_terms(state.n_photons(), terms)
}

/// True iff `|⟨a|b⟩| ≥ 1 − tol`. States of different size are never equal.
pub fn equal_up_to_global_phase(a: &PhotonState, b: &PhotonState, tol: f64) -> bool {
    match a.inner(b) {
        Ok(overlap) => overlap.norm() >= 1.0 - tol,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(pol: &str, spa: &str) -> BasisKet {
        BasisKet::new(pol.parse().unwrap(), spa.parse().unwrap()).unwrap()
    }

    #[test]
    fn x_flips_polarization() {
        let s = PhotonState::basis(ket("0", "0"));
        let out = apply_gate(&s, 0, Dof::Polarization, &Gate2::pauli_x()).unwrap();
        assert_eq!(out, PhotonState::basis(ket("1", "0")));
    }

    #[test]
    fn hadamard_twice_is_identity() {
        let s = PhotonState::basis(ket("01", "10"));
        let h = Gate2::hadamard();
        let once = apply_gate(&s, 1, Dof::Spatial, &h).unwrap();
        assert_eq!(once.support_len(), 2);
        let twice = apply_gate(&once, 1, Dof::Spatial, &h).unwrap();
        assert!(twice.max_abs_diff(&s) < 1e-12);
        assert_eq!(twice.support_len(), 1);
    }

    #[test]
    fn rejects_non_unitary_and_bad_index() {
        let s = PhotonState::basis(BasisKet::ground(2).unwrap());
        let bad = Gate2::real([[1.0, 1.0], [0.0, 1.0]]);
        assert!(matches!(
            apply_gate(&s, 0, Dof::Polarization, &bad),
            Err(Error::InvalidArgument(_))
        ));
        assert!(apply_gate(&s, 2, Dof::Polarization, &Gate2::hadamard()).is_err());
    }

    #[test]
    fn from_terms_accumulates_and_prunes() {
        let k = ket("0", "0");
        let s = PhotonState::from_terms(
            1,
            [
                (k, Complex64::new(0.5, 0.0)),
                (k, Complex64::new(-0.5, 1e-14)),
            ],
        )
        .unwrap();
        assert_eq!(s.support_len(), 0);
        assert!(PhotonState::from_terms(2, [(k, Complex64::new(1.0, 0.0))]).is_err());
    }

    #[test]
    fn global_phase_equality() {
        let s = PhotonState::from_terms(
            1,
            [
                (ket("0", "0"), Complex64::new(0.6, 0.0)),
                (ket("1", "1"), Complex64::new(0.0, 0.8)),
            ],
        )
        .unwrap();
        let phased = s.scaled(Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3));
        assert!(equal_up_to_global_phase(&s, &phased, 1e-10));
        let other = PhotonState::basis(ket("1", "0"));
        assert!(!equal_up_to_global_phase(&s, &other, 1e-10));
        let bigger = PhotonState::basis(BasisKet::ground(2).unwrap());
        assert!(!equal_up_to_global_phase(&s, &bigger, 1e-10));
    }

    #[test]
    fn normalize_and_require() {
        let s = PhotonState::from_terms(1, [(ket("0", "0"), Complex64::new(3.0, 4.0))]).unwrap();
        assert!(s.require_normalized().is_err());
        let n = s.normalized().unwrap();
        assert!(n.is_normalized());
        let zero = PhotonState::from_terms(1, std::iter::empty()).unwrap();
        assert!(zero.normalized().is_err());
    }
}
