use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::ket::{BasisKet, BitString, Dof, MAX_PHOTONS};
use super::state::PhotonState;
use crate::error::{Error, Result};

/// Relative phase of a GHZ superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const ALL: [Sign; 2] = [Sign::Plus, Sign::Minus];

    /// `+` for even parity, `−` for odd.
    pub fn from_parity(count: u32) -> Self {
        if count.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// The four two-photon Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    pub fn label(self) -> GhzLabel {
        let (sign, bits) = match self {
            BellKind::PhiPlus => (Sign::Plus, 0b00),
            BellKind::PhiMinus => (Sign::Minus, 0b00),
            BellKind::PsiPlus => (Sign::Plus, 0b01),
            BellKind::PsiMinus => (Sign::Minus, 0b01),
        };
        GhzLabel {
            sign,
            bits: BitString::new(2, bits).expect("two-bit literal"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// `(sign, bits)` naming the GHZ state `(|bits⟩ ± |~bits⟩)/√2` in one DOF.
///
/// Canonical form has the first bit 0; `(s, bits)` and `(s, ~bits)` name the
/// same state up to the global factor `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GhzLabel {
    pub sign: Sign,
    pub bits: BitString,
}

impl GhzLabel {
    pub fn new(sign: Sign, bits: BitString) -> Self {
        Self { sign, bits }
    }

    pub fn canonical(self) -> Self {
        if self.bits.bit(0) == 1 {
            Self {
                bits: self.bits.complement(),
                ..self
            }
        } else {
            self
        }
    }

    /// Representative used in printed tables: the lower-weight member of
    /// `{bits, ~bits}`, preferring the canonical one on ties. For three
    /// photons this turns canonical `011` into `100`.
    pub fn display_bits(self) -> BitString {
        let c = self.canonical().bits;
        let alt = c.complement();
        if alt.count_ones() < c.count_ones() {
            alt
        } else {
            c
        }
    }

    pub fn bell_kind(self) -> Option<BellKind> {
        if self.bits.len() != 2 {
            return None;
        }
        let c = self.canonical();
        BellKind::ALL.into_iter().find(|k| k.label() == c)
    }

    /// All `2^n` canonical labels of one DOF.
    pub fn enumerate(n: usize) -> Result<Vec<GhzLabel>> {
        check_photon_count(n, 2)?;
        let mut out = Vec::with_capacity(1 << n);
        for sign in Sign::ALL {
            for v in 0..(1u32 << (n - 1)) {
                out.push(GhzLabel::new(sign, BitString::new(n, v)?));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for GhzLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sign, self.bits)
    }
}

/// Canonical identity of a hyperentangled GHZ product state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HyperLabel {
    pol: GhzLabel,
    spa: GhzLabel,
}

impl HyperLabel {
    pub fn new(pol: GhzLabel, spa: GhzLabel) -> Result<Self> {
        if pol.bits.len() != spa.bits.len() {
            return Err(Error::arg(format!(
                "polarization label has {} photons, spatial label has {}",
                pol.bits.len(),
                spa.bits.len()
            )));
        }
        check_photon_count(pol.bits.len(), 2)?;
        Ok(Self {
            pol: pol.canonical(),
            spa: spa.canonical(),
        })
    }

    pub fn bell(pol: BellKind, spa: BellKind) -> Self {
        Self {
            pol: pol.label(),
            spa: spa.label(),
        }
    }

    pub fn n_photons(&self) -> usize {
        self.pol.bits.len()
    }

    pub fn dof(&self, dof: Dof) -> GhzLabel {
        match dof {
            Dof::Polarization => self.pol,
            Dof::Spatial => self.spa,
        }
    }

    pub fn pol(&self) -> GhzLabel {
        self.pol
    }

    pub fn spa(&self) -> GhzLabel {
        self.spa
    }

    /// The product state `|Φ_pol⟩_P ⊗ |Φ_spa⟩_S`.
    pub fn state(&self) -> PhotonState {
        let n = self.n_photons();
        let p = ghz_state(self.pol.sign, self.pol.bits, Dof::Polarization, n)
            .expect("label lengths are validated");
        let s = ghz_state(self.spa.sign, self.spa.bits, Dof::Spatial, n)
            .expect("label lengths are validated");
        hyper_product(&p, &s).expect("factors are trivial in the other DOF")
    }

    /// All `4^n` canonical labels, ordered by `(pol bits, spa bits, pol sign, spa sign)`
    /// so that each run of four shares one QND signature.
    pub fn enumerate(n: usize) -> Result<Vec<HyperLabel>> {
        check_photon_count(n, 2)?;
        let half = 1u32 << (n - 1);
        let mut out = Vec::with_capacity(1 << (2 * n));
        for pb in 0..half {
            for sb in 0..half {
                for ps in Sign::ALL {
                    for ss in Sign::ALL {
                        out.push(HyperLabel {
                            pol: GhzLabel::new(ps, BitString::new(n, pb)?),
                            spa: GhzLabel::new(ss, BitString::new(n, sb)?),
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Two-photon rendering with Bell names, e.g. `phi+/psi-`.
    pub fn bell_names(&self) -> Option<String> {
        Some(format!(
            "{}/{}",
            self.pol.bell_kind()?.name(),
            self.spa.bell_kind()?.name()
        ))
    }
}

impl fmt::Display for HyperLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P:{};S:{}", self.pol, self.spa)
    }
}

impl Serialize for HyperLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for HyperLabel {
    type Err = Error;

    /// Parses `P:<sign><bits>;S:<sign><bits>`; for two photons each part may
    /// instead be one of `phi+`, `phi-`, `psi+`, `psi-`.
    fn from_str(s: &str) -> Result<Self> {
        let mut pol = None;
        let mut spa = None;
        for part in s.split(';') {
            let part = part.trim();
            let (dof, body) = part
                .split_once(':')
                .ok_or_else(|| Error::parse(part, "expected `P:<label>` or `S:<label>`"))?;
            let slot = match dof.trim() {
                "P" | "p" => &mut pol,
                "S" | "s" => &mut spa,
                other => return Err(Error::parse(other, "unknown degree of freedom")),
            };
            if slot.is_some() {
                return Err(Error::parse(part, "degree of freedom given twice"));
            }
            *slot = Some(parse_ghz_label(body.trim())?);
        }
        let pol = pol.ok_or_else(|| Error::parse(s, "missing polarization part `P:`"))?;
        let spa = spa.ok_or_else(|| Error::parse(s, "missing spatial part `S:`"))?;
        HyperLabel::new(pol, spa).map_err(|e| Error::parse(s, e.to_string()))
    }
}

fn parse_ghz_label(body: &str) -> Result<GhzLabel> {
    if let Some(kind) = BellKind::from_name(&body.to_ascii_lowercase()) {
        return Ok(kind.label());
    }
    let mut chars = body.chars();
    let sign = match chars.next() {
        Some('+') => Sign::Plus,
        Some('-') | Some('−') => Sign::Minus,
        Some(_) => return Err(Error::parse(body, "expected a sign `+`/`-` or a Bell name")),
        None => return Err(Error::parse(body, "empty label")),
    };
    let bits: BitString = chars.as_str().parse()?;
    Ok(GhzLabel::new(sign, bits))
}

pub(crate) fn check_photon_count(n: usize, min: usize) -> Result<()> {
    if n < min || n > MAX_PHOTONS {
        return Err(Error::OutOfRange {
            n,
            min,
            max: MAX_PHOTONS,
        });
    }
    Ok(())
}

/// Bell state in one DOF; the other DOF is left in the all-zero configuration.
pub fn bell_state(kind: BellKind, dof: Dof) -> PhotonState {
    let l = kind.label();
    ghz_state(l.sign, l.bits, dof, 2).expect("two-photon Bell label")
}

/// `(|bits⟩ ± |~bits⟩)/√2` in `dof`, other DOF all-zero.
pub fn ghz_state(sign: Sign, bits: BitString, dof: Dof, n: usize) -> Result<PhotonState> {
    if bits.len() != n {
        return Err(Error::arg(format!(
            "bit-string {bits} has length {}, expected {n}",
            bits.len()
        )));
    }
    check_photon_count(n, 2)?;
    let ground = BasisKet::ground(n)?;
    PhotonState::from_terms(
        n,
        [
            (
                ground.with_bits(dof, bits),
                Complex64::new(FRAC_1_SQRT_2, 0.0),
            ),
            (
                ground.with_bits(dof, bits.complement()),
                Complex64::new(sign.factor() * FRAC_1_SQRT_2, 0.0),
            ),
        ],
    )
}

/// `|p⟩_P ⊗ |s⟩_S`. `p_state` must be trivial (all-zero) in the spatial DOF
/// and `s_state` trivial in polarization.
pub fn hyper_product(p_state: &PhotonState, s_state: &PhotonState) -> Result<PhotonState> {
    let n = p_state.n_photons();
    if s_state.n_photons() != n {
        return Err(Error::arg(format!(
            "photon counts differ: {n} vs {}",
            s_state.n_photons()
        )));
    }
    let zero = BitString::zeros(n)?;
    if p_state.iter().any(|(k, _)| k.spa_bits() != zero) {
        return Err(Error::arg(
            "polarization factor is not trivial in the spatial DOF",
        ));
    }
    if s_state.iter().any(|(k, _)| k.pol_bits() != zero) {
        return Err(Error::arg("spatial factor is not trivial in polarization"));
    }
    let terms = p_state.iter().flat_map(|(pk, pa)| {
        s_state
            .iter()
            .map(move |(sk, sa)| (pk.with_bits(Dof::Spatial, sk.spa_bits()), pa * sa))
    });
    PhotonState::from_terms(n, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statecore::equal_up_to_global_phase;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn ket(pol: &str, spa: &str) -> BasisKet {
        BasisKet::new(bits(pol), bits(spa)).unwrap()
    }

    const H: f64 = FRAC_1_SQRT_2;

    #[test]
    fn phi_plus_polarization() {
        let s = bell_state(BellKind::PhiPlus, Dof::Polarization);
        assert_eq!(s.support_len(), 2);
        assert!((s.amplitude(&ket("00", "00")).re - H).abs() < 1e-15);
        assert!((s.amplitude(&ket("11", "00")).re - H).abs() < 1e-15);
    }

    #[test]
    fn psi_minus_spatial() {
        let s = bell_state(BellKind::PsiMinus, Dof::Spatial);
        assert!((s.amplitude(&ket("00", "01")).re - H).abs() < 1e-15);
        assert!((s.amplitude(&ket("00", "10")).re + H).abs() < 1e-15);
    }

    #[test]
    fn bell_basis_is_orthonormal() {
        for dof in Dof::ALL {
            for a in BellKind::ALL {
                for b in BellKind::ALL {
                    let ip = bell_state(a, dof).inner(&bell_state(b, dof)).unwrap();
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((ip.norm() - want).abs() < 1e-12, "{a:?} {b:?}");
                }
            }
        }
    }

    #[test]
    fn ghz_three_photon() {
        let s = ghz_state(Sign::Plus, bits("000"), Dof::Polarization, 3).unwrap();
        assert!((s.amplitude(&ket("000", "000")).re - H).abs() < 1e-15);
        assert!((s.amplitude(&ket("111", "000")).re - H).abs() < 1e-15);
        assert!(ghz_state(Sign::Plus, bits("00"), Dof::Polarization, 3).is_err());
    }

    #[test]
    fn ghz_complement_symmetry() {
        let a = ghz_state(Sign::Minus, bits("100"), Dof::Polarization, 3).unwrap();
        let b = ghz_state(Sign::Minus, bits("011"), Dof::Polarization, 3).unwrap();
        assert!(a.max_abs_diff(&b.scaled(Complex64::new(-1.0, 0.0))) < 1e-12);
        assert!(equal_up_to_global_phase(&a, &b, 1e-10));
        let c = ghz_state(Sign::Plus, bits("110"), Dof::Spatial, 3).unwrap();
        let d = ghz_state(Sign::Plus, bits("001"), Dof::Spatial, 3).unwrap();
        assert!(c.max_abs_diff(&d) < 1e-12);
    }

    #[test]
    fn ghz_two_photon_reduces_to_bell() {
        let g = ghz_state(Sign::Plus, bits("00"), Dof::Polarization, 2).unwrap();
        assert_eq!(g, bell_state(BellKind::PhiPlus, Dof::Polarization));
    }

    #[test]
    fn hyper_product_four_terms() {
        let p = bell_state(BellKind::PhiPlus, Dof::Polarization);
        let s = bell_state(BellKind::PsiPlus, Dof::Spatial);
        let h = hyper_product(&p, &s).unwrap();
        assert_eq!(h.support_len(), 4);
        for (pk, sk) in [("00", "01"), ("00", "10"), ("11", "01"), ("11", "10")] {
            assert!((h.amplitude(&ket(pk, sk)).re - 0.5).abs() < 1e-15);
        }
        assert!((h.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hyper_product_with_basis_factor_relabels() {
        let p = PhotonState::basis(ket("10", "00"));
        let s = bell_state(BellKind::PsiMinus, Dof::Spatial);
        let h = hyper_product(&p, &s).unwrap();
        assert!((h.amplitude(&ket("10", "01")).re - H).abs() < 1e-15);
        assert!((h.amplitude(&ket("10", "10")).re + H).abs() < 1e-15);
    }

    #[test]
    fn hyper_product_errors() {
        let p2 = bell_state(BellKind::PhiPlus, Dof::Polarization);
        let s3 = ghz_state(Sign::Plus, bits("000"), Dof::Spatial, 3).unwrap();
        assert!(hyper_product(&p2, &s3).is_err());
        let s2 = bell_state(BellKind::PhiPlus, Dof::Spatial);
        assert!(hyper_product(&s2, &s2).is_err());
    }

    #[test]
    fn sixteen_bell_products_are_orthogonal() {
        let states: Vec<_> = BellKind::ALL
            .iter()
            .flat_map(|&p| {
                BellKind::ALL
                    .iter()
                    .map(move |&s| HyperLabel::bell(p, s).state())
            })
            .collect();
        for (i, a) in states.iter().enumerate() {
            assert!((a.norm_sqr() - 1.0).abs() < 1e-10);
            for b in &states[i + 1..] {
                assert!(a.inner(b).unwrap().norm() < 1e-10);
            }
        }
    }

    #[test]
    fn canonical_ghz_products_are_orthogonal() {
        for n in 2..=4 {
            let states: Vec<_> = HyperLabel::enumerate(n)
                .unwrap()
                .iter()
                .map(|l| l.state())
                .collect();
            assert_eq!(states.len(), 1 << (2 * n));
            for (i, a) in states.iter().enumerate() {
                assert!((a.norm_sqr() - 1.0).abs() < 1e-10);
                for b in &states[i + 1..] {
                    assert!(a.inner(b).unwrap().norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn parse_literals() {
        let l: HyperLabel = "P:+000;S:-001".parse().unwrap();
        assert_eq!(l.to_string(), "P:+000;S:-001");
        let l: HyperLabel = "P:-100;S:+111".parse().unwrap();
        assert_eq!(l.to_string(), "P:-011;S:+000");
        let l: HyperLabel = "P:phi+;S:psi-".parse().unwrap();
        assert_eq!(l, HyperLabel::bell(BellKind::PhiPlus, BellKind::PsiMinus));
        assert_eq!(l.bell_names().unwrap(), "phi+/psi-");
        let l: HyperLabel = " S:psi+ ; P:-01 ".parse().unwrap();
        assert_eq!(l, HyperLabel::bell(BellKind::PsiMinus, BellKind::PsiPlus));
    }

    #[test]
    fn parse_errors_name_the_token() {
        let e = "P:±;S:".parse::<HyperLabel>().unwrap_err();
        match e {
            Error::Parse { token, .. } => assert_eq!(token, "±"),
            other => panic!("unexpected {other:?}"),
        }
        assert!("P:+00".parse::<HyperLabel>().is_err());
        assert!("P:+00;S:+000".parse::<HyperLabel>().is_err());
        assert!("P:+0;S:+0".parse::<HyperLabel>().is_err());
        assert!("X:+00;S:+00".parse::<HyperLabel>().is_err());
        assert!("P:+00;P:+00".parse::<HyperLabel>().is_err());
        assert!("P:+0a;S:+00".parse::<HyperLabel>().is_err());
    }

    #[test]
    fn display_representatives() {
        let g = |s: &str| GhzLabel::new(Sign::Plus, bits(s));
        assert_eq!(g("011").display_bits().to_string(), "100");
        assert_eq!(g("001").display_bits().to_string(), "001");
        assert_eq!(g("01").display_bits().to_string(), "01");
        assert_eq!(g("0011").display_bits().to_string(), "0011");
        assert_eq!(g("0111").display_bits().to_string(), "1000");
    }
}
