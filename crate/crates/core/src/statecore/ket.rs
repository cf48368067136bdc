use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest photon count a [`BitString`] can hold.
pub const MAX_PHOTONS: usize = 16;

/// Degree of freedom of a photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dof {
    /// Polarization, `0 ≡ H`, `1 ≡ V`.
    Polarization,
    /// Spatial mode, `0 ≡ x₁`, `1 ≡ x₂`.
    Spatial,
}

impl Dof {
    pub const ALL: [Dof; 2] = [Dof::Polarization, Dof::Spatial];

    pub fn short(self) -> char {
        match self {
            Dof::Polarization => 'P',
            Dof::Spatial => 'S',
        }
    }
}

impl fmt::Display for Dof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.short())
    }
}

/// Display name of a 0-based photon index: `A`, `B`, `C`, ...
pub fn photon_name(photon: usize) -> char {
    (b'A' + photon as u8) as char
}

/// Fixed-length bit-string, photon 0 first.
///
/// Bit `i` is stored at integer position `len - 1 - i`, so integer order on
/// equal-length strings is lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString {
    len: u8,
    value: u32,
}

impl BitString {
    pub fn new(len: usize, value: u32) -> Result<Self> {
        if len == 0 || len > MAX_PHOTONS {
            return Err(Error::arg(format!(
                "bit-string length {len} outside 1..={MAX_PHOTONS}"
            )));
        }
        if u64::from(value) >= 1u64 << len {
            return Err(Error::arg(format!(
                "value {value} does not fit in {len} bits"
            )));
        }
        Ok(Self {
            len: len as u8,
            value,
        })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(len, 0)
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut value = 0u32;
        for &b in bits {
            if b > 1 {
                return Err(Error::arg(format!("bit value {b} is not 0 or 1")));
            }
            value = (value << 1) | u32::from(b);
        }
        Self::new(bits.len(), value)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Packed integer value (photon 0 is the most significant bit).
    pub fn value(&self) -> u32 {
        self.value
    }

    fn mask(&self, i: usize) -> u32 {
        debug_assert!(i < self.len());
        1 << (self.len() - 1 - i)
    }

    pub fn bit(&self, i: usize) -> u8 {
        u8::from(self.value & self.mask(i) != 0)
    }

    pub fn with_bit(&self, i: usize, b: u8) -> Self {
        let m = self.mask(i);
        let value = if b == 0 {
            self.value & !m
        } else {
            self.value | m
        };
        Self { value, ..*self }
    }

    pub fn flipped(&self, i: usize) -> Self {
        Self {
            value: self.value ^ self.mask(i),
            ..*self
        }
    }

    pub fn complement(&self) -> Self {
        let all = ((1u64 << self.len) - 1) as u32;
        Self {
            value: !self.value & all,
            ..*self
        }
    }

    pub fn count_ones(&self) -> u32 {
        self.value.count_ones()
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len()).map(move |i| self.bit(i))
    }

    /// All `2^len` strings of the given length in lexicographic order.
    pub fn all(len: usize) -> Result<impl Iterator<Item = BitString>> {
        let first = Self::zeros(len)?;
        Ok((0..(1u32 << len)).map(move |value| BitString { value, ..first }))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::parse(s, "empty bit-string"));
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::parse(s, format!("unexpected character `{c}`"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_bits(&bits).map_err(|e| Error::parse(s, e.to_string()))
    }
}

/// One classical configuration of N photons: a polarization bit and a
/// spatial-mode bit per photon. Ordered lexicographically on
/// `(pol_bits, spa_bits)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisKet {
    pol: BitString,
    spa: BitString,
}

impl BasisKet {
    pub fn new(pol: BitString, spa: BitString) -> Result<Self> {
        if pol.len() != spa.len() {
            return Err(Error::arg(format!(
                "polarization bits ({}) and spatial bits ({}) differ in length",
                pol.len(),
                spa.len()
            )));
        }
        Ok(Self { pol, spa })
    }

    /// All photons `H` in mode 1.
    pub fn ground(n: usize) -> Result<Self> {
        let z = BitString::zeros(n)?;
        Ok(Self { pol: z, spa: z })
    }

    pub fn n_photons(&self) -> usize {
        self.pol.len()
    }

    pub fn bits(&self, dof: Dof) -> BitString {
        match dof {
            Dof::Polarization => self.pol,
            Dof::Spatial => self.spa,
        }
    }

    pub fn pol_bits(&self) -> BitString {
        self.pol
    }

    pub fn spa_bits(&self) -> BitString {
        self.spa
    }

    pub fn bit(&self, photon: usize, dof: Dof) -> u8 {
        self.bits(dof).bit(photon)
    }

    pub fn with_bits(&self, dof: Dof, bits: BitString) -> Self {
        debug_assert_eq!(bits.len(), self.n_photons());
        match dof {
            Dof::Polarization => Self { pol: bits, ..*self },
            Dof::Spatial => Self { spa: bits, ..*self },
        }
    }

    pub fn with_bit(&self, photon: usize, dof: Dof, b: u8) -> Self {
        self.with_bits(dof, self.bits(dof).with_bit(photon, b))
    }

    pub fn flipped(&self, photon: usize, dof: Dof) -> Self {
        self.with_bits(dof, self.bits(dof).flipped(photon))
    }
}

impl fmt::Display for BasisKet {
    /// `|HV;12⟩`: polarizations, then spatial modes, photon A first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for b in self.pol.iter() {
            write!(f, "{}", if b == 0 { 'H' } else { 'V' })?;
        }
        write!(f, ";")?;
        for b in self.spa.iter() {
            write!(f, "{}", b + 1)?;
        }
        write!(f, "⟩")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitstring_lexicographic_order_matches_integer_order() {
        let a: BitString = "011".parse().unwrap();
        let b: BitString = "100".parse().unwrap();
        assert!(a < b);
        assert_eq!(a.bit(0), 0);
        assert_eq!(a.bit(2), 1);
        assert_eq!(a.complement(), b);
        assert_eq!(a.to_string(), "011");
    }

    #[test]
    fn bitstring_rejects_bad_input() {
        assert!("".parse::<BitString>().is_err());
        assert!("01x".parse::<BitString>().is_err());
        assert!(BitString::new(2, 4).is_err());
        assert!(BitString::new(0, 0).is_err());
        assert!(BitString::new(MAX_PHOTONS + 1, 0).is_err());
    }

    #[test]
    fn ket_requires_equal_lengths() {
        let p = BitString::zeros(2).unwrap();
        let s = BitString::zeros(3).unwrap();
        assert!(BasisKet::new(p, s).is_err());
    }

    #[test]
    fn ket_bit_edits() {
        let k = BasisKet::ground(3).unwrap().flipped(1, Dof::Spatial);
        assert_eq!(k.bit(1, Dof::Spatial), 1);
        assert_eq!(k.bit(1, Dof::Polarization), 0);
        assert_eq!(k.to_string(), "|HHH;121⟩");
        assert_eq!(k.with_bit(1, Dof::Spatial, 0), BasisKet::ground(3).unwrap());
    }

    #[test]
    fn all_enumerates_in_order() {
        let v: Vec<String> = BitString::all(2).unwrap().map(|b| b.to_string()).collect();
        assert_eq!(v, ["00", "01", "10", "11"]);
    }
}
