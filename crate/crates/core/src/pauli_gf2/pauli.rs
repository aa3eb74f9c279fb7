//! Phase-tracked Pauli strings.
//!
//! A string stores `i^phase · X^x Z^z`, where `X^x Z^z` is the tensor product over
//! qubits of `X^{x_q} Z^{z_q}` (X to the left of Z on every qubit).  In letter form a
//! `Y` is `iXZ`, so the letter-form coefficient is `i^(phase - #Y)`.

use std::fmt;
use std::str::FromStr;

use super::bitset::{word_count, BitSet};
use crate::error::{Error, Result};

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            n,
            x: vec![0; word_count(n)],
            z: vec![0; word_count(n)],
            phase: 0,
        }
    }

    /// A single Hermitian letter on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut s = PauliString::identity(n);
        s.set(q, p);
        s
    }

    /// Builds a string from letters and a letter-form coefficient `i^coeff`.
    pub fn from_paulis(letters: &[Pauli], coeff: u8) -> Self {
        let mut s = PauliString::identity(letters.len());
        for (q, &p) in letters.iter().enumerate() {
            s.set(q, p);
        }
        s.phase = (s.phase + coeff) & 3;
        s
    }

    /// Letters on the given qubits, identity elsewhere, coefficient +1.
    pub fn from_sparse(n: usize, terms: &[(usize, Pauli)]) -> Self {
        let mut s = PauliString::identity(n);
        for &(q, p) in terms {
            assert_eq!(s.get(q), Pauli::I, "qubit {q} listed twice");
            s.set(q, p);
        }
        s
    }


    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    /// Exponent of `i` in the `X^x Z^z` representation.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn set_phase(&mut self, phase: u8) {
        self.phase = phase & 3;
    }

    pub fn y_count(&self) -> u32 {
        self.x.iter().zip(&self.z).map(|(a, b)| (a & b).count_ones()).sum()
    }

    /// Exponent of `i` in letter form, e.g. 3 for `-iY`.
    pub fn letter_phase(&self) -> u8 {
        ((self.phase as u32 + 4 - self.y_count() % 4) % 4) as u8
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase as u32 + self.y_count()) % 2 == 0
    }

    /// True for Hermitian strings with letter-form sign −1.
    pub fn is_negative(&self) -> bool {
        self.letter_phase() == 2
    }

    /// Multiplies the letter-form coefficient by −1.
    pub fn negate(&mut self) {
        self.phase = (self.phase + 2) & 3;
    }

    pub fn negated(&self) -> Self {
        let mut s = self.clone();
        s.negate();
        s
    }

    /// Multiplies the coefficient by `i^k`.
    pub fn mul_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) & 3;
    }

    #[inline]
    pub fn x_bit(&self, q: usize) -> bool {
        (self.x[q / 64] >> (q % 64)) & 1 == 1
    }

    #[inline]
    pub fn z_bit(&self, q: usize) -> bool {
        (self.z[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn get(&self, q: usize) -> Pauli {
        assert!(q < self.n);
        Pauli::from_bits(self.x_bit(q), self.z_bit(q))
    }

    /// Replaces the letter on qubit `q`, keeping the letter-form coefficient fixed.
    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let old_y = self.get(q) == Pauli::Y;
        let (xb, zb) = p.bits();
        self.set_bits(q, xb, zb);
        let new_y = p == Pauli::Y;
        // keep the letter-form coefficient: phase tracks #Y
        self.phase = (self.phase + new_y as u8 + 4 - old_y as u8) & 3;
    }

    /// Sets raw bits without touching the phase.
    #[inline]
    pub(crate) fn set_bits(&mut self, q: usize, xb: bool, zb: bool) {
        let (w, b) = (q / 64, q % 64);
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    pub fn support(&self) -> BitSet {
        let words = self.x.iter().zip(&self.z).map(|(a, b)| a | b).collect();
        BitSet::from_words(self.n, words)
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// True when the support lies inside `region`.
    pub fn supported_in(&self, region: &BitSet) -> bool {
        self.x
            .iter()
            .zip(&self.z)
            .zip(region.words())
            .all(|((a, b), r)| (a | b) & !r == 0)
    }

    fn check_dim(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Symplectic form: 0 when the strings commute, 1 otherwise. Panics on size mismatch.
    #[inline]
    pub fn symplectic(&self, other: &PauliString) -> u32 {
        assert_eq!(self.n, other.n, "Pauli strings of different length");
        let mut acc = 0u64;
        for i in 0..self.x.len() {
            acc ^= (self.x[i] & other.z[i]) ^ (self.z[i] & other.x[i]);
        }
        acc.count_ones() & 1
    }

    /// Symplectic form of the restrictions of both strings to `region`.
    #[inline]
    pub fn symplectic_on(&self, other: &PauliString, region: &BitSet) -> u32 {
        assert_eq!(self.n, other.n, "Pauli strings of different length");
        let mut acc = 0u64;
        for (i, m) in region.words().iter().enumerate() {
            acc ^= ((self.x[i] & other.z[i]) ^ (self.z[i] & other.x[i])) & m;
        }
        acc.count_ones() & 1
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.symplectic(other) == 0)
    }

    /// `self ← self · other`. Panics on size mismatch.
    #[inline]
    pub fn mul_assign_right(&mut self, other: &PauliString) {
        assert_eq!(self.n, other.n, "Pauli strings of different length");
        let mut cross = 0u32;
        for i in 0..self.x.len() {
            cross += (self.z[i] & other.x[i]).count_ones();
            self.x[i] ^= other.x[i];
            self.z[i] ^= other.z[i];
        }
        self.phase = ((self.phase as u32 + other.phase as u32 + 2 * cross) & 3) as u8;
    }

    /// `self ← other · self`. Panics on size mismatch.
    #[inline]
    pub fn mul_assign_left(&mut self, other: &PauliString) {
        assert_eq!(self.n, other.n, "Pauli strings of different length");
        let mut cross = 0u32;
        for i in 0..self.x.len() {
            cross += (other.z[i] & self.x[i]).count_ones();
            self.x[i] ^= other.x[i];
            self.z[i] ^= other.z[i];
        }
        self.phase = ((self.phase as u32 + other.phase as u32 + 2 * cross) & 3) as u8;
    }

    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_dim(other)?;
        let mut out = self.clone();
        out.mul_assign_right(other);
        Ok(out)
    }

    /// Panicking product for internal use where sizes are known to agree.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        let mut out = self.clone();
        out.mul_assign_right(other);
        out
    }

    /// The restriction to `region` (letters outside replaced by identity), keeping the
    /// letter-form coefficient.
    pub fn restricted(&self, region: &BitSet) -> PauliString {
        let mut out = self.clone();
        let removed_y: u32 = self
            .x
            .iter()
            .zip(&self.z)
            .zip(region.words())
            .map(|((a, b), r)| (a & b & !r).count_ones())
            .sum();
        for (w, r) in out.x.iter_mut().zip(region.words()) {
            *w &= r;
        }
        for (w, r) in out.z.iter_mut().zip(region.words()) {
            *w &= r;
        }
        out.phase = ((out.phase as u32 + 4 - removed_y % 4) & 3) as u8;
        out
    }

    /// Concatenates with an `m`-qubit string placed on qubits `n..n+m`.
    pub fn tensor(&self, other: &PauliString) -> PauliString {
        let n = self.n + other.n;
        let mut out = PauliString::identity(n);
        for q in 0..self.n {
            out.set_bits(q, self.x_bit(q), self.z_bit(q));
        }
        for q in 0..other.n {
            out.set_bits(self.n + q, other.x_bit(q), other.z_bit(q));
        }
        out.phase = (self.phase + other.phase) & 3;
        out
    }

    /// Embeds into a wider register, padding with identities.
    pub fn extended(&self, n: usize) -> PauliString {
        assert!(n >= self.n);
        self.tensor(&PauliString::identity(n - self.n))
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.n).map(|q| self.get(q)).collect()
    }

    /// Sign-less letter string, e.g. `XIZY`.
    pub fn letters_string(&self) -> String {
        (0..self.n).map(|q| self.get(q).letter()).collect()
    }

    /// Packed `2n`-bit symplectic vector: bit `q` is `x_q`, bit `n + q` is `z_q`.
    pub fn symplectic_vector(&self) -> Vec<u64> {
        let mut v = vec![0u64; word_count(2 * self.n)];
        for q in 0..self.n {
            if self.x_bit(q) {
                v[q / 64] |= 1 << (q % 64);
            }
            if self.z_bit(q) {
                let b = self.n + q;
                v[b / 64] |= 1 << (b % 64);
            }
        }
        v
    }

    /// Inverse of [`symplectic_vector`](Self::symplectic_vector), with phase 0.
    pub fn from_symplectic_vector(n: usize, v: &[u64]) -> PauliString {
        let mut s = PauliString::identity(n);
        for q in 0..n {
            let xb = (v[q / 64] >> (q % 64)) & 1 == 1;
            let b = n + q;
            let zb = (v[b / 64] >> (b % 64)) & 1 == 1;
            s.set_bits(q, xb, zb);
        }
        s
    }

    #[cfg(test)]
    pub(crate) fn debug_check(&self) {
        debug_assert_eq!(self.x.len(), word_count(self.n));
        if let (Some(x), Some(z)) = (self.x.last(), self.z.last()) {
            debug_assert_eq!(x & !super::bitset::tail_mask(self.n), 0);
            debug_assert_eq!(z & !super::bitset::tail_mask(self.n), 0);
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.letter_phase() {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{sign}{}", self.letters_string())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses literals such as `+XIZY`, `-iZZ` or `XX` (sign optional).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (coeff, body) = if let Some(rest) = s.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else {
            (0, s)
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("empty Pauli literal {s:?}")));
        }
        let letters = body
            .chars()
            .map(|c| match c {
                'I' | '_' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::Parse(format!(
                    "unexpected character {other:?} in Pauli literal {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::from_paulis(&letters, coeff))
    }
}
