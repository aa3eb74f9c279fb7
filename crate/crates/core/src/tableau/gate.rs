//! One- and two-qubit Clifford gates stored as conjugation tables.

use std::fmt;

use crate::error::{Error, Result};
use crate::pauli_gf2::{Pauli, PauliString};

/// A Pauli on at most two qubits: `i^phase · X0^b0 Z0^b1 X1^b2 Z1^b3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct LocalPauli {
    pub bits: u8,
    pub phase: u8,
}

impl LocalPauli {
    pub const IDENTITY: LocalPauli = LocalPauli { bits: 0, phase: 0 };

    #[inline]
    pub fn mul(self, other: LocalPauli) -> LocalPauli {
        let z_self = (self.bits >> 1) & 0b0101;
        let x_other = other.bits & 0b0101;
        let cross = (z_self & x_other).count_ones() as u8;
        LocalPauli {
            bits: self.bits ^ other.bits,
            phase: (self.phase + other.phase + 2 * cross) & 3,
        }
    }

    fn y_count(self) -> u32 {
        (self.bits & (self.bits >> 1) & 0b0101).count_ones()
    }

    pub fn is_hermitian(self) -> bool {
        (self.phase as u32 + self.y_count()) % 2 == 0
    }

    /// Symplectic form with another local Pauli.
    pub fn symplectic(self, other: LocalPauli) -> u32 {
        let x1 = self.bits & 0b0101;
        let z1 = (self.bits >> 1) & 0b0101;
        let x2 = other.bits & 0b0101;
        let z2 = (other.bits >> 1) & 0b0101;
        ((x1 & z2) ^ (z1 & x2)).count_ones() & 1
    }

    pub fn from_pauli_string(p: &PauliString) -> Result<LocalPauli> {
        if p.n_qubits() > 2 {
            return Err(Error::InvalidGate(format!(
                "image {p} acts on more than two qubits"
            )));
        }
        let mut bits = 0u8;
        for q in 0..p.n_qubits() {
            bits |= (p.x_bit(q) as u8) << (2 * q);
            bits |= (p.z_bit(q) as u8) << (2 * q + 1);
        }
        Ok(LocalPauli {
            bits,
            phase: p.phase(),
        })
    }

    pub fn to_pauli_string(self, arity: usize) -> PauliString {
        let mut s = PauliString::identity(arity);
        for q in 0..arity {
            let xb = (self.bits >> (2 * q)) & 1 == 1;
            let zb = (self.bits >> (2 * q + 1)) & 1 == 1;
            let letter = Pauli::from_bits(xb, zb);
            s.set(q, letter);
        }
        // `set` keeps the letter-form coefficient at +1, so reset the raw phase
        s.set_phase(self.phase);
        s
    }
}

/// Clifford gate on one or two qubits, described by the images of `X_0, Z_0, X_1, Z_1`
/// under conjugation `P ↦ U P U†`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CliffordGate {
    arity: u8,
    table: [LocalPauli; 16],
}

impl CliffordGate {
    /// Builds a gate from the images of `X_0, Z_0[, X_1, Z_1]`, checking that they are
    /// Hermitian and satisfy the canonical commutation relations.
    pub fn from_images(images: &[PauliString]) -> Result<CliffordGate> {
        let arity = match images.len() {
            2 => 1,
            4 => 2,
            k => {
                return Err(Error::InvalidGate(format!(
                    "expected 2 or 4 images, got {k}"
                )))
            }
        };
        let mut locals = [LocalPauli::IDENTITY; 4];
        for (slot, img) in locals.iter_mut().zip(images) {
            if img.n_qubits() != arity {
                return Err(Error::InvalidGate(format!(
                    "image {img} does not act on {arity} qubit(s)"
                )));
            }
            *slot = LocalPauli::from_pauli_string(img)?;
        }
        Self::from_locals(arity, &locals[..2 * arity])
    }

    pub(crate) fn from_locals(arity: usize, images: &[LocalPauli]) -> Result<CliffordGate> {
        for (i, a) in images.iter().enumerate() {
            if !a.is_hermitian() || a.bits == 0 {
                return Err(Error::InvalidGate(format!(
                    "image {i} is not a non-trivial Hermitian Pauli"
                )));
            }
            for (j, b) in images.iter().enumerate() {
                let expected = (i / 2 == j / 2 && i != j) as u32;
                if a.symplectic(*b) != expected {
                    return Err(Error::InvalidGate(
                        "images violate the symplectic condition".into(),
                    ));
                }
            }
        }
        Ok(Self::from_locals_unchecked(arity, images))
    }

    pub(crate) fn from_locals_unchecked(arity: usize, images: &[LocalPauli]) -> CliffordGate {
        let mut table = [LocalPauli::IDENTITY; 16];
        for (idx, entry) in table.iter_mut().enumerate().skip(1) {
            let mut acc = LocalPauli::IDENTITY;
            for (k, img) in images.iter().enumerate() {
                if (idx >> k) & 1 == 1 {
                    acc = acc.mul(*img);
                }
            }
            *entry = acc;
        }
        CliffordGate {
            arity: arity as u8,
            table,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    /// Images of `X_0, Z_0[, X_1, Z_1]`.
    pub fn images(&self) -> Vec<LocalPauli> {
        (0..2 * self.arity()).map(|k| self.table[1 << k]).collect()
    }

    pub fn image_strings(&self) -> Vec<PauliString> {
        self.images()
            .into_iter()
            .map(|l| l.to_pauli_string(self.arity()))
            .collect()
    }

    #[inline]
    pub fn conjugate_local(&self, p: LocalPauli) -> LocalPauli {
        let e = self.table[p.bits as usize];
        LocalPauli {
            bits: e.bits,
            phase: (e.phase + p.phase) & 3,
        }
    }

    /// Conjugates `p` in place with the gate acting on `sites`. Sites are assumed valid.
    #[inline]
    pub fn conjugate(&self, p: &mut PauliString, sites: &[usize]) {
        let mut idx = 0usize;
        for (k, &q) in sites.iter().enumerate() {
            idx |= (p.x_bit(q) as usize) << (2 * k);
            idx |= (p.z_bit(q) as usize) << (2 * k + 1);
        }
        if idx == 0 {
            return;
        }
        let e = self.table[idx];
        for (k, &q) in sites.iter().enumerate() {
            p.set_bits(q, (e.bits >> (2 * k)) & 1 == 1, (e.bits >> (2 * k + 1)) & 1 == 1);
        }
        p.mul_phase(e.phase);
    }

    /// Checks a site list against this gate and a register size.
    pub fn check_sites(&self, sites: &[usize], n_qubits: usize) -> Result<()> {
        let bad = |reason| Error::BadSites {
            sites: sites.to_vec(),
            n_qubits,
            reason,
        };
        if sites.len() != self.arity() {
            return Err(bad("site count differs from gate arity"));
        }
        if sites.iter().any(|&q| q >= n_qubits) {
            return Err(bad("site out of range"));
        }
        if sites.len() == 2 && sites[0] == sites[1] {
            return Err(bad("repeated site"));
        }
        Ok(())
    }

    /// The gate `V U`, i.e. `self` applied first, then `next`.
    pub fn then(&self, next: &CliffordGate) -> Result<CliffordGate> {
        if self.arity != next.arity {
            return Err(Error::InvalidGate(
                "cannot compose gates of different arity".into(),
            ));
        }
        let images: Vec<LocalPauli> = self
            .images()
            .into_iter()
            .map(|img| next.conjugate_local(img))
            .collect();
        Ok(Self::from_locals_unchecked(self.arity(), &images))
    }

    /// Lifts a one-qubit gate to two qubits acting as `self ⊗ other`.
    pub fn tensor(&self, other: &CliffordGate) -> Result<CliffordGate> {
        if self.arity != 1 || other.arity != 1 {
            return Err(Error::InvalidGate("tensor expects one-qubit gates".into()));
        }
        let a = self.images();
        let b = other.images();
        let shift = |l: LocalPauli| LocalPauli {
            bits: l.bits << 2,
            phase: l.phase,
        };
        Ok(Self::from_locals_unchecked(2, &[a[0], a[1], shift(b[0]), shift(b[1])]))
    }

    pub fn is_identity(&self) -> bool {
        self.images()
            .iter()
            .enumerate()
            .all(|(k, l)| l.bits == 1 << k && l.phase == 0)
    }

    fn named(images: &[&str]) -> CliffordGate {
        let imgs: Vec<PauliString> = images.iter().map(|s| s.parse().unwrap()).collect();
        CliffordGate::from_images(&imgs).expect("named gate tables are valid")
    }

    pub fn identity1() -> Self {
        Self::named(&["X", "Z"])
    }
    pub fn identity2() -> Self {
        Self::named(&["XI", "ZI", "IX", "IZ"])
    }
    pub fn h() -> Self {
        Self::named(&["Z", "X"])
    }
    pub fn s() -> Self {
        Self::named(&["Y", "Z"])
    }
    pub fn sdg() -> Self {
        Self::named(&["-Y", "Z"])
    }
    pub fn x() -> Self {
        Self::named(&["X", "-Z"])
    }
    pub fn y() -> Self {
        Self::named(&["-X", "-Z"])
    }
    pub fn z() -> Self {
        Self::named(&["-X", "Z"])
    }
    /// Control on the first site, target on the second.
    pub fn cx() -> Self {
        Self::named(&["XX", "ZI", "IX", "ZZ"])
    }
    pub fn cz() -> Self {
        Self::named(&["XZ", "ZI", "ZX", "IZ"])
    }
    pub fn swap() -> Self {
        Self::named(&["IX", "IZ", "XI", "ZI"])
    }

    /// The fixed self-dual kicked Ising gate `CZ (H⊗H) CZ`.
    pub fn sdki_f() -> Self {
        let hh = Self::h().tensor(&Self::h()).unwrap();
        Self::cz().then(&hh).unwrap().then(&Self::cz()).unwrap()
    }
}

impl fmt::Debug for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: &[&str] = if self.arity == 1 {
            &["X", "Z"]
        } else {
            &["XI", "ZI", "IX", "IZ"]
        };
        let mut m = f.debug_map();
        for (label, img) in labels.iter().zip(self.image_strings()) {
            m.entry(label, &img.to_string());
        }
        m.finish()
    }
}
