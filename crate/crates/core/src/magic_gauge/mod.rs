//! Subsystem magic of single-T-doped stabilizer states.
//!
//! Three routes to the same answer: reducibility of the logicals alone
//! ([`subsystem_magic_alg1`]), the extended normal form on pseudostabilizer operators
//! ([`classify_pseudostabilizer_alg2`]) and the explicit bipartite magic gauge
//! ([`compute_bmg_alg3`]). [`dense`] provides the exponential-cost reference.

mod alg2;
mod bmg;
pub mod dense;
mod normal_form;
mod synthesis;
mod witness;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::codestate::CodeState;
use crate::error::{Error, Result};
use crate::pauli_gf2::{BitSet, PauliString, ProjectedSpan};

pub use alg2::{
    classify_pseudostabilizer_alg2, subsystem_magic_alg2, Alg2Outcome, LogicalChoice, PseudoStabilizer,
};
pub use bmg::{compute_bmg_alg3, BmgDecomposition};
pub use witness::{extraction_witness, ExtractionWitness};

/// Subsystem magic `M̃₂(ρ_A)` of a single-T-doped state takes one of three values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MagicClass {
    Zero,
    Half,
    Full,
}

impl MagicClass {
    /// The value in bits: `0`, `log2(6/5)` or `log2(4/3)`.
    pub fn value(self) -> f64 {
        match self {
            MagicClass::Zero => 0.0,
            MagicClass::Half => (6.0f64 / 5.0).log2(),
            MagicClass::Full => (4.0f64 / 3.0).log2(),
        }
    }

    /// Ratio `Ω` of magical to regular Pauli-spectrum entries.
    pub fn omega(self) -> u8 {
        match self {
            MagicClass::Zero => 0,
            MagicClass::Half => 1,
            MagicClass::Full => 2,
        }
    }

    pub fn from_omega(omega: u8) -> Result<Self> {
        match omega {
            0 => Ok(MagicClass::Zero),
            1 => Ok(MagicClass::Half),
            2 => Ok(MagicClass::Full),
            _ => Err(Error::Domain(format!("omega must be 0, 1 or 2, got {omega}"))),
        }
    }

    /// The class whose value lies within `tol` of `bits`, if any.
    pub fn from_value(bits: f64, tol: f64) -> Option<Self> {
        [MagicClass::Zero, MagicClass::Half, MagicClass::Full]
            .into_iter()
            .find(|c| (c.value() - bits).abs() <= tol)
    }
}

impl fmt::Display for MagicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MagicClass::Zero => "zero",
            MagicClass::Half => "half",
            MagicClass::Full => "full",
        })
    }
}

impl FromStr for MagicClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(MagicClass::Zero),
            "half" => Ok(MagicClass::Half),
            "full" => Ok(MagicClass::Full),
            _ => Err(Error::Parse(format!("unknown magic class {s:?}"))),
        }
    }
}

/// Bipartite case of the logical reducibility table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseId {
    /// All logicals reducible to `A`.
    I,
    /// All logicals reducible to `B`.
    Ii,
    /// Only `X̄` reducible, to both sides.
    Iii,
    /// Only `Z̄` reducible, to both sides.
    Iv,
    /// Only `Ȳ` reducible, to both sides.
    V,
}

impl CaseId {
    /// Magic of subsystem `A` in this case.
    pub fn class(self) -> MagicClass {
        match self {
            CaseId::I => MagicClass::Full,
            CaseId::Ii | CaseId::Iii => MagicClass::Zero,
            CaseId::Iv | CaseId::V => MagicClass::Half,
        }
    }

    /// The case seen from the complement.
    pub fn swapped(self) -> Self {
        match self {
            CaseId::I => CaseId::Ii,
            CaseId::Ii => CaseId::I,
            other => other,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseId::I => "i",
            CaseId::Ii => "ii",
            CaseId::Iii => "iii",
            CaseId::Iv => "iv",
            CaseId::V => "v",
        })
    }
}

/// Reducibility of one logical to a region and to its complement.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reducibility {
    pub to_a: bool,
    pub to_b: bool,
}

/// Reducibility of all three logicals with respect to a bipartition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalReducibility {
    pub x: Reducibility,
    pub y: Reducibility,
    pub z: Reducibility,
}

/// Which pattern of reducibility a bipartition exhibits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trichotomy {
    AllToA,
    AllToB,
    /// Exactly one logical, given by its letter, is reducible, and to both sides.
    Shared(char),
}

impl LogicalReducibility {
    /// Classifies the bipartition, or `None` if the flags match no allowed pattern.
    pub fn trichotomy(&self) -> Option<Trichotomy> {
        let all = [self.x, self.y, self.z];
        if all.iter().all(|r| r.to_a && !r.to_b) {
            return Some(Trichotomy::AllToA);
        }
        if all.iter().all(|r| r.to_b && !r.to_a) {
            return Some(Trichotomy::AllToB);
        }
        let reducible: Vec<usize> = (0..3).filter(|&i| all[i].to_a || all[i].to_b).collect();
        match reducible[..] {
            [i] if all[i].to_a && all[i].to_b => Some(Trichotomy::Shared(['X', 'Y', 'Z'][i])),
            _ => None,
        }
    }

    /// Table lookup from the `Z̄` and `Ȳ` flags.
    pub fn case_id(&self) -> CaseId {
        let (z, y) = (self.z, self.y);
        if z.to_a && y.to_a {
            CaseId::I
        } else if z.to_b && y.to_b {
            CaseId::Ii
        } else if z.to_a && z.to_b {
            CaseId::Iv
        } else if y.to_a && y.to_b {
            CaseId::V
        } else {
            CaseId::Iii
        }
    }

    /// Number of `Z̄`, `Ȳ` reducible to `A`.
    pub fn omega(&self) -> u8 {
        self.z.to_a as u8 + self.y.to_a as u8
    }
}

fn check_region(cs: &CodeState, region: &BitSet) {
    assert_eq!(
        region.universe(),
        cs.n_qubits(),
        "region universe does not match the number of qubits"
    );
}

/// Reducibility of each logical modulo the stabilizer group.
///
/// # Panics
/// If `region` is over a different number of qubits.
pub fn logical_reducibility(cs: &CodeState, region: &BitSet) -> LogicalReducibility {
    check_region(cs, region);
    let complement = region.complement();
    let onto_b = ProjectedSpan::new(cs.stabilizers(), &complement);
    let onto_a = ProjectedSpan::new(cs.stabilizers(), region);
    let flags = |p: &PauliString| Reducibility {
        to_a: onto_b.contains(p),
        to_b: onto_a.contains(p),
    };
    LogicalReducibility {
        x: flags(cs.logical_x()),
        y: flags(&cs.logical_y()),
        z: flags(cs.logical_z()),
    }
}

/// Subsystem magic of `region` from the reducibility of `Z̄` and `Ȳ`.
///
/// # Panics
/// If `region` is over a different number of qubits.
pub fn subsystem_magic_alg1(cs: &CodeState, region: &BitSet) -> MagicClass {
    check_region(cs, region);
    let onto_b = ProjectedSpan::new(cs.stabilizers(), &region.complement());
    let omega = onto_b.contains(cs.logical_z()) as u8 + onto_b.contains(&cs.logical_y()) as u8;
    MagicClass::from_omega(omega).expect("omega is at most 2")
}

/// Whether every logical is reducible to `region`: the subsystem holds one full unit.
pub fn is_full(cs: &CodeState, region: &BitSet) -> bool {
    subsystem_magic_alg1(cs, region) == MagicClass::Full
}

/// Table case of the bipartition `(region, complement)`.
pub fn case_id(cs: &CodeState, region: &BitSet) -> CaseId {
    logical_reducibility(cs, region).case_id()
}

/// Whether measuring `region` can collapse the state onto a stabilizer state, i.e. some
/// logical is reducible to it.
pub fn destroyable(cs: &CodeState, region: &BitSet) -> bool {
    let r = logical_reducibility(cs, region);
    r.x.to_a || r.y.to_a || r.z.to_a
}

/// Two-level Pauli spectrum of `ρ_A`: `2^k` regular entries of weight `2^-|A|` and
/// `Ω·2^k` magical entries of weight `2^(-|A|-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliSpectrumSummary {
    pub region_size: usize,
    /// `log2` of the number of regular entries.
    pub log2_regular: usize,
    pub omega: u8,
}

impl PauliSpectrumSummary {
    pub fn n_regular(&self) -> Option<u128> {
        1u128.checked_shl(self.log2_regular as u32).filter(|_| self.log2_regular < 128)
    }

    pub fn n_magical(&self) -> Option<u128> {
        self.n_regular()?.checked_mul(self.omega as u128)
    }

    pub fn class(&self) -> MagicClass {
        MagicClass::from_omega(self.omega).expect("summary omega is at most 2")
    }

    /// Regular and magical entry values.
    pub fn levels(&self) -> (f64, f64) {
        let r = (-(self.region_size as f64)).exp2();
        (r, r / 2.0)
    }
}

/// Counts the surviving spectrum entries of `ρ_A`.
pub fn pauli_spectrum_summary(cs: &CodeState, region: &BitSet) -> PauliSpectrumSummary {
    check_region(cs, region);
    let onto_b = ProjectedSpan::new(cs.stabilizers(), &region.complement());
    let omega = onto_b.contains(cs.logical_z()) as u8 + onto_b.contains(&cs.logical_y()) as u8;
    PauliSpectrumSummary {
        region_size: region.count(),
        log2_regular: cs.stabilizers().len() - onto_b.rank(),
        omega,
    }
}

/// `M̃₂` of the normalized two-level spectrum, in bits.
pub fn sre2_from_spectrum(s: &PauliSpectrumSummary) -> f64 {
    // The 2^k multiplicity cancels in the ratio.
    let (r, m) = s.levels();
    let omega = s.omega as f64;
    let num = r * r + omega * m * m;
    let den = r + omega * m;
    let v = -(num / den / r).log2();
    if v.abs() < 1e-15 {
        0.0
    } else {
        v
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::tableau::StabilizerState;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    pub(crate) fn ghz_micro() -> CodeState {
        CodeState::from_parts(p("XX"), p("ZI"), vec![p("ZZ")], 0).unwrap()
    }

    pub(crate) fn bell6_cs() -> CodeState {
        CodeState::inject_t(&crate::codestate::tests::bell6(), 2).unwrap()
    }

    fn t_state() -> CodeState {
        CodeState::inject_t(&"n=1 k=1\n+X".parse::<StabilizerState>().unwrap(), 0).unwrap()
    }

    #[test]
    fn class_values() {
        assert!((MagicClass::Full.value() - 0.415037).abs() < 1e-6);
        assert!((MagicClass::Half.value() - 0.263034).abs() < 1e-6);
        assert_eq!(MagicClass::Zero.value(), 0.0);
        for c in [MagicClass::Zero, MagicClass::Half, MagicClass::Full] {
            assert_eq!(MagicClass::from_omega(c.omega()).unwrap(), c);
            assert_eq!(c.to_string().parse::<MagicClass>().unwrap(), c);
            assert_eq!(MagicClass::from_value(c.value(), 1e-12), Some(c));
        }
        assert!(MagicClass::from_omega(3).is_err());
    }

    #[test]
    fn alg1_trivial_regions() {
        let cs = bell6_cs();
        assert_eq!(subsystem_magic_alg1(&cs, &BitSet::full(6)), MagicClass::Full);
        assert_eq!(subsystem_magic_alg1(&cs, &BitSet::empty(6)), MagicClass::Zero);
    }

    #[test]
    fn ghz_micro_instance_is_half() {
        let cs = ghz_micro();
        assert_eq!(cs.logical_y(), p("YX"));
        let a = BitSet::from_indices(2, [0]);
        assert_eq!(subsystem_magic_alg1(&cs, &a), MagicClass::Half);
        assert_eq!(case_id(&cs, &a), CaseId::Iv);
        assert!(destroyable(&cs, &a));
        let r = logical_reducibility(&cs, &a);
        assert_eq!(r.trichotomy(), Some(Trichotomy::Shared('Z')));
        assert_eq!(pauli_spectrum_summary(&cs, &a).omega, 1);
    }

    #[test]
    fn bell6_cases() {
        let cs = bell6_cs();
        let a = BitSet::from_indices(6, [2, 3]);
        assert_eq!(case_id(&cs, &a), CaseId::I);
        assert_eq!(subsystem_magic_alg1(&cs, &a), MagicClass::Full);
        assert!(destroyable(&cs, &a));
        let b = BitSet::from_indices(6, [0, 1]);
        assert_eq!(case_id(&cs, &b), CaseId::Ii);
        assert_eq!(subsystem_magic_alg1(&cs, &b), MagicClass::Zero);
        assert!(!destroyable(&cs, &b));
        assert_eq!(pauli_spectrum_summary(&cs, &b).omega, 0);
    }

    #[test]
    fn t_state_spectrum() {
        let cs = t_state();
        let s = pauli_spectrum_summary(&cs, &BitSet::full(1));
        assert_eq!(s.n_regular(), Some(1));
        assert_eq!(s.n_magical(), Some(2));
        assert_eq!(s.levels(), (0.5, 0.25));
        assert!((sre2_from_spectrum(&s) - MagicClass::Full.value()).abs() < 1e-15);
    }

    #[test]
    fn sre2_matches_class_values() {
        for omega in 0..3 {
            let s = PauliSpectrumSummary {
                region_size: 3,
                log2_regular: 2,
                omega,
            };
            assert!((sre2_from_spectrum(&s) - s.class().value()).abs() < 1e-15);
        }
    }

    #[test]
    fn swapped_cases() {
        assert_eq!(CaseId::I.swapped(), CaseId::Ii);
        assert_eq!(CaseId::Iv.swapped(), CaseId::Iv);
    }
}
