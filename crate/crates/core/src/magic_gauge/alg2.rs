//! Extended normal form on pseudostabilizer operators
//! `ρ^(σ) = 2^-(L+1) (1 + β σ̄) ∏ (1 + g_i)` with `β = √2`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::normal_form::{normal_form, Outcome};
use super::MagicClass;
use crate::codestate::CodeState;
use crate::error::{Error, Result};
use crate::pauli_gf2::{BitSet, PauliString, ProjectedSpan};

/// Which logical of a code state a pseudostabilizer operator carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogicalChoice {
    Z,
    MinusY,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoStabilizer {
    logical: PauliString,
    stabilizers: Vec<PauliString>,
}

impl PseudoStabilizer {
    /// Weight of the logical generator.
    pub const BETA: f64 = std::f64::consts::SQRT_2;

    /// Validates that all generators are Hermitian, independent and commuting, and
    /// that there are exactly `L − 1` stabilizers.
    pub fn new(logical: PauliString, stabilizers: Vec<PauliString>) -> Result<Self> {
        let n = logical.n_qubits();
        if stabilizers.len() + 1 != n {
            return Err(Error::InvalidState(format!(
                "{} stabilizers for {n} qubits, expected {}",
                stabilizers.len(),
                n.saturating_sub(1)
            )));
        }
        let all: Vec<&PauliString> = std::iter::once(&logical).chain(&stabilizers).collect();
        let mut span = ProjectedSpan::new(std::iter::empty(), &BitSet::full(n));
        for (i, g) in all.iter().enumerate() {
            if g.n_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.n_qubits(),
                });
            }
            if !g.is_hermitian() {
                return Err(Error::InvalidState(format!("generator {g} is not Hermitian")));
            }
            if all[..i].iter().any(|h| h.symplectic(g) == 1) {
                return Err(Error::InvalidState(format!("generator {g} anticommutes with another")));
            }
            if !span.insert(g) {
                return Err(Error::InvalidState(format!("generator {g} is dependent")));
            }
        }
        Ok(PseudoStabilizer { logical, stabilizers })
    }

    pub fn from_code_state(cs: &CodeState, choice: LogicalChoice) -> Self {
        let logical = match choice {
            LogicalChoice::Z => cs.logical_z().clone(),
            LogicalChoice::MinusY => cs.logical_y().negated(),
        };
        PseudoStabilizer {
            logical,
            stabilizers: cs.stabilizers().to_vec(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.logical.n_qubits()
    }

    pub fn logical(&self) -> &PauliString {
        &self.logical
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.stabilizers
    }

    pub fn beta(&self) -> f64 {
        Self::BETA
    }
}

/// Terminal tableau shape of the extended normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alg2Outcome {
    /// Logical paired with a stabilizer across the cut.
    I,
    /// Lone `X` on the region.
    Ii,
    /// Lone `X` on the complement.
    Iii,
    /// Single `X` sharing its qubit with the cross `X_a X_b` generator.
    Iv,
}

impl Alg2Outcome {
    /// Whether `ρ^(σ)_A` adds magic to `ρ_A`.
    pub fn contributes(self) -> bool {
        matches!(self, Alg2Outcome::Ii | Alg2Outcome::Iv)
    }
}

impl fmt::Display for Alg2Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Alg2Outcome::I => "i",
            Alg2Outcome::Ii => "ii",
            Alg2Outcome::Iii => "iii",
            Alg2Outcome::Iv => "iv",
        })
    }
}

/// Runs the extended normal form of `ps` with respect to `region`.
///
/// # Panics
/// If `region` is over a different number of qubits.
pub fn classify_pseudostabilizer_alg2(ps: &PseudoStabilizer, region: &BitSet) -> Alg2Outcome {
    assert_eq!(region.universe(), ps.n_qubits(), "region universe mismatch");
    match normal_form(region, &ps.stabilizers, Some(&ps.logical)) {
        Outcome::LogicalPaired => Alg2Outcome::I,
        Outcome::Complete(nf) => {
            let q = nf.logical.as_ref().expect("logical row present").1;
            match nf.cross() {
                Some((a, b)) if q == a || q == b => Alg2Outcome::Iv,
                _ if region.contains(q) => Alg2Outcome::Ii,
                _ => Alg2Outcome::Iii,
            }
        }
    }
}

/// Subsystem magic assembled from the contributions of `ρ^(Z)` and `ρ^(−Y)`.
pub fn subsystem_magic_alg2(cs: &CodeState, region: &BitSet) -> MagicClass {
    let omega = [LogicalChoice::Z, LogicalChoice::MinusY]
        .into_iter()
        .filter(|&c| classify_pseudostabilizer_alg2(&PseudoStabilizer::from_code_state(cs, c), region).contributes())
        .count();
    MagicClass::from_omega(omega as u8).expect("two contributions at most")
}
