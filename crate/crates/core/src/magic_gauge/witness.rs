//! Local Clifford circuits that factor a full unit of magic out of a region.

use super::synthesis::synthesize;
use super::{subsystem_magic_alg1, MagicClass};
use crate::codestate::CodeState;
use crate::error::{Error, Result};
use crate::pauli_gf2::{reduce_support, BitSet};
use crate::tableau::{Circuit, CliffordGate};

/// A circuit on the region after which the state is `|T⟩` on `target` times a
/// stabilizer state on the remaining qubits.
#[derive(Clone, Debug)]
pub struct ExtractionWitness {
    pub circuit: Circuit,
    pub target: usize,
}

/// Finds a witness when `region` holds a full unit of magic.
///
/// # Errors
/// [`Error::NotExtractable`] for the half and zero classes.
pub fn extraction_witness(cs: &CodeState, region: &BitSet) -> Result<ExtractionWitness> {
    match subsystem_magic_alg1(cs, region) {
        MagicClass::Full => {}
        MagicClass::Half => return Err(Error::NotExtractable { class: "half" }),
        MagicClass::Zero => return Err(Error::NotExtractable { class: "zero" }),
    }
    let stabs = cs.stabilizers();
    let z_a = reduce_support(cs.logical_z(), stabs, region)?.expect("full class reduces Z");
    let y_a = reduce_support(&cs.logical_y(), stabs, region)?.expect("full class reduces Y");
    // (Z̄, −Ȳ) ↦ (X_t, Z_t), then (X, Z) ↦ (X, Y) so that (Z̄ − Ȳ)/√2 ↦ (X_t + Y_t)/√2.
    let syn = synthesize(region, &[(z_a, y_a.negated())], &[]);
    let target = syn.pair_targets[0];
    let mut circuit = syn.circuit;
    for g in [CliffordGate::h(), CliffordGate::s(), CliffordGate::h(), CliffordGate::x()] {
        circuit.push(g, &[target])?;
    }
    Ok(ExtractionWitness { circuit, target })
}
